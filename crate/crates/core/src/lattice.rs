//! Triangular-lattice geometry.
//!
//! The lattice has vertex set `Z^2`. Two vertices are adjacent when they differ
//! by a unit axis step or by the diagonal `(1, -1)` (in either direction), so
//! every vertex has six neighbours. Regions are described symbolically and
//! turned into dense vertex indices on demand.

use std::fmt;

use serde::{Deserialize, Serialize};
use thiserror::Error;

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum LatticeError {
    #[error("annulus requires outer > inner >= 0, got inner={inner}, outer={outer}")]
    BadAnnulus { inner: i32, outer: i32 },
    #[error("box radius must be nonnegative, got {0}")]
    BadRadius(i32),
    #[error("rectangle bounds are inverted: [{x0}, {x1}] x [{y0}, {y1}]")]
    BadRect { x0: i32, x1: i32, y0: i32, y1: i32 },
    #[error("operation not supported for region {0}")]
    Unsupported(String),
    #[error("region {0} is unbounded")]
    Unbounded(String),
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
pub struct Vertex {
    pub x: i32,
    pub y: i32,
}

impl Vertex {
    pub const ORIGIN: Vertex = Vertex { x: 0, y: 0 };

    pub const fn new(x: i32, y: i32) -> Self {
        Vertex { x, y }
    }

    /// `max(|x|, |y|)`.
    pub fn sup_norm(self) -> i32 {
        self.x.abs().max(self.y.abs())
    }

    pub fn offset(self, d: (i32, i32)) -> Vertex {
        Vertex::new(self.x + d.0, self.y + d.1)
    }

    pub fn is_adjacent(self, other: Vertex) -> bool {
        let d = (other.x - self.x, other.y - self.y);
        NEIGHBOR_OFFSETS.contains(&d)
    }
}

impl fmt::Display for Vertex {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "({}, {})", self.x, self.y)
    }
}

/// Neighbour offsets in the fixed order E, W, N, S, SE, NW.
pub const NEIGHBOR_OFFSETS: [(i32, i32); 6] = [(1, 0), (-1, 0), (0, 1), (0, -1), (1, -1), (-1, 1)];

/// The same offsets in counterclockwise angular order of the planar embedding:
/// E (0), N (90), NW (135), W (180), S (270), SE (315).
pub const CCW_OFFSETS: [(i32, i32); 6] = [(1, 0), (0, 1), (-1, 1), (-1, 0), (0, -1), (1, -1)];

/// The six neighbours of `v`, in the order E, W, N, S, SE, NW.
pub fn neighbors(v: Vertex) -> [Vertex; 6] {
    NEIGHBOR_OFFSETS.map(|d| v.offset(d))
}

/// Side of a rectangle.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub enum Side {
    Left,
    Right,
    Top,
    Bottom,
}

/// Inclusive axis-aligned bounds in lattice coordinates.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub struct Bounds {
    pub x0: i32,
    pub x1: i32,
    pub y0: i32,
    pub y1: i32,
}

impl Bounds {
    pub fn width(&self) -> usize {
        (self.x1 - self.x0 + 1).max(0) as usize
    }

    pub fn height(&self) -> usize {
        (self.y1 - self.y0 + 1).max(0) as usize
    }

    pub fn is_empty(&self) -> bool {
        self.x1 < self.x0 || self.y1 < self.y0
    }

    pub fn contains(&self, v: Vertex) -> bool {
        v.x >= self.x0 && v.x <= self.x1 && v.y >= self.y0 && v.y <= self.y1
    }

    pub fn around(radius: i32) -> Self {
        Bounds { x0: -radius, x1: radius, y0: -radius, y1: radius }
    }
}

/// A finite (or, for [`Region::HalfPlane`], infinite) set of lattice vertices.
#[derive(Debug, Clone, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub enum Region {
    /// `{v : |v|_inf <= radius}`.
    Box { radius: i32 },
    /// `Box(outer) \ Box(inner)`.
    Annulus { inner: i32, outer: i32 },
    /// `[x0, x1] x [y0, y1]`.
    Rect { x0: i32, x1: i32, y0: i32, y1: i32 },
    /// The base region intersected with `{v : v.y >= 0}`.
    UpperHalf(Box<Region>),
    /// The base region shifted by `offset`.
    Translate { base: Box<Region>, offset: Vertex },
    /// The whole closed upper half-plane `{v : v.y >= 0}`.
    HalfPlane,
}

impl fmt::Display for Region {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Region::Box { radius } => write!(f, "Box({radius})"),
            Region::Annulus { inner, outer } => write!(f, "Ann({inner},{outer})"),
            Region::Rect { x0, x1, y0, y1 } => write!(f, "Rect([{x0},{x1}]x[{y0},{y1}])"),
            Region::UpperHalf(base) => write!(f, "UpperHalf({base})"),
            Region::Translate { base, offset } => write!(f, "{base}+{offset}"),
            Region::HalfPlane => write!(f, "HalfPlane"),
        }
    }
}

impl Region {
    pub fn square(radius: i32) -> Result<Self, LatticeError> {
        if radius < 0 {
            return Err(LatticeError::BadRadius(radius));
        }
        Ok(Region::Box { radius })
    }

    pub fn annulus(inner: i32, outer: i32) -> Result<Self, LatticeError> {
        if inner < 0 || outer <= inner {
            return Err(LatticeError::BadAnnulus { inner, outer });
        }
        Ok(Region::Annulus { inner, outer })
    }

    pub fn rect(x0: i32, x1: i32, y0: i32, y1: i32) -> Result<Self, LatticeError> {
        if x1 < x0 || y1 < y0 {
            return Err(LatticeError::BadRect { x0, x1, y0, y1 });
        }
        Ok(Region::Rect { x0, x1, y0, y1 })
    }

    pub fn upper_half(self) -> Self {
        Region::UpperHalf(Box::new(self))
    }

    pub fn translate(self, offset: Vertex) -> Self {
        Region::Translate { base: Box::new(self), offset }
    }

    pub fn contains(&self, v: Vertex) -> bool {
        match self {
            Region::Box { radius } => v.sup_norm() <= *radius,
            Region::Annulus { inner, outer } => {
                let r = v.sup_norm();
                r > *inner && r <= *outer
            }
            Region::Rect { x0, x1, y0, y1 } => v.x >= *x0 && v.x <= *x1 && v.y >= *y0 && v.y <= *y1,
            Region::UpperHalf(base) => v.y >= 0 && base.contains(v),
            Region::Translate { base, offset } => base.contains(Vertex::new(v.x - offset.x, v.y - offset.y)),
            Region::HalfPlane => v.y >= 0,
        }
    }

    /// Smallest rectangle containing the region, or `None` when unbounded.
    pub fn bounds(&self) -> Option<Bounds> {
        match self {
            Region::Box { radius } => Some(Bounds::around(*radius)),
            Region::Annulus { outer, .. } => Some(Bounds::around(*outer)),
            Region::Rect { x0, x1, y0, y1 } => Some(Bounds { x0: *x0, x1: *x1, y0: *y0, y1: *y1 }),
            Region::UpperHalf(base) => base.bounds().map(|b| Bounds { y0: b.y0.max(0), ..b }),
            Region::Translate { base, offset } => base.bounds().map(|b| Bounds {
                x0: b.x0 + offset.x,
                x1: b.x1 + offset.x,
                y0: b.y0 + offset.y,
                y1: b.y1 + offset.y,
            }),
            Region::HalfPlane => None,
        }
    }

    /// All vertices in row-major order (rows bottom to top, x increasing).
    pub fn vertices(&self) -> Result<Vec<Vertex>, LatticeError> {
        let b = self.bounds().ok_or_else(|| LatticeError::Unbounded(self.to_string()))?;
        let mut out = Vec::new();
        for y in b.y0..=b.y1 {
            for x in b.x0..=b.x1 {
                let v = Vertex::new(x, y);
                if self.contains(v) {
                    out.push(v);
                }
            }
        }
        Ok(out)
    }

    /// True when every vertex of `self` lies in `other`.
    pub fn is_subset_of(&self, other: &Region) -> Result<bool, LatticeError> {
        Ok(self.vertices()?.into_iter().all(|v| other.contains(v)))
    }
}

/// The vertex boundary of a box (`|v|_inf = n`, listed row-major) or the
/// union of all four sides of a rectangle.
pub fn boundary(region: &Region) -> Result<Vec<Vertex>, LatticeError> {
    match region {
        Region::Box { radius } => Ok(box_ring(*radius)),
        Region::Rect { x0, x1, y0, y1 } => {
            let b = Bounds { x0: *x0, x1: *x1, y0: *y0, y1: *y1 };
            let mut out = Vec::new();
            for y in b.y0..=b.y1 {
                for x in b.x0..=b.x1 {
                    if x == b.x0 || x == b.x1 || y == b.y0 || y == b.y1 {
                        out.push(Vertex::new(x, y));
                    }
                }
            }
            Ok(out)
        }
        other => Err(LatticeError::Unsupported(other.to_string())),
    }
}

/// `{v : |v|_inf = n}` in row-major order.
pub fn box_ring(n: i32) -> Vec<Vertex> {
    if n == 0 {
        return vec![Vertex::ORIGIN];
    }
    let mut out = Vec::with_capacity(8 * n as usize);
    for y in -n..=n {
        if y == -n || y == n {
            out.extend((-n..=n).map(|x| Vertex::new(x, y)));
        } else {
            out.push(Vertex::new(-n, y));
            out.push(Vertex::new(n, y));
        }
    }
    out
}

/// One named side of a rectangle.
pub fn side(region: &Region, side: Side) -> Result<Vec<Vertex>, LatticeError> {
    let Region::Rect { x0, x1, y0, y1 } = *region else {
        return Err(LatticeError::Unsupported(region.to_string()));
    };
    Ok(match side {
        Side::Left => (y0..=y1).map(|y| Vertex::new(x0, y)).collect(),
        Side::Right => (y0..=y1).map(|y| Vertex::new(x1, y)).collect(),
        Side::Bottom => (x0..=x1).map(|x| Vertex::new(x, y0)).collect(),
        Side::Top => (x0..=x1).map(|x| Vertex::new(x, y1)).collect(),
    })
}

const NONE: u32 = u32::MAX;

/// Dense 0-based row-major numbering of the vertices of a bounded region.
#[derive(Debug, Clone)]
pub struct VertexIndex {
    region: Region,
    bounds: Bounds,
    lookup: Vec<u32>,
    vertices: Vec<Vertex>,
}

/// Build the dense index of a bounded region.
pub fn index(region: &Region) -> Result<VertexIndex, LatticeError> {
    VertexIndex::new(region.clone())
}

impl VertexIndex {
    pub fn new(region: Region) -> Result<Self, LatticeError> {
        let bounds = region.bounds().ok_or_else(|| LatticeError::Unbounded(region.to_string()))?;
        let mut lookup = vec![NONE; bounds.width() * bounds.height()];
        let mut vertices = Vec::new();
        for y in bounds.y0..=bounds.y1 {
            for x in bounds.x0..=bounds.x1 {
                let v = Vertex::new(x, y);
                if region.contains(v) {
                    let slot = (y - bounds.y0) as usize * bounds.width() + (x - bounds.x0) as usize;
                    lookup[slot] = vertices.len() as u32;
                    vertices.push(v);
                }
            }
        }
        Ok(VertexIndex { region, bounds, lookup, vertices })
    }

    pub fn region(&self) -> &Region {
        &self.region
    }

    pub fn bounds(&self) -> Bounds {
        self.bounds
    }

    pub fn len(&self) -> usize {
        self.vertices.len()
    }

    pub fn is_empty(&self) -> bool {
        self.vertices.is_empty()
    }

    #[inline]
    pub fn index_of(&self, v: Vertex) -> Option<usize> {
        if !self.bounds.contains(v) {
            return None;
        }
        let slot = (v.y - self.bounds.y0) as usize * self.bounds.width() + (v.x - self.bounds.x0) as usize;
        match self.lookup[slot] {
            NONE => None,
            i => Some(i as usize),
        }
    }

    #[inline]
    pub fn vertex(&self, i: usize) -> Vertex {
        self.vertices[i]
    }

    pub fn vertices(&self) -> &[Vertex] {
        &self.vertices
    }

    pub fn contains(&self, v: Vertex) -> bool {
        self.index_of(v).is_some()
    }

    /// Indices of the in-region neighbours of vertex `i`, in neighbour order.
    #[inline]
    pub fn neighbor_indices(&self, i: usize) -> impl Iterator<Item = usize> + '_ {
        let v = self.vertices[i];
        NEIGHBOR_OFFSETS.iter().filter_map(move |&d| self.index_of(v.offset(d)))
    }
}
