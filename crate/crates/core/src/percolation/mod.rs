//! Site percolation on the triangular lattice: configurations, crossings,
//! innermost circuits and arm events.
//!
//! A vertex is `p`-open when its label satisfies `omega_v <= p`. Open and
//! closed clusters both use the six-neighbour adjacency.

mod arms;
mod circuit;
mod flow;

use std::str::FromStr;
use std::sync::Arc;

use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::grid::Marks;
use crate::labels::{LabelField, LabelSource};
use crate::lattice::{neighbors, side, LatticeError, Region, Side, Vertex, VertexIndex};

pub use arms::{arm_starts, ArmDetector};
pub use circuit::{innermost_open_circuit, innermost_circuit_with, winding_parity, Circuit};
pub use flow::{max_disjoint_paths, FlowProblem};

#[derive(Debug, Error, Clone, PartialEq)]
pub enum PercError {
    #[error("region {inner} is not contained in the configuration region {outer}")]
    RegionMismatch { inner: String, outer: String },
    #[error(transparent)]
    Lattice(#[from] LatticeError),
    #[error("unsupported arm specification: {0}")]
    UnsupportedArms(String),
    #[error("probability {0} outside [0, 1]")]
    BadProbability(f64),
}

/// Anything that assigns a colour to lattice vertices.
pub trait Coloring {
    fn is_open(&self, v: Vertex) -> bool;
}

impl<F: Fn(Vertex) -> bool> Coloring for F {
    #[inline]
    fn is_open(&self, v: Vertex) -> bool {
        self(v)
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum Color {
    Open,
    Closed,
}

impl Color {
    #[inline]
    pub fn of<C: Coloring + ?Sized>(self, col: &C, v: Vertex) -> bool {
        col.is_open(v) == (self == Color::Open)
    }

    pub fn flip(self) -> Color {
        match self {
            Color::Open => Color::Closed,
            Color::Closed => Color::Open,
        }
    }
}

/// `p`-open vertices computed on the fly from hashed labels; nothing is stored.
#[derive(Debug, Clone, Copy)]
pub struct LazyThreshold {
    pub src: LabelSource,
    pub p: f64,
}

impl Coloring for LazyThreshold {
    #[inline]
    fn is_open(&self, v: Vertex) -> bool {
        self.src.label(v, 0) <= self.p
    }
}

/// A stored open/closed state for every vertex of an indexed region.
#[derive(Debug, Clone)]
pub struct Configuration {
    index: Arc<VertexIndex>,
    open: Vec<bool>,
}

impl Configuration {
    pub fn from_fn(index: Arc<VertexIndex>, f: impl Fn(Vertex) -> bool) -> Self {
        let open = index.vertices().iter().map(|&v| f(v)).collect();
        Configuration { index, open }
    }

    pub fn uniform(index: Arc<VertexIndex>, open: bool) -> Self {
        let n = index.len();
        Configuration { index, open: vec![open; n] }
    }

    pub fn index(&self) -> &Arc<VertexIndex> {
        &self.index
    }

    pub fn region(&self) -> &Region {
        self.index.region()
    }

    pub fn open_count(&self) -> usize {
        self.open.iter().filter(|&&o| o).count()
    }

    /// Whether `region` lies inside this configuration's region.
    pub fn covers(&self, region: &Region) -> Result<(), PercError> {
        let ok = region.vertices()?.into_iter().all(|v| self.index.contains(v));
        if ok {
            Ok(())
        } else {
            Err(PercError::RegionMismatch { inner: region.to_string(), outer: self.region().to_string() })
        }
    }
}

impl Coloring for Configuration {
    /// Vertices outside the region read as closed.
    #[inline]
    fn is_open(&self, v: Vertex) -> bool {
        self.index.index_of(v).is_some_and(|i| self.open[i])
    }
}

/// The `p`-open configuration of a label field: open iff `omega_v <= p`.
pub fn open_config(labels: &LabelField, p: f64) -> Result<Configuration, PercError> {
    if !(0.0..=1.0).contains(&p) {
        return Err(PercError::BadProbability(p));
    }
    let open = labels.values().iter().map(|&u| u <= p).collect();
    Ok(Configuration { index: labels.index().clone(), open })
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum Direction {
    /// Left side to right side.
    LeftRight,
    /// Top side to bottom side.
    TopBottom,
}

/// Whether a path of `color` inside the rectangle joins its two sides in `dir`.
pub fn has_crossing(cfg: &Configuration, rect: &Region, dir: Direction, color: Color) -> Result<bool, PercError> {
    cfg.covers(rect)?;
    let mut marks = Marks::new(rect.bounds().expect("rectangles are bounded"));
    crossing_with(cfg, rect, dir, color, &mut marks, &mut Vec::new())
}

/// [`has_crossing`] for any colouring, reusing caller scratch. Does not check
/// that the colouring covers the rectangle.
pub fn crossing_with<C: Coloring + ?Sized>(
    col: &C,
    rect: &Region,
    dir: Direction,
    color: Color,
    marks: &mut Marks,
    stack: &mut Vec<Vertex>,
) -> Result<bool, PercError> {
    let Region::Rect { x0, x1, y0, y1 } = *rect else {
        return Err(LatticeError::Unsupported(rect.to_string()).into());
    };
    let (from, to) = match dir {
        Direction::LeftRight => (Side::Left, Side::Right),
        Direction::TopBottom => (Side::Top, Side::Bottom),
    };
    marks.reset_to(rect.bounds().expect("bounded"));
    stack.clear();
    for v in side(rect, from)? {
        if color.of(col, v) && marks.mark(v) {
            stack.push(v);
        }
    }
    let reached = |v: Vertex| match to {
        Side::Right => v.x == x1,
        Side::Left => v.x == x0,
        Side::Bottom => v.y == y0,
        Side::Top => v.y == y1,
    };
    while let Some(v) = stack.pop() {
        if reached(v) {
            return Ok(true);
        }
        for w in neighbors(v) {
            if w.x >= x0 && w.x <= x1 && w.y >= y0 && w.y <= y1 && color.of(col, w) && marks.mark(w) {
                stack.push(w);
            }
        }
    }
    Ok(false)
}

/// Angular sector in which arms must stay.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum Sector {
    Full,
    UpperHalf,
}

/// Colours of vertex-disjoint arms, listed in clockwise order.
#[derive(Debug, Clone, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub struct ArmSpec {
    pub colors: Vec<Color>,
    pub sector: Sector,
    pub alternating: bool,
}

impl ArmSpec {
    pub fn new(colors: Vec<Color>, sector: Sector) -> Result<Self, PercError> {
        let alternating = colors.len() >= 2 && colors.len() % 2 == 0 && colors.windows(2).all(|w| w[0] != w[1]);
        let spec = ArmSpec { colors, sector, alternating };
        spec.validate()?;
        Ok(spec)
    }

    pub fn one_arm() -> Self {
        ArmSpec { colors: vec![Color::Open], sector: Sector::Full, alternating: false }
    }

    pub fn half_plane_one_arm() -> Self {
        ArmSpec { colors: vec![Color::Open], sector: Sector::UpperHalf, alternating: false }
    }

    pub fn polychromatic_two() -> Self {
        ArmSpec { colors: vec![Color::Open, Color::Closed], sector: Sector::Full, alternating: true }
    }

    pub fn monochromatic_two() -> Self {
        ArmSpec { colors: vec![Color::Open, Color::Open], sector: Sector::Full, alternating: false }
    }

    pub fn alternating_four() -> Self {
        ArmSpec {
            colors: vec![Color::Open, Color::Closed, Color::Open, Color::Closed],
            sector: Sector::Full,
            alternating: true,
        }
    }

    pub fn len(&self) -> usize {
        self.colors.len()
    }

    pub fn is_empty(&self) -> bool {
        self.colors.is_empty()
    }

    pub fn validate(&self) -> Result<(), PercError> {
        let bad = |why: &str| Err(PercError::UnsupportedArms(why.to_string()));
        if ![1, 2, 4].contains(&self.colors.len()) {
            return bad("arm count must be 1, 2 or 4");
        }
        let alt = self.colors.len() >= 2 && self.colors.windows(2).all(|w| w[0] != w[1]);
        if alt != self.alternating {
            return bad("alternating flag does not match the colour sequence");
        }
        if self.colors.len() == 4 && !self.alternating {
            return bad("four arms are supported only in alternating order");
        }
        if self.colors.len() == 4 && self.sector == Sector::UpperHalf {
            return bad("four arms are supported only in the full plane");
        }
        Ok(())
    }
}

impl FromStr for ArmSpec {
    type Err = PercError;

    /// Short names: `open1`, `closed1`, `half1`, `poly2`, `mono2`, `alt4`.
    fn from_str(s: &str) -> Result<Self, PercError> {
        Ok(match s {
            "open1" => ArmSpec::one_arm(),
            "closed1" => ArmSpec { colors: vec![Color::Closed], sector: Sector::Full, alternating: false },
            "half1" => ArmSpec::half_plane_one_arm(),
            "poly2" => ArmSpec::polychromatic_two(),
            "mono2" => ArmSpec::monochromatic_two(),
            "alt4" => ArmSpec::alternating_four(),
            other => return Err(PercError::UnsupportedArms(format!("unknown arm spec `{other}`"))),
        })
    }
}

impl std::fmt::Display for ArmSpec {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        let name = match (self.colors.as_slice(), self.sector) {
            ([Color::Open], Sector::Full) => "open1",
            ([Color::Closed], Sector::Full) => "closed1",
            ([Color::Open], Sector::UpperHalf) => "half1",
            ([Color::Open, Color::Closed], Sector::Full) => "poly2",
            ([Color::Open, Color::Open], Sector::Full) => "mono2",
            ([_, _, _, _], Sector::Full) => "alt4",
            _ => return write!(f, "{:?}/{:?}", self.colors, self.sector),
        };
        f.write_str(name)
    }
}

/// Whether the arms in `spec` cross `Ann(m, n)` in the configuration.
pub fn has_arms(cfg: &Configuration, m: i32, n: i32, spec: &ArmSpec) -> Result<bool, PercError> {
    let ann = Region::annulus(m, n)?;
    cfg.covers(&ann)?;
    spec.validate()?;
    Ok(ArmDetector::new().detect(cfg, m, n, spec))
}
