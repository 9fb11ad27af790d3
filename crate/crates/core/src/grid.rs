//! Dense scratch storage over a rectangle of vertices.

use crate::lattice::{Bounds, Vertex};

/// A value per vertex of a rectangle, stored row-major.
#[derive(Debug, Clone)]
pub struct Grid<T> {
    bounds: Bounds,
    width: usize,
    data: Vec<T>,
}

impl<T: Clone> Grid<T> {
    pub fn new(bounds: Bounds, fill: T) -> Self {
        let width = bounds.width();
        Grid { bounds, width, data: vec![fill; width * bounds.height()] }
    }

    pub fn fill(&mut self, value: T) {
        self.data.iter_mut().for_each(|x| *x = value.clone());
    }
}

impl<T> Grid<T> {
    pub fn bounds(&self) -> Bounds {
        self.bounds
    }

    #[inline]
    pub fn slot(&self, v: Vertex) -> usize {
        debug_assert!(self.bounds.contains(v), "{v} outside grid");
        (v.y - self.bounds.y0) as usize * self.width + (v.x - self.bounds.x0) as usize
    }

    #[inline]
    pub fn vertex_at(&self, slot: usize) -> Vertex {
        Vertex::new(self.bounds.x0 + (slot % self.width) as i32, self.bounds.y0 + (slot / self.width) as i32)
    }

    #[inline]
    pub fn contains(&self, v: Vertex) -> bool {
        self.bounds.contains(v)
    }

    #[inline]
    pub fn get(&self, v: Vertex) -> &T {
        let s = self.slot(v);
        &self.data[s]
    }

    #[inline]
    pub fn get_mut(&mut self, v: Vertex) -> &mut T {
        let s = self.slot(v);
        &mut self.data[s]
    }

    pub fn as_slice(&self) -> &[T] {
        &self.data
    }

    pub fn as_mut_slice(&mut self) -> &mut [T] {
        &mut self.data
    }
}

/// Visited marks that clear in O(1) by bumping a generation counter.
#[derive(Debug, Clone)]
pub struct Marks {
    grid: Grid<u32>,
    generation: u32,
}

impl Marks {
    pub fn new(bounds: Bounds) -> Self {
        Marks { grid: Grid::new(bounds, 0), generation: 1 }
    }

    pub fn bounds(&self) -> Bounds {
        self.grid.bounds()
    }

    /// Make sure the marks cover `bounds`, reallocating if needed, and clear them.
    pub fn reset_to(&mut self, bounds: Bounds) {
        let b = self.grid.bounds();
        if b.x0 > bounds.x0 || b.x1 < bounds.x1 || b.y0 > bounds.y0 || b.y1 < bounds.y1 {
            *self = Marks::new(bounds);
        } else {
            self.clear();
        }
    }

    pub fn clear(&mut self) {
        self.generation = self.generation.wrapping_add(1);
        if self.generation == 0 {
            self.grid.fill(0);
            self.generation = 1;
        }
    }

    /// Mark `v`; true if it was not marked before.
    #[inline]
    pub fn mark(&mut self, v: Vertex) -> bool {
        let g = self.generation;
        let cell = self.grid.get_mut(v);
        if *cell == g {
            false
        } else {
            *cell = g;
            true
        }
    }

    #[inline]
    pub fn is_marked(&self, v: Vertex) -> bool {
        *self.grid.get(v) == self.generation
    }
}
