//! Static and dynamical critical first-passage percolation on the triangular
//! site lattice.

pub mod distributions;
pub mod labels;
pub mod lattice;
pub mod grid;
pub mod percolation;
pub mod fpp;
pub mod dynamics;
pub mod fit;
pub mod io;
pub mod experiments;
pub mod cli;
