//! Discrete complex analysis on isoradial graphs.
//!
//! The crate builds rhombic quad-graphs, extracts discrete domains, and
//! provides the discrete Laplacian, Cauchy-Riemann operators, Green's
//! functions, Cauchy kernels, Dirichlet solvers, random walks and a
//! convergence harness comparing discrete objects with their continuous
//! counterparts.

pub mod domain;
pub mod error;
pub mod function;
pub mod isograph;
pub mod kernels;
pub mod operators;
pub mod solvers;
pub mod walk;
pub mod harness;

pub use domain::{discretize, DiscreteDomain, Region};
pub use error::{Error, Result};
pub use function::{LatticeFunction, Support};
pub use isograph::{Color, QuadGraph, Weights, C64};
