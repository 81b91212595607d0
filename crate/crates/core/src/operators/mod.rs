//! Discrete Laplacian, Cauchy-Riemann operators, averaging, contour sums
//! and primitives.
//!
//! Every operator comes in a pointwise form working on a [`QuadGraph`] and a
//! [`LatticeFunction`]; the Laplacian can also be assembled as a sparse
//! matrix over a domain.

mod cauchy;
mod derivatives;
mod laplacian;
mod primitive;

pub use cauchy::{cauchy_projection, cauchy_reconstruct, contour_integral, kernel_pairing};
pub use derivatives::{
    average_diamond_to_lambda, average_lambda_to_diamond, d_diamond_to_lambda, d_lambda_to_diamond,
    dbar_diamond_to_lambda, dbar_lambda_to_diamond, factorization_check, on_diamonds, on_vertices,
    project_b, project_w, projection, HOLOMORPHIC_TOL,
};
pub use laplacian::{assemble_laplacian, greens_formula_residual, laplacian_apply, laplacian_at};
pub use primitive::primitive;

use std::collections::HashMap;

use crate::error::Result;
use crate::function::{LatticeFunction, Support};
use crate::isograph::C64;

/// Sparse operator in triplet form. Rows and columns map to vertex ids;
/// `entries` hold `(row index, column index, coefficient)` in row-major
/// order.
#[derive(Clone, Debug)]
pub struct SparseOperator {
    pub rows: Vec<usize>,
    pub cols: Vec<usize>,
    pub entries: Vec<(usize, usize, C64)>,
    pub row_scaling: Vec<f64>,
    pub row_support: Support,
}

impl SparseOperator {
    pub fn num_rows(&self) -> usize {
        self.rows.len()
    }

    pub fn num_cols(&self) -> usize {
        self.cols.len()
    }

    /// Column position of a vertex id.
    pub fn col_index(&self) -> HashMap<usize, usize> {
        self.cols.iter().enumerate().map(|(k, &v)| (v, k)).collect()
    }

    pub fn apply(&self, f: &LatticeFunction) -> Result<LatticeFunction> {
        let x: Vec<C64> = self.cols.iter().map(|&v| f.get(v)).collect::<Result<_>>()?;
        let mut y = vec![C64::new(0.0, 0.0); self.rows.len()];
        for &(r, c, a) in &self.entries {
            y[r] += a * x[c];
        }
        Ok(LatticeFunction::from_values(self.row_support, self.rows.iter().copied().zip(y)))
    }

    pub fn row_sums(&self) -> Vec<C64> {
        let mut s = vec![C64::new(0.0, 0.0); self.rows.len()];
        for &(r, _, a) in &self.entries {
            s[r] += a;
        }
        s
    }
}
