use sprs::{CsMat, FillInReduction, SymmetryCheck, TriMat};
use sprs_ldl::{Ldl, LdlNumeric};

use crate::domain::DiscreteDomain;
use crate::error::{Error, Result};
use crate::function::{LatticeFunction, Support};
use crate::isograph::C64;

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum SolveMethod {
    /// Direct factorization below `direct_limit` unknowns, conjugate gradients above.
    Auto,
    Direct,
    ConjugateGradient,
}

#[derive(Clone, Copy, Debug)]
pub struct SolverConfig {
    /// Stopping threshold for the diagonally scaled residual, relative to the
    /// scaled right-hand side.
    pub tol: f64,
    pub max_iter: usize,
    pub method: SolveMethod,
    pub direct_limit: usize,
}

impl Default for SolverConfig {
    fn default() -> Self {
        SolverConfig { tol: 1e-12, max_iter: 200_000, method: SolveMethod::Auto, direct_limit: 20_000 }
    }
}

/// Accepted residual of a Dirichlet solve, in units of `‖f‖∞` after dividing
/// each row by its diagonal.
pub const RESIDUAL_BOUND: f64 = 1e-10;

/// Values on the interior vertices (ordered as [`DiscreteDomain::interior`])
/// and on the boundary pairs (ordered as [`DiscreteDomain::pairs`]).
#[derive(Clone, Debug, PartialEq)]
pub struct DomainFunction {
    pub interior: Vec<f64>,
    pub boundary: Vec<f64>,
}

impl DomainFunction {
    /// Value at an interior vertex.
    pub fn at(&self, d: &DiscreteDomain, v: usize) -> Option<f64> {
        d.local_index(v).map(|k| self.interior[k])
    }

    /// Value at interior vertex `v`, or at the exterior end `v` of a pair.
    pub fn value(&self, d: &DiscreteDomain, v: usize) -> Option<f64> {
        self.at(d, v).or_else(|| d.pairs().iter().position(|p| p.a == v).map(|i| self.boundary[i]))
    }

    pub fn max_abs(&self) -> f64 {
        self.interior.iter().chain(&self.boundary).fold(0.0, |m, x| m.max(x.abs()))
    }

    /// Convert to a lattice function on Γ. An exterior vertex shared by
    /// several pairs takes the value of the first; exterior ends that are
    /// also interior (slits) keep the interior value.
    pub fn to_function(&self, d: &DiscreteDomain) -> LatticeFunction {
        let mut f = LatticeFunction::new(Support::Gamma);
        for (i, p) in d.pairs().iter().enumerate().rev() {
            f.insert(p.a, C64::new(self.boundary[i], 0.0));
        }
        for (k, &u) in d.interior().iter().enumerate() {
            f.insert(u, C64::new(self.interior[k], 0.0));
        }
        f
    }
}

/// The Dirichlet problem on a domain in symmetric form: row `u` of `Δ^δ` times
/// `−μ_Γ(u)`, so that the matrix carries the edge-symmetric `tan θ` weights.
/// A factorization, when used, is computed once and shared by every solve.
pub struct DirichletSystem {
    domain: DiscreteDomain,
    matrix: CsMat<f64>,
    diag: Vec<f64>,
    /// `(row, pair, tan θ)`: boundary value of `pair` enters row `row`.
    boundary_injection: Vec<(usize, usize, f64)>,
    config: SolverConfig,
    factor: Option<LdlNumeric<f64, usize>>,
}

impl DirichletSystem {
    pub fn new(d: &DiscreteDomain, config: SolverConfig) -> Result<Self> {
        let n = d.interior().len();
        let mut tri = TriMat::new((n, n));
        let mut diag = vec![0.0; n];
        let mut boundary_injection = Vec::new();
        for (r, &u) in d.interior().iter().enumerate() {
            for (v, t) in d.interior_neighbors(u) {
                let c = d.local_index(v).expect("interior neighbor");
                tri.add_triplet(r, c, -t);
                diag[r] += t;
            }
            for &p in d.pairs_at(r) {
                let t = d.pairs()[p].weight;
                boundary_injection.push((r, p, t));
                diag[r] += t;
            }
            tri.add_triplet(r, r, diag[r]);
        }
        let matrix: CsMat<f64> = tri.to_csr();
        let direct = match config.method {
            // the factorization needs at least two unknowns
            _ if n < 2 => false,
            SolveMethod::Direct => true,
            SolveMethod::ConjugateGradient => false,
            SolveMethod::Auto => n < config.direct_limit,
        };
        let factor = if direct {
            let csc = matrix.to_csc();
            let f = Ldl::new()
                .fill_in_reduction(FillInReduction::ReverseCuthillMcKee)
                .check_symmetry(SymmetryCheck::DontCheckSymmetry)
                .numeric(csc.view())
                .map_err(|e| Error::IllConditioned(format!("factorization failed: {e}")))?;
            Some(f)
        } else {
            None
        };
        Ok(DirichletSystem { domain: d.clone(), matrix, diag, boundary_injection, config, factor })
    }

    pub fn domain(&self) -> &DiscreteDomain {
        &self.domain
    }

    pub fn num_unknowns(&self) -> usize {
        self.diag.len()
    }

    pub fn is_direct(&self) -> bool {
        self.factor.is_some()
    }

    /// Symmetric system matrix over the interior vertices.
    pub fn matrix(&self) -> &CsMat<f64> {
        &self.matrix
    }

    pub fn multiply(&self, x: &[f64]) -> Vec<f64> {
        self.matrix
            .outer_iterator()
            .map(|row| row.iter().map(|(c, a)| a * x[c]).sum())
            .collect()
    }

    /// `max_u |(A x − b)(u)| / A(u,u)`.
    pub fn scaled_residual(&self, x: &[f64], rhs: &[f64]) -> f64 {
        self.multiply(x)
            .iter()
            .zip(rhs)
            .zip(&self.diag)
            .fold(0.0, |m, ((ax, b), dg)| m.max((ax - b).abs() / dg))
    }

    /// Right-hand side produced by boundary data on the pairs.
    pub fn boundary_rhs(&self, f: &[f64]) -> Vec<f64> {
        let mut b = vec![0.0; self.num_unknowns()];
        for &(r, p, t) in &self.boundary_injection {
            b[r] += t * f[p];
        }
        b
    }

    /// Solve `A x = rhs`.
    pub fn solve_interior(&self, rhs: &[f64]) -> Result<Vec<f64>> {
        let scale = rhs.iter().zip(&self.diag).fold(0.0, |m: f64, (b, dg)| m.max(b.abs() / dg));
        if scale == 0.0 {
            return Ok(vec![0.0; rhs.len()]);
        }
        let bound = RESIDUAL_BOUND * scale;
        match &self.factor {
            Some(f) => {
                let mut x: Vec<f64> = f.solve(rhs);
                let mut res = self.scaled_residual(&x, rhs);
                // iterative refinement
                for _ in 0..3 {
                    if res <= self.config.tol * scale {
                        break;
                    }
                    let r: Vec<f64> = self.multiply(&x).iter().zip(rhs).map(|(ax, b)| b - ax).collect();
                    let dx: Vec<f64> = f.solve(&r);
                    x.iter_mut().zip(dx).for_each(|(xi, d)| *xi += d);
                    res = self.scaled_residual(&x, rhs);
                }
                if !(res <= bound) {
                    return Err(Error::SolverDiverged { iterations: 0, residual: res / scale });
                }
                Ok(x)
            }
            None => self.conjugate_gradient(rhs, scale, bound),
        }
    }

    /// Jacobi-preconditioned conjugate gradients, stopped on the scaled
    /// maximum residual.
    fn conjugate_gradient(&self, rhs: &[f64], scale: f64, bound: f64) -> Result<Vec<f64>> {
        let n = rhs.len();
        let mut x = vec![0.0; n];
        let mut r = rhs.to_vec();
        let mut z: Vec<f64> = r.iter().zip(&self.diag).map(|(r, d)| r / d).collect();
        let mut p = z.clone();
        let mut rz: f64 = r.iter().zip(&z).map(|(a, b)| a * b).sum();
        let target = self.config.tol * scale;
        let mut res = z.iter().fold(0.0, |m: f64, v| m.max(v.abs()));
        for it in 0..self.config.max_iter {
            if res <= target {
                break;
            }
            let ap = self.multiply(&p);
            let pap: f64 = p.iter().zip(&ap).map(|(a, b)| a * b).sum();
            if !(pap > 0.0) {
                return Err(Error::SolverDiverged { iterations: it, residual: res / scale });
            }
            let alpha = rz / pap;
            for i in 0..n {
                x[i] += alpha * p[i];
                r[i] -= alpha * ap[i];
                z[i] = r[i] / self.diag[i];
            }
            res = z.iter().fold(0.0, |m: f64, v| m.max(v.abs()));
            let rz_new: f64 = r.iter().zip(&z).map(|(a, b)| a * b).sum();
            let beta = rz_new / rz;
            rz = rz_new;
            for i in 0..n {
                p[i] = z[i] + beta * p[i];
            }
        }
        // the recurrence drifts from the true residual; check the real one
        let true_res = self.scaled_residual(&x, rhs);
        if !(true_res <= bound) {
            return Err(Error::SolverDiverged { iterations: self.config.max_iter, residual: true_res / scale });
        }
        Ok(x)
    }

    /// Harmonic extension of boundary data given per pair.
    pub fn solve(&self, f: &[f64]) -> Result<DomainFunction> {
        if f.len() != self.domain.pairs().len() {
            return Err(Error::Precondition(format!(
                "{} boundary values for {} pairs",
                f.len(),
                self.domain.pairs().len()
            )));
        }
        if f.iter().any(|x| !x.is_finite()) {
            return Err(Error::Precondition("boundary data must be finite".into()));
        }
        let x = self.solve_interior(&self.boundary_rhs(f))?;
        let (lo, hi) = f.iter().fold((f64::INFINITY, f64::NEG_INFINITY), |(l, h), &v| (l.min(v), h.max(v)));
        let slack = 1e-9 * lo.abs().max(hi.abs());
        if x.iter().any(|&v| v < lo - slack || v > hi + slack) {
            return Err(Error::SolverDiverged { iterations: 0, residual: f64::NAN });
        }
        Ok(DomainFunction { interior: x, boundary: f.to_vec() })
    }

    /// Full harmonic measure seen from interior vertex `u`, one entry per
    /// pair, through the adjoint system `A g = e_u`.
    pub fn harmonic_measure_row(&self, u: usize) -> Result<Vec<f64>> {
        let g = self.unit_response(u)?;
        let mut row = vec![0.0; self.domain.pairs().len()];
        for &(r, p, t) in &self.boundary_injection {
            row[p] += t * g[r];
        }
        Ok(row)
    }

    /// `A⁻¹ e_u`.
    pub fn unit_response(&self, u: usize) -> Result<Vec<f64>> {
        let k = self
            .domain
            .local_index(u)
            .ok_or_else(|| Error::Precondition(format!("vertex {u} is not interior")))?;
        let mut e = vec![0.0; self.num_unknowns()];
        e[k] = 1.0;
        self.solve_interior(&e)
    }
}
