use std::collections::HashMap;

use super::SparseOperator;
use crate::domain::DiscreteDomain;
use crate::error::{Error, Result};
use crate::function::{LatticeFunction, Support};
use crate::isograph::{QuadGraph, C64};

/// Laplacian matrix over the interior of `d`. Columns list the interior
/// vertices first (in the order of [`DiscreteDomain::interior`]) followed by
/// the exterior ends of boundary pairs.
pub fn assemble_laplacian(d: &DiscreteDomain) -> SparseOperator {
    let g = d.graph();
    let mu = &g.weights().mu_gamma;
    let mut cols: Vec<usize> = d.interior().to_vec();
    let mut col_of: HashMap<usize, usize> = cols.iter().enumerate().map(|(k, &v)| (v, k)).collect();
    let mut entries = Vec::new();
    let mut row_scaling = Vec::with_capacity(d.interior().len());
    for (r, &u) in d.interior().iter().enumerate() {
        let scale = mu[u];
        row_scaling.push(scale);
        let mut diag = 0.0;
        let mut row: Vec<(usize, f64)> = Vec::new();
        for (v, t, _) in g.neighbors(u) {
            let c = *col_of.entry(v).or_insert_with(|| {
                cols.push(v);
                cols.len() - 1
            });
            row.push((c, t / scale));
            diag += t / scale;
        }
        row.push((r, -diag));
        row.sort_by_key(|e| e.0);
        for (c, a) in row {
            entries.push((r, c, C64::new(a, 0.0)));
        }
    }
    SparseOperator {
        rows: d.interior().to_vec(),
        cols,
        entries,
        row_scaling,
        row_support: Support::Gamma,
    }
}

/// `Δ^δ H` on the interior of the domain the operator was built for.
pub fn laplacian_apply(op: &SparseOperator, h: &LatticeFunction) -> Result<LatticeFunction> {
    op.apply(h)
}

/// Pointwise `[Δ^δ H](v) = (1/μ_Γ(v)) Σ tan θ_s (H(v_s) − H(v))` at any vertex
/// with a closed star; on Γ* the weights are `cot θ`.
pub fn laplacian_at(g: &QuadGraph, h: &LatticeFunction, v: usize) -> Result<C64> {
    if !g.is_closed(v) {
        return Err(Error::Precondition(format!("vertex {v} has an open star")));
    }
    let hv = h.get(v)?;
    let mut s = C64::new(0.0, 0.0);
    for (w, t, _) in g.neighbors(v) {
        s += (h.get(w)? - hv) * t;
    }
    Ok(s / g.weights().mu_gamma[v])
}

/// Defect of the discrete Green formula
/// `Σ_int (G ΔH − H ΔG) μ_Γ = Σ_pairs tan θ (H(a) G(a_int) − H(a_int) G(a))`.
pub fn greens_formula_residual(d: &DiscreteDomain, gf: &LatticeFunction, hf: &LatticeFunction) -> Result<f64> {
    let g = d.graph();
    let mu = &g.weights().mu_gamma;
    let mut lhs = C64::new(0.0, 0.0);
    for &u in d.interior() {
        let lh = laplacian_at(g, hf, u)?;
        let lg = laplacian_at(g, gf, u)?;
        lhs += (gf.get(u)? * lh - hf.get(u)? * lg) * mu[u];
    }
    let mut rhs = C64::new(0.0, 0.0);
    for p in d.pairs() {
        rhs += (hf.get(p.a)? * gf.get(p.a_int)? - hf.get(p.a_int)? * gf.get(p.a)?) * p.weight;
    }
    Ok((lhs - rhs).norm())
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::domain::{discretize, Region};
    use crate::isograph::{random_isoradial, square_lattice, Color};
    use rand::{Rng, SeedableRng};
    use rand_chacha::ChaCha8Rng;
    use std::sync::Arc;

    fn disc(seed: u64, r: f64) -> DiscreteDomain {
        let g = Arc::new(random_isoradial(seed, 16, 0.4, 1.0).unwrap());
        discretize(&g, &Region::Disc { cx: 0.0, cy: 0.0, r }).unwrap()
    }

    #[test]
    fn square_row_coefficients() {
        let g = Arc::new(square_lattice(1.0, 4).unwrap());
        let d = discretize(&g, &Region::Disc { cx: 0.0, cy: 0.0, r: 1.2 }).unwrap();
        let op = assemble_laplacian(&d);
        assert_eq!(op.num_rows(), 1);
        assert_eq!(op.num_cols(), 5);
        for &(_, c, a) in &op.entries {
            let want = if c == 0 { -2.0 } else { 0.5 };
            assert!((a - want).norm() < 1e-15);
        }
        assert!((op.row_scaling[0] - 2.0).abs() < 1e-15);
    }

    #[test]
    fn rows_sum_to_zero() {
        let d = disc(3, 9.0);
        let op = assemble_laplacian(&d);
        for s in op.row_sums() {
            assert!(s.norm() < 1e-12);
        }
    }

    #[test]
    fn quadratic_and_linear_functions() {
        let d = disc(5, 9.0);
        let g = d.graph();
        let op = assemble_laplacian(&d);
        let cases: [(fn(C64) -> C64, f64); 4] = [
            (|p| C64::new(p.re * p.re - p.im * p.im, 0.0), 0.0),
            (|p| C64::new(p.re * p.re + p.im * p.im, 0.0), 4.0),
            (|p| C64::new(p.re, 0.0), 0.0),
            (|_| C64::new(3.5, -1.0), 0.0),
        ];
        for (f, want) in cases {
            let h = LatticeFunction::sample(g, Support::Lambda, f);
            let lh = laplacian_apply(&op, &h).unwrap();
            for (_, v) in lh.iter() {
                assert!((v - want).norm() < 1e-10, "{v} vs {want}");
            }
        }
        // the dual Laplacian obeys the same identities
        let h = LatticeFunction::sample(g, Support::Lambda, |p| C64::new(p.norm_sqr(), 0.0));
        for w in g.vertices_of_color(Color::GammaStar).filter(|&w| g.is_closed(w)) {
            assert!((laplacian_at(g, &h, w).unwrap() - 4.0).norm() < 1e-10);
        }
    }

    #[test]
    fn missing_values_are_reported() {
        let d = disc(5, 4.0);
        let op = assemble_laplacian(&d);
        let h = LatticeFunction::new(Support::Gamma);
        assert!(matches!(laplacian_apply(&op, &h), Err(Error::MissingValues(_))));
    }

    #[test]
    fn green_formula_holds_for_random_functions() {
        let d = disc(8, 8.0);
        let g = d.graph();
        let mut rng = ChaCha8Rng::seed_from_u64(1);
        let mut gf = LatticeFunction::new(Support::Gamma);
        let mut hf = LatticeFunction::new(Support::Gamma);
        for v in g.vertices_of_color(Color::Gamma) {
            gf.insert(v, C64::new(rng.random_range(-1.0..1.0), rng.random_range(-1.0..1.0)));
            hf.insert(v, C64::new(rng.random_range(-1.0..1.0), 0.0));
        }
        assert!(greens_formula_residual(&d, &gf, &hf).unwrap() < 1e-9);
        assert_eq!(greens_formula_residual(&d, &hf, &hf).unwrap(), 0.0);
    }
}
