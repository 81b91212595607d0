use std::f64::consts::PI;

use super::derivatives::projection;
use crate::domain::{b_edges, interior_diamonds, w_edges, DiscreteDomain};
use crate::error::{Error, Result};
use crate::function::LatticeFunction;
use crate::isograph::{QuadGraph, C64};

/// `Σ G(½(u_{s+1}+u_s))·(u_{s+1}−u_s)` along a same-color path; `G` is read
/// at the rhombus whose diagonal is the step.
pub fn contour_integral(g: &QuadGraph, path: &[usize], gf: &LatticeFunction) -> Result<C64> {
    let mut s = C64::new(0.0, 0.0);
    for w in path.windows(2) {
        let z = g
            .rhombus_between(w[0], w[1])
            .ok_or_else(|| Error::NotAPath(format!("{} and {} are not adjacent", w[0], w[1])))?;
        s += gf.get(z)? * (g.position(w[1]) - g.position(w[0]));
    }
    Ok(s)
}

fn slot_of(g: &QuadGraph, z: usize, v: usize) -> usize {
    g.rhombus(z).corners.iter().position(|&c| c == v).expect("vertex is a corner")
}

/// `¼ Σ_{z} F(z) Σ_{v~z} μ_{zv} K(v)` over the rhombi with an interior
/// Γ-corner. With `K` the Cauchy kernel at `z0` this is `F(z0)`.
pub fn kernel_pairing(
    d: &DiscreteDomain,
    f: &LatticeFunction,
    kernel: &dyn Fn(usize) -> Result<C64>,
) -> Result<C64> {
    let g = d.graph();
    let w = g.weights();
    let mut s = C64::new(0.0, 0.0);
    for z in interior_diamonds(d) {
        let mut inner = C64::new(0.0, 0.0);
        for (j, &v) in g.rhombus(z).corners.iter().enumerate() {
            inner += w.mu_zv(z, j) * kernel(v)?;
        }
        s += f.get(z)? * inner;
    }
    Ok(s * 0.25)
}

/// Boundary form of [`kernel_pairing`] after summation by parts, valid when
/// `F` is holomorphic at the interior vertices and the faces of the domain:
/// `(1/4i)[∮_B K(w(z)) F(z) d^δz + ∮_W K(u(z)) F(z) d^δz]`.
fn boundary_pairing(
    d: &DiscreteDomain,
    f: &LatticeFunction,
    kernel: &dyn Fn(usize) -> Result<C64>,
) -> Result<C64> {
    let g = d.graph();
    let w = g.weights();
    let bs = b_edges(d);
    if bs.is_empty() {
        return Err(Error::ContourNotFound("domain has no boundary edges".into()));
    }
    let mut s = C64::new(0.0, 0.0);
    for e in &bs {
        s += kernel(e.face)? * w.edge_mu[e.rhombus][slot_of(g, e.rhombus, e.face)] * f.get(e.rhombus)?;
    }
    for e in w_edges(d) {
        s -= kernel(e.vertex)? * w.edge_mu[e.rhombus][slot_of(g, e.rhombus, e.vertex)] * f.get(e.rhombus)?;
    }
    Ok(s * 0.25)
}

/// Discrete Cauchy formula: recover `F(z0)` from its values along the two
/// boundary contours, with `kernel(v) = K(v; z0)`.
pub fn cauchy_reconstruct(
    d: &DiscreteDomain,
    f: &LatticeFunction,
    z0: usize,
    kernel: &dyn Fn(usize) -> Result<C64>,
) -> Result<C64> {
    if interior_diamonds(d).binary_search(&z0).is_err() {
        return Err(Error::Precondition(format!("rhombus {z0} is not inside the domain")));
    }
    boundary_pairing(d, f, kernel)
}

/// Asymptotic form of the Cauchy formula for `F = 𝓑F`:
/// `Pr[(1/2πi)(∮_B + ∮_W) F(z) d^δz / (z − z0); conj(u1 − u2)]` with
/// `u1, u2` the Γ-corners of `z0`.
pub fn cauchy_projection(d: &DiscreteDomain, f: &LatticeFunction, z0: usize) -> Result<C64> {
    let g = d.graph();
    let c0 = g.center(z0);
    let bs = b_edges(d);
    if bs.is_empty() {
        return Err(Error::ContourNotFound("domain has no boundary edges".into()));
    }
    let mut s = C64::new(0.0, 0.0);
    for e in &bs {
        s += f.get(e.rhombus)? * (g.position(e.to) - g.position(e.from)) / (g.center(e.rhombus) - c0);
    }
    for e in w_edges(d) {
        s += f.get(e.rhombus)? * (g.position(e.to) - g.position(e.from)) / (g.center(e.rhombus) - c0);
    }
    let a = s / C64::new(0.0, 2.0 * PI);
    let r = g.rhombus(z0).corners;
    Ok(projection(a, (g.position(r[0]) - g.position(r[2])).conj()))
}
