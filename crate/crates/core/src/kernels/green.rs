use std::f64::consts::PI;

use super::path::{choose_path, exponential_along};
use super::quadrature::integrate;
use crate::error::{Error, Result};
use crate::isograph::{Color, QuadGraph, C64};

/// Euler–Mascheroni constant.
pub const EULER_GAMMA: f64 = 0.577_215_664_901_532_9;

/// Contour and quadrature settings for the kernel integrals.
///
/// The integrals do not depend on the radii as long as the inner circle stays
/// inside and the outer circle outside the poles (all at `|λ| = 2/δ`). Radii
/// left as `None` are picked per evaluation to keep the integrand bounded on
/// both circles.
#[derive(Clone, Copy, Debug)]
pub struct ContourSpec {
    pub r_outer: Option<f64>,
    pub r_inner: Option<f64>,
    /// Absolute tolerance of each adaptive integral.
    pub tol: f64,
    pub max_depth: u32,
}

impl Default for ContourSpec {
    fn default() -> Self {
        ContourSpec { r_outer: None, r_inner: None, tol: 1e-11, max_depth: 40 }
    }
}

impl ContourSpec {
    /// Radii for a path of the given total length on a graph with mesh `δ`.
    pub fn radii(&self, delta: f64, path_len: f64) -> Result<(f64, f64)> {
        let r_in = self.r_inner.unwrap_or((0.04 / delta).min(0.5 / path_len.max(delta)));
        let r_out = self.r_outer.unwrap_or((40.0 / delta).max(4.0 * path_len / (delta * delta)));
        if !(r_in < 2.0 / delta && 2.0 / delta < r_out) {
            return Err(Error::Precondition(format!(
                "contour radii {r_in}, {r_out} do not separate the poles at {}",
                2.0 / delta
            )));
        }
        Ok((r_in, r_out))
    }
}

/// Additive constant `(log δ − γ − log 2)/2π` turning the contour integral
/// into the normalised free Green's function.
pub fn green_constant(delta: f64) -> f64 {
    (delta.ln() - EULER_GAMMA - 2f64.ln()) / (2.0 * PI)
}

/// Contour integral `(1/8π²i) ∮ (log λ/λ) e(λ, u; u0) dλ`, with its
/// imaginary part as a by-product.
pub fn free_green_raw(g: &QuadGraph, u: usize, u0: usize, spec: &ContourSpec) -> Result<C64> {
    if g.color(u0) != Color::Gamma || g.color(u) != Color::Gamma {
        return Err(Error::Precondition("the free Green's function lives on Γ".into()));
    }
    if u == u0 {
        return Ok(C64::new(0.0, 0.0));
    }
    let path = choose_path(g, u0, u)?;
    let steps = path.increments(g);
    let len = steps.len() as f64 * g.delta();
    let (r, big_r) = spec.radii(g.delta(), len)?;
    let phi0 = -(g.position(u) - g.position(u0)).arg();
    let e = |lambda: C64| exponential_along(&steps, lambda);
    let i = C64::new(0.0, 1.0);
    let (a, b) = (phi0 - PI, phi0 + PI);

    let outer = integrate(
        |psi| (big_r.ln() + i * psi) * e(C64::from_polar(big_r, psi)) * i,
        a,
        b,
        spec.tol,
        spec.max_depth,
    )?;
    let inner = integrate(
        |psi| (r.ln() + i * psi) * e(C64::from_polar(r, psi)) * i,
        a,
        b,
        spec.tol,
        spec.max_depth,
    )?;
    let dir = C64::from_polar(1.0, phi0);
    let seg = integrate(|s| e(-s.exp() * dir), r.ln(), big_r.ln(), spec.tol, spec.max_depth)?;
    let total = outer.value - inner.value - 2.0 * PI * i * seg.value;
    Ok(total / (8.0 * PI * PI * i))
}

/// Free Green's function `G_Γ(u; u0)`, normalised so that
/// `G = log|u − u0|/2π + O(δ²/|u − u0|²)`.
pub fn free_green(g: &QuadGraph, u: usize, u0: usize, spec: &ContourSpec) -> Result<f64> {
    Ok(free_green_raw(g, u, u0, spec)?.re + green_constant(g.delta()))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::isograph::{random_isoradial, square_lattice};

    #[test]
    fn constant_at_the_pole() {
        let g = square_lattice(1.0, 4).unwrap();
        let u0 = g.nearest(C64::new(0.0, 0.0), Color::Gamma).unwrap();
        let v = free_green(&g, u0, u0, &ContourSpec::default()).unwrap();
        assert!((v - (-EULER_GAMMA - 2f64.ln()) / (2.0 * PI)).abs() < 1e-15);
        assert!((v + 0.2021).abs() < 1e-4);
    }

    #[test]
    fn neighbor_values() {
        let g = square_lattice(1.0, 4).unwrap();
        let u0 = g.nearest(C64::new(0.0, 0.0), Color::Gamma).unwrap();
        for (v, _, _) in g.neighbors(u0) {
            let raw = free_green_raw(&g, v, u0, &ContourSpec::default()).unwrap();
            assert!((raw.re - 0.25).abs() < 1e-10, "{raw}");
            assert!(raw.im.abs() < 1e-10);
        }
        let g = random_isoradial(17, 8, 0.4, 0.7).unwrap();
        let u0 = g.nearest(C64::new(0.0, 0.0), Color::Gamma).unwrap();
        for inc in g.star(u0) {
            let v = g.corner(*inc).opposite;
            let theta = g.half_angle(inc.rhombus, inc.slot);
            let raw = free_green_raw(&g, v, u0, &ContourSpec::default()).unwrap();
            assert!((raw.re - theta / theta.tan() / PI).abs() < 1e-10);
        }
    }

    #[test]
    fn value_does_not_depend_on_radii() {
        let g = random_isoradial(4, 12, 0.4, 1.0).unwrap();
        let u0 = g.nearest(C64::new(0.0, 0.0), Color::Gamma).unwrap();
        let u = g.nearest(C64::new(4.0, -3.0), Color::Gamma).unwrap();
        let a = free_green(&g, u, u0, &ContourSpec::default()).unwrap();
        let spec = ContourSpec { r_outer: Some(500.0), r_inner: Some(0.01), ..Default::default() };
        let b = free_green(&g, u, u0, &spec).unwrap();
        assert!((a - b).abs() < 1e-9);
    }

    #[test]
    fn bad_radii_are_rejected() {
        let g = square_lattice(1.0, 4).unwrap();
        let u0 = g.nearest(C64::new(0.0, 0.0), Color::Gamma).unwrap();
        let u = g.neighbors(u0).next().unwrap().0;
        let spec = ContourSpec { r_outer: Some(1.0), ..Default::default() };
        assert!(matches!(free_green(&g, u, u0, &spec), Err(Error::Precondition(_))));
    }
}
