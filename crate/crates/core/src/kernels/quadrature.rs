use std::num::NonZeroUsize;
use std::sync::OnceLock;

use gauss_quad::legendre::GaussLegendre;

use crate::error::{Error, Result};
use crate::isograph::C64;

const PANEL: usize = 16;

fn rule() -> &'static [(f64, f64)] {
    static RULE: OnceLock<Vec<(f64, f64)>> = OnceLock::new();
    RULE.get_or_init(|| {
        GaussLegendre::new(NonZeroUsize::new(PANEL).unwrap())
            .as_node_weight_pairs()
            .to_vec()
    })
}

fn panel(f: &mut impl FnMut(f64) -> C64, a: f64, b: f64) -> C64 {
    let h = 0.5 * (b - a);
    let m = 0.5 * (b + a);
    let mut s = C64::new(0.0, 0.0);
    for &(x, w) in rule() {
        s += f(m + h * x) * w;
    }
    s * h
}

/// Integral with its estimated absolute error.
#[derive(Clone, Copy, Debug)]
pub struct Integral {
    pub value: C64,
    pub error: f64,
}

/// Adaptive Gauss–Legendre quadrature of a complex integrand over `[a, b]`.
/// A panel is accepted when it agrees with the sum of its halves to within
/// its share of `tol`.
pub fn integrate(mut f: impl FnMut(f64) -> C64, a: f64, b: f64, tol: f64, max_depth: u32) -> Result<Integral> {
    let whole = panel(&mut f, a, b);
    let mut out = Integral { value: C64::new(0.0, 0.0), error: 0.0 };
    let mut failed = false;
    refine(&mut f, a, b, whole, tol, max_depth, &mut out, &mut failed);
    if failed || !out.value.re.is_finite() || !out.value.im.is_finite() {
        return Err(Error::QuadratureNotConverged { estimate: out.value.norm(), error: out.error });
    }
    Ok(out)
}

#[allow(clippy::too_many_arguments)]
fn refine(
    f: &mut impl FnMut(f64) -> C64,
    a: f64,
    b: f64,
    whole: C64,
    tol: f64,
    depth: u32,
    out: &mut Integral,
    failed: &mut bool,
) {
    let m = 0.5 * (a + b);
    let left = panel(f, a, m);
    let right = panel(f, m, b);
    let err = (left + right - whole).norm();
    if err <= tol || depth == 0 {
        if err > tol {
            *failed = true;
        }
        out.value += left + right;
        out.error += err;
        return;
    }
    refine(f, a, m, left, 0.5 * tol, depth - 1, out, failed);
    refine(f, m, b, right, 0.5 * tol, depth - 1, out, failed);
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn integrates_smooth_and_peaked_functions() {
        let r = integrate(|x| C64::new(x.cos(), x * x), 0.0, 2.0, 1e-13, 30).unwrap();
        assert!((r.value - C64::new(2f64.sin(), 8.0 / 3.0)).norm() < 1e-13);
        let r = integrate(|x| C64::new(1.0 / (1e-4 + x * x), 0.0), -1.0, 1.0, 1e-10, 40).unwrap();
        let exact = 2.0 * (1.0 / 1e-2) * (1.0f64 / 1e-2).atan();
        assert!((r.value.re - exact).abs() < 1e-8);
    }

    #[test]
    fn depth_limit_reports_failure() {
        let r = integrate(|x| C64::new(1.0 / x.abs().sqrt().max(1e-300), 0.0), -1.0, 1.0, 1e-14, 3);
        assert!(matches!(r, Err(Error::QuadratureNotConverged { .. })));
    }
}
