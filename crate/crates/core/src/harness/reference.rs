//! Continuous harmonic functions used as convergence references. All live on
//! the unit disc, the upper unit half-disc, the unit square `[0, 1]²` or the
//! unit disc slit along `[0, 1)`.

use std::f64::consts::{PI, TAU};

use crate::error::{Error, Result};
use crate::isograph::C64;
use crate::kernels::integrate;

/// Step of the central differences in [`Field::grad`].
const FD_STEP: f64 = 1e-5;

/// A real harmonic function with its complex gradient `2∂h = h_x − i h_y`.
pub trait Field: Sync {
    fn value(&self, z: C64) -> f64;

    fn grad(&self, z: C64) -> C64 {
        let hx = (self.value(z + FD_STEP) - self.value(z - FD_STEP)) / (2.0 * FD_STEP);
        let i = C64::new(0.0, FD_STEP);
        let hy = (self.value(z + i) - self.value(z - i)) / (2.0 * FD_STEP);
        C64::new(hx, -hy)
    }

    /// Directional derivative along the unit vector `e`.
    fn derivative(&self, z: C64, e: C64) -> f64 {
        (self.grad(z) * e).re
    }
}

/// Harmonic measure of the counter-clockwise arc `e^{it}`, `t ∈ [t0, t1]`,
/// of the unit disc.
#[derive(Clone, Copy, Debug)]
pub struct DiscArc {
    pub t0: f64,
    pub t1: f64,
}

impl DiscArc {
    fn span(&self) -> f64 {
        (self.t1 - self.t0).rem_euclid(TAU)
    }
}

impl Field for DiscArc {
    /// `(1/π)·arg((b − z)/(a − z)) − span/2π`, the inscribed-angle formula.
    fn value(&self, z: C64) -> f64 {
        let a = C64::from_polar(1.0, self.t0);
        let b = C64::from_polar(1.0, self.t1);
        let ang = ((b - z) / (a - z)).arg().rem_euclid(TAU);
        ang / PI - self.span() / TAU
    }

    fn grad(&self, z: C64) -> C64 {
        let a = C64::from_polar(1.0, self.t0);
        let b = C64::from_polar(1.0, self.t1);
        C64::new(0.0, 1.0 / PI) * (1.0 / (b - z) - 1.0 / (a - z))
    }
}

/// `∫ P(z, e^{it}) φ(t) dt/2π` over `[t0, t1]` by adaptive quadrature, the
/// independent check for the disc references.
pub fn disc_poisson_integral(z: C64, t0: f64, t1: f64, phi: impl Fn(f64) -> f64) -> Result<f64> {
    let r2 = z.norm_sqr();
    let kernel = |t: f64| C64::new((1.0 - r2) / (C64::from_polar(1.0, t) - z).norm_sqr() * phi(t) / TAU, 0.0);
    let mut total = 0.0;
    // split so that each panel stays smooth when z is close to the circle
    let n = 16;
    let h = (t1 - t0) / n as f64;
    for k in 0..n {
        let a = t0 + k as f64 * h;
        total += integrate(kernel, a, a + h, 1e-13, 40)?.value.re;
    }
    Ok(total)
}

/// Harmonic part `G_ℂ − G_𝔻` of the unit-disc Green's function with pole `v`:
/// `(1/2π) log|1 − v̄z|`.
#[derive(Clone, Copy, Debug)]
pub struct DiscGreenCorrection {
    pub pole: C64,
}

impl Field for DiscGreenCorrection {
    fn value(&self, z: C64) -> f64 {
        (1.0 - self.pole.conj() * z).norm().ln() / TAU
    }

    fn grad(&self, z: C64) -> C64 {
        // h = Re log(1 − v̄z)/2π
        -self.pole.conj() / (1.0 - self.pole.conj() * z) / TAU
    }
}

/// Unit-disc Poisson kernel at boundary point `a`, normalized to 1 at `v`.
#[derive(Clone, Copy, Debug)]
pub struct DiscPoisson {
    pub a: C64,
    pub v: C64,
}

fn poisson_kernel(z: C64, a: C64) -> f64 {
    (1.0 - z.norm_sqr()) / (z - a).norm_sqr()
}

impl Field for DiscPoisson {
    fn value(&self, z: C64) -> f64 {
        poisson_kernel(z, self.a) / poisson_kernel(self.v, self.a)
    }
}

/// Poisson kernel of the upper unit half-disc at `a = e^{iθ}`, normalized by
/// `∂_y P(0) = 1`: the disc kernel minus its reflection.
#[derive(Clone, Copy, Debug)]
pub struct HalfDiscPoisson {
    pub a: C64,
}

impl Field for HalfDiscPoisson {
    fn value(&self, z: C64) -> f64 {
        let sin = self.a.im / self.a.norm();
        (poisson_kernel(z, self.a) - poisson_kernel(z, self.a.conj())) / (4.0 * sin)
    }
}

/// Harmonic measure in `[0, 1]²` of the segment `[x0, x1]` of the bottom
/// side, rotated counter-clockwise onto side `side` (0 bottom, 1 right,
/// 2 top, 3 left). Sine series, valid at interior points.
#[derive(Clone, Copy, Debug)]
pub struct SquareSegment {
    pub side: u8,
    pub x0: f64,
    pub x1: f64,
}

impl SquareSegment {
    /// Coordinates in the frame where the segment lies on the bottom side.
    fn frame(&self, z: C64) -> C64 {
        match self.side % 4 {
            0 => z,
            1 => C64::new(z.im, 1.0 - z.re),
            2 => C64::new(1.0 - z.re, 1.0 - z.im),
            _ => C64::new(1.0 - z.im, z.re),
        }
    }
}

impl Field for SquareSegment {
    fn value(&self, z: C64) -> f64 {
        let w = self.frame(z);
        let (x, y) = (w.re, w.im);
        let mut sum = 0.0;
        for n in 1..20_000 {
            let k = n as f64 * PI;
            let decay = (-k * y).exp();
            if decay < 1e-18 {
                break;
            }
            let b = 2.0 * ((k * self.x0).cos() - (k * self.x1).cos()) / k;
            let ratio = decay * (1.0 - (-2.0 * k * (1.0 - y)).exp()) / (1.0 - (-2.0 * k).exp());
            sum += b * (k * x).sin() * ratio;
        }
        sum
    }
}

/// Harmonic measure of the arc `e^{it}`, `0 < t0 < t < t1 < 2π`, in the unit
/// disc slit along `[0, 1)`. The map `z ↦ ((1 + √z)/(1 − √z))²` sends the slit
/// disc onto the upper half-plane and the arc onto `[−cot²(t0/4), −cot²(t1/4)]`.
#[derive(Clone, Copy, Debug)]
pub struct SlitDiscArc {
    pub t0: f64,
    pub t1: f64,
}

pub fn slit_disc_map(z: C64) -> C64 {
    // branch of the square root with arg z ∈ (0, 2π)
    let w = C64::from_polar(z.norm().sqrt(), z.arg().rem_euclid(TAU) / 2.0);
    let m = (1.0 + w) / (1.0 - w);
    m * m
}

impl Field for SlitDiscArc {
    fn value(&self, z: C64) -> f64 {
        let zeta = slit_disc_map(z);
        let x0 = -1.0 / (self.t0 / 4.0).tan().powi(2);
        let x1 = -1.0 / (self.t1 / 4.0).tan().powi(2);
        ((zeta - x1).arg() - (zeta - x0).arg()) / PI
    }
}

/// Checks each closed form against an independent evaluation before use.
pub fn validate_references() -> Result<()> {
    let fail = |what: &str, a: f64, b: f64| Error::OracleFailure(format!("{what}: {a} vs {b}"));
    let pts = [C64::new(0.0, 0.0), C64::new(0.3, 0.0), C64::new(-0.2, 0.45), C64::new(0.1, -0.6)];
    for z in pts {
        let arc = DiscArc { t0: -PI / 3.0, t1: PI / 3.0 };
        let q = disc_poisson_integral(z, arc.t0, arc.t1, |_| 1.0)?;
        if (q - arc.value(z)).abs() > 1e-10 {
            return Err(fail("disc arc", q, arc.value(z)));
        }
        let fd = Field::grad(&DiscArcFd(arc), z);
        if (fd - arc.grad(z)).norm() > 1e-7 {
            return Err(fail("disc arc gradient", fd.re, arc.grad(z).re));
        }
        let pole = C64::new(0.3, 0.2);
        let corr = DiscGreenCorrection { pole };
        let q = disc_poisson_integral(z, 0.0, TAU, |t| (C64::from_polar(1.0, t) - pole).norm().ln() / TAU)?;
        if (q - corr.value(z)).abs() > 1e-10 {
            return Err(fail("disc Green correction", q, corr.value(z)));
        }
    }
    let hp = HalfDiscPoisson { a: C64::from_polar(1.0, 1.2) };
    let dy = hp.derivative(C64::new(0.0, 0.0), C64::new(0.0, 1.0));
    if (dy - 1.0).abs() > 1e-8 || hp.value(C64::new(0.4, 0.0)).abs() > 1e-12 {
        return Err(fail("half-disc normalization", dy, 1.0));
    }
    let z = C64::new(0.31, 0.62);
    let sides: f64 = (0..4).map(|s| SquareSegment { side: s, x0: 0.0, x1: 1.0 }.value(z)).sum();
    if (sides - 1.0).abs() > 1e-10 {
        return Err(fail("square sides", sides, 1.0));
    }
    let mid = SquareSegment { side: 0, x0: 0.0, x1: 1.0 }.value(C64::new(0.5, 0.5));
    if (mid - 0.25).abs() > 1e-12 {
        return Err(fail("square symmetry", mid, 0.25));
    }
    for z in [C64::new(-0.3, 0.2), C64::new(0.5, 0.1), C64::new(0.2, -0.5)] {
        let full = SlitDiscArc { t0: 1e-9, t1: TAU - 1e-9 }.value(z);
        let slit = 1.0 - full;
        // slit measure from the same map, computed as the positive half-line
        let zeta = slit_disc_map(z);
        let direct = 1.0 - zeta.arg() / PI;
        if (slit - direct).abs() > 1e-6 {
            return Err(fail("slit disc", slit, direct));
        }
    }
    Ok(())
}

/// Disc arc with the default finite-difference gradient.
struct DiscArcFd(DiscArc);

impl Field for DiscArcFd {
    fn value(&self, z: C64) -> f64 {
        self.0.value(z)
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn references_pass_their_checks() {
        validate_references().unwrap();
    }

    #[test]
    fn disc_arc_at_center() {
        for s in [0.1, 0.25, 0.6] {
            let arc = DiscArc { t0: 1.0, t1: 1.0 + TAU * s };
            assert!((arc.value(C64::new(0.0, 0.0)) - s).abs() < 1e-14);
        }
    }

    #[test]
    fn disc_arc_after_mobius_shift() {
        // u = 0.3, arc between e^{∓iπ/3}: the Möbius map sends the endpoints
        // to e^{iα} with α = arg((e^{it} − u)/(1 − u e^{it}))
        let u = C64::new(0.3, 0.0);
        let phi = |t: f64| {
            let w = C64::from_polar(1.0, t);
            ((w - u) / (1.0 - u * w)).arg()
        };
        let expected = (phi(PI / 3.0) - phi(-PI / 3.0)) / TAU;
        let arc = DiscArc { t0: -PI / 3.0, t1: PI / 3.0 };
        assert!((arc.value(u) - expected).abs() < 1e-14);
    }

    #[test]
    fn poisson_references() {
        let p = DiscPoisson { a: C64::new(1.0, 0.0), v: C64::new(0.0, 0.0) };
        assert_eq!(p.value(C64::new(0.0, 0.0)), 1.0);
        assert!(p.value(C64::new(0.0, 0.999_999)).abs() < 1e-5);
        let h = HalfDiscPoisson { a: C64::new(0.0, 1.0) };
        let z = C64::new(0.0, 1e-4);
        assert!((h.value(z) / 1e-4 - 1.0).abs() < 1e-3);
    }

    #[test]
    fn slit_disc_tip_exponent() {
        let arc = SlitDiscArc { t0: 0.75 * PI, t1: 1.25 * PI };
        let a = arc.value(C64::new(-1e-4, 0.0));
        let b = arc.value(C64::new(-4e-4, 0.0));
        assert!(((b / a).ln() / 4f64.ln() - 0.5).abs() < 0.01);
        let c = arc.value(C64::new(0.5, 1e-4));
        let d = arc.value(C64::new(0.5, 4e-4));
        assert!(((d / c).ln() / 4f64.ln() - 1.0).abs() < 0.01);
    }
}
