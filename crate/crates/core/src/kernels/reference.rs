use std::f64::consts::PI;

use crate::isograph::C64;
use crate::operators::projection;

/// `log|u − u0| / 2π`.
pub fn continuous_green_ref(u: C64, u0: C64) -> f64 {
    (u - u0).norm().ln() / (2.0 * PI)
}

/// `(2/π) Pr[1/(v − z0); conj τ]`.
pub fn continuous_cauchy_ref(v: C64, z0: C64, tau: C64) -> C64 {
    2.0 / PI * projection(1.0 / (v - z0), tau.conj())
}
