use std::f64::consts::PI;

use crate::domain::{DiscreteDomain, Region};
use crate::error::{Error, Result};
use crate::function::LatticeFunction;
use crate::isograph::C64;

fn disc_of(d: &DiscreteDomain) -> Result<(C64, f64)> {
    match d.region() {
        Region::Disc { cx, cy, r } => Ok((C64::new(*cx, *cy), *r)),
        _ => Err(Error::Precondition("a disc domain is required".into())),
    }
}

fn positive_values(d: &DiscreteDomain, h: &LatticeFunction) -> Result<Vec<f64>> {
    let mut out = Vec::with_capacity(d.interior().len());
    for &u in d.interior() {
        let v = h.get(u)?.re;
        if !(v > 0.0) {
            return Err(Error::Precondition(format!("value {v} at vertex {u} is not positive")));
        }
        out.push(v);
    }
    Ok(out)
}

/// Harnack constants of a positive harmonic function on a disc domain
/// `B(u0, R)`: the gradient ratio `C1` at the center and the log-oscillation
/// ratio `C2` on `B(u0, r)`.
pub fn harnack_check(d: &DiscreteDomain, h: &LatticeFunction, r: f64) -> Result<(f64, f64)> {
    let (center, big_r) = disc_of(d)?;
    if !(r > 0.0 && r < big_r) {
        return Err(Error::Precondition(format!("inner radius {r} outside (0, {big_r})")));
    }
    let vals = positive_values(d, h)?;
    let g = d.graph();
    let u0 = d.nearest_interior(center);
    let h0 = vals[d.local_index(u0).unwrap()];
    let mut c1: f64 = 0.0;
    for (v, _, _) in g.neighbors(u0) {
        let hv = h.get(v)?.re;
        c1 = c1.max((hv - h0).abs() * big_r / (g.delta() * h0));
    }
    let p0 = g.position(u0);
    let (lo, hi) = d
        .interior()
        .iter()
        .zip(&vals)
        .filter(|(&u, _)| (g.position(u) - p0).norm() < r)
        .fold((f64::INFINITY, f64::NEG_INFINITY), |(lo, hi), (_, &v)| (lo.min(v.ln()), hi.max(v.ln())));
    let c2 = (hi - lo) * (big_r - r) / r;
    Ok((c1, c2))
}

/// `|H(u0) − (1/πR²) Σ_int H μ_Γ| · R / (δ H(u0))` on a disc domain.
pub fn mean_value_check(d: &DiscreteDomain, h: &LatticeFunction) -> Result<f64> {
    let (center, big_r) = disc_of(d)?;
    let vals = positive_values(d, h)?;
    let g = d.graph();
    let mu = &g.weights().mu_gamma;
    let u0 = d.nearest_interior(center);
    let h0 = vals[d.local_index(u0).unwrap()];
    let avg: f64 = d.interior().iter().zip(&vals).map(|(&u, v)| v * mu[u]).sum::<f64>() / (PI * big_r * big_r);
    Ok((h0 - avg).abs() * big_r / (g.delta() * h0))
}
