//! Fixtures shared by the benchmarks.

use std::sync::Arc;

use isoradial::isograph::random_isoradial;
use isoradial::{discretize, Color, DiscreteDomain, QuadGraph, Region, C64};

/// A random lattice at spacing `delta` covering the square `[-1.2, 1.2]²`.
pub fn lattice(delta: f64) -> Arc<QuadGraph> {
    let extent = (1.2 / delta).ceil() as usize + 4;
    Arc::new(random_isoradial(1, extent, isoradial::harness::DEFAULT_ETA, delta).expect("lattice"))
}

/// The unit disc on `lattice(delta)`.
pub fn unit_disc(delta: f64) -> DiscreteDomain {
    discretize(&lattice(delta), &Region::Disc { cx: 0.0, cy: 0.0, r: 1.0 }).expect("domain")
}

/// A Γ-vertex and a rhombus near the origin, and a Γ-vertex and a vertex at
/// distance about `r` from it.
pub fn kernel_points(g: &QuadGraph, r: f64) -> (usize, usize, usize, usize) {
    let origin = C64::new(0.0, 0.0);
    let far = C64::new(0.6 * r, 0.8 * r);
    (
        g.nearest(origin, Color::Gamma).expect("vertex"),
        g.nearest_rhombus(origin).expect("rhombus"),
        g.nearest(far, Color::Gamma).expect("vertex"),
        g.nearest(far, Color::GammaStar).expect("vertex"),
    )
}
