#![allow(dead_code)]

use std::sync::Arc;

use isoradial::domain::DiscreteDomain;
use isoradial::harness::{lattice_graph, LatticeSpec};
use isoradial::isograph::QuadGraph;
use isoradial::solvers::DomainFunction;

/// The three lattice families of the test suite.
pub fn families() -> Vec<LatticeSpec> {
    isoradial::harness::parse_lattices("square,random:1,random:2").unwrap()
}

pub fn graph(spec: LatticeSpec, delta: f64, radius: f64) -> Arc<QuadGraph> {
    lattice_graph(spec, delta, radius).unwrap()
}

/// `μ Δ H (u) = Σ tan θ (H(v) − H(u))` at interior `u`, with boundary values
/// taken per pair.
pub fn weighted_laplacian(d: &DiscreteDomain, h: &DomainFunction, u: usize) -> f64 {
    let k = d.local_index(u).unwrap();
    let hu = h.interior[k];
    let inner: f64 = d.interior_neighbors(u).map(|(v, t)| t * (h.at(d, v).unwrap() - hu)).sum();
    let outer: f64 = d.pairs_at(k).iter().map(|&p| d.pairs()[p].weight * (h.boundary[p] - hu)).sum();
    inner + outer
}

/// Least-squares slope of log y against log x.
pub fn slope(xs: &[f64], ys: &[f64]) -> f64 {
    isoradial::harness::log_log_slope(xs, ys).unwrap().0
}
