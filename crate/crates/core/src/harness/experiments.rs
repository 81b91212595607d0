use std::f64::consts::{FRAC_PI_2, PI, SQRT_2};
use std::sync::Arc;

use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use super::reference::{
    validate_references, DiscArc, DiscGreenCorrection, DiscPoisson, Field, HalfDiscPoisson, SlitDiscArc,
    SquareSegment,
};
use super::{log_log_slope, ConvergenceRecord, LatticeSpec};
use crate::domain::{discretize, pairs_in_angle, DiscreteDomain, Region};
use crate::error::{Error, Result};
use crate::isograph::{random_isoradial, square_lattice, QuadGraph, C64};
use crate::kernels::{ContourSpec, KernelCache};
use crate::solvers::{gim_approx, poisson_boundary_with, DirichletSystem, DomainFunction, SolverConfig};

/// Interior test points of the unit disc, at least 0.4 from the circle.
pub const DISC_TEST_POINTS: [(f64, f64); 8] = [
    (0.0, 0.0),
    (0.3, 0.0),
    (-0.25, 0.35),
    (0.1, -0.45),
    (0.0, 0.55),
    (-0.5, 0.0),
    (0.4, 0.4),
    (-0.3, -0.4),
];

/// Test points of the upper unit half-disc, at least 0.3 from its boundary.
pub const HALF_DISC_TEST_POINTS: [(f64, f64); 6] =
    [(0.0, 0.3), (0.0, 0.5), (0.3, 0.35), (-0.35, 0.3), (0.15, 0.6), (-0.2, 0.55)];

/// Test points of `[0, 1]²`, at least 0.25 from its boundary.
pub const SQUARE_TEST_POINTS: [(f64, f64); 6] =
    [(0.5, 0.5), (0.3, 0.3), (0.7, 0.35), (0.4, 0.7), (0.65, 0.6), (0.25, 0.55)];

/// Graph of the given family covering the disc of radius `radius`.
pub fn lattice_graph(spec: LatticeSpec, delta: f64, radius: f64) -> Result<Arc<QuadGraph>> {
    let g = match spec {
        LatticeSpec::Square => square_lattice(delta, (radius / delta).ceil() as usize + 3)?,
        // random steps keep at least cos((π/2 − η)/2) of their length along
        // each axis, which is above 0.7
        LatticeSpec::Random { seed, eta } => random_isoradial(seed, (radius / (0.7 * delta)).ceil() as usize + 3, eta, delta)?,
    };
    Ok(Arc::new(g))
}

fn point(p: (f64, f64)) -> C64 {
    C64::new(p.0, p.1)
}

/// Values of `h` at the neighbors of interior vertex `u`: interior
/// neighbors and the exterior ends of its boundary pairs.
fn neighbor_values(d: &DiscreteDomain, h: &DomainFunction, u: usize) -> Vec<(usize, f64)> {
    let k = d.local_index(u).expect("interior vertex");
    let mut out: Vec<(usize, f64)> = d.interior_neighbors(u).map(|(v, _)| (v, h.at(d, v).unwrap())).collect();
    out.extend(d.pairs_at(k).iter().map(|&p| (d.pairs()[p].a, h.boundary[p])));
    out
}

/// Largest value error and largest gradient gap of `h` against `field` over
/// the interior vertices nearest to `points`. `to_ref` maps lattice
/// positions into the frame of the reference.
pub fn field_errors(
    d: &DiscreteDomain,
    h: &DomainFunction,
    field: &dyn Field,
    points: &[(f64, f64)],
    to_ref: impl Fn(C64) -> C64,
) -> (f64, f64) {
    let g = d.graph();
    let mut value: f64 = 0.0;
    let mut grad: f64 = 0.0;
    for &p in points {
        let u = d.nearest_interior(point(p));
        let pu = g.position(u);
        let hu = h.at(d, u).unwrap();
        value = value.max((hu - field.value(to_ref(pu))).abs());
        let grad_ref = field.grad(to_ref(pu));
        for (v, hv) in neighbor_values(d, h, u) {
            let step = g.position(v) - pu;
            let quotient = (hv - hu) / step.norm();
            grad = grad.max((quotient - (grad_ref * step / step.norm()).re).abs());
        }
    }
    (value, grad)
}

fn record(experiment: &str, lattice: LatticeSpec, domain: &str, delta: f64, metric: &str, error: f64, reference: &str) -> ConvergenceRecord {
    ConvergenceRecord {
        experiment: experiment.into(),
        lattice: lattice.to_string(),
        domain: domain.into(),
        delta,
        metric: metric.into(),
        error,
        reference: reference.into(),
        fitted_rate: None,
    }
}

fn cells(lattices: &[LatticeSpec], deltas: &[f64]) -> Result<Vec<(LatticeSpec, f64)>> {
    if lattices.is_empty() || deltas.is_empty() {
        return Err(Error::EmptyInput("lattices and deltas must be non-empty"));
    }
    if deltas.iter().any(|d| !(*d > 0.0 && *d < 0.5)) {
        return Err(Error::Precondition("meshes must lie in (0, 0.5)".into()));
    }
    validate_references()?;
    Ok(lattices.iter().flat_map(|&l| deltas.iter().map(move |&d| (l, d))).collect())
}

/// Runs `job` on every cell in parallel and merges deterministically.
fn run_cells(
    lattices: &[LatticeSpec],
    deltas: &[f64],
    job: impl Fn(LatticeSpec, f64) -> Result<Vec<ConvergenceRecord>> + Sync,
) -> Result<Vec<ConvergenceRecord>> {
    let cells = cells(lattices, deltas)?;
    let shards: Vec<Vec<ConvergenceRecord>> = cells.par_iter().map(|&(l, d)| job(l, d)).collect::<Result<_>>()?;
    Ok(shards.into_iter().flatten().collect())
}

/// Arcs of the unit disc used by the harmonic-measure experiment.
pub const DISC_ARCS: [(f64, f64); 2] = [(-PI / 3.0, PI / 3.0), (FRAC_PI_2, PI)];

/// Segments of `[0, 1]²` used by the harmonic-measure experiment:
/// `(side, x0, x1)` in the frame of [`SquareSegment`].
pub const SQUARE_SEGMENTS: [(u8, f64, f64); 2] = [(0, 0.25, 0.75), (3, 0.1, 0.5)];

/// Harmonic measure of arcs on the unit disc and of side segments on the
/// unit square.
pub fn exp_hm_convergence(lattices: &[LatticeSpec], deltas: &[f64]) -> Result<Vec<ConvergenceRecord>> {
    run_cells(lattices, deltas, |lat, delta| {
        let mut out = Vec::new();
        let g = lattice_graph(lat, delta, 1.2)?;
        let d = discretize(&g, &Region::Disc { cx: 0.0, cy: 0.0, r: 1.0 })?;
        let sys = DirichletSystem::new(&d, SolverConfig::default())?;
        let (mut ev, mut eg) = (0.0f64, 0.0f64);
        for (t0, t1) in DISC_ARCS {
            let set = pairs_in_angle(&d, C64::new(0.0, 0.0), t0, t1);
            let h = sys.solve(&indicator(&d, &set))?;
            let (v, gr) = field_errors(&d, &h, &DiscArc { t0, t1 }, &DISC_TEST_POINTS, |p| p);
            ev = ev.max(v);
            eg = eg.max(gr);
        }
        let reference = "inscribed-angle formula for disc arcs";
        out.push(record("hm", lat, "unit-disc", delta, "value", ev, reference));
        out.push(record("hm", lat, "unit-disc", delta, "gradient", eg, reference));

        // unit square (−½, ½) × (0, 1), shifted by ½ into [0, 1]²
        let d = discretize(&g, &Region::Rect { s: 0.5, t: 1.0 })?;
        let sys = DirichletSystem::new(&d, SolverConfig::default())?;
        let shift = C64::new(0.5, 0.0);
        let (mut ev, mut eg) = (0.0f64, 0.0f64);
        let pts: Vec<(f64, f64)> = SQUARE_TEST_POINTS.iter().map(|p| (p.0 - 0.5, p.1)).collect();
        for (side, x0, x1) in SQUARE_SEGMENTS {
            let seg = SquareSegment { side, x0, x1 };
            let set: Vec<usize> = (0..d.pairs().len())
                .filter(|&i| {
                    let z = d.pairs()[i].rhombus;
                    on_segment(seg, d.pair_crossing(i) + shift, g.center(z) + shift)
                })
                .collect();
            let h = sys.solve(&indicator(&d, &set))?;
            let (v, gr) = field_errors(&d, &h, &seg, &pts, |p| p + shift);
            ev = ev.max(v);
            eg = eg.max(gr);
        }
        let reference = "sine series on the unit square";
        out.push(record("hm", lat, "unit-square", delta, "value", ev, reference));
        out.push(record("hm", lat, "unit-square", delta, "gradient", eg, reference));
        Ok(out)
    })
}

/// Whether a pair crossing the boundary at `c`, with rhombus center `m`
/// (both in `[0, 1]²` coordinates), belongs to the segment. A crossing on
/// an endpoint is decided by the projection of `m`.
fn on_segment(seg: SquareSegment, c: C64, m: C64) -> bool {
    const TOL: f64 = 1e-9;
    let along = |z: C64| match seg.side % 4 {
        0 => z.re,
        1 => z.im,
        2 => 1.0 - z.re,
        _ => 1.0 - z.im,
    };
    let on_side = match seg.side % 4 {
        0 => c.im <= TOL,
        1 => c.re >= 1.0 - TOL,
        2 => c.im >= 1.0 - TOL,
        _ => c.re <= TOL,
    };
    let mut t = along(c);
    if (t - seg.x0).abs() < TOL || (t - seg.x1).abs() < TOL {
        t = along(m);
    }
    on_side && t > seg.x0 && t < seg.x1
}

fn indicator(d: &DiscreteDomain, set: &[usize]) -> Vec<f64> {
    let mut f = vec![0.0; d.pairs().len()];
    for &p in set {
        f[p] = 1.0;
    }
    f
}

/// Poles of the Green's function experiment.
pub const GREEN_POLES: [(f64, f64); 2] = [(0.0, 0.0), (0.3, 0.2)];

/// Harmonic part `G*` of the unit-disc Green's function: harmonic extension
/// of the free Green's function from the boundary.
pub fn exp_green_convergence(lattices: &[LatticeSpec], deltas: &[f64]) -> Result<Vec<ConvergenceRecord>> {
    run_cells(lattices, deltas, |lat, delta| {
        let g = lattice_graph(lat, delta, 1.2)?;
        let d = discretize(&g, &Region::Disc { cx: 0.0, cy: 0.0, r: 1.0 })?;
        let sys = DirichletSystem::new(&d, SolverConfig::default())?;
        let cache = KernelCache::new(g.clone(), ContourSpec::default());
        let exterior: Vec<usize> = d.pairs().iter().map(|p| p.a).collect();
        let (mut ev, mut eg) = (0.0f64, 0.0f64);
        for pole in GREEN_POLES {
            let v = d.nearest_interior(point(pole));
            let data = cache.green_many(&exterior, v)?;
            let h = sys.solve(&data)?;
            let field = DiscGreenCorrection { pole: g.position(v) };
            let (e, gr) = field_errors(&d, &h, &field, &DISC_TEST_POINTS, |p| p);
            ev = ev.max(e);
            eg = eg.max(gr);
        }
        let reference = "log|1 - conj(v) u|/2π";
        Ok(vec![
            record("green", lat, "unit-disc", delta, "value", ev, reference),
            record("green", lat, "unit-disc", delta, "gradient", eg, reference),
        ])
    })
}

/// Boundary points of the interior-normalized Poisson experiment (angles).
pub const POISSON_INTERIOR_ANGLES: [f64; 2] = [0.0, 2.0 * PI / 3.0];
/// Boundary points of the boundary-normalized Poisson experiment (angles on
/// the upper half-circle).
pub const POISSON_BOUNDARY_ANGLES: [f64; 2] = [FRAC_PI_2, 2.0 * PI / 3.0];
/// Half-width and height of the rectangle where the half-disc boundary is
/// straight, and the enlargement of the box for the half-plane function.
pub const LAYOUT_S: f64 = 0.5;
pub const LAYOUT_T: f64 = 0.5;
pub const GIM_BOX_FACTOR: f64 = 3.0;

/// Poisson kernels normalized at the disc center, and at the boundary point
/// 0 of the upper half-disc.
pub fn exp_poisson_convergence(lattices: &[LatticeSpec], deltas: &[f64]) -> Result<Vec<ConvergenceRecord>> {
    run_cells(lattices, deltas, |lat, delta| {
        let mut out = Vec::new();
        let box_radius = GIM_BOX_FACTOR * LAYOUT_S.hypot(LAYOUT_T);
        let g = lattice_graph(lat, delta, box_radius.max(1.2))?;

        let d = discretize(&g, &Region::Disc { cx: 0.0, cy: 0.0, r: 1.0 })?;
        let sys = DirichletSystem::new(&d, SolverConfig::default())?;
        let v = d.nearest_interior(C64::new(0.0, 0.0));
        let (mut ev, mut eg) = (0.0f64, 0.0f64);
        for t in POISSON_INTERIOR_ANGLES {
            let a = d.nearest_pair(C64::from_polar(1.0, t));
            let h = crate::solvers::poisson_interior_with(&sys, v, a)?;
            let a_ref = C64::from_polar(1.0, d.pair_crossing(a).arg());
            let field = DiscPoisson { a: a_ref, v: g.position(v) };
            let (e, gr) = field_errors(&d, &h, &field, &DISC_TEST_POINTS, |p| p);
            ev = ev.max(e);
            eg = eg.max(gr);
        }
        let reference = "(1-|u|^2)/|u-a|^2 normalized at v";
        out.push(record("poisson-interior", lat, "unit-disc", delta, "value", ev, reference));
        out.push(record("poisson-interior", lat, "unit-disc", delta, "gradient", eg, reference));

        let gim = gim_approx(&g, GIM_BOX_FACTOR * LAYOUT_S, GIM_BOX_FACTOR * LAYOUT_T)?;
        let d = discretize(&g, &Region::HalfDisc { r: 1.0 })?;
        let sys = DirichletSystem::new(&d, SolverConfig::default())?;
        let o = d.nearest_pair(C64::new(0.0, 0.0));
        let (mut ev, mut eg) = (0.0f64, 0.0f64);
        for t in POISSON_BOUNDARY_ANGLES {
            let a = d.nearest_pair(C64::from_polar(1.0, t));
            let h = poisson_boundary_with(&sys, a, o, &gim, LAYOUT_S, LAYOUT_T)?;
            let a_ref = C64::from_polar(1.0, d.pair_crossing(a).arg());
            let field = HalfDiscPoisson { a: a_ref };
            let (e, gr) = field_errors(&d, &h, &field, &HALF_DISC_TEST_POINTS, |p| p);
            ev = ev.max(e);
            eg = eg.max(gr);
        }
        let reference = "half-disc kernel minus reflection, d/dy P(0) = 1";
        out.push(record("poisson-boundary", lat, "unit-half-disc", delta, "value", ev, reference));
        out.push(record("poisson-boundary", lat, "unit-half-disc", delta, "gradient", eg, reference));
        Ok(out)
    })
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct BeurlingRecord {
    pub lattice: String,
    pub delta: f64,
    /// `tip` (approaching the slit end) or `edge` (approaching a slit side).
    pub geometry: String,
    pub dist_boundary: f64,
    pub dist_set: f64,
    pub omega: f64,
    pub continuous: f64,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct BeurlingFit {
    pub lattice: String,
    pub delta: f64,
    pub geometry: String,
    pub beta: f64,
    /// Smallest `C` with `ω ≤ C (d/r)^β` at every sample.
    pub c: f64,
    pub continuous_beta: f64,
    pub points: usize,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct BeurlingReport {
    pub records: Vec<BeurlingRecord>,
    pub fits: Vec<BeurlingFit>,
    /// Cells whose sweep had too few distinct distances, with the reason.
    pub skipped: Vec<String>,
}

/// Arc of the slit unit disc whose harmonic measure is tracked.
pub const BEURLING_ARC: (f64, f64) = (0.75 * PI, 1.25 * PI);

/// Decay of the harmonic measure of a far arc of the slit disc as the start
/// point approaches the slit tip or a slit side, fitted to `C (d/r)^β`.
/// Cells too coarse for three distinct distances are listed as skipped;
/// the sweep fails only when no cell can be fitted.
pub fn exp_beurling(lattices: &[LatticeSpec], deltas: &[f64]) -> Result<BeurlingReport> {
    let cells = cells(lattices, deltas)?;
    let parts: Vec<Result<(Vec<BeurlingRecord>, Vec<BeurlingFit>)>> =
        cells.par_iter().map(|&(l, d)| beurling_cell(l, d)).collect();
    let mut report = BeurlingReport { records: Vec::new(), fits: Vec::new(), skipped: Vec::new() };
    for part in parts {
        match part {
            Ok((records, fits)) => {
                report.records.extend(records);
                report.fits.extend(fits);
            }
            Err(Error::DegenerateFit(why)) => report.skipped.push(why),
            Err(e) => return Err(e),
        }
    }
    if report.fits.is_empty() {
        return Err(Error::DegenerateFit(report.skipped.join("; ")));
    }
    Ok(report)
}

fn beurling_cell(lat: LatticeSpec, delta: f64) -> Result<(Vec<BeurlingRecord>, Vec<BeurlingFit>)> {
    let g = lattice_graph(lat, delta, 1.2)?;
    let d = discretize(&g, &Region::SlitDisc { cx: 0.0, cy: 0.0, r: 1.0, angle: 0.0 })?;
    let sys = DirichletSystem::new(&d, SolverConfig::default())?;
    let (t0, t1) = BEURLING_ARC;
    let set = pairs_in_angle(&d, C64::new(0.0, 0.0), t0, t1);
    let h = sys.solve(&indicator(&d, &set))?;
    let arc = SlitDiscArc { t0, t1 };
    let arc_dist = |p: C64| {
        (0..=1000)
            .map(|k| (C64::from_polar(1.0, t0 + (t1 - t0) * k as f64 / 1000.0) - p).norm())
            .fold(f64::INFINITY, f64::min)
    };
    let mut records = Vec::new();
    let mut fits = Vec::new();
    for geometry in ["tip", "edge"] {
        let mut rs: Vec<BeurlingRecord> = Vec::new();
        let mut dist = 0.5;
        while dist >= delta {
            let target = if geometry == "tip" { C64::new(-dist, 0.0) } else { C64::new(0.5, dist) };
            dist /= SQRT_2.sqrt();
            let u = d.nearest_interior(target);
            let p = g.position(u);
            let db = if geometry == "tip" { p.norm() } else { p.im.abs() };
            if rs.iter().any(|r| r.dist_boundary == db) {
                continue;
            }
            rs.push(BeurlingRecord {
                lattice: lat.to_string(),
                delta,
                geometry: geometry.into(),
                dist_boundary: db,
                dist_set: arc_dist(p),
                omega: h.at(&d, u).unwrap(),
                continuous: arc.value(p),
            });
        }
        if rs.len() < 3 {
            return Err(Error::DegenerateFit(format!("{} distinct {geometry} distances on {lat} at δ = {delta}", rs.len())));
        }
        let ratio: Vec<f64> = rs.iter().map(|r| r.dist_boundary / r.dist_set).collect();
        let omega: Vec<f64> = rs.iter().map(|r| r.omega).collect();
        let cont: Vec<f64> = rs.iter().map(|r| r.continuous).collect();
        let (beta, _) = log_log_slope(&ratio, &omega)?;
        let (continuous_beta, _) = log_log_slope(&ratio, &cont)?;
        let c = ratio.iter().zip(&omega).map(|(x, w)| w / x.powf(beta)).fold(0.0, f64::max);
        fits.push(BeurlingFit {
            lattice: lat.to_string(),
            delta,
            geometry: geometry.into(),
            beta,
            c,
            continuous_beta,
            points: rs.len(),
        });
        records.extend(rs);
    }
    Ok((records, fits))
}
