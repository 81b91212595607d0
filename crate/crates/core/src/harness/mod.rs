//! Convergence experiments: discrete harmonic measures, Green's functions and
//! Poisson kernels against their continuous counterparts as `δ → 0`, plus
//! Beurling-type decay fits and report emission.

mod experiments;
mod reference;

pub use experiments::{
    exp_beurling, exp_green_convergence, exp_hm_convergence, exp_poisson_convergence, field_errors, lattice_graph,
    BeurlingFit, BeurlingRecord, BeurlingReport, BEURLING_ARC, DISC_ARCS, DISC_TEST_POINTS, GIM_BOX_FACTOR,
    GREEN_POLES, HALF_DISC_TEST_POINTS, LAYOUT_S, LAYOUT_T, POISSON_BOUNDARY_ANGLES, POISSON_INTERIOR_ANGLES,
    SQUARE_SEGMENTS, SQUARE_TEST_POINTS,
};
pub use reference::{
    disc_poisson_integral, slit_disc_map, validate_references, DiscArc, DiscGreenCorrection, DiscPoisson, Field,
    HalfDiscPoisson, SlitDiscArc, SquareSegment,
};

use std::collections::BTreeMap;
use std::fmt;
use std::fs;
use std::path::Path;
use std::str::FromStr;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

/// Lattice family of an experiment: `square` or `random:SEED[:ETA]`.
#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub enum LatticeSpec {
    Square,
    Random { seed: u64, eta: f64 },
}

/// Rhombus angle bound of `random:SEED` without an explicit `ETA`.
pub const DEFAULT_ETA: f64 = 0.4;

impl FromStr for LatticeSpec {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        let bad = || Error::Precondition(format!("bad lattice spec `{s}` (expected square or random:SEED[:ETA])"));
        let mut parts = s.trim().split(':');
        match parts.next() {
            Some("square") if parts.next().is_none() => Ok(LatticeSpec::Square),
            Some("random") => {
                let seed = parts.next().ok_or_else(bad)?.parse().map_err(|_| bad())?;
                let eta = match parts.next() {
                    Some(e) => e.parse().map_err(|_| bad())?,
                    None => DEFAULT_ETA,
                };
                if parts.next().is_some() {
                    return Err(bad());
                }
                Ok(LatticeSpec::Random { seed, eta })
            }
            _ => Err(bad()),
        }
    }
}

impl fmt::Display for LatticeSpec {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            LatticeSpec::Square => write!(f, "square"),
            LatticeSpec::Random { seed, eta } if *eta == DEFAULT_ETA => write!(f, "random:{seed}"),
            LatticeSpec::Random { seed, eta } => write!(f, "random:{seed}:{eta}"),
        }
    }
}

/// Parse a comma-separated list of lattice specs.
pub fn parse_lattices(s: &str) -> Result<Vec<LatticeSpec>> {
    s.split(',').filter(|p| !p.trim().is_empty()).map(str::parse).collect()
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct ConvergenceRecord {
    pub experiment: String,
    pub lattice: String,
    pub domain: String,
    pub delta: f64,
    pub metric: String,
    pub error: f64,
    pub reference: String,
    pub fitted_rate: Option<f64>,
}

impl ConvergenceRecord {
    fn family(&self) -> (String, String, String, String) {
        (self.experiment.clone(), self.lattice.clone(), self.domain.clone(), self.metric.clone())
    }
}

/// Least-squares slope of `log y` against `log x`.
pub fn log_log_slope(xs: &[f64], ys: &[f64]) -> Result<(f64, f64)> {
    if xs.len() != ys.len() || xs.len() < 2 {
        return Err(Error::DegenerateFit(format!("{} points", xs.len())));
    }
    if xs.iter().chain(ys).any(|v| !(*v > 0.0) || !v.is_finite()) {
        return Err(Error::DegenerateFit("non-positive value on a log scale".into()));
    }
    let n = xs.len() as f64;
    let lx: Vec<f64> = xs.iter().map(|x| x.ln()).collect();
    let ly: Vec<f64> = ys.iter().map(|y| y.ln()).collect();
    let mx = lx.iter().sum::<f64>() / n;
    let my = ly.iter().sum::<f64>() / n;
    let sxx: f64 = lx.iter().map(|a| (a - mx) * (a - mx)).sum();
    if sxx == 0.0 {
        return Err(Error::DegenerateFit("all abscissae coincide".into()));
    }
    let sxy: f64 = lx.iter().zip(&ly).map(|(a, b)| (a - mx) * (b - my)).sum();
    let slope = sxy / sxx;
    Ok((slope, my - slope * mx))
}

/// Slope of `log error` against `log δ` for every family (experiment,
/// lattice, domain, metric). Each family needs three distinct meshes.
pub fn fit_rate(records: &[ConvergenceRecord]) -> Result<BTreeMap<(String, String, String, String), f64>> {
    let mut groups: BTreeMap<_, Vec<&ConvergenceRecord>> = BTreeMap::new();
    for r in records {
        groups.entry(r.family()).or_default().push(r);
    }
    let mut out = BTreeMap::new();
    for (key, rs) in groups {
        if rs.len() < 3 {
            return Err(Error::DegenerateFit(format!("family {key:?} has {} points", rs.len())));
        }
        let xs: Vec<f64> = rs.iter().map(|r| r.delta).collect();
        // exact zeros are clamped so that a family of perfect results still fits
        let ys: Vec<f64> = rs.iter().map(|r| r.error.max(1e-300)).collect();
        out.insert(key, log_log_slope(&xs, &ys)?.0);
    }
    Ok(out)
}

/// Allowed growth of the error from one mesh to the next finer one.
pub const MONOTONE_SLACK: f64 = 1.2;

/// Acceptance threshold on the finest-mesh error of a family, if any.
pub fn final_threshold(experiment: &str, metric: &str) -> Option<f64> {
    match (experiment, metric) {
        ("hm" | "green", "value") => Some(0.02),
        ("poisson-interior" | "poisson-boundary", "value") => Some(0.05),
        _ => None,
    }
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct FamilySummary {
    pub experiment: String,
    pub lattice: String,
    pub domain: String,
    pub metric: String,
    pub deltas: Vec<f64>,
    pub errors: Vec<f64>,
    pub slope: f64,
    pub monotone: bool,
    pub final_error: f64,
    pub threshold: Option<f64>,
    pub pass: bool,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct Summary {
    pub families: Vec<FamilySummary>,
    pub beurling: Vec<BeurlingFit>,
    pub pass: bool,
}

/// Per-family verdicts: errors may grow by at most [`MONOTONE_SLACK`] per
/// refinement and the finest error must meet [`final_threshold`].
pub fn summarize(records: &[ConvergenceRecord], beurling: &[BeurlingFit]) -> Result<Summary> {
    let rates = fit_rate(records)?;
    let mut families = Vec::new();
    for ((experiment, lattice, domain, metric), slope) in rates {
        let mut pts: Vec<(f64, f64)> = records
            .iter()
            .filter(|r| r.experiment == experiment && r.lattice == lattice && r.domain == domain && r.metric == metric)
            .map(|r| (r.delta, r.error))
            .collect();
        pts.sort_by(|a, b| b.0.total_cmp(&a.0));
        let monotone = pts.windows(2).all(|w| w[1].1 <= MONOTONE_SLACK * w[0].1);
        let final_error = pts.last().unwrap().1;
        let threshold = final_threshold(&experiment, &metric);
        let pass = monotone && threshold.is_none_or(|t| final_error < t);
        let (deltas, errors) = pts.into_iter().unzip();
        families.push(FamilySummary {
            experiment,
            lattice,
            domain,
            metric,
            deltas,
            errors,
            slope,
            monotone,
            final_error,
            threshold,
            pass,
        });
    }
    let pass = families.iter().all(|f| f.pass) && beurling.iter().all(|b| b.beta > 0.0);
    Ok(Summary { families, beurling: beurling.to_vec(), pass })
}

/// Write `records.csv`, `summary.json` and, when Beurling fits are given,
/// `beurling.csv` into `dir`.
pub fn emit_report(records: &[ConvergenceRecord], beurling: Option<&BeurlingReport>, dir: &Path) -> Result<Summary> {
    fs::create_dir_all(dir)?;
    let rates = fit_rate(records)?;
    let mut rows = records.to_vec();
    rows.sort_by(|a, b| a.family().cmp(&b.family()).then(b.delta.total_cmp(&a.delta)));
    for r in &mut rows {
        r.fitted_rate = rates.get(&r.family()).copied();
    }
    write_csv(&dir.join("records.csv"), &rows)?;
    let fits = beurling.map(|b| b.fits.clone()).unwrap_or_default();
    if let Some(b) = beurling {
        write_csv(&dir.join("beurling.csv"), &b.records)?;
    }
    let summary = summarize(&rows, &fits)?;
    fs::write(dir.join("summary.json"), serde_json::to_string_pretty(&summary)? + "\n")?;
    Ok(summary)
}

fn write_csv<T: Serialize>(path: &Path, rows: &[T]) -> Result<()> {
    let mut w = csv::Writer::from_path(path).map_err(csv_error)?;
    for r in rows {
        w.serialize(r).map_err(csv_error)?;
    }
    w.flush()?;
    Ok(())
}

fn csv_error(e: csv::Error) -> Error {
    Error::Io(std::io::Error::other(e))
}
