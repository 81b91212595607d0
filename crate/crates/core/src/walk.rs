//! Random walk on Γ with step probabilities proportional to `tan θ`, and
//! Monte Carlo estimates of harmonic measure.

use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use rand_distr::weighted::WeightedAliasIndex;
use rand_distr::Distribution;
use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::domain::DiscreteDomain;
use crate::error::{Error, Result};
use crate::isograph::{step_time, Color, QuadGraph, C64};

#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub struct WalkConfig {
    pub seed: u64,
    /// Step budget per trajectory.
    pub max_steps: usize,
    pub trials: usize,
}

impl WalkConfig {
    /// Budget `100 (diam/δ)²` for the domain.
    pub fn for_domain(d: &DiscreteDomain, seed: u64, trials: usize) -> Self {
        let g = d.graph();
        let pts = d.interior().iter().map(|&u| g.position(u)).chain(d.pairs().iter().map(|p| g.position(p.a)));
        let (mut lo, mut hi) = (C64::new(f64::INFINITY, f64::INFINITY), C64::new(f64::NEG_INFINITY, f64::NEG_INFINITY));
        for p in pts {
            lo = C64::new(lo.re.min(p.re), lo.im.min(p.im));
            hi = C64::new(hi.re.max(p.re), hi.im.max(p.im));
        }
        let diam = (hi - lo).norm() / g.delta();
        WalkConfig { seed, max_steps: (100.0 * diam * diam).ceil() as usize, trials }
    }
}

/// Neighbors of `u` and the probabilities `tan θ_k / Σ tan θ_s` of stepping
/// to them.
pub fn step_distribution(g: &QuadGraph, u: usize) -> Result<Vec<(usize, f64)>> {
    if g.color(u) != Color::Gamma || !g.is_closed(u) {
        return Err(Error::Precondition(format!("vertex {u} is not a Γ-vertex with a closed star")));
    }
    let nb: Vec<(usize, f64)> = g.neighbors(u).map(|(v, t, _)| (v, t)).collect();
    if nb.len() < 3 {
        return Err(Error::Precondition(format!("vertex {u} has {} neighbors", nb.len())));
    }
    let total: f64 = nb.iter().map(|x| x.1).sum();
    Ok(nb.into_iter().map(|(v, t)| (v, t / total)).collect())
}

/// First and second moments of one step `ξ_u`.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct StepMoments {
    pub mean: C64,
    pub re_re: f64,
    pub im_im: f64,
    pub re_im: f64,
    /// `δ² Σ sin 2θ / Σ tan θ`.
    pub time: f64,
}

pub fn step_moments(g: &QuadGraph, u: usize) -> Result<StepMoments> {
    let dist = step_distribution(g, u)?;
    let pu = g.position(u);
    let mut m = StepMoments { mean: C64::new(0.0, 0.0), re_re: 0.0, im_im: 0.0, re_im: 0.0, time: step_time(g, u) };
    for (v, p) in dist {
        let s = g.position(v) - pu;
        m.mean += s * p;
        m.re_re += p * s.re * s.re;
        m.im_im += p * s.im * s.im;
        m.re_im += p * s.re * s.im;
    }
    Ok(m)
}

#[derive(Clone, Copy, Debug)]
enum Move {
    Inside(u32),
    Exit(u32),
}

/// Per-vertex alias tables for walks inside a domain.
pub struct ExitSampler<'a> {
    domain: &'a DiscreteDomain,
    tables: Vec<(WeightedAliasIndex<f64>, Vec<Move>)>,
    cfg: WalkConfig,
}

impl<'a> ExitSampler<'a> {
    pub fn new(d: &'a DiscreteDomain, cfg: WalkConfig) -> Result<Self> {
        if cfg.trials == 0 {
            return Err(Error::Precondition("at least one trial is required".into()));
        }
        let mut tables = Vec::with_capacity(d.interior().len());
        for (k, &u) in d.interior().iter().enumerate() {
            let mut w = Vec::new();
            let mut moves = Vec::new();
            for (v, t) in d.interior_neighbors(u) {
                w.push(t);
                moves.push(Move::Inside(d.local_index(v).unwrap() as u32));
            }
            for &p in d.pairs_at(k) {
                w.push(d.pairs()[p].weight);
                moves.push(Move::Exit(p as u32));
            }
            let alias = WeightedAliasIndex::new(w).map_err(|e| Error::Precondition(format!("vertex {u}: {e}")))?;
            tables.push((alias, moves));
        }
        Ok(ExitSampler { domain: d, tables, cfg })
    }

    /// Exit pair of trajectory `trial` started at interior vertex `u`. The
    /// generator is seeded with `cfg.seed` and uses `trial` as its stream.
    pub fn exit(&self, u: usize, trial: u64) -> Result<usize> {
        let mut k = self
            .domain
            .local_index(u)
            .ok_or_else(|| Error::Precondition(format!("vertex {u} is not interior")))?;
        let mut rng = ChaCha8Rng::seed_from_u64(self.cfg.seed);
        rng.set_stream(trial);
        for _ in 0..self.cfg.max_steps {
            let (alias, moves) = &self.tables[k];
            match moves[alias.sample(&mut rng)] {
                Move::Inside(j) => k = j as usize,
                Move::Exit(p) => return Ok(p as usize),
            }
        }
        Err(Error::Truncated { steps: self.cfg.max_steps })
    }
}

/// Exit pair of one trajectory.
pub fn simulate_exit(d: &DiscreteDomain, u: usize, cfg: WalkConfig, trial: u64) -> Result<usize> {
    ExitSampler::new(d, cfg)?.exit(u, trial)
}

#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub struct McEstimate {
    pub estimate: f64,
    pub stderr: f64,
    pub hits: usize,
    /// Trajectories that exited; truncated ones are excluded.
    pub completed: usize,
    pub truncated: usize,
}

/// Fraction of walks from `u` that exit through the pairs in `set`.
pub fn mc_harmonic_measure(d: &DiscreteDomain, u: usize, set: &[usize], cfg: WalkConfig) -> Result<McEstimate> {
    let sampler = ExitSampler::new(d, cfg)?;
    let mut target = vec![false; d.pairs().len()];
    for &p in set {
        *target.get_mut(p).ok_or(Error::NotOnBoundary { a: p, a_int: usize::MAX })? = true;
    }
    let (hits, completed, truncated) = (0..cfg.trials as u64)
        .into_par_iter()
        .map(|trial| match sampler.exit(u, trial) {
            Ok(p) => Ok((target[p] as usize, 1usize, 0usize)),
            Err(Error::Truncated { .. }) => Ok((0, 0, 1)),
            Err(e) => Err(e),
        })
        .try_reduce(|| (0, 0, 0), |a, b| Ok((a.0 + b.0, a.1 + b.1, a.2 + b.2)))?;
    if completed == 0 {
        return Err(Error::Truncated { steps: cfg.max_steps });
    }
    let est = hits as f64 / completed as f64;
    let stderr = (est * (1.0 - est) / completed as f64).sqrt();
    Ok(McEstimate { estimate: est, stderr, hits, completed, truncated })
}
