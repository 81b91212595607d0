use std::collections::HashMap;
use std::sync::{Arc, RwLock};

use rayon::prelude::*;

use super::cauchy::cauchy_kernel;
use super::green::{free_green, ContourSpec};
use crate::error::{Error, Result};
use crate::isograph::{QuadGraph, C64};

/// Memoised kernel values for one graph. Safe to share between threads;
/// concurrent inserts of the same key store identical values.
pub struct KernelCache {
    graph: Arc<QuadGraph>,
    spec: ContourSpec,
    green: RwLock<HashMap<(usize, usize), f64>>,
    cauchy: RwLock<HashMap<(usize, usize), C64>>,
}

impl KernelCache {
    pub fn new(graph: Arc<QuadGraph>, spec: ContourSpec) -> Self {
        KernelCache { graph, spec, green: RwLock::default(), cauchy: RwLock::default() }
    }

    pub fn graph(&self) -> &Arc<QuadGraph> {
        &self.graph
    }

    /// `G_Γ(u; u0)`.
    pub fn green(&self, u: usize, u0: usize) -> Result<f64> {
        if let Some(&v) = self.green.read().unwrap().get(&(u0, u)) {
            return Ok(v);
        }
        let v = free_green(&self.graph, u, u0, &self.spec)?;
        self.green.write().unwrap().insert((u0, u), v);
        Ok(v)
    }

    /// `K(v; z0)`.
    pub fn cauchy(&self, v: usize, z0: usize) -> Result<C64> {
        if let Some(&k) = self.cauchy.read().unwrap().get(&(z0, v)) {
            return Ok(k);
        }
        let k = cauchy_kernel(&self.graph, v, z0, &self.spec)
            .map_err(|e| Error::KernelUnavailable(format!("K({v}; {z0}): {e}")))?;
        self.cauchy.write().unwrap().insert((z0, v), k);
        Ok(k)
    }

    /// `G_Γ(u; u0)` for many `u`, evaluated in parallel.
    pub fn green_many(&self, us: &[usize], u0: usize) -> Result<Vec<f64>> {
        us.par_iter().map(|&u| self.green(u, u0)).collect()
    }

    pub fn cauchy_many(&self, vs: &[usize], z0: usize) -> Result<Vec<C64>> {
        vs.par_iter().map(|&v| self.cauchy(v, z0)).collect()
    }

    pub fn len(&self) -> usize {
        self.green.read().unwrap().len() + self.cauchy.read().unwrap().len()
    }

    pub fn is_empty(&self) -> bool {
        self.len() == 0
    }
}
