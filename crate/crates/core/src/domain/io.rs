use std::path::Path;
use std::sync::Arc;

use serde::{Deserialize, Serialize};

use super::{discretize, DiscreteDomain, Region};
use crate::error::{Error, Result};
use crate::isograph::io::f64_17;
use crate::isograph::GraphFile;

#[derive(Debug, Serialize, Deserialize)]
pub struct PairRecord {
    pub a: usize,
    pub a_int: usize,
    #[serde(serialize_with = "f64_17")]
    pub mu: f64,
}

/// On-disk form of a domain. The graph is embedded so that the file is
/// self-contained; loading re-runs the extraction and checks it matches.
#[derive(Debug, Serialize, Deserialize)]
pub struct DomainFile {
    pub region: Region,
    pub interior: Vec<usize>,
    pub boundary: Vec<PairRecord>,
    pub graph: GraphFile,
}

impl DomainFile {
    pub fn from_domain(d: &DiscreteDomain) -> Self {
        DomainFile {
            region: d.region().clone(),
            interior: d.interior().to_vec(),
            boundary: d
                .pairs()
                .iter()
                .zip(d.boundary_mu())
                .map(|(p, &mu)| PairRecord { a: p.a, a_int: p.a_int, mu })
                .collect(),
            graph: GraphFile::from_graph(d.graph()),
        }
    }

    pub fn into_domain(self) -> Result<DiscreteDomain> {
        let g = Arc::new(self.graph.into_graph()?);
        let d = discretize(&g, &self.region)?;
        let same_pairs = d.pairs().len() == self.boundary.len()
            && d.pairs().iter().zip(&self.boundary).all(|(p, r)| p.a == r.a && p.a_int == r.a_int);
        if d.interior() != self.interior.as_slice() || !same_pairs {
            return Err(Error::Precondition("domain file does not match its region".into()));
        }
        Ok(d)
    }
}

pub fn write_domain(d: &DiscreteDomain, path: impl AsRef<Path>) -> Result<()> {
    std::fs::write(path, serde_json::to_string(&DomainFile::from_domain(d))?)?;
    Ok(())
}

pub fn read_domain(path: impl AsRef<Path>) -> Result<DiscreteDomain> {
    let file: DomainFile = serde_json::from_str(&std::fs::read_to_string(path)?)?;
    file.into_domain()
}
