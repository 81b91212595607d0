//! Functions on the vertex classes of a quad-graph.

use std::collections::BTreeMap;
use std::path::Path;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::isograph::{Color, QuadGraph, C64};

/// Which vertex class a function lives on.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub enum Support {
    #[serde(rename = "gamma")]
    Gamma,
    #[serde(rename = "gammastar")]
    GammaStar,
    #[serde(rename = "lambda")]
    Lambda,
    #[serde(rename = "diamond")]
    Diamond,
}

impl Support {
    pub fn admits(self, g: &QuadGraph, id: usize) -> bool {
        match self {
            Support::Gamma => id < g.num_vertices() && g.color(id) == Color::Gamma,
            Support::GammaStar => id < g.num_vertices() && g.color(id) == Color::GammaStar,
            Support::Lambda => id < g.num_vertices(),
            Support::Diamond => id < g.num_rhombi(),
        }
    }
}

/// Complex values on a set of vertices (or rhombi) of one class.
#[derive(Clone, Debug, PartialEq)]
pub struct LatticeFunction {
    pub support: Support,
    values: BTreeMap<usize, C64>,
}

impl LatticeFunction {
    pub fn new(support: Support) -> Self {
        LatticeFunction { support, values: BTreeMap::new() }
    }

    /// Sample `f` at the positions of every element of the given class.
    pub fn sample(g: &QuadGraph, support: Support, f: impl Fn(C64) -> C64) -> Self {
        let mut out = Self::new(support);
        match support {
            Support::Diamond => {
                for z in 0..g.num_rhombi() {
                    out.values.insert(z, f(g.center(z)));
                }
            }
            _ => {
                for v in 0..g.num_vertices() {
                    if support.admits(g, v) {
                        out.values.insert(v, f(g.position(v)));
                    }
                }
            }
        }
        out
    }

    pub fn from_values(support: Support, values: impl IntoIterator<Item = (usize, C64)>) -> Self {
        LatticeFunction { support, values: values.into_iter().collect() }
    }

    pub fn insert(&mut self, id: usize, value: C64) {
        self.values.insert(id, value);
    }

    pub fn get(&self, id: usize) -> Result<C64> {
        self.values.get(&id).copied().ok_or(Error::MissingValues(id))
    }

    /// Value at a Λ-vertex, treating vertices of the other color as zero when
    /// the function is declared on one color only.
    pub fn get_lambda(&self, g: &QuadGraph, id: usize) -> Result<C64> {
        match (self.support, g.color(id)) {
            (Support::Gamma, Color::GammaStar) | (Support::GammaStar, Color::Gamma) => {
                Ok(C64::new(0.0, 0.0))
            }
            _ => self.get(id),
        }
    }

    pub fn contains(&self, id: usize) -> bool {
        self.values.contains_key(&id)
    }

    pub fn len(&self) -> usize {
        self.values.len()
    }

    pub fn is_empty(&self) -> bool {
        self.values.is_empty()
    }

    pub fn iter(&self) -> impl Iterator<Item = (usize, C64)> + '_ {
        self.values.iter().map(|(&k, &v)| (k, v))
    }

    pub fn max_abs(&self) -> f64 {
        self.values.values().fold(0.0, |m, v| m.max(v.norm()))
    }

    pub fn validate(&self, g: &QuadGraph) -> Result<()> {
        for &id in self.values.keys() {
            if !self.support.admits(g, id) {
                return Err(Error::Precondition(format!("id {id} is not in the declared support")));
            }
        }
        Ok(())
    }

    pub fn to_file(&self) -> FunctionFile {
        FunctionFile {
            support: self.support,
            values: self.values.iter().map(|(k, v)| (k.to_string(), [v.re, v.im])).collect(),
        }
    }

    pub fn write(&self, path: impl AsRef<Path>) -> Result<()> {
        std::fs::write(path, serde_json::to_string_pretty(&self.to_file())?)?;
        Ok(())
    }

    pub fn read(path: impl AsRef<Path>) -> Result<Self> {
        let file: FunctionFile = serde_json::from_str(&std::fs::read_to_string(path)?)?;
        file.into_function()
    }
}

/// JSON form: `{support, values: {id: [re, im]}}`.
#[derive(Debug, Serialize, Deserialize)]
pub struct FunctionFile {
    pub support: Support,
    pub values: BTreeMap<String, [f64; 2]>,
}

impl FunctionFile {
    pub fn into_function(self) -> Result<LatticeFunction> {
        let mut f = LatticeFunction::new(self.support);
        for (k, [re, im]) in self.values {
            let id: usize = k
                .parse()
                .map_err(|_| Error::Precondition(format!("bad function id {k:?}")))?;
            f.insert(id, C64::new(re, im));
        }
        Ok(f)
    }
}
