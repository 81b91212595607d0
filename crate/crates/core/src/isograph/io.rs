use std::path::Path;

use serde::{Deserialize, Serialize, Serializer};
use serde_json::value::RawValue;

use super::{Color, QuadGraph, Rhombus, C64};
use crate::error::{Error, Result};

/// Serialize a float with 17 significant digits so it parses back to the
/// same bits.
pub(crate) fn f64_17<S: Serializer>(x: &f64, s: S) -> std::result::Result<S::Ok, S::Error> {
    use serde::ser::Error as _;
    if !x.is_finite() {
        return Err(S::Error::custom("non-finite float"));
    }
    let raw = RawValue::from_string(format!("{x:.16e}")).map_err(S::Error::custom)?;
    raw.serialize(s)
}

#[derive(Debug, Serialize, Deserialize)]
pub struct VertexRecord {
    pub id: usize,
    #[serde(serialize_with = "f64_17")]
    pub x: f64,
    #[serde(serialize_with = "f64_17")]
    pub y: f64,
    pub color: Color,
}

#[derive(Debug, Serialize, Deserialize)]
pub struct RhombusRecord {
    pub v1: usize,
    pub v2: usize,
    pub v3: usize,
    pub v4: usize,
    #[serde(serialize_with = "f64_17")]
    pub theta: f64,
}

/// On-disk form of a quad-graph.
#[derive(Debug, Serialize, Deserialize)]
pub struct GraphFile {
    #[serde(serialize_with = "f64_17")]
    pub delta: f64,
    pub vertices: Vec<VertexRecord>,
    pub rhombi: Vec<RhombusRecord>,
}

impl GraphFile {
    pub fn from_graph(g: &QuadGraph) -> Self {
        let vertices = (0..g.num_vertices())
            .map(|v| {
                let p = g.position(v);
                VertexRecord { id: v, x: p.re, y: p.im, color: g.color(v) }
            })
            .collect();
        let rhombi = g
            .rhombi()
            .iter()
            .map(|r| RhombusRecord {
                v1: r.corners[0],
                v2: r.corners[1],
                v3: r.corners[2],
                v4: r.corners[3],
                theta: r.theta,
            })
            .collect();
        GraphFile { delta: g.delta(), vertices, rhombi }
    }

    pub fn into_graph(self) -> Result<QuadGraph> {
        let n = self.vertices.len();
        let mut pos = vec![C64::new(f64::NAN, f64::NAN); n];
        let mut color = vec![Color::Gamma; n];
        let mut seen = vec![false; n];
        for v in &self.vertices {
            if v.id >= n || seen[v.id] {
                return Err(Error::InvalidGraph(format!("vertex ids must be 0..{n} without repeats")));
            }
            seen[v.id] = true;
            pos[v.id] = C64::new(v.x, v.y);
            color[v.id] = v.color;
        }
        let rhombi = self
            .rhombi
            .iter()
            .map(|r| Rhombus { corners: [r.v1, r.v2, r.v3, r.v4], theta: r.theta })
            .collect();
        QuadGraph::from_parts(self.delta, pos, color, rhombi)
    }
}

pub fn write_graph(g: &QuadGraph, path: impl AsRef<Path>) -> Result<()> {
    let text = serde_json::to_string(&GraphFile::from_graph(g))?;
    std::fs::write(path, text)?;
    Ok(())
}

pub fn read_graph(path: impl AsRef<Path>) -> Result<QuadGraph> {
    let text = std::fs::read_to_string(path)?;
    let file: GraphFile = serde_json::from_str(&text)?;
    file.into_graph()
}
