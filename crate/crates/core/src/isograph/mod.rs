//! Rhombic quad-graphs: the vertex set `Λ = Γ ∪ Γ*`, rhombic faces `◊` and
//! their weights.
//!
//! Every face is a rhombus with side `δ` whose corners are listed
//! counter-clockwise as `[v1, v2, v3, v4]` with `v1, v3 ∈ Γ` and
//! `v2, v4 ∈ Γ*`. The stored angle `theta` is half the rhombus angle at the
//! Γ corners, so the Γ edge `v1 v3` carries the Laplacian weight `tan θ` and
//! the Γ* edge `v2 v4` carries `cot θ`.

mod build;
pub(crate) mod io;
mod weights;

pub use build::{build_quadgraph, build_from_directions, random_isoradial, square_lattice};
pub use io::{read_graph, write_graph, GraphFile};
pub use weights::{compute_weights, Weights};

use std::f64::consts::{FRAC_PI_2, PI};

use num_complex::Complex64;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

pub type C64 = Complex64;

/// Vertex class of the bipartite quad-graph.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
pub enum Color {
    #[serde(rename = "gamma")]
    Gamma,
    #[serde(rename = "gammastar")]
    GammaStar,
}

impl Color {
    pub fn dual(self) -> Color {
        match self {
            Color::Gamma => Color::GammaStar,
            Color::GammaStar => Color::Gamma,
        }
    }
}

#[derive(Clone, Copy, Debug, PartialEq)]
pub struct Rhombus {
    pub corners: [usize; 4],
    pub theta: f64,
}

/// A rhombus seen from one of its corners.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct Incidence {
    pub rhombus: usize,
    pub slot: usize,
}

/// Corner-local view of a rhombus: the vertex itself, the next and previous
/// corners in counter-clockwise order, and the opposite corner.
#[derive(Clone, Copy, Debug)]
pub struct Corner {
    pub rhombus: usize,
    pub vertex: usize,
    pub next: usize,
    pub opposite: usize,
    pub prev: usize,
}

#[derive(Clone, Debug)]
pub struct QuadGraph {
    delta: f64,
    pos: Vec<C64>,
    color: Vec<Color>,
    rhombi: Vec<Rhombus>,
    centers: Vec<C64>,
    stars: Vec<Vec<Incidence>>,
    closed: Vec<bool>,
    weights: Weights,
}

const GEOM_TOL: f64 = 1e-10;

impl QuadGraph {
    /// Assemble a graph from raw parts, checking the rhombic structure.
    pub fn from_parts(
        delta: f64,
        pos: Vec<C64>,
        color: Vec<Color>,
        rhombi: Vec<Rhombus>,
    ) -> Result<Self> {
        if !(delta > 0.0 && delta.is_finite()) {
            return Err(Error::InvalidGraph(format!("bad delta {delta}")));
        }
        if pos.is_empty() || rhombi.is_empty() {
            return Err(Error::EmptyInput("graph has no vertices or faces"));
        }
        if pos.len() != color.len() {
            return Err(Error::InvalidGraph("position/color length mismatch".into()));
        }
        let n = pos.len();
        let tol = GEOM_TOL * delta;
        let mut centers = Vec::with_capacity(rhombi.len());
        for (id, r) in rhombi.iter().enumerate() {
            if r.corners.iter().any(|&v| v >= n) {
                return Err(Error::InvalidGraph(format!("rhombus {id} references a missing vertex")));
            }
            for j in 0..4 {
                let want = if j % 2 == 0 { Color::Gamma } else { Color::GammaStar };
                if color[r.corners[j]] != want {
                    return Err(Error::InvalidGraph(format!("rhombus {id}: corner {j} has the wrong color")));
                }
                let side = pos[r.corners[(j + 1) % 4]] - pos[r.corners[j]];
                if (side.norm() - delta).abs() > tol {
                    return Err(Error::InvalidGraph(format!(
                        "rhombus {id}: side {j} has length {} instead of {delta}",
                        side.norm()
                    )));
                }
            }
            let [v1, v2, _, v4] = r.corners.map(|v| pos[v]);
            let angle = ((v4 - v1) / (v2 - v1)).arg();
            if angle <= 0.0 {
                return Err(Error::InvalidGraph(format!("rhombus {id} is not counter-clockwise")));
            }
            if (angle - 2.0 * r.theta).abs() > 1e-9 {
                return Err(Error::InvalidGraph(format!(
                    "rhombus {id}: stored theta {} disagrees with geometry {}",
                    r.theta,
                    angle / 2.0
                )));
            }
            let c1 = (pos[r.corners[0]] + pos[r.corners[2]]) * 0.5;
            let c2 = (pos[r.corners[1]] + pos[r.corners[3]]) * 0.5;
            if (c1 - c2).norm() > tol {
                return Err(Error::InvalidGraph(format!("rhombus {id} diagonals do not bisect")));
            }
            centers.push(c1);
        }

        let mut stars: Vec<Vec<Incidence>> = vec![Vec::new(); n];
        for (id, r) in rhombi.iter().enumerate() {
            for (slot, &v) in r.corners.iter().enumerate() {
                stars[v].push(Incidence { rhombus: id, slot });
            }
        }
        let mut closed = vec![false; n];
        for v in 0..n {
            let star = &mut stars[v];
            star.sort_by(|a, b| {
                let ta = (centers[a.rhombus] - pos[v]).arg();
                let tb = (centers[b.rhombus] - pos[v]).arg();
                ta.total_cmp(&tb)
            });
            let k = star.len();
            if k == 0 {
                continue;
            }
            let next_of = |inc: &Incidence| rhombi[inc.rhombus].corners[(inc.slot + 1) % 4];
            let prev_of = |inc: &Incidence| rhombi[inc.rhombus].corners[(inc.slot + 3) % 4];
            // Sector of a rhombus at v runs from `next` to `prev` counter-clockwise;
            // the following rhombus must start where this one ends.
            let links: Vec<bool> = (0..k)
                .map(|i| prev_of(&star[i]) == next_of(&star[(i + 1) % k]))
                .collect();
            if k >= 3 && links.iter().all(|&b| b) {
                closed[v] = true;
            } else if let Some(gap) = links.iter().position(|&b| !b) {
                star.rotate_left((gap + 1) % k);
            }
        }

        let mut g = QuadGraph {
            delta,
            pos,
            color,
            rhombi,
            centers,
            stars,
            closed,
            weights: Weights::default(),
        };
        g.weights = compute_weights(&g);
        Ok(g)
    }

    pub fn delta(&self) -> f64 {
        self.delta
    }

    pub fn num_vertices(&self) -> usize {
        self.pos.len()
    }

    pub fn num_rhombi(&self) -> usize {
        self.rhombi.len()
    }

    pub fn position(&self, v: usize) -> C64 {
        self.pos[v]
    }

    pub fn positions(&self) -> &[C64] {
        &self.pos
    }

    pub fn color(&self, v: usize) -> Color {
        self.color[v]
    }

    pub fn rhombus(&self, z: usize) -> &Rhombus {
        &self.rhombi[z]
    }

    pub fn rhombi(&self) -> &[Rhombus] {
        &self.rhombi
    }

    pub fn center(&self, z: usize) -> C64 {
        self.centers[z]
    }

    pub fn weights(&self) -> &Weights {
        &self.weights
    }

    /// Incident rhombi of `v`, counter-clockwise. For open stars the list is a
    /// fan starting right after the gap.
    pub fn star(&self, v: usize) -> &[Incidence] {
        &self.stars[v]
    }

    /// Whether the rhombi around `v` close up into a full cycle.
    pub fn is_closed(&self, v: usize) -> bool {
        self.closed[v]
    }

    pub fn corner(&self, inc: Incidence) -> Corner {
        let c = &self.rhombi[inc.rhombus].corners;
        Corner {
            rhombus: inc.rhombus,
            vertex: c[inc.slot],
            next: c[(inc.slot + 1) % 4],
            opposite: c[(inc.slot + 2) % 4],
            prev: c[(inc.slot + 3) % 4],
        }
    }

    pub fn corners_of(&self, v: usize) -> impl Iterator<Item = Corner> + '_ {
        self.stars[v].iter().map(move |&inc| self.corner(inc))
    }

    /// Half of the rhombus angle at corner `slot` of rhombus `z`.
    pub fn half_angle(&self, z: usize, slot: usize) -> f64 {
        let t = self.rhombi[z].theta;
        if slot.is_multiple_of(2) {
            t
        } else {
            FRAC_PI_2 - t
        }
    }

    /// Laplacian weight of the same-color diagonal seen from corner `slot`.
    pub fn edge_weight(&self, z: usize, slot: usize) -> f64 {
        self.half_angle(z, slot).tan()
    }

    /// Same-color neighbors of `v` with their edge weights, counter-clockwise.
    pub fn neighbors(&self, v: usize) -> impl Iterator<Item = (usize, f64, usize)> + '_ {
        self.stars[v].iter().map(move |inc| {
            let opp = self.rhombi[inc.rhombus].corners[(inc.slot + 2) % 4];
            (opp, self.edge_weight(inc.rhombus, inc.slot), inc.rhombus)
        })
    }

    /// Rhombi adjacent to `v` in the quad-graph sense: other-color neighbors.
    pub fn lambda_neighbors(&self, v: usize) -> Vec<usize> {
        let mut out = Vec::with_capacity(self.stars[v].len() + 1);
        for c in self.corners_of(v) {
            for w in [c.next, c.prev] {
                if !out.contains(&w) {
                    out.push(w);
                }
            }
        }
        out
    }

    pub fn vertices_of_color(&self, col: Color) -> impl Iterator<Item = usize> + '_ {
        (0..self.pos.len()).filter(move |&v| self.color[v] == col)
    }

    /// Vertex of the given color closest to `p` (ties to the lowest id).
    pub fn nearest(&self, p: C64, col: Color) -> Option<usize> {
        let mut best: Option<(f64, usize)> = None;
        for v in self.vertices_of_color(col) {
            let d = (self.pos[v] - p).norm_sqr();
            if best.is_none_or(|(bd, _)| d < bd) {
                best = Some((d, v));
            }
        }
        best.map(|(_, v)| v)
    }

    /// Rhombus whose center is closest to `p`.
    pub fn nearest_rhombus(&self, p: C64) -> Option<usize> {
        let mut best: Option<(f64, usize)> = None;
        for (z, c) in self.centers.iter().enumerate() {
            let d = (c - p).norm_sqr();
            if best.is_none_or(|(bd, _)| d < bd) {
                best = Some((d, z));
            }
        }
        best.map(|(_, z)| z)
    }

    /// Rhombus with the given Γ-diagonal (or Γ*-diagonal), if any.
    pub fn rhombus_between(&self, v: usize, w: usize) -> Option<usize> {
        self.stars[v].iter().find_map(|inc| {
            let opp = self.rhombi[inc.rhombus].corners[(inc.slot + 2) % 4];
            (opp == w).then_some(inc.rhombus)
        })
    }

    /// Smallest rhombus angle `min(2θ, π − 2θ)` over all faces, with the face
    /// where it is attained.
    pub fn min_angle(&self) -> (f64, usize) {
        let mut best = (PI, 0);
        for (id, r) in self.rhombi.iter().enumerate() {
            let a = (2.0 * r.theta).min(PI - 2.0 * r.theta);
            if a < best.0 {
                best = (a, id);
            }
        }
        best
    }
}

/// Smallest rhombus angle of the graph; fails if it drops below `eta_min`.
pub fn validate_spades(g: &QuadGraph, eta_min: f64) -> Result<f64> {
    let (eta, face) = g.min_angle();
    if eta < eta_min {
        return Err(Error::DegenerateRhombus { face, angle: eta, eta_min });
    }
    Ok(eta)
}

/// Mean exit-time scale of one walk step, `δ² Σ sin 2θ / Σ tan θ`.
pub fn step_time(g: &QuadGraph, u: usize) -> f64 {
    let mut s_sin = 0.0;
    let mut s_tan = 0.0;
    for inc in g.star(u) {
        let t = g.half_angle(inc.rhombus, inc.slot);
        s_sin += (2.0 * t).sin();
        s_tan += t.tan();
    }
    g.delta() * g.delta() * s_sin / s_tan
}
