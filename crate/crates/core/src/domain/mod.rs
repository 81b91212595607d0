//! Discrete domains: connected sets of Γ-vertices cut out of a continuous
//! region, with boundary pairs `(a; a_int)` ordered counter-clockwise.

mod contour;
mod io;
mod region;

pub use contour::{b_edges, b_polyline, closure_diamonds, interior_diamonds, w_edges, BEdge, WEdge};
pub use io::{read_domain, write_domain, DomainFile};
pub use region::Region;

use std::collections::{BTreeMap, VecDeque};
use std::sync::Arc;

use crate::error::{Error, Result};
use crate::function::LatticeFunction;
use crate::isograph::{Color, QuadGraph, C64};

/// Boundary element: exterior vertex `a` reached from interior `a_int` across
/// the Γ-diagonal of `rhombus`. `weight` is `tan θ` of that edge.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct BoundaryPair {
    pub a: usize,
    pub a_int: usize,
    pub rhombus: usize,
    pub weight: f64,
}

#[derive(Clone, Debug)]
pub struct DiscreteDomain {
    graph: Arc<QuadGraph>,
    region: Region,
    interior: Vec<usize>,
    local: Vec<u32>,
    pairs: Vec<BoundaryPair>,
    pairs_at: Vec<Vec<usize>>,
    mu: Vec<f64>,
    single_cycle: bool,
}

const NOT_INTERIOR: u32 = u32::MAX;

impl DiscreteDomain {
    pub fn graph(&self) -> &QuadGraph {
        &self.graph
    }

    pub fn graph_arc(&self) -> &Arc<QuadGraph> {
        &self.graph
    }

    pub fn region(&self) -> &Region {
        &self.region
    }

    /// Interior vertex ids, ascending.
    pub fn interior(&self) -> &[usize] {
        &self.interior
    }

    pub fn is_interior(&self, v: usize) -> bool {
        self.local[v] != NOT_INTERIOR
    }

    /// Position of an interior vertex in [`Self::interior`].
    pub fn local_index(&self, v: usize) -> Option<usize> {
        let k = self.local[v];
        (k != NOT_INTERIOR).then_some(k as usize)
    }

    /// Boundary pairs in counter-clockwise order.
    pub fn pairs(&self) -> &[BoundaryPair] {
        &self.pairs
    }

    /// Boundary pairs (indices) attached to interior vertex with local index `k`.
    pub fn pairs_at(&self, k: usize) -> &[usize] {
        &self.pairs_at[k]
    }

    pub fn boundary_mu(&self) -> &[f64] {
        &self.mu
    }

    pub fn pair_index(&self, a: usize, a_int: usize) -> Option<usize> {
        self.pairs.iter().position(|p| p.a == a && p.a_int == a_int)
    }

    /// Whether the boundary pairs form one counter-clockwise cycle.
    pub fn is_single_cycle(&self) -> bool {
        self.single_cycle
    }

    /// Interior vertex closest to `p`.
    pub fn nearest_interior(&self, p: C64) -> usize {
        let g = self.graph();
        *self
            .interior
            .iter()
            .min_by(|&&u, &&v| (g.position(u) - p).norm().total_cmp(&(g.position(v) - p).norm()))
            .expect("domains are never empty")
    }

    /// Boundary pair whose exterior vertex is closest to `p`.
    pub fn nearest_pair(&self, p: C64) -> usize {
        let g = self.graph();
        (0..self.pairs.len())
            .min_by(|&i, &j| {
                let di = (g.position(self.pairs[i].a) - p).norm();
                let dj = (g.position(self.pairs[j].a) - p).norm();
                di.total_cmp(&dj)
            })
            .expect("domains have boundary pairs")
    }

    /// Point where the edge of pair `i` crosses the region boundary.
    pub fn pair_crossing(&self, i: usize) -> C64 {
        let p = self.pairs[i];
        self.region.exit_point(self.graph.position(p.a_int), self.graph.position(p.a))
    }

    /// Whether the same-color edge `u–v` lies inside the region.
    pub fn edge_inside(&self, u: usize, v: usize) -> bool {
        edge_inside(&self.graph, &self.region, u, v)
    }

    /// Interior neighbors of interior vertex `u` reached by edges inside the
    /// region, with weights.
    pub fn interior_neighbors(&self, u: usize) -> impl Iterator<Item = (usize, f64)> + '_ {
        self.graph
            .neighbors(u)
            .filter(move |&(v, _, _)| self.is_interior(v) && self.edge_inside(u, v))
            .map(|(v, t, _)| (v, t))
    }

    /// Faces (Γ*-vertices) incident to some interior vertex.
    pub fn faces(&self) -> Vec<usize> {
        let g = self.graph();
        let mut seen = vec![false; g.num_vertices()];
        let mut out = Vec::new();
        for &u in &self.interior {
            for c in g.corners_of(u) {
                for w in [c.next, c.prev] {
                    if !seen[w] {
                        seen[w] = true;
                        out.push(w);
                    }
                }
            }
        }
        out.sort_unstable();
        out
    }

    /// Area of the polygonal domain, the union of the faces incident to
    /// interior vertices.
    pub fn polygon_area(&self) -> f64 {
        let g = self.graph();
        let w = g.weights();
        self.faces()
            .iter()
            .map(|&f| g.star(f).iter().map(|i| 0.5 * w.mu_diamond[i.rhombus]).sum::<f64>())
            .sum()
    }

    pub fn region_tag(&self) -> String {
        self.region.tag()
    }
}

fn edge_inside(g: &QuadGraph, region: &Region, u: usize, v: usize) -> bool {
    region.contains_segment(g.position(u), g.position(v))
}

/// Largest connected component of Γ-vertices strictly inside `region`.
pub fn discretize(graph: &Arc<QuadGraph>, region: &Region) -> Result<DiscreteDomain> {
    let g: &QuadGraph = graph;
    let n = g.num_vertices();
    let inside: Vec<bool> = (0..n)
        .map(|v| g.color(v) == Color::Gamma && region.contains(g.position(v)))
        .collect();

    let mut comp = vec![usize::MAX; n];
    let mut best: Option<(usize, usize, usize)> = None; // (size, min id, label)
    let mut label = 0;
    for s in 0..n {
        if !inside[s] || comp[s] != usize::MAX {
            continue;
        }
        let mut size = 0;
        let mut queue = VecDeque::from([s]);
        comp[s] = label;
        while let Some(u) = queue.pop_front() {
            size += 1;
            for (v, _, _) in g.neighbors(u) {
                if inside[v] && comp[v] == usize::MAX && edge_inside(g, region, u, v) {
                    comp[v] = label;
                    queue.push_back(v);
                }
            }
        }
        // s is the smallest id of its component since ids are scanned in order
        let better = match best {
            None => true,
            Some((bs, bmin, _)) => size > bs || (size == bs && s < bmin),
        };
        if better {
            best = Some((size, s, label));
        }
        label += 1;
    }
    let (_, _, chosen) = best.ok_or(Error::EmptyDomain)?;
    let interior: Vec<usize> = (0..n).filter(|&v| comp[v] == chosen).collect();
    from_interior(graph.clone(), region.clone(), interior)
}

/// Build a domain from an explicit connected interior set.
pub fn from_interior(graph: Arc<QuadGraph>, region: Region, mut interior: Vec<usize>) -> Result<DiscreteDomain> {
    interior.sort_unstable();
    interior.dedup();
    if interior.is_empty() {
        return Err(Error::EmptyDomain);
    }
    let g: &QuadGraph = &graph;
    let mut local = vec![NOT_INTERIOR; g.num_vertices()];
    for (k, &u) in interior.iter().enumerate() {
        local[u] = k as u32;
    }
    for &u in &interior {
        if !g.is_closed(u) {
            return Err(Error::DomainExceedsGraph(u));
        }
        for c in g.corners_of(u) {
            if !g.is_closed(c.next) {
                return Err(Error::DomainExceedsGraph(c.next));
            }
        }
    }

    // boundary pairs keyed by (interior vertex, star slot)
    let mut raw: Vec<BoundaryPair> = Vec::new();
    let mut key: BTreeMap<(usize, usize), usize> = BTreeMap::new();
    for &u in &interior {
        for (s, (a, t, z)) in g.neighbors(u).enumerate() {
            if local[a] == NOT_INTERIOR || !edge_inside(g, &region, u, a) {
                key.insert((u, s), raw.len());
                raw.push(BoundaryPair { a, a_int: u, rhombus: z, weight: t });
            }
        }
    }

    // counter-clockwise boundary walk: rotate counter-clockwise around the
    // current interior vertex, stepping onto interior neighbors when met
    let mut order = Vec::with_capacity(raw.len());
    let mut visited = vec![false; raw.len()];
    let mut single_cycle = false;
    if let Some((&(u0, s0), &p0)) = key.iter().next() {
        let (mut u, mut s) = (u0, s0);
        order.push(p0);
        visited[p0] = true;
        let budget = 4 * raw.len() + 8 * interior.len() + 16;
        for _ in 0..budget {
            let k = g.star(u).len();
            s = (s + 1) % k;
            if let Some(&p) = key.get(&(u, s)) {
                if p == p0 {
                    single_cycle = true;
                    break;
                }
                if visited[p] {
                    break;
                }
                visited[p] = true;
                order.push(p);
            } else {
                let inc = g.star(u)[s];
                let x = g.rhombus(inc.rhombus).corners[(inc.slot + 2) % 4];
                let back = g
                    .star(x)
                    .iter()
                    .position(|i| i.rhombus == inc.rhombus)
                    .expect("rhombus is incident to both diagonal ends");
                u = x;
                s = back;
            }
        }
        single_cycle &= order.len() == raw.len();
    }
    for (p, seen) in visited.iter().enumerate() {
        if !seen {
            order.push(p);
        }
    }
    let pairs: Vec<BoundaryPair> = order.iter().map(|&p| raw[p]).collect();
    let mut pairs_at = vec![Vec::new(); interior.len()];
    for (i, p) in pairs.iter().enumerate() {
        pairs_at[local[p.a_int] as usize].push(i);
    }

    let mut d = DiscreteDomain {
        graph,
        region,
        interior,
        local,
        pairs,
        pairs_at,
        mu: Vec::new(),
        single_cycle,
    };
    d.mu = boundary_weights(&d);
    Ok(d)
}

/// Area of `W(a) ∩ Ω^δ` attributed to each boundary pair.
///
/// Around `a` every rhombus splits into two quarter triangles, one in each
/// adjacent face. Quarters in faces of the domain are joined through the
/// face itself or across a Γ-edge with an interior end. The component that
/// contains the edge `(a, a_int)` is shared evenly among the pairs inside it.
fn boundary_weights(d: &DiscreteDomain) -> Vec<f64> {
    let g = d.graph();
    let w = g.weights();
    let mut in_face = vec![false; g.num_vertices()];
    for f in d.faces() {
        in_face[f] = true;
    }
    // component id per (a, quarter index) and number of pairs per component
    let mut comp_of_pair = vec![(0usize, 0usize); d.pairs.len()];
    let mut area: BTreeMap<(usize, usize), f64> = BTreeMap::new();
    let mut count: BTreeMap<(usize, usize), usize> = BTreeMap::new();
    let mut by_vertex: BTreeMap<usize, Vec<usize>> = BTreeMap::new();
    for (i, p) in d.pairs.iter().enumerate() {
        by_vertex.entry(p.a).or_default().push(i);
    }
    for (&a, list) in &by_vertex {
        let corners: Vec<_> = g.corners_of(a).collect();
        let k = corners.len();
        let m = 2 * k;
        // quarter 2s lies in face next_s, quarter 2s+1 in face prev_s
        let face = |q: usize| if q.is_multiple_of(2) { corners[q / 2].next } else { corners[q / 2].prev };
        let linked = |q: usize| -> bool {
            // link between quarter q and q+1
            if q.is_multiple_of(2) {
                let opp = corners[q / 2].opposite;
                d.is_interior(opp)
            } else {
                q + 1 < m || g.is_closed(a)
            }
        };
        let mut label = vec![usize::MAX; m];
        let mut next_label = 0;
        for q in 0..m {
            if label[q] != usize::MAX || !in_face[face(q)] {
                continue;
            }
            let mut stack = vec![q];
            label[q] = next_label;
            while let Some(x) = stack.pop() {
                let fwd = (x + 1) % m;
                if (x + 1 < m || g.is_closed(a)) && linked(x) && in_face[face(fwd)] && label[fwd] == usize::MAX {
                    label[fwd] = next_label;
                    stack.push(fwd);
                }
                let back = (x + m - 1) % m;
                if (x > 0 || g.is_closed(a)) && linked(back) && in_face[face(back)] && label[back] == usize::MAX {
                    label[back] = next_label;
                    stack.push(back);
                }
            }
            let total: f64 = (0..m)
                .filter(|&y| label[y] == next_label)
                .map(|y| 0.25 * w.mu_diamond[corners[y / 2].rhombus])
                .sum();
            area.insert((a, next_label), total);
            next_label += 1;
        }
        for &i in list {
            let z = d.pairs[i].rhombus;
            let s = corners.iter().position(|c| c.rhombus == z).expect("pair rhombus at a");
            let lab = label[2 * s];
            comp_of_pair[i] = (a, lab);
            *count.entry((a, lab)).or_default() += 1;
        }
    }
    comp_of_pair
        .iter()
        .map(|key| area.get(key).copied().unwrap_or(0.0) / count[key] as f64)
        .collect()
}

/// `Σ_int φ(u) μ_Γ(u) + Σ_pairs φ(a) μ_Ω(a)`.
pub fn discrete_integral(d: &DiscreteDomain, phi: &LatticeFunction) -> Result<C64> {
    let w = d.graph().weights();
    let mut s = C64::new(0.0, 0.0);
    for &u in d.interior() {
        s += phi.get(u)? * w.mu_gamma[u];
    }
    for (p, mu) in d.pairs().iter().zip(d.boundary_mu()) {
        s += phi.get(p.a)? * *mu;
    }
    Ok(s)
}

/// Lower, upper and vertical boundary parts of a rectangle domain.
pub struct RectSplit {
    pub lower: Vec<usize>,
    pub upper: Vec<usize>,
    pub vertical: Vec<usize>,
}

pub fn boundary_split_rect(d: &DiscreteDomain) -> Result<RectSplit> {
    let (s, t) = match d.region() {
        Region::Rect { s, t } => (*s, *t),
        _ => return Err(Error::NotARectangle),
    };
    Ok(split_by_rect(d, s, t))
}

/// Split boundary pairs by the thresholds `Im a ≤ 0`, `Im a ≥ t`, `|Re a| ≥ s`.
pub fn split_by_rect(d: &DiscreteDomain, s: f64, t: f64) -> RectSplit {
    let g = d.graph();
    let mut out = RectSplit { lower: vec![], upper: vec![], vertical: vec![] };
    for (i, p) in d.pairs().iter().enumerate() {
        let a = g.position(p.a);
        if a.im <= 0.0 {
            out.lower.push(i);
        }
        if a.im >= t {
            out.upper.push(i);
        }
        if a.re.abs() >= s {
            out.vertical.push(i);
        }
    }
    out
}

/// Counter-clockwise run of boundary pairs from index `from` to index `to`,
/// both included.
pub fn boundary_arc(d: &DiscreteDomain, from: usize, to: usize) -> Result<Vec<usize>> {
    let n = d.pairs().len();
    if from >= n {
        return Err(Error::NotOnBoundary { a: from, a_int: usize::MAX });
    }
    if to >= n {
        return Err(Error::NotOnBoundary { a: to, a_int: usize::MAX });
    }
    if !d.is_single_cycle() {
        return Err(Error::NotSimplyConnected);
    }
    let len = (to + n - from) % n + 1;
    Ok((0..len).map(|k| (from + k) % n).collect())
}

/// Pairs whose boundary crossing has argument (about `center`) in the
/// counter-clockwise angular interval `[t0, t1]`. A crossing exactly on an
/// endpoint direction is decided by the rhombus center, so the two pairs of
/// an exterior vertex on that direction fall on opposite sides. Crossings at
/// `center` itself have no direction and are left out.
pub fn pairs_in_angle(d: &DiscreteDomain, center: C64, t0: f64, t1: f64) -> Vec<usize> {
    const TIE: f64 = 1e-9;
    let tau = std::f64::consts::TAU;
    let span = (t1 - t0).rem_euclid(tau);
    let offset = |p: C64| ((p - center).arg() - t0).rem_euclid(tau);
    let near = |x: f64| x.min(tau - x) < TIE || (x - span).abs() < TIE;
    (0..d.pairs().len())
        .filter(|&i| {
            let c = d.pair_crossing(i);
            if (c - center).norm() < TIE {
                return false;
            }
            let x = offset(c);
            if near(x) {
                offset(d.graph().center(d.pairs()[i].rhombus)) <= span
            } else {
                x <= span
            }
        })
        .collect()
}
