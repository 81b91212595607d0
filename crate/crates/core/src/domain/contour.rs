use std::collections::BTreeMap;

use super::DiscreteDomain;
use crate::error::{Error, Result};

/// Edge of the Γ boundary polyline: the Γ-diagonal `from → to` of `rhombus`,
/// oriented so that the domain face `face` lies on its left.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct BEdge {
    pub rhombus: usize,
    pub from: usize,
    pub to: usize,
    pub face: usize,
}

/// Edge of the inner Γ* polyline: the Γ*-diagonal `from → to` of the rhombus
/// of a boundary pair, with the exterior Γ-corner `vertex` on its right.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct WEdge {
    pub rhombus: usize,
    pub from: usize,
    pub to: usize,
    pub vertex: usize,
}

/// Rhombi whose Γ-diagonal has an interior end.
pub fn interior_diamonds(d: &DiscreteDomain) -> Vec<usize> {
    let g = d.graph();
    let mut out: Vec<usize> = d
        .interior()
        .iter()
        .flat_map(|&u| g.star(u).iter().map(|i| i.rhombus))
        .collect();
    out.sort_unstable();
    out.dedup();
    out
}

/// Interior rhombi together with the rhombi of the Γ boundary polyline.
pub fn closure_diamonds(d: &DiscreteDomain) -> Vec<usize> {
    let mut out = interior_diamonds(d);
    out.extend(b_edges(d).iter().map(|e| e.rhombus));
    out.sort_unstable();
    out.dedup();
    out
}

pub fn b_edges(d: &DiscreteDomain) -> Vec<BEdge> {
    let g = d.graph();
    let mut out = Vec::new();
    for f in d.faces() {
        for c in g.corners_of(f) {
            if !d.is_interior(c.next) && !d.is_interior(c.prev) {
                out.push(BEdge { rhombus: c.rhombus, from: c.next, to: c.prev, face: f });
            }
        }
    }
    out
}

pub fn w_edges(d: &DiscreteDomain) -> Vec<WEdge> {
    let g = d.graph();
    d.pairs()
        .iter()
        .map(|p| {
            let c = g
                .corners_of(p.a)
                .find(|c| c.rhombus == p.rhombus)
                .expect("pair rhombus is incident to its exterior vertex");
            WEdge { rhombus: p.rhombus, from: c.prev, to: c.next, vertex: p.a }
        })
        .collect()
}

/// The Γ boundary polyline as a closed vertex sequence (first vertex
/// repeated at the end).
pub fn b_polyline(d: &DiscreteDomain) -> Result<Vec<usize>> {
    let edges = b_edges(d);
    if edges.is_empty() {
        return Err(Error::ContourNotFound("domain has no boundary edges".into()));
    }
    let mut out_of: BTreeMap<usize, Vec<usize>> = BTreeMap::new();
    for (k, e) in edges.iter().enumerate() {
        out_of.entry(e.from).or_default().push(k);
    }
    let mut used = vec![false; edges.len()];
    let start = edges[0].from;
    let mut path = vec![start];
    let mut at = start;
    loop {
        let next = out_of
            .get(&at)
            .and_then(|l| l.iter().copied().find(|&k| !used[k]));
        match next {
            Some(k) => {
                used[k] = true;
                at = edges[k].to;
                path.push(at);
            }
            None => break,
        }
    }
    if at != start || used.iter().any(|u| !u) {
        return Err(Error::ContourNotFound("boundary edges do not form one closed path".into()));
    }
    Ok(path)
}
