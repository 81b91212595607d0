use std::collections::{HashMap, VecDeque};

use super::derivatives::{dbar_diamond_to_lambda, HOLOMORPHIC_TOL};
use crate::domain::{interior_diamonds, DiscreteDomain};
use crate::error::{Error, Result};
use crate::function::{LatticeFunction, Support};
use crate::isograph::{Color, C64};

/// Discrete primitive `H = ∫ F d^δz` of a ◊-function over the rhombi of the
/// domain, normalised by `H(base_gamma) = H(base_gammastar) = 0`.
///
/// Each color class is integrated along a BFS spanning tree; the remaining
/// edges are then checked for consistency.
pub fn primitive(
    d: &DiscreteDomain,
    f: &LatticeFunction,
    base_gamma: usize,
    base_gammastar: usize,
) -> Result<LatticeFunction> {
    if !d.is_single_cycle() {
        return Err(Error::NotSimplyConnected);
    }
    let g = d.graph();
    let rhombi = interior_diamonds(d);
    let scale = rhombi
        .iter()
        .map(|&z| f.get(z).map(|x| x.norm()))
        .collect::<Result<Vec<_>>>()?
        .into_iter()
        .fold(0.0, f64::max);

    // holomorphicity gate at every vertex whose whole star carries values
    let mut candidates: Vec<usize> = d.interior().to_vec();
    candidates.extend(d.faces());
    let mut residual: f64 = 0.0;
    for v in candidates {
        if g.is_closed(v) && g.star(v).iter().all(|i| f.contains(i.rhombus)) {
            residual = residual.max(dbar_diamond_to_lambda(g, f, v)?.norm());
        }
    }
    if residual > HOLOMORPHIC_TOL * scale {
        return Err(Error::NotHolomorphic { residual });
    }

    // adjacency per color: (neighbor, rhombus)
    let mut adj: HashMap<usize, Vec<(usize, usize)>> = HashMap::new();
    for &z in &rhombi {
        let c = g.rhombus(z).corners;
        for (a, b) in [(c[0], c[2]), (c[1], c[3])] {
            adj.entry(a).or_default().push((b, z));
            adj.entry(b).or_default().push((a, z));
        }
    }
    let mut out = LatticeFunction::new(Support::Lambda);
    let mut defect: f64 = 0.0;
    let mut n_edges = 0usize;
    for (base, color) in [(base_gamma, Color::Gamma), (base_gammastar, Color::GammaStar)] {
        if g.color(base) != color || !adj.contains_key(&base) {
            return Err(Error::Precondition(format!("base vertex {base} is not a {color:?} vertex of the domain")));
        }
        let mut h: HashMap<usize, C64> = HashMap::from([(base, C64::new(0.0, 0.0))]);
        let mut queue = VecDeque::from([base]);
        while let Some(a) = queue.pop_front() {
            let ha = h[&a];
            for &(b, z) in &adj[&a] {
                let step = f.get(z)? * (g.position(b) - g.position(a));
                match h.get(&b) {
                    Some(&hb) => {
                        defect = defect.max((hb - ha - step).norm());
                        n_edges += 1;
                    }
                    None => {
                        h.insert(b, ha + step);
                        queue.push_back(b);
                    }
                }
            }
        }
        for (v, x) in h {
            out.insert(v, x);
        }
    }
    let tol = HOLOMORPHIC_TOL * scale.max(f64::MIN_POSITIVE) * g.delta() * (n_edges as f64).max(1.0);
    if defect > tol {
        return Err(Error::NotHolomorphic { residual: defect });
    }
    Ok(out)
}
