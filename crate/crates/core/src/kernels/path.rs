use std::cmp::Ordering;
use std::collections::{BinaryHeap, HashMap, VecDeque};
use std::f64::consts::{FRAC_PI_2, PI, TAU};

use crate::error::{Error, Result};
use crate::isograph::{QuadGraph, C64};

/// Lattice path `u0 … u` along rhombus sides, used to evaluate discrete
/// exponentials. `direction` is the reference angle the steps are checked
/// against.
#[derive(Clone, Debug, PartialEq)]
pub struct ExponentialPath {
    pub steps: Vec<usize>,
    pub direction: f64,
}

impl ExponentialPath {
    pub fn start(&self) -> usize {
        self.steps[0]
    }

    pub fn end(&self) -> usize {
        *self.steps.last().expect("paths are never empty")
    }

    /// Step vectors `u_{j+1} − u_j`.
    pub fn increments(&self, g: &QuadGraph) -> Vec<C64> {
        self.steps.windows(2).map(|w| g.position(w[1]) - g.position(w[0])).collect()
    }
}

/// Signed angle `a − b` wrapped to `(−π, π]`.
pub fn angle_diff(a: f64, b: f64) -> f64 {
    let d = (a - b + PI).rem_euclid(TAU) - PI;
    if d == -PI {
        PI
    } else {
        d
    }
}

fn forward(step: C64, dir: f64) -> bool {
    angle_diff(step.arg(), dir).abs() < FRAC_PI_2
}

#[derive(PartialEq)]
struct Entry(f64, usize);

impl Eq for Entry {}

impl PartialOrd for Entry {
    fn partial_cmp(&self, other: &Self) -> Option<Ordering> {
        Some(self.cmp(other))
    }
}

impl Ord for Entry {
    // min-heap on the distance to the target
    fn cmp(&self, other: &Self) -> Ordering {
        other.0.total_cmp(&self.0).then(other.1.cmp(&self.1))
    }
}

/// Admissible path from `u0` to `u` with respect to `arg(u − u0)`.
pub fn choose_path(g: &QuadGraph, u0: usize, u: usize) -> Result<ExponentialPath> {
    let dir = (g.position(u) - g.position(u0)).arg();
    choose_path_toward(g, u0, u, dir)
}

/// Admissible path from `from` to `to` whose steps are checked against the
/// angle `dir`: every step either points less than π/2 away from `dir`, or
/// is the first half of a rhombus crossing whose diagonal does.
pub fn choose_path_toward(g: &QuadGraph, from: usize, to: usize, dir: f64) -> Result<ExponentialPath> {
    if from == to {
        return Ok(ExponentialPath { steps: vec![from], direction: dir });
    }
    let target = g.position(to);
    // parent[x] = (previous vertex, optional intermediate vertex)
    let mut parent: HashMap<usize, (usize, Option<usize>)> = HashMap::new();
    let mut heap = BinaryHeap::from([Entry((g.position(from) - target).norm(), from)]);
    parent.insert(from, (usize::MAX, None));
    let mut found = false;
    while let Some(Entry(_, x)) = heap.pop() {
        if x == to {
            found = true;
            break;
        }
        let px = g.position(x);
        for c in g.corners_of(x) {
            for mid in [c.next, c.prev] {
                let pm = g.position(mid);
                if forward(pm - px, dir) {
                    if let std::collections::hash_map::Entry::Vacant(e) = parent.entry(mid) {
                        e.insert((x, None));
                        heap.push(Entry((pm - target).norm(), mid));
                    }
                } else {
                    let po = g.position(c.opposite);
                    if forward(po - px, dir) && !parent.contains_key(&c.opposite) {
                        parent.insert(c.opposite, (x, Some(mid)));
                        heap.push(Entry((po - target).norm(), c.opposite));
                    }
                }
            }
        }
    }
    if !found {
        return Err(Error::NoAdmissiblePath {
            from,
            to,
            reason: format!("search exhausted {} vertices", parent.len()),
        });
    }
    let mut rev = vec![to];
    let mut x = to;
    while x != from {
        let (p, mid) = parent[&x];
        if let Some(m) = mid {
            rev.push(m);
        }
        rev.push(p);
        x = p;
    }
    rev.reverse();
    let path = ExponentialPath { steps: rev, direction: dir };
    certify(g, &path)?;
    Ok(path)
}

/// Shortest path (in steps) whose steps all deviate from `dir` by less than
/// `max_dev`. Used near the rhombus of a Cauchy kernel, where no monotone
/// path exists.
pub fn relaxed_path(g: &QuadGraph, from: usize, to: usize, dir: f64, max_dev: f64) -> Result<ExponentialPath> {
    let mut parent: HashMap<usize, usize> = HashMap::from([(from, usize::MAX)]);
    let mut queue = VecDeque::from([from]);
    let radius = 4.0 * (g.position(to) - g.position(from)).norm() + 4.0 * g.delta();
    while let Some(x) = queue.pop_front() {
        if x == to {
            break;
        }
        for y in g.lambda_neighbors(x) {
            let step = g.position(y) - g.position(x);
            if parent.contains_key(&y)
                || angle_diff(step.arg(), dir).abs() >= max_dev
                || (g.position(y) - g.position(from)).norm() > radius
            {
                continue;
            }
            parent.insert(y, x);
            queue.push_back(y);
        }
    }
    if !parent.contains_key(&to) {
        return Err(Error::NoAdmissiblePath { from, to, reason: "no path within the angular margin".into() });
    }
    let mut rev = vec![to];
    while *rev.last().unwrap() != from {
        rev.push(parent[rev.last().unwrap()]);
    }
    rev.reverse();
    Ok(ExponentialPath { steps: rev, direction: dir })
}

/// Re-check the admissibility condition on every step of a path.
pub fn certify(g: &QuadGraph, path: &ExponentialPath) -> Result<()> {
    let s = &path.steps;
    let fail = |j: usize, why: &str| Error::NoAdmissiblePath {
        from: path.start(),
        to: path.end(),
        reason: format!("step {j}: {why}"),
    };
    for j in 0..s.len().saturating_sub(1) {
        let step = g.position(s[j + 1]) - g.position(s[j]);
        if (step.norm() - g.delta()).abs() > 1e-9 * g.delta() {
            return Err(fail(j, "not a rhombus side"));
        }
        if forward(step, path.direction) {
            continue;
        }
        let crossing = j + 2 < s.len()
            && g.rhombus_between(s[j], s[j + 2]).is_some()
            && forward(g.position(s[j + 2]) - g.position(s[j]), path.direction);
        if !crossing {
            return Err(fail(j, "neither the step nor its rhombus diagonal points forward"));
        }
    }
    Ok(())
}

/// `Π (1 + λs/2)/(1 − λs/2)` over the increments `s` of a path.
pub fn exponential_along(steps: &[C64], lambda: C64) -> C64 {
    let mut e = C64::new(1.0, 0.0);
    for &s in steps {
        let h = 0.5 * lambda * s;
        e *= (1.0 + h) / (1.0 - h);
    }
    e
}

/// Discrete exponential `e(λ, u; u0)`.
pub fn discrete_exponential(g: &QuadGraph, lambda: C64, u: usize, u0: usize) -> Result<C64> {
    let path = choose_path(g, u0, u)?;
    let steps = path.increments(g);
    for &s in &steps {
        if (1.0 - 0.5 * lambda * s).norm() < 1e-12 {
            return Err(Error::PoleHit);
        }
    }
    Ok(exponential_along(&steps, lambda))
}
