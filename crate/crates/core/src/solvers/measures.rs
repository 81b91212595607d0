use std::sync::Arc;

use super::system::{DirichletSystem, DomainFunction, SolverConfig};
use crate::domain::{discretize, DiscreteDomain, Region};
use crate::error::{Error, Result};
use crate::isograph::{Color, QuadGraph};
use crate::kernels::{ContourSpec, KernelCache};

/// Harmonic extension of per-pair boundary data.
pub fn solve_dirichlet(d: &DiscreteDomain, f: &[f64]) -> Result<DomainFunction> {
    DirichletSystem::new(d, SolverConfig::default())?.solve(f)
}

fn indicator(d: &DiscreteDomain, set: &[usize]) -> Result<Vec<f64>> {
    let mut f = vec![0.0; d.pairs().len()];
    for &p in set {
        *f.get_mut(p).ok_or(Error::NotOnBoundary { a: p, a_int: usize::MAX })? = 1.0;
    }
    Ok(f)
}

/// `ω(u; E; Ω)` for a set of boundary pair indices.
pub fn harmonic_measure(d: &DiscreteDomain, u: usize, set: &[usize]) -> Result<f64> {
    let sys = DirichletSystem::new(d, SolverConfig::default())?;
    harmonic_measure_with(&sys, u, set)
}

pub fn harmonic_measure_with(sys: &DirichletSystem, u: usize, set: &[usize]) -> Result<f64> {
    let d = sys.domain();
    if !d.is_interior(u) {
        return Err(Error::Precondition(format!("vertex {u} is not interior")));
    }
    let h = sys.solve(&indicator(d, set)?)?;
    Ok(h.at(d, u).unwrap())
}

/// Domain Green's function `G_Γ(·; v0) − Σ_a ω(·; {a}) G_Γ(a; v0)`, zero on
/// the boundary pairs.
pub fn green_domain(d: &DiscreteDomain, v0: usize, spec: &ContourSpec) -> Result<DomainFunction> {
    let cache = KernelCache::new(d.graph_arc().clone(), *spec);
    let sys = DirichletSystem::new(d, SolverConfig::default())?;
    green_domain_with(&sys, &cache, v0)
}

pub fn green_domain_with(sys: &DirichletSystem, cache: &KernelCache, v0: usize) -> Result<DomainFunction> {
    let d = sys.domain();
    if !d.is_interior(v0) {
        return Err(Error::Precondition(format!("vertex {v0} is not interior")));
    }
    let exterior: Vec<usize> = d.pairs().iter().map(|p| p.a).collect();
    let on_boundary = cache.green_many(&exterior, v0)?;
    let free = cache.green_many(d.interior(), v0)?;
    let ext = sys.solve(&on_boundary)?;
    let interior = free.iter().zip(&ext.interior).map(|(a, b)| a - b).collect();
    let boundary = on_boundary.iter().zip(&ext.boundary).map(|(a, b)| a - b).collect();
    Ok(DomainFunction { interior, boundary })
}

/// Domain Green's function from the linear system alone: `−A⁻¹ e_{v0}`.
pub fn green_domain_direct(sys: &DirichletSystem, v0: usize) -> Result<DomainFunction> {
    let g = sys.unit_response(v0)?;
    Ok(DomainFunction {
        interior: g.into_iter().map(|x| -x).collect(),
        boundary: vec![0.0; sys.domain().pairs().len()],
    })
}

/// Smallest admissible normalizing value in [`poisson_interior`].
pub const POISSON_FLOOR: f64 = 1e-14;

/// Poisson kernel at pair `a` normalized to 1 at interior vertex `v`.
pub fn poisson_interior(d: &DiscreteDomain, v: usize, a: usize) -> Result<DomainFunction> {
    let sys = DirichletSystem::new(d, SolverConfig::default())?;
    poisson_interior_with(&sys, v, a)
}

pub fn poisson_interior_with(sys: &DirichletSystem, v: usize, a: usize) -> Result<DomainFunction> {
    let d = sys.domain();
    if !d.is_interior(v) {
        return Err(Error::Precondition(format!("vertex {v} is not interior")));
    }
    let h = sys.solve(&indicator(d, &[a])?)?;
    let norm = h.at(d, v).unwrap();
    if !(norm >= POISSON_FLOOR) {
        return Err(Error::IllConditioned(format!("harmonic measure {norm:.3e} at the normalization point")));
    }
    Ok(scale(h, 1.0 / norm))
}

fn scale(mut h: DomainFunction, c: f64) -> DomainFunction {
    h.interior.iter_mut().chain(h.boundary.iter_mut()).for_each(|x| *x *= c);
    h
}

/// Truncated half-plane function: harmonic in the box `(−s, s) × (0, t)`,
/// zero on the lower boundary and `Im a` on the rest.
#[derive(Clone, Debug)]
pub struct HalfPlaneIm {
    pub domain: DiscreteDomain,
    pub values: DomainFunction,
}

impl HalfPlaneIm {
    /// Value at an interior vertex of the box, or 0 at a lower boundary vertex.
    pub fn value(&self, v: usize) -> Option<f64> {
        self.values.value(&self.domain, v)
    }
}

/// Approximation of the discrete half-plane function `ℑ` on a box of
/// half-width `s` and height `t`.
pub fn gim_approx(g: &Arc<QuadGraph>, s: f64, t: f64) -> Result<HalfPlaneIm> {
    let domain = discretize(g, &Region::Rect { s, t })?;
    let f: Vec<f64> = domain
        .pairs()
        .iter()
        .map(|p| {
            let y = g.position(p.a).im;
            if y <= 0.0 {
                0.0
            } else {
                y
            }
        })
        .collect();
    let values = solve_dirichlet(&domain, &f)?;
    Ok(HalfPlaneIm { domain, values })
}

/// Largest difference between two truncations at the given vertices.
pub fn gim_truncation_error(small: &HalfPlaneIm, large: &HalfPlaneIm, vertices: &[usize]) -> Result<f64> {
    let mut worst: f64 = 0.0;
    for &v in vertices {
        let a = small.value(v).ok_or(Error::MissingValues(v))?;
        let b = large.value(v).ok_or(Error::MissingValues(v))?;
        worst = worst.max((a - b).abs());
    }
    Ok(worst)
}

/// Checks that `d` contains the rectangle `(−s, s) × (0, t)` and that its
/// boundary inside the window `|Re| < s` is the real-axis boundary of the
/// half-plane. Returns the lower pairs of `d` inside the window.
pub fn check_layout(d: &DiscreteDomain, s: f64, t: f64) -> Result<Vec<usize>> {
    let g = d.graph();
    let in_window = |v: usize| g.position(v).re.abs() < s;
    for u in g.vertices_of_color(Color::Gamma) {
        let p = g.position(u);
        if p.re.abs() < s && p.im > 0.0 && p.im < t && !d.is_interior(u) {
            return Err(Error::LayoutViolation(format!("vertex {u} of the rectangle is not interior")));
        }
    }
    for &u in d.interior() {
        if in_window(u) && g.position(u).im <= 0.0 {
            return Err(Error::LayoutViolation(format!("interior vertex {u} lies below the real axis")));
        }
    }
    let mut lower = Vec::new();
    for (i, p) in d.pairs().iter().enumerate() {
        if !in_window(p.a) || g.position(p.a).im >= t {
            continue;
        }
        if g.position(p.a).im > 0.0 {
            return Err(Error::LayoutViolation(format!("boundary vertex {} inside the rectangle", p.a)));
        }
        lower.push(i);
    }
    // every half-plane edge leaving an interior vertex of the window downwards
    // must be a pair of d
    for &u in d.interior() {
        if !in_window(u) || g.position(u).im >= t {
            continue;
        }
        for (v, _, _) in g.neighbors(u) {
            if g.position(v).im <= 0.0 && d.pair_index(v, u).is_none() {
                return Err(Error::LayoutViolation(format!("edge {u}–{v} crosses the real axis inside Ω")));
            }
        }
    }
    Ok(lower)
}

/// Poisson kernel at pair `a` normalized by `P(o_int) = ℑ(o_int)`.
pub fn poisson_boundary(
    d: &DiscreteDomain,
    a: usize,
    o: usize,
    gim: &HalfPlaneIm,
    s: f64,
    t: f64,
) -> Result<DomainFunction> {
    let sys = DirichletSystem::new(d, SolverConfig::default())?;
    poisson_boundary_with(&sys, a, o, gim, s, t)
}

pub fn poisson_boundary_with(
    sys: &DirichletSystem,
    a: usize,
    o: usize,
    gim: &HalfPlaneIm,
    s: f64,
    t: f64,
) -> Result<DomainFunction> {
    let d = sys.domain();
    if !Arc::ptr_eq(d.graph_arc(), gim.domain.graph_arc()) {
        return Err(Error::Precondition("the half-plane function lives on another graph".into()));
    }
    let lower = check_layout(d, s, t)?;
    if a >= d.pairs().len() || o >= d.pairs().len() {
        return Err(Error::NotOnBoundary { a: a.max(o), a_int: usize::MAX });
    }
    if lower.contains(&a) {
        return Err(Error::LayoutViolation(format!("pair {a} lies on the lower boundary")));
    }
    if !lower.contains(&o) {
        return Err(Error::LayoutViolation(format!("pair {o} is not on the lower boundary")));
    }
    let o_int = d.pairs()[o].a_int;
    let target = gim.value(o_int).ok_or(Error::MissingValues(o_int))?;
    let h = sys.solve(&indicator(d, &[a])?)?;
    let norm = h.at(d, o_int).unwrap();
    if !(norm >= POISSON_FLOOR) {
        return Err(Error::IllConditioned(format!("harmonic measure {norm:.3e} at o_int")));
    }
    Ok(scale(h, target / norm))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::isograph::{random_isoradial, square_lattice, C64};
    use crate::kernels::KernelCache;

    #[test]
    fn full_boundary_has_measure_one() {
        let g = Arc::new(random_isoradial(3, 12, 0.4, 1.0).unwrap());
        let d = discretize(&g, &Region::Disc { cx: 0.0, cy: 0.0, r: 7.0 }).unwrap();
        let all: Vec<usize> = (0..d.pairs().len()).collect();
        let u = d.nearest_interior(C64::new(2.0, 1.0));
        assert!((harmonic_measure(&d, u, &all).unwrap() - 1.0).abs() < 1e-12);
        assert_eq!(harmonic_measure(&d, u, &[]).unwrap(), 0.0);
    }

    #[test]
    fn green_function_agrees_with_the_direct_solve() {
        let g = Arc::new(random_isoradial(8, 10, 0.4, 1.0).unwrap());
        let d = discretize(&g, &Region::Disc { cx: 0.0, cy: 0.0, r: 5.0 }).unwrap();
        let v0 = d.nearest_interior(C64::new(0.0, 0.0));
        let sys = DirichletSystem::new(&d, SolverConfig::default()).unwrap();
        let cache = KernelCache::new(g.clone(), ContourSpec::default());
        let gq = green_domain_with(&sys, &cache, v0).unwrap();
        let gd = green_domain_direct(&sys, v0).unwrap();
        assert!(gq.boundary.iter().all(|x| x.abs() < 1e-12));
        for (a, b) in gq.interior.iter().zip(&gd.interior) {
            assert!((a - b).abs() < 1e-8, "{a} vs {b}");
            assert!(*b < 0.0);
        }
    }

    #[test]
    fn poisson_interior_normalization() {
        let g = Arc::new(square_lattice(1.0, 10).unwrap());
        let d = discretize(&g, &Region::Disc { cx: 0.0, cy: 0.0, r: 6.0 }).unwrap();
        let v = d.nearest_interior(C64::new(0.0, 0.0));
        let a = d.nearest_pair(C64::new(6.0, 0.0));
        let p = poisson_interior(&d, v, a).unwrap();
        assert_eq!(p.at(&d, v), Some(1.0));
        assert!(p.interior.iter().all(|&x| x >= 0.0));
        for (i, &b) in p.boundary.iter().enumerate() {
            assert!(if i == a { b > 1.0 } else { b == 0.0 });
        }
        let single = discretize(&g, &Region::Disc { cx: 0.0, cy: 0.0, r: 1.0 }).unwrap();
        let p = poisson_interior(&single, single.interior()[0], 2).unwrap();
        assert_eq!(p.interior, vec![1.0]);
    }

    #[test]
    fn half_plane_function_is_nonnegative() {
        let g = Arc::new(square_lattice(1.0, 40).unwrap());
        let h = gim_approx(&g, 30.0, 30.0).unwrap();
        assert!(h.values.interior.iter().all(|&x| x >= -1e-14));
        for (k, &u) in h.domain.interior().iter().enumerate() {
            let p = g.position(u);
            if p.re.abs() < 10.0 && p.im < 10.0 {
                assert!((h.values.interior[k] - p.im).abs() <= 2.0);
            }
        }
    }

    #[test]
    fn layout_checks() {
        let g = Arc::new(square_lattice(1.0, 30).unwrap());
        let gim = gim_approx(&g, 24.0, 24.0).unwrap();
        let d = discretize(&g, &Region::Rect { s: 8.0, t: 6.0 }).unwrap();
        let lower = check_layout(&d, 4.0, 3.0).unwrap();
        assert!(!lower.is_empty());
        let o = d.nearest_pair(C64::new(0.0, 0.0));
        let a = d.nearest_pair(C64::new(0.0, 6.0));
        let p = poisson_boundary(&d, a, o, &gim, 4.0, 3.0).unwrap();
        let o_int = d.pairs()[o].a_int;
        assert!((p.at(&d, o_int).unwrap() - gim.value(o_int).unwrap()).abs() < 1e-15);
        assert!(matches!(poisson_boundary(&d, o, o, &gim, 4.0, 3.0), Err(Error::LayoutViolation(_))));
        assert!(matches!(check_layout(&d, 10.0, 3.0), Err(Error::LayoutViolation(_))));
        let disc = discretize(&g, &Region::Disc { cx: 0.0, cy: 3.0, r: 5.0 }).unwrap();
        assert!(matches!(check_layout(&disc, 2.0, 1.0), Err(Error::LayoutViolation(_))));
    }
}
