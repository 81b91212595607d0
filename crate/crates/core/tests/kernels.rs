use std::f64::consts::PI;
use std::sync::Arc;

use isoradial::domain::{b_edges, discretize, interior_diamonds, w_edges, Region};
use isoradial::function::{LatticeFunction, Support};
use isoradial::isograph::{random_isoradial, square_lattice, Color, QuadGraph, C64};
use isoradial::kernels::{
    cauchy_kernel, continuous_cauchy_ref, continuous_green_ref, free_green, ContourSpec, KernelCache,
};
use isoradial::operators::{
    cauchy_projection, cauchy_reconstruct, d_lambda_to_diamond, dbar_lambda_to_diamond, on_diamonds,
};

fn origin(g: &QuadGraph) -> usize {
    g.nearest(C64::new(0.0, 0.0), Color::Gamma).unwrap()
}

/// Least-squares slope of log y against log x.
fn slope(xs: &[f64], ys: &[f64]) -> f64 {
    let n = xs.len() as f64;
    let lx: Vec<f64> = xs.iter().map(|x| x.ln()).collect();
    let ly: Vec<f64> = ys.iter().map(|y| y.ln()).collect();
    let mx = lx.iter().sum::<f64>() / n;
    let my = ly.iter().sum::<f64>() / n;
    let sxy: f64 = lx.iter().zip(&ly).map(|(a, b)| (a - mx) * (b - my)).sum();
    let sxx: f64 = lx.iter().map(|a| (a - mx) * (a - mx)).sum();
    sxy / sxx
}

#[test]
fn green_laplacian_is_a_unit_mass() {
    for g in [square_lattice(1.0, 4).unwrap(), random_isoradial(3, 6, 0.4, 0.5).unwrap()] {
        let u0 = origin(&g);
        let spec = ContourSpec::default();
        let g0 = free_green(&g, u0, u0, &spec).unwrap();
        let sum: f64 = g.neighbors(u0).map(|(v, t, _)| t * (free_green(&g, v, u0, &spec).unwrap() - g0)).sum();
        assert!((sum - 1.0).abs() < 1e-7, "{sum}");
    }
}

#[test]
fn green_is_harmonic_away_from_the_pole() {
    let g = random_isoradial(14, 12, 0.4, 1.0).unwrap();
    let u0 = origin(&g);
    let cache = KernelCache::new(Arc::new(g.clone()), ContourSpec::default());
    for u in g.vertices_of_color(Color::Gamma) {
        if u == u0 || g.position(u).norm() > 5.0 {
            continue;
        }
        let gu = cache.green(u, u0).unwrap();
        let lap: f64 = g.neighbors(u).map(|(v, t, _)| t * (cache.green(v, u0).unwrap() - gu)).sum();
        assert!(lap.abs() < 1e-9, "{lap}");
    }
}

#[test]
fn green_matches_the_logarithm_with_quadratic_error() {
    let g = Arc::new(random_isoradial(6, 56, 0.4, 1.0).unwrap());
    let u0 = origin(&g);
    let p0 = g.position(u0);
    let us: Vec<usize> = g
        .vertices_of_color(Color::Gamma)
        .filter(|&u| {
            let r = (g.position(u) - p0).norm();
            (2.0..=50.0).contains(&r)
        })
        .step_by(7)
        .collect();
    let cache = KernelCache::new(g.clone(), ContourSpec::default());
    let vals = cache.green_many(&us, u0).unwrap();
    let mut rs = Vec::new();
    let mut errs = Vec::new();
    let mut worst: f64 = 0.0;
    for (&u, v) in us.iter().zip(vals) {
        let r = (g.position(u) - p0).norm();
        let e = (v - continuous_green_ref(g.position(u), p0)).abs();
        worst = worst.max(e * r * r);
        rs.push(r);
        errs.push(e.max(1e-16));
    }
    assert!(worst < 1.0, "E·r²/δ² reached {worst}");
    // the error envelope decays like r⁻²: fit the largest errors per radius band
    let mut bands: Vec<(f64, f64)> = Vec::new();
    for lo in [2.0, 4.0, 8.0, 16.0, 32.0] {
        let hi = 2.0 * lo;
        let m = rs
            .iter()
            .zip(&errs)
            .filter(|(r, _)| **r >= lo && **r < hi)
            .map(|(_, e)| *e)
            .fold(0.0, f64::max);
        if m > 0.0 {
            bands.push((lo * 2f64.sqrt(), m));
        }
    }
    let (x, y): (Vec<f64>, Vec<f64>) = bands.into_iter().unzip();
    let s = slope(&x, &y);
    assert!(s <= -1.7, "slope {s}");
}

fn kernel_on(g: &QuadGraph, z0: usize, radius: f64) -> LatticeFunction {
    let c0 = g.center(z0);
    let mut k = LatticeFunction::new(Support::Lambda);
    for v in 0..g.num_vertices() {
        if (g.position(v) - c0).norm() < radius {
            k.insert(v, cauchy_kernel(g, v, z0, &ContourSpec::default()).unwrap());
        }
    }
    k
}

#[test]
fn cauchy_kernel_is_holomorphic_off_its_pole() {
    let g = random_isoradial(10, 12, 0.4, 1.0).unwrap();
    let z0 = g.nearest_rhombus(C64::new(0.2, 0.1)).unwrap();
    let k = kernel_on(&g, z0, 6.0);
    let w = g.weights();
    let mut count = 0;
    for z in 0..g.num_rhombi() {
        let Ok(d) = dbar_lambda_to_diamond(&g, &k, z) else { continue };
        if z == z0 {
            assert!((w.mu_diamond[z] * d - 1.0).norm() < 1e-8);
        } else {
            assert!(d.norm() < 1e-7, "rhombus {z}: {d}");
            count += 1;
        }
    }
    assert!(count > 50);
}

#[test]
fn cauchy_kernel_far_field() {
    let g = random_isoradial(2, 40, 0.4, 1.0).unwrap();
    let z0 = g.nearest_rhombus(C64::new(0.0, 0.0)).unwrap();
    let c = g.rhombus(z0).corners.map(|v| g.position(v));
    let c0 = g.center(z0);
    let mut rs = Vec::new();
    let mut es = Vec::new();
    for (lo, hi) in [(3.0, 4.0), (6.0, 8.0), (12.0, 16.0), (24.0, 32.0)] {
        let mut worst: f64 = 0.0;
        for v in (0..g.num_vertices()).step_by(3) {
            let r = (g.position(v) - c0).norm();
            if r < lo || r >= hi {
                continue;
            }
            let tau = if g.color(v) == Color::Gamma { c[0] - c[2] } else { c[1] - c[3] };
            let k = cauchy_kernel(&g, v, z0, &ContourSpec::default()).unwrap();
            let e = (k - continuous_cauchy_ref(g.position(v), c0, tau / tau.norm())).norm();
            worst = worst.max(e * r * r);
        }
        rs.push(0.5 * (lo + hi));
        es.push(worst / (0.5 * (lo + hi)).powi(2));
    }
    let s = slope(&rs, &es);
    assert!(s <= -1.7, "slope {s}, errors {es:?}");
}

#[test]
fn cauchy_formula_reconstructs_holomorphic_functions() {
    let g = Arc::new(random_isoradial(7, 16, 0.4, 1.0).unwrap());
    let d = discretize(&g, &Region::Disc { cx: 0.1, cy: 0.2, r: 6.0 }).unwrap();
    let z0 = g.nearest_rhombus(C64::new(0.4, -0.3)).unwrap();
    assert!(interior_diamonds(&d).contains(&z0));
    let cache = KernelCache::new(g.clone(), ContourSpec::default());
    let kernel = |v: usize| cache.cauchy(v, z0);
    let one = LatticeFunction::sample(&g, Support::Diamond, |_| C64::new(1.0, 0.0));
    let got = cauchy_reconstruct(&d, &one, z0, &kernel).unwrap();
    assert!((got - 1.0).norm() < 1e-8, "{got}");
    let two_z = LatticeFunction::sample(&g, Support::Diamond, |p| 2.0 * p);
    let got = cauchy_reconstruct(&d, &two_z, z0, &kernel).unwrap();
    assert!((got - 2.0 * g.center(z0)).norm() < 1e-7, "{got}");
    assert!(!b_edges(&d).is_empty() && !w_edges(&d).is_empty());
}

#[test]
fn projection_formula_approximates_gradients() {
    // F = ∂H with H real and discrete harmonic on Γ, so F = 𝓑F is holomorphic
    let g = Arc::new(random_isoradial(9, 30, 0.4, 1.0).unwrap());
    let h = LatticeFunction::sample(&g, Support::Gamma, |p| {
        C64::new((C64::new(1.0, 1.0) * p * p).re + 3.0 * p.im, 0.0)
    });
    let f = on_diamonds(&g, |z| d_lambda_to_diamond(&g, &h, z));
    let cache = KernelCache::new(g.clone(), ContourSpec::default());
    let z0 = g.nearest_rhombus(C64::new(0.3, 0.2)).unwrap();
    let kernel = |v: usize| cache.cauchy(v, z0);
    let mut gaps = Vec::new();
    for r in [6.0, 12.0] {
        let d = discretize(&g, &Region::Disc { cx: 0.0, cy: 0.0, r }).unwrap();
        let exact = cauchy_reconstruct(&d, &f, z0, &kernel).unwrap();
        assert!((exact - f.get(z0).unwrap()).norm() < 1e-7 * r);
        let approx = cauchy_projection(&d, &f, z0).unwrap();
        // M ~ 3r, L ~ 4πr, dist ~ r, so MδL/d² ~ 12π
        gaps.push((approx - f.get(z0).unwrap()).norm() / (12.0 * PI));
    }
    for gap in gaps {
        assert!(gap < 1.0, "{gap}");
    }
}

#[test]
fn free_green_is_the_harmonic_extension_of_its_boundary_values() {
    use isoradial::solvers::{green_domain_direct, DirichletSystem, SolverConfig};
    let box_60 = Region::Polygon { points: vec![[-60.0, -60.0], [60.0, -60.0], [60.0, 60.0], [-60.0, 60.0]] };
    for g in [square_lattice(1.0, 64).unwrap(), random_isoradial(7, 90, 0.4, 1.0).unwrap()] {
        let g = Arc::new(g);
        let u0 = origin(&g);
        let cache = KernelCache::new(g.clone(), ContourSpec::default());
        let d = discretize(&g, &box_60).unwrap();
        let sys = DirichletSystem::new(&d, SolverConfig::default()).unwrap();
        let exterior: Vec<usize> = d.pairs().iter().map(|p| p.a).collect();
        let data = cache.green_many(&exterior, u0).unwrap();
        let harmonic = sys.solve(&data).unwrap();
        let pole = green_domain_direct(&sys, u0).unwrap();
        let ring: Vec<usize> = d
            .interior()
            .iter()
            .copied()
            .filter(|&u| ((g.position(u) - g.position(u0)).norm() - 30.0).abs() < 1.0)
            .step_by(7)
            .take(40)
            .collect();
        assert!(ring.len() >= 10);
        let exact = cache.green_many(&ring, u0).unwrap();
        for (&u, want) in ring.iter().zip(exact) {
            let got = harmonic.at(&d, u).unwrap() + pole.at(&d, u).unwrap();
            assert!((got - want).abs() < 1e-6, "{u}: {got} vs {want}");
        }
    }
}
