mod common;

use std::f64::consts::{FRAC_PI_2, TAU};

use proptest::prelude::*;

use common::{families, graph, weighted_laplacian};
use isoradial::domain::{discretize, pairs_in_angle, split_by_rect, Region};
use isoradial::harness::LatticeSpec;
use isoradial::kernels::{ContourSpec, KernelCache};
use isoradial::solvers::{
    check_layout, gim_approx, gim_truncation_error, green_domain_with, harmonic_measure_with, harnack_check,
    mean_value_check, poisson_boundary_with, poisson_interior_with, solve_dirichlet, DirichletSystem, SolverConfig,
};
use isoradial::C64;

fn unit_disc() -> Region {
    Region::Disc { cx: 0.0, cy: 0.0, r: 1.0 }
}

#[test]
fn quarter_arcs_are_seen_from_the_half_radius_disc() {
    for lat in families() {
        for delta in [0.1, 0.05] {
            let g = graph(lat, delta, 1.2);
            let d = discretize(&g, &unit_disc()).unwrap();
            let sys = DirichletSystem::new(&d, SolverConfig::default()).unwrap();
            let inner: Vec<usize> = d.interior().iter().copied().filter(|&u| g.position(u).norm() < 0.5).collect();
            for k in 0..4 {
                let t0 = k as f64 * FRAC_PI_2;
                let set = pairs_in_angle(&d, C64::new(0.0, 0.0), t0, t0 + FRAC_PI_2);
                let h = sys.solve(&indicator(d.pairs().len(), &set)).unwrap();
                let worst = inner.iter().map(|&u| h.at(&d, u).unwrap()).fold(f64::INFINITY, f64::min);
                assert!(worst >= 0.05, "{lat} δ={delta} arc {k}: {worst}");
            }
        }
    }
}

fn indicator(n: usize, set: &[usize]) -> Vec<f64> {
    let mut f = vec![0.0; n];
    for &p in set {
        f[p] = 1.0;
    }
    f
}

#[test]
fn green_function_of_a_disc() {
    for lat in families() {
        let g = graph(lat, 0.1, 1.2);
        let d = discretize(&g, &Region::Disc { cx: 0.05, cy: -0.1, r: 0.9 }).unwrap();
        let sys = DirichletSystem::new(&d, SolverConfig::default()).unwrap();
        let cache = KernelCache::new(g.clone(), ContourSpec::default());
        let v0 = d.nearest_interior(C64::new(0.2, 0.1));
        let green = green_domain_with(&sys, &cache, v0).unwrap();
        assert!(green.boundary.iter().all(|x| x.abs() < 1e-8));
        for &u in d.interior() {
            let lap = weighted_laplacian(&d, &green, u);
            let expected = if u == v0 { 1.0 } else { 0.0 };
            assert!((lap - expected).abs() < 1e-8, "{lat}: {lap} at {u}");
            assert!(green.at(&d, u).unwrap() < 0.0);
        }
        // harmonic measure of single pairs seen from the pole
        let row = sys.harmonic_measure_row(v0).unwrap();
        for (i, p) in d.pairs().iter().enumerate() {
            let expected = -p.weight * green.at(&d, p.a_int).unwrap();
            assert!((row[i] - expected).abs() < 1e-7, "{lat} pair {i}: {} vs {expected}", row[i]);
        }
    }
}

#[test]
fn single_pair_measures_scale_like_delta_over_radius() {
    for lat in families() {
        let (mut lo, mut hi) = (f64::INFINITY, 0.0f64);
        for delta in [0.1, 0.05] {
            let g = graph(lat, delta, 1.2);
            let d = discretize(&g, &unit_disc()).unwrap();
            let sys = DirichletSystem::new(&d, SolverConfig::default()).unwrap();
            let u0 = d.nearest_interior(C64::new(0.0, 0.0));
            assert_eq!(g.position(u0), C64::new(0.0, 0.0));
            for w in sys.harmonic_measure_row(u0).unwrap() {
                lo = lo.min(w / delta);
                hi = hi.max(w / delta);
            }
        }
        // the two-sided comparison holds with lattice-dependent constants
        assert!(lo > 0.005 && hi < 1.0, "{lat}: [{lo}, {hi}]");
    }
}

#[test]
fn half_plane_function() {
    for lat in families() {
        for delta in [0.05, 0.025] {
            let g = graph(lat, delta, 4.0);
            let gim = gim_approx(&g, 1.5, 1.5).unwrap();
            let d = &gim.domain;
            assert!(gim.values.interior.iter().all(|&x| x >= 0.0));
            // inner third of the box
            let inner: Vec<usize> =
                d.interior().iter().copied().filter(|&u| g.position(u).re.abs() < 0.5 && g.position(u).im < 0.5).collect();
            for &u in &inner {
                let gap = (gim.value(u).unwrap() - g.position(u).im).abs();
                assert!(gap <= 2.0 * delta, "{lat} δ={delta}: gap {gap}");
                let y = g.position(u).im;
                if lat == LatticeSpec::Square && (3.0 * delta..=5.0 * delta).contains(&y) {
                    let v = gim.value(u).unwrap();
                    assert!(v >= 0.2 * delta && v <= 5.0 * delta);
                }
            }
            // boundary-adjacent vertices
            let lower = check_layout(d, 0.5, 0.5).unwrap();
            for p in lower {
                let pair = d.pairs()[p];
                if g.position(pair.a).re.abs() < 0.5 {
                    let v = gim.value(pair.a_int).unwrap();
                    assert!(v >= 0.2 * delta && v <= 5.0 * delta, "{lat} δ={delta}: {v}");
                }
            }
            // truncation: 3× against 5× box near the lower boundary
            let large = gim_approx(&g, 2.5, 2.5).unwrap();
            let used: Vec<usize> =
                inner.iter().copied().filter(|&u| g.position(u).im < 5.0 * delta).collect();
            let err = gim_truncation_error(&gim, &large, &used).unwrap();
            assert!(err < 0.1 * delta, "{lat} δ={delta}: truncation {err}");
            // probability vector on the box
            let u = d.nearest_interior(C64::new(0.1, 0.3));
            let row = DirichletSystem::new(d, SolverConfig::default()).unwrap().harmonic_measure_row(u).unwrap();
            assert!((row.iter().sum::<f64>() - 1.0).abs() < 1e-10);
        }
    }
}

#[test]
fn boundary_poisson_kernel_normalization() {
    for lat in families() {
        let g = graph(lat, 0.05, 4.5);
        let gim = gim_approx(&g, 1.5, 1.5).unwrap();
        let d = discretize(&g, &Region::HalfDisc { r: 1.0 }).unwrap();
        let sys = DirichletSystem::new(&d, SolverConfig::default()).unwrap();
        let o = d.nearest_pair(C64::new(0.0, 0.0));
        let a = d.nearest_pair(C64::new(0.3, 0.95));
        let p = poisson_boundary_with(&sys, a, o, &gim, 0.5, 0.5).unwrap();
        let o_int = d.pairs()[o].a_int;
        assert!((p.at(&d, o_int).unwrap() - gim.value(o_int).unwrap()).abs() < 1e-12);
        assert!(p.interior.iter().all(|&x| x > 0.0));
        for (i, &x) in p.boundary.iter().enumerate() {
            assert!(if i == a { x > 0.0 } else { x == 0.0 });
        }
        // a pair on the lower boundary is refused as the target
        assert!(poisson_boundary_with(&sys, o, o, &gim, 0.5, 0.5).is_err());
    }
}

#[test]
fn interior_poisson_kernel_normalization() {
    let g = graph(LatticeSpec::Square, 0.1, 1.2);
    let d = discretize(&g, &unit_disc()).unwrap();
    let sys = DirichletSystem::new(&d, SolverConfig::default()).unwrap();
    let v = d.nearest_interior(C64::new(0.0, 0.0));
    let a = d.nearest_pair(C64::new(0.0, 1.0));
    let p = poisson_interior_with(&sys, v, a).unwrap();
    assert_eq!(p.at(&d, v).unwrap(), 1.0);
    assert!(p.interior.iter().all(|&x| x >= 0.0));
    assert!(p.boundary.iter().enumerate().all(|(i, &x)| (i == a) == (x != 0.0)));
}

#[test]
fn rectangle_estimates_near_the_lower_boundary() {
    let (s, t) = (1.0, 0.5);
    for lat in families() {
        for delta in [0.05, 0.025] {
            let g = graph(lat, delta, 1.5);
            let d = discretize(&g, &Region::Rect { s, t }).unwrap();
            let sys = DirichletSystem::new(&d, SolverConfig::default()).unwrap();
            let split = split_by_rect(&d, s, t);
            let o = d.nearest_pair(C64::new(0.0, 0.0));
            assert!(split.lower.contains(&o));
            let o_int = d.pairs()[o].a_int;
            let upper = harmonic_measure_with(&sys, o_int, &split.upper).unwrap() * t / delta;
            let side = harmonic_measure_with(&sys, o_int, &split.vertical).unwrap() * s * s / (delta * t);
            assert!(upper > 0.1 && upper < 10.0, "{lat} δ={delta}: {upper}");
            assert!(side < 50.0, "{lat} δ={delta}: {side}");
        }
    }
}

#[test]
fn harnack_and_mean_value_constants_are_bounded() {
    for lat in families() {
        let mut c2s = Vec::new();
        for delta in [0.2, 0.1, 0.05] {
            let g = graph(lat, delta, 1.2);
            let d = discretize(&g, &unit_disc()).unwrap();
            let set = pairs_in_angle(&d, C64::new(0.0, 0.0), 0.0, FRAC_PI_2);
            let h = solve_dirichlet(&d, &indicator(d.pairs().len(), &set)).unwrap().to_function(&d);
            let (c1, c2) = harnack_check(&d, &h, 0.5).unwrap();
            let mv = mean_value_check(&d, &h).unwrap();
            assert!(c1 < 5.0 && c2 < 5.0 && mv < 2.0, "{lat} δ={delta}: {c1} {c2} {mv}");
            c2s.push(c2);
        }
        let (lo, hi) = c2s.iter().fold((f64::INFINITY, 0.0f64), |(l, h), &c| (l.min(c), h.max(c)));
        assert!(hi / lo < 2.0, "{lat}: {c2s:?}");
    }
}

fn random_domain() -> (isoradial::DiscreteDomain, DirichletSystem) {
    let g = graph(LatticeSpec::Random { seed: 5, eta: 0.4 }, 0.1, 0.9);
    let d = discretize(&g, &Region::Disc { cx: 0.0, cy: 0.0, r: 0.8 }).unwrap();
    let sys = DirichletSystem::new(&d, SolverConfig::default()).unwrap();
    (d, sys)
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(100))]

    #[test]
    fn maximum_principle(data in prop::collection::vec(-1.0f64..1.0, 300)) {
        let (d, sys) = random_domain();
        let f: Vec<f64> = (0..d.pairs().len()).map(|i| data[i % data.len()]).collect();
        let h = sys.solve(&f).unwrap();
        let lo = f.iter().cloned().fold(f64::INFINITY, f64::min);
        let hi = f.iter().cloned().fold(f64::NEG_INFINITY, f64::max);
        for &x in &h.interior {
            prop_assert!(x >= lo - 1e-12 && x <= hi + 1e-12);
        }
    }

    #[test]
    fn measure_rows_are_probability_vectors_and_reproduce_solves(
        pick in 0usize..1000,
        data in prop::collection::vec(-5.0f64..5.0, 1..200),
    ) {
        let (d, sys) = random_domain();
        let u = d.interior()[pick % d.interior().len()];
        let row = sys.harmonic_measure_row(u).unwrap();
        prop_assert!(row.iter().all(|&w| w >= 0.0));
        prop_assert!((row.iter().sum::<f64>() - 1.0).abs() < 1e-10);
        let f: Vec<f64> = (0..d.pairs().len()).map(|i| data[i % data.len()]).collect();
        let h = sys.solve(&f).unwrap();
        let sum: f64 = row.iter().zip(&f).map(|(w, x)| w * x).sum();
        prop_assert!((sum - h.at(&d, u).unwrap()).abs() < 1e-9);
    }

    #[test]
    fn arcs_and_complements_partition_the_measure(t0 in 0.0f64..TAU, span in 0.1f64..6.0, pick in 0usize..1000) {
        let (d, sys) = random_domain();
        let u = d.interior()[pick % d.interior().len()];
        let set = pairs_in_angle(&d, C64::new(0.0, 0.0), t0, t0 + span);
        let rest: Vec<usize> = (0..d.pairs().len()).filter(|i| !set.contains(i)).collect();
        let a = harmonic_measure_with(&sys, u, &set).unwrap();
        let b = harmonic_measure_with(&sys, u, &rest).unwrap();
        prop_assert!((0.0..=1.0).contains(&a));
        prop_assert!((a + b - 1.0).abs() < 1e-10);
    }
}
