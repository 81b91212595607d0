mod common;

use proptest::prelude::*;

use isoradial::domain::{discretize, Region};
use isoradial::isograph::{random_isoradial, step_time, validate_spades};
use isoradial::{Color, C64};

fn polygon_area(pts: &[C64]) -> f64 {
    let n = pts.len();
    0.5 * (0..n).map(|k| (pts[k].conj() * pts[(k + 1) % n]).im).sum::<f64>()
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(24))]

    #[test]
    fn approximation_identities_hold_on_both_colors(seed in any::<u64>(), eta in 0.2f64..0.6, delta in 0.05f64..2.0) {
        let g = random_isoradial(seed, 5, eta, delta).unwrap();
        prop_assert!(validate_spades(&g, eta).is_ok());
        let w = g.weights();
        for u in 0..g.num_vertices() {
            if !g.is_closed(u) {
                continue;
            }
            let pu = g.position(u);
            let (mut lin, mut quad, mut sq) = (C64::new(0.0, 0.0), C64::new(0.0, 0.0), 0.0);
            let mut total = 0.0;
            for (v, t, _) in g.neighbors(u) {
                let pv = g.position(v);
                lin += (pv - pu) * t;
                quad += (pv * pv - pu * pu) * t;
                sq += t * (pv - pu).norm_sqr();
                total += t;
            }
            let scale = total * delta * (1.0 + pu.norm());
            prop_assert!(lin.norm() < 1e-9 * scale);
            prop_assert!(quad.norm() < 1e-9 * scale * (1.0 + pu.norm()));
            prop_assert!((sq - 4.0 * w.mu_gamma[u]).abs() < 1e-9 * sq);
            prop_assert!((w.mu_gamma[u] - 2.0 * w.mu_lambda[u]).abs() < 1e-15 * w.mu_gamma[u]);
            // the walk's mean step time is the same quantity
            prop_assert!((step_time(&g, u) * total - 2.0 * w.mu_gamma[u]).abs() < 1e-9 * w.mu_gamma[u]);
        }
    }

    #[test]
    fn dual_faces_tile_with_area_mu(seed in any::<u64>(), eta in 0.2f64..0.6) {
        let g = random_isoradial(seed, 5, eta, 1.0).unwrap();
        let w = g.weights();
        for u in g.vertices_of_color(Color::Gamma) {
            if !g.is_closed(u) {
                continue;
            }
            // the dual face of u has the Γ* corners of its star as vertices
            let face: Vec<C64> = g.star(u).iter().map(|inc| {
                let c = g.rhombus(inc.rhombus).corners;
                g.position(c[(inc.slot + 1) % 4])
            }).collect();
            prop_assert!((polygon_area(&face) - w.mu_gamma[u]).abs() < 1e-9);
        }
    }

    #[test]
    fn discretization_is_monotone_with_enough_pairs(
        seed in 0u64..1000, cx in -0.3f64..0.3, cy in -0.3f64..0.3, r in 0.25f64..0.8, grow in 0.0f64..0.4,
    ) {
        let g = std::sync::Arc::new(random_isoradial(seed, 40, 0.4, 0.05).unwrap());
        let small = discretize(&g, &Region::Disc { cx, cy, r }).unwrap();
        let large = discretize(&g, &Region::Disc { cx, cy, r: r + grow }).unwrap();
        prop_assert!(small.interior().iter().all(|&u| large.is_interior(u)));
        prop_assert!(small.pairs().len() >= 3);
        prop_assert!(small.is_single_cycle());
        for p in small.pairs() {
            prop_assert!(small.is_interior(p.a_int) && !small.is_interior(p.a));
            prop_assert!(p.weight > 0.0);
        }
    }
}
