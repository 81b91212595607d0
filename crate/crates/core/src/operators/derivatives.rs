use crate::error::{Error, Result};
use crate::function::{LatticeFunction, Support};
use crate::isograph::{QuadGraph, C64};

/// A ◊-function counts as holomorphic when `max |∂̄F| ≤ HOLOMORPHIC_TOL · max |F|`.
pub const HOLOMORPHIC_TOL: f64 = 1e-8;

fn require_closed(g: &QuadGraph, v: usize) -> Result<()> {
    if g.is_closed(v) {
        Ok(())
    } else {
        Err(Error::Precondition(format!("vertex {v} has an open star")))
    }
}

fn star_sum(g: &QuadGraph, f: &LatticeFunction, v: usize, conj: bool) -> Result<C64> {
    require_closed(g, v)?;
    let w = g.weights();
    let mut s = C64::new(0.0, 0.0);
    for inc in g.star(v) {
        let m = w.edge_mu[inc.rhombus][inc.slot];
        s += if conj { m.conj() } else { m } * f.get(inc.rhombus)?;
    }
    Ok(s / (4.0 * w.mu_lambda[v]))
}

/// `[∂̄F](v) = (1/4μ_Λ(v)) Σ μ_{v z_s} F(z_s)`.
pub fn dbar_diamond_to_lambda(g: &QuadGraph, f: &LatticeFunction, v: usize) -> Result<C64> {
    star_sum(g, f, v, false)
}

/// `[∂F](v)`, the same sum with conjugated weights.
pub fn d_diamond_to_lambda(g: &QuadGraph, f: &LatticeFunction, v: usize) -> Result<C64> {
    star_sum(g, f, v, true)
}

fn quotients(g: &QuadGraph, h: &LatticeFunction, z: usize, conj: bool) -> Result<C64> {
    let c = g.rhombus(z).corners;
    let mut s = C64::new(0.0, 0.0);
    for (a, b) in [(c[0], c[2]), (c[1], c[3])] {
        let dv = g.position(a) - g.position(b);
        let dh = h.get_lambda(g, a)? - h.get_lambda(g, b)?;
        s += dh / if conj { dv.conj() } else { dv };
    }
    Ok(s * 0.5)
}

/// `[∂̄H](z) = ½[(H(v1)−H(v3))/(v̄1−v̄3) + (H(v2)−H(v4))/(v̄2−v̄4)]`. A function
/// declared on one color reads as zero on the other.
pub fn dbar_lambda_to_diamond(g: &QuadGraph, h: &LatticeFunction, z: usize) -> Result<C64> {
    quotients(g, h, z, true)
}

pub fn d_lambda_to_diamond(g: &QuadGraph, h: &LatticeFunction, z: usize) -> Result<C64> {
    quotients(g, h, z, false)
}

/// `¼ Σ H(v_j)` over the corners of `z`.
pub fn average_lambda_to_diamond(g: &QuadGraph, h: &LatticeFunction, z: usize) -> Result<C64> {
    let mut s = C64::new(0.0, 0.0);
    for v in g.rhombus(z).corners {
        s += h.get_lambda(g, v)?;
    }
    Ok(s * 0.25)
}

/// `(1/4μ_Λ(v)) Σ μ◊(z_s) F(z_s)`.
pub fn average_diamond_to_lambda(g: &QuadGraph, f: &LatticeFunction, v: usize) -> Result<C64> {
    let w = g.weights();
    let mut s = C64::new(0.0, 0.0);
    for inc in g.star(v) {
        s += f.get(inc.rhombus)? * w.mu_diamond[inc.rhombus];
    }
    Ok(s / (4.0 * w.mu_lambda[v]))
}

/// Orthogonal projection of `x` onto the line `ξℝ`.
pub fn projection(x: C64, xi: C64) -> C64 {
    xi * ((x * xi.conj()).re / xi.norm_sqr())
}

/// `[𝓑F](z)`: projection onto `conj(u1 − u2)ℝ`, `u1, u2` the Γ-corners of `z`.
pub fn project_b(g: &QuadGraph, z: usize, x: C64) -> C64 {
    let c = g.rhombus(z).corners;
    projection(x, (g.position(c[0]) - g.position(c[2])).conj())
}

/// `[𝓦F](z)`: projection onto `conj(w1 − w2)ℝ`, `w1, w2` the Γ*-corners of `z`.
pub fn project_w(g: &QuadGraph, z: usize, x: C64) -> C64 {
    let c = g.rhombus(z).corners;
    projection(x, (g.position(c[1]) - g.position(c[3])).conj())
}

/// Evaluate `op` at every rhombus, keeping the points where it succeeds.
pub fn on_diamonds(g: &QuadGraph, op: impl Fn(usize) -> Result<C64>) -> LatticeFunction {
    LatticeFunction::from_values(
        Support::Diamond,
        (0..g.num_rhombi()).filter_map(|z| op(z).ok().map(|x| (z, x))),
    )
}

/// Evaluate `op` at every vertex admitted by `support`, keeping the points
/// where it succeeds.
pub fn on_vertices(g: &QuadGraph, support: Support, op: impl Fn(usize) -> Result<C64>) -> LatticeFunction {
    LatticeFunction::from_values(
        support,
        (0..g.num_vertices())
            .filter(|&v| support.admits(g, v))
            .filter_map(|v| op(v).ok().map(|x| (v, x))),
    )
}

fn lambda_laplacian(g: &QuadGraph, h: &LatticeFunction, v: usize) -> Result<C64> {
    require_closed(g, v)?;
    let hv = h.get_lambda(g, v)?;
    let mut s = C64::new(0.0, 0.0);
    for (w, t, _) in g.neighbors(v) {
        s += (h.get_lambda(g, w)? - hv) * t;
    }
    Ok(s / g.weights().mu_gamma[v])
}

/// Largest of `|ΔH − 4∂∂̄H|` and `|ΔH − 4∂̄∂H|` over the vertices where all
/// three are defined.
pub fn factorization_check(g: &QuadGraph, h: &LatticeFunction) -> f64 {
    let w = g.weights();
    let mut worst: f64 = 0.0;
    for v in 0..g.num_vertices() {
        let Ok(lap) = lambda_laplacian(g, h, v) else { continue };
        let mut dd_bar = C64::new(0.0, 0.0);
        let mut dbar_d = C64::new(0.0, 0.0);
        let mut ok = true;
        for inc in g.star(v) {
            let m = w.edge_mu[inc.rhombus][inc.slot];
            match (dbar_lambda_to_diamond(g, h, inc.rhombus), d_lambda_to_diamond(g, h, inc.rhombus)) {
                (Ok(b), Ok(d)) => {
                    dd_bar += m.conj() * b;
                    dbar_d += m * d;
                }
                _ => {
                    ok = false;
                    break;
                }
            }
        }
        if !ok {
            continue;
        }
        let scale = 4.0 * w.mu_lambda[v];
        worst = worst
            .max((lap - 4.0 * dd_bar / scale).norm())
            .max((lap - 4.0 * dbar_d / scale).norm());
    }
    worst
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::isograph::{random_isoradial, square_lattice, Color};
    use rand::{Rng, SeedableRng};
    use rand_chacha::ChaCha8Rng;

    fn closed(g: &QuadGraph) -> Vec<usize> {
        (0..g.num_vertices()).filter(|&v| g.is_closed(v)).collect()
    }

    #[test]
    fn diamond_derivatives_of_simple_functions() {
        let g = random_isoradial(4, 10, 0.4, 1.0).unwrap();
        let one = LatticeFunction::sample(&g, Support::Diamond, |_| C64::new(2.0, -1.0));
        let two_z = LatticeFunction::sample(&g, Support::Diamond, |p| 2.0 * p);
        for v in closed(&g) {
            assert!(dbar_diamond_to_lambda(&g, &one, v).unwrap().norm() < 1e-12);
            assert!(d_diamond_to_lambda(&g, &one, v).unwrap().norm() < 1e-12);
            assert!(dbar_diamond_to_lambda(&g, &two_z, v).unwrap().norm() < 1e-10);
        }
        let sq = square_lattice(1.0, 4).unwrap();
        let zbar = LatticeFunction::sample(&sq, Support::Diamond, |p| p.conj());
        for v in closed(&sq) {
            assert!((dbar_diamond_to_lambda(&sq, &zbar, v).unwrap() - 1.0).norm() < 1e-12);
            assert!(d_diamond_to_lambda(&sq, &zbar, v).unwrap().norm() < 1e-12);
        }
    }

    #[test]
    fn open_stars_are_rejected() {
        let g = square_lattice(1.0, 2).unwrap();
        let v = (0..g.num_vertices()).find(|&v| !g.is_closed(v)).unwrap();
        let one = LatticeFunction::sample(&g, Support::Diamond, |_| C64::new(1.0, 0.0));
        assert!(matches!(dbar_diamond_to_lambda(&g, &one, v), Err(Error::Precondition(_))));
    }

    #[test]
    fn lambda_derivatives_of_polynomials() {
        let g = random_isoradial(6, 8, 0.4, 0.5).unwrap();
        let id = LatticeFunction::sample(&g, Support::Lambda, |p| p);
        let sq = LatticeFunction::sample(&g, Support::Lambda, |p| p * p);
        for z in 0..g.num_rhombi() {
            assert!(dbar_lambda_to_diamond(&g, &id, z).unwrap().norm() < 1e-12);
            assert!((d_lambda_to_diamond(&g, &id, z).unwrap() - 1.0).norm() < 1e-12);
            assert!(dbar_lambda_to_diamond(&g, &sq, z).unwrap().norm() < 1e-11);
            assert!((d_lambda_to_diamond(&g, &sq, z).unwrap() - 2.0 * g.center(z)).norm() < 1e-11);
        }
    }

    #[test]
    fn gradient_of_real_function_on_gamma_is_b_projected() {
        let g = random_isoradial(6, 8, 0.4, 1.0).unwrap();
        let h = LatticeFunction::sample(&g, Support::Gamma, |p| C64::new(p.re * p.re - p.im * p.im + p.im, 0.0));
        for z in 0..g.num_rhombi() {
            let f = d_lambda_to_diamond(&g, &h, z).unwrap();
            assert!((project_b(&g, z, f) - f).norm() < 1e-12 * (1.0 + f.norm()));
            assert!(project_w(&g, z, f).norm() < 1e-12 * (1.0 + f.norm()));
        }
    }

    #[test]
    fn factorization_on_random_and_linear_functions() {
        let g = random_isoradial(2, 8, 0.4, 1.0).unwrap();
        let mut rng = ChaCha8Rng::seed_from_u64(9);
        let mut h = LatticeFunction::new(Support::Lambda);
        for v in 0..g.num_vertices() {
            h.insert(v, C64::new(rng.random_range(-1.0..1.0), rng.random_range(-1.0..1.0)));
        }
        assert!(factorization_check(&g, &h) < 1e-9);
        let gamma_only = LatticeFunction::from_values(
            Support::Gamma,
            h.iter().filter(|&(v, _)| g.color(v) == Color::Gamma),
        );
        assert!(factorization_check(&g, &gamma_only) < 1e-9);
        let lin = LatticeFunction::sample(&g, Support::Lambda, |p| 2.0 * p + p.conj());
        assert!(factorization_check(&g, &lin) < 1e-12);
    }

    #[test]
    fn averaging() {
        let g = random_isoradial(3, 8, 0.4, 1.0).unwrap();
        let c = LatticeFunction::sample(&g, Support::Lambda, |_| C64::new(0.7, 0.1));
        let cz = LatticeFunction::sample(&g, Support::Diamond, |_| C64::new(0.7, 0.1));
        for z in 0..g.num_rhombi() {
            assert!((average_lambda_to_diamond(&g, &c, z).unwrap() - C64::new(0.7, 0.1)).norm() < 1e-14);
        }
        for v in 0..g.num_vertices() {
            assert!((average_diamond_to_lambda(&g, &cz, v).unwrap() - C64::new(0.7, 0.1)).norm() < 1e-14);
        }
        // the average of a holomorphic Λ-function is holomorphic on ◊
        let sq = LatticeFunction::sample(&g, Support::Lambda, |p| p * p);
        let m = on_diamonds(&g, |z| average_lambda_to_diamond(&g, &sq, z));
        for v in closed(&g) {
            assert!(dbar_diamond_to_lambda(&g, &m, v).unwrap().norm() < 1e-11);
        }
        let s = square_lattice(0.5, 4).unwrap();
        let zf = LatticeFunction::sample(&s, Support::Diamond, |p| p);
        for v in closed(&s) {
            assert!((average_diamond_to_lambda(&s, &zf, v).unwrap() - s.position(v)).norm() < 1e-12);
        }
    }

    #[test]
    fn projections_split_holomorphic_functions() {
        let g = random_isoradial(11, 8, 0.4, 1.0).unwrap();
        let f = LatticeFunction::sample(&g, Support::Diamond, |p| 2.0 * p + C64::new(0.0, 1.0));
        let b = on_diamonds(&g, |z| Ok(project_b(&g, z, f.get(z)?)));
        let w = on_diamonds(&g, |z| Ok(project_w(&g, z, f.get(z)?)));
        for z in 0..g.num_rhombi() {
            assert!((b.get(z).unwrap() + w.get(z).unwrap() - f.get(z).unwrap()).norm() < 1e-12);
        }
        for v in closed(&g) {
            assert!(dbar_diamond_to_lambda(&g, &b, v).unwrap().norm() < 1e-9);
            assert!(dbar_diamond_to_lambda(&g, &w, v).unwrap().norm() < 1e-9);
        }
    }
}
