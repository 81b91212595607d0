use std::f64::consts::PI;

use super::green::ContourSpec;
use super::path::{choose_path_toward, relaxed_path, ExponentialPath};
use super::quadrature::integrate;
use crate::error::{Error, Result};
use crate::isograph::{QuadGraph, C64};

/// Evaluation recipe for `e(λ, v; z0)`: the seed factor at a corner of the
/// rhombus of `z0` followed by the path factors.
#[derive(Clone, Debug)]
pub struct KernelPath {
    pub seed: usize,
    seed_sides: [C64; 2],
    steps: Vec<C64>,
    pub path: ExponentialPath,
}

impl KernelPath {
    pub fn eval(&self, lambda: C64) -> C64 {
        let [a, b] = self.seed_sides;
        let mut e = 1.0 / ((1.0 - 0.5 * lambda * a) * (1.0 - 0.5 * lambda * b));
        for &s in &self.steps {
            let h = 0.5 * lambda * s;
            e *= (1.0 + h) / (1.0 - h);
        }
        e
    }
}

/// Seed corner and path for `v`. The seed is `v` itself when it is a corner,
/// otherwise the corner furthest along `v − z0`.
pub fn kernel_path(g: &QuadGraph, v: usize, z0: usize) -> Result<KernelPath> {
    let corners = g.rhombus(z0).corners;
    let c0 = g.center(z0);
    let dir = (g.position(v) - c0).arg();
    let slot = match corners.iter().position(|&c| c == v) {
        Some(j) => j,
        None => {
            let d = C64::from_polar(1.0, dir);
            (0..4)
                .max_by(|&i, &j| {
                    let pi = ((g.position(corners[i]) - c0) * d.conj()).re;
                    let pj = ((g.position(corners[j]) - c0) * d.conj()).re;
                    pi.total_cmp(&pj)
                })
                .unwrap()
        }
    };
    let seed = corners[slot];
    let ps = g.position(seed);
    let seed_sides = [ps - g.position(corners[(slot + 3) % 4]), ps - g.position(corners[(slot + 1) % 4])];
    let path = match choose_path_toward(g, seed, v, dir) {
        Ok(p) => p,
        // close to the rhombus no monotone path may exist; any path keeping
        // its steps clear of the reversed direction avoids the integration ray
        Err(_) => relaxed_path(g, seed, v, dir, PI - 0.5 * g.min_angle().0)?,
    };
    let steps = path.increments(g);
    Ok(KernelPath { seed, seed_sides, steps, path })
}

/// Cauchy kernel `K(v; z0) = (1/π) ∫ e(λ, v; z0) dλ` along the ray
/// `arg λ = π − arg(v − z0)` from infinity to zero.
pub fn cauchy_kernel(g: &QuadGraph, v: usize, z0: usize, spec: &ContourSpec) -> Result<C64> {
    let kp = kernel_path(g, v, z0)?;
    let dv = g.position(v) - g.center(z0);
    let ray = if dv.norm() == 0.0 {
        return Err(Error::Precondition("vertex coincides with the rhombus center".into()));
    } else {
        C64::from_polar(1.0, PI - dv.arg())
    };
    // split at T: [0, T] directly, [T, ∞) through t = T/x
    let t_split = 2.0 / g.delta();
    let near = integrate(|t| kp.eval(ray * t), 0.0, t_split, spec.tol, spec.max_depth)?;
    let far = integrate(
        |x| {
            if x == 0.0 {
                // limit of e(Tx⁻¹) T x⁻² as x → 0
                let [a, b] = kp.seed_sides;
                let prod: C64 = kp.steps.iter().fold(C64::new(1.0, 0.0), |m, _| -m);
                prod * 4.0 / (a * b * ray * ray * t_split)
            } else {
                let t = t_split / x;
                kp.eval(ray * t) * (t_split / (x * x))
            }
        },
        0.0,
        1.0,
        spec.tol,
        spec.max_depth,
    )?;
    Ok(-(ray / PI) * (near.value + far.value))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::isograph::{random_isoradial, square_lattice};

    fn spec() -> ContourSpec {
        ContourSpec::default()
    }

    #[test]
    fn corner_values_square() {
        let g = square_lattice(1.0, 4).unwrap();
        let z0 = g.nearest_rhombus(C64::new(0.5, 0.5)).unwrap();
        let w = g.weights();
        for (j, &v) in g.rhombus(z0).corners.iter().enumerate() {
            let k = cauchy_kernel(&g, v, z0, &spec()).unwrap();
            let prod = w.mu_zv(z0, j) * k;
            assert!((prod - 1.0).norm() < 1e-9, "{prod}");
        }
    }

    #[test]
    fn corner_values_follow_interior_angles() {
        let g = random_isoradial(31, 6, 0.4, 0.8).unwrap();
        let w = g.weights();
        for z0 in [0, 7, 19] {
            let c = g.rhombus(z0).corners.map(|v| g.position(v));
            for j in 0..4 {
                let k = cauchy_kernel(&g, g.rhombus(z0).corners[j], z0, &spec()).unwrap();
                let a = c[j] - c[(j + 3) % 4];
                let b = c[j] - c[(j + 1) % 4];
                let interior = (a.arg() - b.arg()).rem_euclid(2.0 * PI);
                let prod = w.mu_zv(z0, j) * k;
                assert!((prod - 2.0 * interior / PI).norm() < 1e-9, "{prod} vs {}", 2.0 * interior / PI);
            }
        }
    }
}
