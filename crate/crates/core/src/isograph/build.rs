use std::f64::consts::{FRAC_PI_2, PI};

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use super::{Color, QuadGraph, Rhombus, C64};
use crate::error::{Error, Result};

/// Two-sequence quad-graph `x_{m,n} = δ(Σ_{k≤m} e^{iα_k} + Σ_{l≤n} e^{iβ_l})`.
///
/// Vertex `(m, n)` gets id `m·(N+1) + n`; `Γ` is the set of even `m + n`. The
/// patch is translated so that a central Γ-vertex sits at the origin.
pub fn build_quadgraph(alpha: &[f64], beta: &[f64], delta: f64, eta_min: f64) -> Result<QuadGraph> {
    if alpha.is_empty() || beta.is_empty() {
        return Err(Error::EmptyInput("generator sequences must be non-empty"));
    }
    let a: Vec<C64> = alpha.iter().map(|&t| C64::from_polar(1.0, t)).collect();
    let b: Vec<C64> = beta.iter().map(|&t| C64::from_polar(1.0, t)).collect();
    build_from_directions(&a, &b, delta, eta_min)
}

fn face_angle(a: C64, b: C64) -> f64 {
    (b / a).arg()
}

/// Same as [`build_quadgraph`] with unit step vectors given directly, which
/// keeps axis-aligned lattices free of rounding in the coordinates.
pub fn build_from_directions(a: &[C64], b: &[C64], delta: f64, eta_min: f64) -> Result<QuadGraph> {
    if a.is_empty() || b.is_empty() {
        return Err(Error::EmptyInput("generator sequences must be non-empty"));
    }
    let (mm, nn) = (a.len(), b.len());

    let mut negative = 0usize;
    for (k, &ak) in a.iter().enumerate() {
        for (l, &bl) in b.iter().enumerate() {
            let phi = face_angle(ak, bl);
            let acute = phi.abs().min(PI - phi.abs());
            if acute < eta_min {
                return Err(Error::DegenerateRhombus { face: k * nn + l, angle: acute, eta_min });
            }
            if phi < 0.0 {
                negative += 1;
            }
        }
    }
    if negative == mm * nn {
        // Mirror-oriented generators: swapping the two families restores
        // counter-clockwise faces.
        return build_from_directions(b, a, delta, eta_min);
    }
    if negative > 0 {
        let face = (0..mm * nn).find(|&f| face_angle(a[f / nn], b[f % nn]) < 0.0).unwrap_or(0);
        return Err(Error::DegenerateRhombus { face, angle: 0.0, eta_min });
    }

    let mut pa = vec![C64::new(0.0, 0.0); mm + 1];
    for k in 0..mm {
        pa[k + 1] = pa[k] + a[k];
    }
    let mut pb = vec![C64::new(0.0, 0.0); nn + 1];
    for l in 0..nn {
        pb[l + 1] = pb[l] + b[l];
    }
    let mc = mm / 2;
    let mut nc = nn / 2;
    if (mc + nc) % 2 == 1 {
        nc = if nc < nn { nc + 1 } else { nc - 1 };
    }
    let id = |m: usize, n: usize| m * (nn + 1) + n;
    let mut pos = Vec::with_capacity((mm + 1) * (nn + 1));
    let mut color = Vec::with_capacity(pos.capacity());
    for m in 0..=mm {
        for n in 0..=nn {
            pos.push(((pa[m] - pa[mc]) + (pb[n] - pb[nc])) * delta);
            color.push(if (m + n) % 2 == 0 { Color::Gamma } else { Color::GammaStar });
        }
    }
    let mut rhombi = Vec::with_capacity(mm * nn);
    for m in 0..mm {
        for n in 0..nn {
            let phi = face_angle(a[m], b[n]);
            let (p00, p10, p11, p01) = (id(m, n), id(m + 1, n), id(m + 1, n + 1), id(m, n + 1));
            let r = if (m + n) % 2 == 0 {
                Rhombus { corners: [p00, p10, p11, p01], theta: phi / 2.0 }
            } else {
                Rhombus { corners: [p10, p11, p01, p00], theta: (PI - phi) / 2.0 }
            };
            rhombi.push(r);
        }
    }
    QuadGraph::from_parts(delta, pos, color, rhombi)
}

/// Square quad-graph on `[-extent, extent]²·δ`; Γ is the rotated square
/// lattice of spacing `δ√2` through the origin.
pub fn square_lattice(delta: f64, extent: usize) -> Result<QuadGraph> {
    if extent < 2 {
        return Err(Error::Precondition("square lattice extent must be at least 2".into()));
    }
    let a = vec![C64::new(1.0, 0.0); 2 * extent];
    let b = vec![C64::new(0.0, 1.0); 2 * extent];
    build_from_directions(&a, &b, delta, 0.2)
}

/// Two-sequence graph with `2·extent` steps per family and angles drawn
/// uniformly so that every rhombus angle lies in `[η, π − η]`.
pub fn random_isoradial(seed: u64, extent: usize, eta: f64, delta: f64) -> Result<QuadGraph> {
    if !(eta > 0.0 && eta < FRAC_PI_2) {
        return Err(Error::Precondition(format!("eta {eta} outside (0, π/2)")));
    }
    if extent == 0 {
        return Err(Error::EmptyInput("extent must be positive"));
    }
    let spread = (FRAC_PI_2 - eta) / 2.0;
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let n = 2 * extent;
    let alpha: Vec<f64> = (0..n).map(|_| rng.random_range(-spread..spread)).collect();
    let beta: Vec<f64> = (0..n).map(|_| FRAC_PI_2 + rng.random_range(-spread..spread)).collect();
    build_quadgraph(&alpha, &beta, delta, eta * (1.0 - 1e-12))
}
