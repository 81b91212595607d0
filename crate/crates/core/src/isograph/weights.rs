use super::{QuadGraph, C64};

/// Area and edge weights of a quad-graph.
///
/// `mu_lambda[v] = ¼ Σ μ◊(z)` over the rhombi at `v`; `mu_gamma[v]` is the
/// dual-face area `2·mu_lambda[v]`, used as the Laplacian scaling at any
/// vertex (on Γ* it belongs to the dual Laplacian with `cot θ` weights).
#[derive(Clone, Debug, Default)]
pub struct Weights {
    pub mu_gamma: Vec<f64>,
    pub mu_lambda: Vec<f64>,
    pub mu_diamond: Vec<f64>,
    /// `edge_mu[z][j] = μ_{v_j z} = i(v_{j+1} − v_{j−1})`.
    pub edge_mu: Vec<[C64; 4]>,
    /// `tan θ(z)`, the weight of the Γ-diagonal of rhombus `z`.
    pub tan_weights: Vec<f64>,
}

impl Weights {
    /// `μ_{z v_j} = −μ_{v_j z}`.
    pub fn mu_zv(&self, z: usize, slot: usize) -> C64 {
        -self.edge_mu[z][slot]
    }
}

pub fn compute_weights(g: &QuadGraph) -> Weights {
    let d2 = g.delta() * g.delta();
    let nz = g.num_rhombi();
    let mut mu_diamond = Vec::with_capacity(nz);
    let mut edge_mu = Vec::with_capacity(nz);
    let mut tan_weights = Vec::with_capacity(nz);
    for r in g.rhombi() {
        mu_diamond.push(d2 * (2.0 * r.theta).sin());
        tan_weights.push(r.theta.tan());
        let p = r.corners.map(|v| g.position(v));
        let i = C64::new(0.0, 1.0);
        edge_mu.push(std::array::from_fn(|j| i * (p[(j + 1) % 4] - p[(j + 3) % 4])));
    }
    let mut mu_lambda = vec![0.0; g.num_vertices()];
    for (z, r) in g.rhombi().iter().enumerate() {
        for &v in &r.corners {
            mu_lambda[v] += 0.25 * mu_diamond[z];
        }
    }
    let mu_gamma = mu_lambda.iter().map(|m| 2.0 * m).collect();
    Weights { mu_gamma, mu_lambda, mu_diamond, edge_mu, tan_weights }
}
