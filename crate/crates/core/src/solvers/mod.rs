//! Dirichlet problems on discrete domains: harmonic extension, harmonic
//! measure, the domain Green's function and Poisson kernels.

mod checks;
mod measures;
mod system;

pub use checks::{harnack_check, mean_value_check};
pub use measures::{
    check_layout, gim_approx, gim_truncation_error, green_domain, green_domain_direct, green_domain_with,
    harmonic_measure, harmonic_measure_with, poisson_boundary, poisson_boundary_with, poisson_interior,
    poisson_interior_with, solve_dirichlet, HalfPlaneIm, POISSON_FLOOR,
};
pub use system::{DirichletSystem, DomainFunction, SolveMethod, SolverConfig, RESIDUAL_BOUND};
