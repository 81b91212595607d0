//! Discrete exponentials, the free Green's function and the Cauchy kernel,
//! computed by numerical contour integration, with their continuous
//! counterparts.

mod cache;
mod cauchy;
mod green;
mod path;
mod quadrature;
mod reference;

pub use cache::KernelCache;
pub use cauchy::{cauchy_kernel, kernel_path, KernelPath};
pub use green::{free_green, free_green_raw, green_constant, ContourSpec, EULER_GAMMA};
pub use path::{
    angle_diff, certify, choose_path, choose_path_toward, discrete_exponential, exponential_along, relaxed_path,
    ExponentialPath,
};
pub use quadrature::{integrate, Integral};
pub use reference::{continuous_cauchy_ref, continuous_green_ref};
