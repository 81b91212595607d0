use thiserror::Error;

/// Errors raised by the library.
#[derive(Debug, Error)]
pub enum Error {
    #[error("empty input: {0}")]
    EmptyInput(&'static str),

    #[error("rhombus {face} has angle {angle:.6} below the bound {eta_min:.6}")]
    DegenerateRhombus { face: usize, angle: f64, eta_min: f64 },

    #[error("invalid graph: {0}")]
    InvalidGraph(String),

    #[error("no vertex of the graph lies inside the region")]
    EmptyDomain,

    #[error("region reaches the edge of the generated patch at vertex {0}")]
    DomainExceedsGraph(usize),

    #[error("domain was not built from a rectangle")]
    NotARectangle,

    #[error("pair ({a}, {a_int}) is not a boundary pair of the domain")]
    NotOnBoundary { a: usize, a_int: usize },

    #[error("boundary is not a single cycle")]
    NotSimplyConnected,

    #[error("function has no value at id {0}")]
    MissingValues(usize),

    #[error("not a path: {0}")]
    NotAPath(String),

    #[error("function is not discrete holomorphic (max residual {residual:.3e})")]
    NotHolomorphic { residual: f64 },

    #[error("contour not found: {0}")]
    ContourNotFound(String),

    #[error("kernel unavailable: {0}")]
    KernelUnavailable(String),

    #[error("spectral parameter lies on a pole of the exponential")]
    PoleHit,

    #[error("quadrature did not converge (estimate {estimate:.3e}, error {error:.3e})")]
    QuadratureNotConverged { estimate: f64, error: f64 },

    #[error("no admissible path from {from} to {to}: {reason}")]
    NoAdmissiblePath { from: usize, to: usize, reason: String },

    #[error("linear solver failed after {iterations} iterations (residual {residual:.3e})")]
    SolverDiverged { iterations: usize, residual: f64 },

    #[error("walk did not exit within {steps} steps")]
    Truncated { steps: usize },

    #[error("ill conditioned: {0}")]
    IllConditioned(String),

    #[error("layout violation: {0}")]
    LayoutViolation(String),

    #[error("degenerate fit: {0}")]
    DegenerateFit(String),

    #[error("precondition violated: {0}")]
    Precondition(String),

    #[error("reference oracle failed: {0}")]
    OracleFailure(String),

    #[error(transparent)]
    Io(#[from] std::io::Error),

    #[error(transparent)]
    Json(#[from] serde_json::Error),
}

pub type Result<T> = std::result::Result<T, Error>;
