use thiserror::Error;

pub type Result<T> = core::result::Result<T, Error>;

#[derive(Debug, Clone, PartialEq, Error)]
pub enum Error {
    #[error("probability {0} outside [0, 1]")]
    ProbabilityDomain(f64),

    #[error("invalid X state: {0}")]
    InvalidState(&'static str),

    #[error("amplitudes are not normalized (norm squared = {0})")]
    NotNormalized(f64),

    #[error("unsupported ring size {0}: need an even number of sites, 4 <= N <= {max}", max = crate::spinchain::MAX_SITES)]
    UnsupportedSize(usize),

    #[error("n_up = {n_up} is out of range for {n_sites} sites")]
    InvalidFilling { n_sites: usize, n_up: usize },

    #[error("dimension mismatch: expected {expected}, got {found}")]
    DimensionMismatch { expected: usize, found: usize },

    #[error("ferromagnetic regime (delta = {0} <= -1): the ground state leaves the Sz = 0 sector")]
    FerromagneticRegime(f64),

    #[error("Lanczos did not converge after {matvecs} operator applications (best residual {residual:e})")]
    NoConvergence { matvecs: usize, residual: f64 },

    #[error("ground state is degenerate within the sector (gap {0:e})")]
    DegenerateGroundState(f64),

    #[error("sites must be distinct and lie in 1..={n_sites}, got ({i}, {j})")]
    InvalidSites { i: usize, j: usize, n_sites: usize },

    #[error("k ratio undefined: |gamma_d| = {0:e} is numerically zero")]
    UndefinedRatio(f64),

    #[error("density matrix positivity violated for gamma_d = {gamma_d}, k = {k}")]
    PositivityViolated { gamma_d: f64, k: f64 },

    #[error("invalid sampling scheme: {0}")]
    InvalidScheme(&'static str),

    #[error("domain error: {0}")]
    Domain(&'static str),

    #[error("matrix dimension {0} is too large for the dense oracle")]
    TooLarge(usize),
}
