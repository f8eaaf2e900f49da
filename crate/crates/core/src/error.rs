use thiserror::Error;

pub type Result<T, E = Error> = std::result::Result<T, E>;

#[derive(Debug, Error)]
pub enum Error {
    #[error("invalid chain parameters: {0}")]
    InvalidParams(String),

    #[error("first-order approximation needs mu + 2 tp > 0, got {value}")]
    BranchUnsupported { value: f64 },

    #[error("spinor is not normalized: |a|^2 + |b|^2 = {norm}")]
    SpinorNotNormalized { norm: f64 },

    #[error("sigma {sigma} out of range (0, {max})")]
    SigmaOutOfRange { sigma: f64, max: f64 },

    #[error("site {site} outside chain of {n_sites} sites")]
    SiteOutOfRange { site: i64, n_sites: usize },

    #[error("dimension mismatch: {left} vs {right} sites")]
    DimensionMismatch { left: usize, right: usize },

    #[error("{mass:.3e} of the norm lies within 2 sites of the periodic seam")]
    SeamProximity { mass: f64 },

    #[error("no oscillation peaks found (need at least 2, found {found})")]
    InsufficientPeaks { found: usize },

    #[error("oracle needs a dense {dim}x{dim} matrix; chains above {max} sites are not supported")]
    DimensionOverflow { dim: usize, max: usize },

    #[error("invalid schedule: {0}")]
    Schedule(String),

    #[error("invalid time window: {0}")]
    Window(String),
}
