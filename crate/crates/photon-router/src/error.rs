use thiserror::Error;

/// Errors produced by configuration validation and the numerical engines.
#[derive(Debug, Error)]
pub enum RouterError {
    #[error("{field} must be positive (got {value})")]
    NonPositiveRate { field: &'static str, value: f64 },

    #[error("{field} must be non-negative (got {value})")]
    NegativeRate { field: &'static str, value: f64 },

    #[error("{0}")]
    InvalidConfig(String),

    #[error("photon_number must be 1 or 2 for {scenario} (got {n})")]
    PhotonNumber { scenario: &'static str, n: u32 },

    #[error(
        "correlation grid is under-resolved or truncated: raw probability sum {sum} \
         deviates from 1 by more than {tolerance}"
    )]
    Normalization { sum: f64, tolerance: f64 },

    #[error("empty correlation grid: all four surfaces integrate to zero")]
    EmptyCorrelation,

    #[error("time step {dt} violates the CFL bound {bound} (v_g dt must equal dx)")]
    CflViolation { dt: f64, bound: f64 },

    #[error("pulse overlaps the coupling region at t=0 (front at x={front}, cavity at x={cavity})")]
    PulseOverlap { front: f64, cavity: f64 },

    #[error(
        "boundary contamination: norm {leak:.3e} reached the grid edges; \
         enlarge the domain or shorten the evolution"
    )]
    BoundaryContamination { leak: f64 },

    #[error("waveguide domain too small: need at least {needed} cells of travel, have {available}")]
    DomainTooSmall { needed: usize, available: usize },

    #[error("parse error in config file line {line}: {message}")]
    ConfigParse { line: usize, message: String },

    #[error("p_loss requested with kappa_ex = 0")]
    LossWithoutCoupling,

    #[error("io error: {0}")]
    Io(#[from] std::io::Error),
}

pub type Result<T> = std::result::Result<T, RouterError>;
