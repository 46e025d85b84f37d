use thiserror::Error;

pub type Result<T> = std::result::Result<T, Error>;

#[derive(Debug, Error)]
pub enum Error {
    /// A parameter violates the invariants of its owning type.
    #[error("invalid parameter `{name}`: {reason}")]
    InvalidParameter { name: &'static str, reason: String },

    /// Time step outside the stability region of the chosen scheme.
    #[error("time step {dt} violates stability bound {bound}")]
    Unstable { dt: f64, bound: f64 },

    /// Reality constraint u'(k)* = u'(-k) broken beyond tolerance.
    #[error("spectrum violates the reality constraint (max defect {defect:e})")]
    RealityViolated { defect: f64 },

    /// A zero-frequency mode carries energy that cannot be mapped to an action wave.
    #[error("zero-frequency mode carries energy {energy:e} (total {total:e})")]
    ZeroFrequencyMode { energy: f64, total: f64 },

    #[error("grid mismatch: {0}")]
    GridMismatch(String),

    #[error("non-uniform grid: {0}")]
    NonUniformGrid(String),

    #[error("need at least {needed} samples, got {got}")]
    TooFewSamples { needed: usize, got: usize },

    #[error("zero wave cannot be normalized")]
    ZeroWave,

    #[error("numerical failure: {0}")]
    Numerical(String),

    #[error("malformed data: {0}")]
    Format(String),

    #[error(transparent)]
    Io(#[from] std::io::Error),
}

pub(crate) fn invalid(name: &'static str, reason: impl Into<String>) -> Error {
    Error::InvalidParameter {
        name,
        reason: reason.into(),
    }
}
