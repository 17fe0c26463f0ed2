use thiserror::Error;

/// Failures surfaced by the engine.
#[derive(Debug, Error, Clone, PartialEq)]
pub enum Error {
    #[error("invalid parameter: {0}")]
    Parameter(String),
    #[error("filter banks differ in {0}; both banks must share N, mode spacing, mode halfwidth and phase index")]
    BankMismatch(&'static str),
    #[error("correlation undefined (dark source): {which} = {value:e} is below {threshold:e}")]
    DarkSource { which: &'static str, value: f64, threshold: f64 },
    #[error("coherent amplitude <A> vanishes; intensity ratio undefined")]
    CoherentZero,
    #[error("shifted generator is singular at shift {0}")]
    Singular(String),
    #[error("oracle dimension {dim} exceeds the bound {bound}")]
    DimensionBound { dim: usize, bound: usize },
    #[error("numerical tolerance failure: {0}")]
    Tolerance(String),
    #[error("config: {0}")]
    Config(String),
}

pub type Result<T> = std::result::Result<T, Error>;
