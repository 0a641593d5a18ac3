use thiserror::Error;

pub type Result<T> = std::result::Result<T, Error>;

#[derive(Debug, Error)]
pub enum Error {
    #[error("invalid link pattern: {0}")]
    InvalidPattern(String),

    #[error("invalid configuration: {0}")]
    InvalidConfiguration(String),

    #[error("capacity exceeded: {what} = {value} over cap {cap}")]
    CapacityExceeded {
        what: &'static str,
        value: usize,
        cap: usize,
    },

    #[error("size mismatch: left has N = {left}, right has N = {right}")]
    SizeMismatch { left: usize, right: usize },

    #[error("no {kind}-wedge at position {j}")]
    WedgeAbsent { j: usize, kind: &'static str },

    #[error("link {{{j},{next}}} not present in pattern", next = j + 1)]
    LinkAbsent { j: usize },

    #[error("parity violation: start index {a} must be odd, end index {b} even")]
    ParityViolation { a: usize, b: usize },

    #[error("kappa = {0} outside the admissible range (0, 8)")]
    KappaOutOfRange(f64),

    #[error("catastrophic cancellation: result/max-summand ratio {0:.3e}")]
    CatastrophicCancellation(f64),

    #[error("numerical scheme failed to converge: {0}")]
    NonConvergence(String),

    #[error("configuration margin violation: need margin > {needed}, have {have}")]
    MarginViolation { needed: f64, have: f64 },

    #[error("map does not preserve the ordering of the configuration")]
    OrderingBroken,
}
