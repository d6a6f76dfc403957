use thiserror::Error;

/// Errors raised by the library. Numeric payloads are reported as `f64`
/// regardless of the scalar type the computation ran in.
#[derive(Debug, Clone, PartialEq, Error)]
pub enum Error {
    #[error("matrix contains a non-finite entry at ({row}, {col})")]
    NonFinite { row: usize, col: usize },

    #[error("SVD did not converge after {sweeps} sweeps (off-diagonal ratio {residual:e})")]
    ConvergenceFailure { sweeps: usize, residual: f64 },

    #[error("singular values are not sorted in non-increasing order at index {index}")]
    UnsortedInput { index: usize },

    #[error("spectrum is not simple: singular values {index} and {} are within {gap_tol:e}", index + 1)]
    NotSimple { index: usize, gap_tol: f64 },

    #[error("matrix is rank deficient: singular value {index} is within {gap_tol:e} of zero")]
    RankDeficient { index: usize, gap_tol: f64 },

    #[error("singular value {index} = {sigma} ties the threshold {lambda}")]
    ThresholdTie { index: usize, sigma: f64, lambda: f64 },

    #[error("spectral function is not differentiable at {at}")]
    NonDifferentiablePoint { at: f64 },

    #[error("non-uniform spectral function applied to a tied spectrum")]
    AmbiguousSpectrum,

    #[error("the repeated-spectrum divergence requires a uniform spectral function")]
    NonUniformFunction,

    #[error("the repeated-spectrum divergence requires f(0) = 0")]
    FZeroNotZero,

    #[error("finite-difference divergence is unstable under step halving ({coarse} vs {fine})")]
    StepTooSmall { coarse: f64, fine: f64 },

    #[error("shape mismatch: {0}")]
    ShapeMismatch(String),

    #[error("kind must be 1..4 (got {0})")]
    BadKind(u32),

    #[error("bad shape: {0}")]
    BadShape(String),

    #[error("bad bracket [{lo}, {hi}] with tol {tol}")]
    BadBracket { lo: f64, hi: f64, tol: f64 },

    #[error("invalid argument: {0}")]
    InvalidArgument(String),
}

pub type Result<T> = std::result::Result<T, Error>;
