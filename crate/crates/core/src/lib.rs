//! Singular value thresholding, spectral estimators, and closed-form Stein
//! unbiased risk estimates for real and complex matrices.
//!
//! Everything is generic over [`Scalar`]: `f32`, `f64`, `Complex<f32>` and
//! `Complex<f64>`. The aliases below fix the common double-precision cases.

pub mod blockwise;
pub mod divergence;
pub mod error;
pub mod linalg;
pub mod risk;
pub mod scalar;
pub mod spectral;

#[cfg(test)]
mod testutil;

pub use error::{Error, Result};
pub use linalg::{svd, Matrix, SvdFactors};
pub use scalar::{Field, RealScalar, Scalar};
pub use spectral::{apply_spectral, svht, svt, SpectralFunction};

pub use num_complex::{Complex32, Complex64};

pub type RealMatrix = Matrix<f64>;
pub type ComplexMatrix = Matrix<Complex64>;
pub type RealMatrix32 = Matrix<f32>;
pub type ComplexMatrix32 = Matrix<Complex32>;
