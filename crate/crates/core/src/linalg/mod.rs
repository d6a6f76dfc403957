//! Dense linear algebra over real and complex scalars.

pub mod differential;
pub mod matrix;
pub(crate) mod orth;
pub mod spectrum;
pub mod svd;

pub use differential::{svd_differential, svd_differential_with, SvdDifferential, TailSide};
pub use matrix::Matrix;
pub use spectrum::{
    default_gap_tol, group_spectrum, is_simple_full_rank, SimplicityReport, SpectrumDefect,
    SpectrumProfile,
};
pub use svd::{singular_values, svd, SvdFactors};
