use crate::linalg::Matrix;
use crate::risk::noise::{gaussian_matrix, haar_orthonormal, Rng};
use crate::scalar::{RealScalar, Scalar};

pub(crate) fn seeded_rng(seed: u64) -> Rng {
    crate::risk::noise::seeded_rng(seed)
}

/// Entries with iid standard normal real coordinates.
pub(crate) fn random_matrix<T: Scalar>(rng: &mut Rng, rows: usize, cols: usize) -> Matrix<T> {
    gaussian_matrix(rng, rows, cols, <T::Real as RealScalar>::lit(1.0))
}

pub(crate) fn random_unitary<T: Scalar>(rng: &mut Rng, n: usize) -> Matrix<T> {
    haar_orthonormal(rng, n, n)
}
