//! Seeded Gaussian noise and random matrix ensembles.
//!
//! The generator is ChaCha8 seeded through `SeedableRng::seed_from_u64`;
//! Gaussian variates come from `rand_distr::StandardNormal`. Complex
//! entries draw the real part first, then the imaginary part.

use num_traits::One;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

use crate::error::{Error, Result};
use crate::linalg::orth::{normalize, project_out};
use crate::linalg::Matrix;
use crate::scalar::{Field, RealScalar, Scalar};

pub type Rng = ChaCha8Rng;

pub fn seeded_rng(seed: u64) -> Rng {
    ChaCha8Rng::seed_from_u64(seed)
}

/// Seed of Monte-Carlo trial `trial` derived from a master seed.
#[inline]
pub fn trial_seed(seed: u64, trial: u64) -> u64 {
    seed ^ trial
}

/// `rows × cols` matrix with every real coordinate iid `N(0, std²)`,
/// filled in row-major order.
pub fn gaussian_matrix<T: Scalar, R: rand::Rng + ?Sized>(
    rng: &mut R,
    rows: usize,
    cols: usize,
    std: T::Real,
) -> Matrix<T> {
    Matrix::from_fn(rows, cols, |_, _| T::sample_gaussian(rng, std))
}

/// `rows × cols` matrix with orthonormal columns (`rows ≥ cols`), Haar
/// distributed: Gram-Schmidt on a Gaussian matrix, which leaves the
/// implied triangular factor with a positive diagonal.
pub fn haar_orthonormal<T: Scalar, R: rand::Rng + ?Sized>(
    rng: &mut R,
    rows: usize,
    cols: usize,
) -> Matrix<T> {
    assert!(rows >= cols, "need rows >= cols for orthonormal columns");
    let mut basis: Vec<Vec<T>> = Vec::with_capacity(cols);
    while basis.len() < cols {
        let mut v: Vec<T> = (0..rows)
            .map(|_| T::sample_gaussian(rng, T::Real::one()))
            .collect();
        project_out(&mut v, &basis);
        let n = normalize(&mut v);
        // A Gaussian draw lands in the span with probability zero.
        if n > <T::Real as RealScalar>::lit(1e-8) {
            basis.push(v);
        }
    }
    Matrix::from_columns(rows, &basis)
}

/// Additive Gaussian noise: each real coordinate is `N(0, τ²)`, so complex
/// noise has independent real and imaginary parts of variance `τ²`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct NoiseModel<R> {
    pub field: Field,
    pub tau: R,
    pub seed: u64,
}

impl<R: RealScalar> NoiseModel<R> {
    pub fn new(field: Field, tau: R, seed: u64) -> Result<Self> {
        if !(tau >= R::zero()) || !tau.is_finite() {
            return Err(Error::InvalidArgument(format!("noise level must be >= 0, got {tau}")));
        }
        Ok(Self { field, tau, seed })
    }

    /// Same model with a different seed.
    pub fn with_seed(&self, seed: u64) -> Self {
        Self { seed, ..*self }
    }
}

/// `y = x0 + w` with `w` drawn from `noise`; deterministic in the seed.
pub fn add_noise<T: Scalar>(x0: &Matrix<T>, noise: &NoiseModel<T::Real>) -> Result<Matrix<T>> {
    if noise.field != T::FIELD {
        return Err(Error::InvalidArgument(format!(
            "{} noise for a {} matrix",
            noise.field,
            T::FIELD
        )));
    }
    let mut rng = seeded_rng(noise.seed);
    let w: Matrix<T> = gaussian_matrix(&mut rng, x0.rows(), x0.cols(), noise.tau);
    Ok(x0 + &w)
}

/// Noise level for a target SNR under the normalization `‖X⁰‖_F = 1`:
/// `SNR = 1 / (√(mn)·τ)`, so `τ = 1 / (SNR·√(mn))`.
pub fn tau_from_snr<R: RealScalar>(snr: R, m: usize, n: usize) -> Result<R> {
    if !(snr > R::zero()) || !snr.is_finite() {
        return Err(Error::InvalidArgument(format!("snr must be positive, got {snr}")));
    }
    if m == 0 || n == 0 {
        return Err(Error::BadShape(format!("{m}x{n}")));
    }
    let mn = R::from_usize_lossy(m) * R::from_usize_lossy(n);
    Ok((snr * mn.sqrt()).recip())
}
