//! Synthetic ground-truth matrices, all normalized to unit Frobenius norm.
//!
//! With `r = min(m, n)`:
//!
//! | kind | construction                                   | rank        |
//! |------|------------------------------------------------|-------------|
//! | 1    | iid standard Gaussian                          | `r`         |
//! | 2    | `G₁G₂ᴴ`, Gaussian `m×k` and `n×k` factors       | `r/2`       |
//! | 3    | `G₁G₂ᴴ`                                        | `r/20`      |
//! | 4    | `U·diag(σ)·Vᴴ`, Haar `U`,`V`, sigmoid spectrum | `r`         |
//!
//! Ranks are rounded to the nearest integer and kept at least 1. At
//! `200 × 500` this gives full rank, rank 100, rank 10 and the spectrum
//! `σᵢ = √200 / (1 + exp((i − 100)/20))`.

use num_traits::Float;

use crate::error::{Error, Result};
use crate::linalg::Matrix;
use crate::risk::noise::{gaussian_matrix, haar_orthonormal, seeded_rng};
use crate::scalar::{RealScalar, Scalar};

/// Rank of ensemble `kind` at shape `m × n`.
pub fn ensemble_rank(kind: u32, m: usize, n: usize) -> Result<usize> {
    if m == 0 || n == 0 {
        return Err(Error::BadShape(format!("{m}x{n}")));
    }
    let r = m.min(n);
    let scaled = |div: f64| ((r as f64 / div).round() as usize).max(1);
    match kind {
        1 | 4 => Ok(r),
        2 => Ok(scaled(2.0)),
        3 => Ok(scaled(20.0)),
        k => Err(Error::BadKind(k)),
    }
}

/// `σᵢ = √r / (1 + exp((i − r/2)/(r/10)))` for `i = 1..=r`, before
/// normalization.
pub fn sigmoid_spectrum(r: usize) -> Vec<f64> {
    let rf = r as f64;
    (1..=r)
        .map(|i| rf.sqrt() / (1.0 + ((i as f64 - rf / 2.0) / (rf / 10.0)).exp()))
        .collect()
}

/// `G₁G₂ᴴ` with iid standard Gaussian `m × rank` and `n × rank` factors.
pub fn low_rank_matrix<T: Scalar>(m: usize, n: usize, rank: usize, seed: u64) -> Result<Matrix<T>> {
    if m == 0 || n == 0 || rank == 0 || rank > m.min(n) {
        return Err(Error::BadShape(format!("rank {rank} at {m}x{n}")));
    }
    let mut rng = seeded_rng(seed);
    let one = <T::Real as RealScalar>::lit(1.0);
    let g1: Matrix<T> = gaussian_matrix(&mut rng, m, rank, one);
    let g2: Matrix<T> = gaussian_matrix(&mut rng, n, rank, one);
    g1.matmul(&g2.adjoint())
}

fn normalized<T: Scalar>(x: Matrix<T>) -> Matrix<T> {
    let norm = x.frobenius_norm();
    x.scaled(norm.recip())
}

/// Test matrix of ensemble `kind` (1..=4), seeded and normalized to
/// `‖X⁰‖_F = 1`.
pub fn gen_test_matrix<T: Scalar>(kind: u32, m: usize, n: usize, seed: u64) -> Result<Matrix<T>> {
    let rank = ensemble_rank(kind, m, n)?;
    let x = match kind {
        1 => {
            let mut rng = seeded_rng(seed);
            gaussian_matrix(&mut rng, m, n, <T::Real as RealScalar>::lit(1.0))
        }
        2 | 3 => low_rank_matrix(m, n, rank, seed)?,
        _ => {
            let mut rng = seeded_rng(seed);
            let u: Matrix<T> = haar_orthonormal(&mut rng, m, rank);
            let v: Matrix<T> = haar_orthonormal(&mut rng, n, rank);
            let sigma: Vec<T::Real> = sigmoid_spectrum(rank).into_iter().map(RealScalar::lit).collect();
            let us = Matrix::from_fn(m, rank, |i, j| u[(i, j)].scale(sigma[j]));
            us.matmul(&v.adjoint())?
        }
    };
    Ok(normalized(x))
}
