//! Central-difference divergence, the independent check on every closed form.

use num_traits::{Float, One, Zero};
use rayon::prelude::*;

use crate::error::{Error, Result};
use crate::linalg::{singular_values, Matrix};
use crate::scalar::{RealScalar, Scalar};
use crate::spectral::{apply_spectral, SpectralFunction};

/// Relative disagreement between steps `h` and `h/2` that signals roundoff.
const HALVING_TOLERANCE: f64 = 1e-3;

/// `1e-5 · max(1, σ_max(x))`.
pub fn default_fd_step<T: Scalar>(x: &Matrix<T>) -> Result<T::Real> {
    let smax = singular_values(x)?.first().copied().unwrap_or_else(T::Real::zero);
    Ok(<T::Real as RealScalar>::lit(1e-5) * smax.max(T::Real::one()))
}

fn central_sum<T, F>(x: &Matrix<T>, h: T::Real, map: &F) -> Result<T::Real>
where
    T: Scalar,
    F: Fn(&Matrix<T>) -> Result<Matrix<T>> + Sync,
{
    let dirs = T::unit_directions();
    let (rows, cols) = x.shape();
    let terms: Vec<Result<T::Real>> = (0..rows * cols * dirs.len())
        .into_par_iter()
        .map(|k| {
            let d = dirs[k % dirs.len()];
            let (i, j) = ((k / dirs.len()) / cols, (k / dirs.len()) % cols);
            let step = d * T::from_real(h);
            let mut plus = x.clone();
            plus[(i, j)] += step;
            let mut minus = x.clone();
            minus[(i, j)] -= step;
            let diff = map(&plus)?[(i, j)] - map(&minus)?[(i, j)];
            Ok((d.conj() * diff).re() / (h + h))
        })
        .collect();
    // Summed in coordinate order so the result does not depend on scheduling.
    terms.into_iter().try_fold(T::Real::zero(), |acc, t| Ok(acc + t?))
}

/// Finite-difference divergence of an arbitrary map `x ↦ map(x)`.
///
/// Complex inputs are differentiated along `E^{ij}` and `i·E^{ij}`, taking
/// the matching real and imaginary output components. The result at `h` is
/// compared with the one at `h/2`; a relative disagreement above `1e-3`
/// fails with `StepTooSmall`.
pub fn fd_divergence<T, F>(x: &Matrix<T>, h: T::Real, map: F) -> Result<T::Real>
where
    T: Scalar,
    F: Fn(&Matrix<T>) -> Result<Matrix<T>> + Sync,
{
    if !(h > T::Real::zero()) || !h.is_finite() {
        return Err(Error::InvalidArgument(format!("step must be positive, got {h}")));
    }
    x.check_finite()?;
    let coarse = central_sum(x, h, &map)?;
    let fine = central_sum(x, h * <T::Real as RealScalar>::lit(0.5), &map)?;
    let scale = coarse.abs().max(T::Real::one());
    if (coarse - fine).abs() > <T::Real as RealScalar>::lit(HALVING_TOLERANCE) * scale {
        return Err(Error::StepTooSmall {
            coarse: coarse.to_f64_lossy(),
            fine: fine.to_f64_lossy(),
        });
    }
    Ok(coarse)
}

/// Finite-difference divergence of the spectral map `x ↦ f(x)`.
pub fn fd_divergence_oracle<T: Scalar>(
    x: &Matrix<T>,
    f: &SpectralFunction<T::Real>,
    h: T::Real,
) -> Result<T::Real> {
    f.validate()?;
    fd_divergence(x, h, |z| apply_spectral(z, f))
}
