//! Stein unbiased risk estimates of spectral estimators.
//!
//! Under `Y = X⁰ + W` with every real coordinate of `W` iid `N(0, τ²)`,
//!
//! ```text
//! SURE(f)(Y) = −β·m·n·τ² + ‖f(Y) − Y‖²_F + 2τ²·div f(Y)
//! ```
//!
//! is unbiased for `E‖f(Y) − X⁰‖²_F`, where β is 1 for real and 2 for
//! complex data. For SVT the residual reduces to `Σ min(λ², σᵢ²)`.


use crate::divergence::closed_form::{divergence, Divergence, DivergenceOptions};
use crate::error::{Error, Result};
use crate::linalg::{svd, Matrix};
use crate::scalar::{Field, RealScalar, Scalar};
use crate::spectral::SpectralFunction;

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct SureReport<R> {
    /// Threshold, when the estimator has one.
    pub lambda: Option<R>,
    pub divergence: R,
    pub residual_term: R,
    /// `−β·(coordinates)·τ²`.
    pub constant_term: R,
    /// `constant_term + residual_term + 2τ²·divergence`.
    pub sure: R,
    pub tau: R,
    /// Ties or zeros in the spectrum were handled by the repeated policy.
    pub repeated_spectrum: bool,
    /// Some singular value was classified onto one side of a kink.
    pub threshold_tie: bool,
}

impl<R: RealScalar> SureReport<R> {
    /// Assembles a report; `sure` is computed from the stored fields.
    pub fn assemble(lambda: Option<R>, div: Divergence<R>, residual_term: R, constant_term: R, tau: R) -> Self {
        let two_tau2 = R::lit(2.0) * tau * tau;
        Self {
            lambda,
            divergence: div.value,
            residual_term,
            constant_term,
            sure: constant_term + residual_term + two_tau2 * div.value,
            tau,
            repeated_spectrum: div.repeated_spectrum,
            threshold_tie: div.threshold_tie,
        }
    }
}

pub(crate) fn check_tau<R: RealScalar>(tau: R) -> Result<()> {
    if tau >= R::zero() && tau.is_finite() {
        Ok(())
    } else {
        Err(Error::InvalidArgument(format!("noise level must be finite and >= 0, got {tau}")))
    }
}

/// `−β·coords·τ²`.
pub fn constant_term<R: RealScalar>(field: Field, coords: usize, tau: R) -> R {
    -(R::from_usize_lossy(field.beta() * coords) * tau * tau)
}

/// `‖f(Y) − Y‖²_F` from the spectrum; `Σ min(λ², σᵢ²)` for a soft threshold.
pub fn residual_from_spectrum<R: RealScalar>(sigma: &[R], f: &SpectralFunction<R>) -> R {
    match f {
        SpectralFunction::SoftThreshold(l) => sigma
            .iter()
            .map(|&s| {
                let c = s.min(*l);
                c * c
            })
            .fold(R::zero(), |a, b| a + b),
        _ => sigma
            .iter()
            .enumerate()
            .map(|(i, &s)| {
                let d = f.eval(i, s) - s;
                d * d
            })
            .fold(R::zero(), |a, b| a + b),
    }
}

/// SURE of `f` at a matrix of shape `m × n` with singular values `sigma`.
#[allow(clippy::too_many_arguments)]
pub fn sure_from_spectrum<R: RealScalar>(
    sigma: &[R],
    m: usize,
    n: usize,
    field: Field,
    f: &SpectralFunction<R>,
    tau: R,
    opts: &DivergenceOptions<R>,
) -> Result<SureReport<R>> {
    check_tau(tau)?;
    let div = divergence(sigma, m, n, f, field, opts)?;
    let lambda = match f {
        SpectralFunction::SoftThreshold(l) | SpectralFunction::HardThreshold(l) => Some(*l),
        _ => None,
    };
    Ok(SureReport::assemble(
        lambda,
        div,
        residual_from_spectrum(sigma, f),
        constant_term(field, m * n, tau),
        tau,
    ))
}

pub fn sure_spectral_with<T: Scalar>(
    y: &Matrix<T>,
    f: &SpectralFunction<T::Real>,
    tau: T::Real,
    opts: &DivergenceOptions<T::Real>,
) -> Result<SureReport<T::Real>> {
    check_tau(tau)?;
    f.validate()?;
    let factors = svd(y)?;
    sure_from_spectrum(&factors.sigma, y.rows(), y.cols(), T::FIELD, f, tau, opts)
}

/// SURE of a general spectral estimator with default tie handling.
pub fn sure_spectral<T: Scalar>(
    y: &Matrix<T>,
    f: &SpectralFunction<T::Real>,
    tau: T::Real,
) -> Result<SureReport<T::Real>> {
    sure_spectral_with(y, f, tau, &DivergenceOptions::default())
}

pub fn sure_svt_with<T: Scalar>(
    y: &Matrix<T>,
    lambda: T::Real,
    tau: T::Real,
    opts: &DivergenceOptions<T::Real>,
) -> Result<SureReport<T::Real>> {
    sure_spectral_with(y, &SpectralFunction::SoftThreshold(lambda), tau, opts)
}

/// SURE of singular value thresholding at `lambda`.
pub fn sure_svt<T: Scalar>(y: &Matrix<T>, lambda: T::Real, tau: T::Real) -> Result<SureReport<T::Real>> {
    sure_svt_with(y, lambda, tau, &DivergenceOptions::default())
}

/// Plug-in degrees of freedom of SVT: its divergence at `y`.
pub fn degrees_of_freedom<T: Scalar>(y: &Matrix<T>, lambda: T::Real) -> Result<T::Real> {
    let factors = svd(y)?;
    let f = SpectralFunction::SoftThreshold(lambda);
    let d = divergence(&factors.sigma, y.rows(), y.cols(), &f, T::FIELD, &DivergenceOptions::default())?;
    Ok(d.value)
}
