//! Spectral matrix functions `f(Y) = U·diag(fᵢ(σᵢ))·Vᴴ`.

use std::fmt;
use std::sync::Arc;

use num_traits::Zero;

use crate::error::{Error, Result};
use crate::linalg::{
    default_gap_tol, is_simple_full_rank, svd, svd_differential, Matrix, SvdFactors,
};
use crate::scalar::{RealScalar, Scalar};

type ScalarFn<R> = Arc<dyn Fn(R) -> R + Send + Sync>;

/// User-supplied rule with its derivative.
#[derive(Clone)]
pub struct CustomSpectral<R> {
    pub name: String,
    eval: ScalarFn<R>,
    deriv: ScalarFn<R>,
    /// Declares `f(0) = 0`, which the repeated-spectrum divergence needs.
    pub f_at_zero_is_zero: bool,
}

impl<R> CustomSpectral<R> {
    pub fn new(
        name: impl Into<String>,
        eval: impl Fn(R) -> R + Send + Sync + 'static,
        deriv: impl Fn(R) -> R + Send + Sync + 'static,
        f_at_zero_is_zero: bool,
    ) -> Self {
        Self {
            name: name.into(),
            eval: Arc::new(eval),
            deriv: Arc::new(deriv),
            f_at_zero_is_zero,
        }
    }
}

/// Rule applied to the singular values.
#[derive(Clone)]
pub enum SpectralFunction<R> {
    /// `(σ − λ)₊`, the proximal map of `λ‖·‖_*`.
    SoftThreshold(R),
    /// `σ·1(σ > λ)`.
    HardThreshold(R),
    Identity,
    /// `a·σ`.
    Scale(R),
    Custom(CustomSpectral<R>),
    /// A separate rule `fᵢ` for each singular value index (not uniform).
    PerIndex(Vec<SpectralFunction<R>>),
}

impl<R: fmt::Debug> fmt::Debug for SpectralFunction<R> {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Self::SoftThreshold(l) => write!(f, "SoftThreshold({l:?})"),
            Self::HardThreshold(l) => write!(f, "HardThreshold({l:?})"),
            Self::Identity => f.write_str("Identity"),
            Self::Scale(a) => write!(f, "Scale({a:?})"),
            Self::Custom(c) => write!(f, "Custom({})", c.name),
            Self::PerIndex(v) => f.debug_tuple("PerIndex").field(v).finish(),
        }
    }
}

impl<R: RealScalar> SpectralFunction<R> {
    /// True when the same rule applies to every index.
    pub fn is_uniform(&self) -> bool {
        !matches!(self, Self::PerIndex(_))
    }

    pub fn f_at_zero_is_zero(&self) -> bool {
        match self {
            Self::SoftThreshold(_) | Self::HardThreshold(_) | Self::Identity | Self::Scale(_) => true,
            Self::Custom(c) => c.f_at_zero_is_zero,
            Self::PerIndex(v) => v.iter().all(|f| f.f_at_zero_is_zero()),
        }
    }

    fn rule(&self, index: usize) -> &Self {
        match self {
            Self::PerIndex(v) => v[index.min(v.len() - 1)].rule(0),
            other => other,
        }
    }

    /// `fᵢ(σ)`.
    pub fn eval(&self, index: usize, sigma: R) -> R {
        match self.rule(index) {
            Self::SoftThreshold(l) => soft_threshold_scalar(sigma, *l),
            Self::HardThreshold(l) => {
                if sigma > *l {
                    sigma
                } else {
                    R::zero()
                }
            }
            Self::Identity => sigma,
            Self::Scale(a) => *a * sigma,
            Self::Custom(c) => (c.eval)(sigma),
            Self::PerIndex(_) => unreachable!("rule() resolves nesting"),
        }
    }

    /// `fᵢ′(σ)`. Thresholds use `1(σ > λ)`; a soft threshold at `λ = 0` is
    /// the identity on `σ ≥ 0` and has derivative one everywhere there.
    pub fn deriv(&self, index: usize, sigma: R) -> R {
        match self.rule(index) {
            Self::SoftThreshold(l) => {
                if *l == R::zero() || sigma > *l {
                    R::one()
                } else {
                    R::zero()
                }
            }
            Self::HardThreshold(l) => {
                if sigma > *l {
                    R::one()
                } else {
                    R::zero()
                }
            }
            Self::Identity => R::one(),
            Self::Scale(a) => *a,
            Self::Custom(c) => (c.deriv)(sigma),
            Self::PerIndex(_) => unreachable!("rule() resolves nesting"),
        }
    }

    /// Location where `fᵢ` fails to be differentiable on `σ > 0`, if any.
    pub fn kink(&self, index: usize) -> Option<R> {
        match self.rule(index) {
            Self::SoftThreshold(l) if *l > R::zero() => Some(*l),
            Self::HardThreshold(l) => Some(*l),
            _ => None,
        }
    }

    pub fn values(&self, sigma: &[R]) -> Vec<R> {
        sigma.iter().enumerate().map(|(i, &s)| self.eval(i, s)).collect()
    }

    pub fn derivs(&self, sigma: &[R]) -> Vec<R> {
        sigma.iter().enumerate().map(|(i, &s)| self.deriv(i, s)).collect()
    }

    /// Rejects negative or non-finite parameters.
    pub fn validate(&self) -> Result<()> {
        match self {
            Self::SoftThreshold(l) | Self::HardThreshold(l) => check_lambda(*l),
            Self::Scale(a) if !a.is_finite() => {
                Err(Error::InvalidArgument(format!("scale must be finite, got {a}")))
            }
            Self::PerIndex(v) => {
                if v.is_empty() {
                    return Err(Error::InvalidArgument("empty per-index rule list".into()));
                }
                v.iter().try_for_each(|f| f.validate())
            }
            _ => Ok(()),
        }
    }
}

pub(crate) fn check_lambda<R: RealScalar>(lambda: R) -> Result<()> {
    if lambda >= R::zero() && lambda.is_finite() {
        Ok(())
    } else {
        Err(Error::InvalidArgument(format!("threshold must be finite and >= 0, got {lambda}")))
    }
}

/// `max(σ − λ, 0)`.
#[inline]
pub fn soft_threshold_scalar<R: RealScalar>(sigma: R, lambda: R) -> R {
    let d = sigma - lambda;
    if d > R::zero() {
        d
    } else {
        R::zero()
    }
}

/// Applies `f` to precomputed factors.
pub fn apply_to_factors<T: Scalar>(
    factors: &SvdFactors<T>,
    f: &SpectralFunction<T::Real>,
) -> Result<Matrix<T>> {
    f.validate()?;
    if !f.is_uniform() {
        let tol = default_gap_tol(&factors.sigma);
        if !is_simple_full_rank(&factors.sigma, tol).simple_full_rank {
            // Zero singular values share an arbitrary subspace as well.
            return Err(Error::AmbiguousSpectrum);
        }
    }
    Ok(factors.compose(&f.values(&factors.sigma)))
}

/// `U·f(Σ)·Vᴴ`. Non-uniform rules are rejected on tied or rank-deficient
/// spectra, where the assignment of `fᵢ` to singular vectors is ambiguous.
pub fn apply_spectral<T: Scalar>(x: &Matrix<T>, f: &SpectralFunction<T::Real>) -> Result<Matrix<T>> {
    let factors = svd(x)?;
    apply_to_factors(&factors, f)
}

/// Singular value thresholding `Σ (σᵢ − λ)₊ uᵢvᵢᴴ`. At `λ = 0` this is the
/// identity and the input is returned unchanged.
pub fn svt<T: Scalar>(y: &Matrix<T>, lambda: T::Real) -> Result<Matrix<T>> {
    if lambda == T::Real::zero() {
        y.check_finite()?;
        return Ok(y.clone());
    }
    apply_spectral(y, &SpectralFunction::SoftThreshold(lambda))
}

/// Singular value hard thresholding `Σ σᵢ·1(σᵢ > λ) uᵢvᵢᴴ`.
pub fn svht<T: Scalar>(y: &Matrix<T>, lambda: T::Real) -> Result<Matrix<T>> {
    apply_spectral(y, &SpectralFunction::HardThreshold(lambda))
}

/// Directional derivative of `f` at `x` along `delta` by the product rule
/// over the closed-form SVD differential (simple, full-rank `x` only).
pub fn directional_derivative<T: Scalar>(
    x: &Matrix<T>,
    delta: &Matrix<T>,
    f: &SpectralFunction<T::Real>,
) -> Result<Matrix<T>> {
    f.validate()?;
    let d = svd_differential(x, delta)?;
    let sigma = &d.factors.sigma;
    Ok(d.product_rule(&f.values(sigma), &f.derivs(sigma)))
}

/// Nuclear norm `Σ σᵢ`.
pub fn nuclear_norm<T: Scalar>(x: &Matrix<T>) -> Result<T::Real> {
    Ok(svd(x)?.sigma.into_iter().fold(T::Real::zero(), |a, b| a + b))
}

/// Number of singular values above `tol`.
pub fn numerical_rank<T: Scalar>(x: &Matrix<T>, tol: T::Real) -> Result<usize> {
    Ok(svd(x)?.sigma.iter().filter(|&&s| s > tol).count())
}
