//! Estimator families with their decompositions cached for reuse across
//! thresholds.

use crate::blockwise::{BlockConfig, BlockDecomposition};
use crate::divergence::closed_form::DivergenceOptions;
use crate::divergence::sure::{sure_from_spectrum, SureReport};
use crate::error::{Error, Result};
use crate::linalg::{svd, Matrix, SvdFactors};
use crate::scalar::{RealScalar, Scalar};
use crate::spectral::{check_lambda, soft_threshold_scalar, SpectralFunction};

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Estimator {
    /// Singular value thresholding of the whole matrix.
    Svt,
    /// Block-wise SVT over a Casorati matrix.
    Bsvt(BlockConfig),
}

impl Estimator {
    pub fn name(&self) -> &'static str {
        match self {
            Estimator::Svt => "svt",
            Estimator::Bsvt(_) => "bsvt",
        }
    }
}

/// An observation decomposed once for a given estimator.
#[derive(Debug, Clone)]
pub enum Prepared<T: Scalar> {
    Svt(SvdFactors<T>),
    Bsvt(BlockDecomposition<T>),
}

impl<T: Scalar> Prepared<T> {
    pub fn new(y: &Matrix<T>, estimator: &Estimator) -> Result<Self> {
        match estimator {
            Estimator::Svt => Ok(Prepared::Svt(svd(y)?)),
            Estimator::Bsvt(cfg) => Ok(Prepared::Bsvt(BlockDecomposition::new(y, cfg)?)),
        }
    }

    pub fn shape(&self) -> (usize, usize) {
        match self {
            Prepared::Svt(f) => (f.u.rows(), f.v.rows()),
            Prepared::Bsvt(d) => (d.config().rows(), d.factors()[0].v.rows()),
        }
    }

    /// Largest singular value the estimator thresholds; above it the
    /// estimate is zero.
    pub fn sigma_max(&self) -> T::Real {
        match self {
            Prepared::Svt(f) => f.sigma_max(),
            Prepared::Bsvt(d) => d.sigma_max(),
        }
    }

    pub fn apply(&self, lambda: T::Real) -> Result<Matrix<T>> {
        check_lambda(lambda)?;
        match self {
            Prepared::Svt(f) => Ok(f.compose(&SpectralFunction::SoftThreshold(lambda).values(&f.sigma))),
            Prepared::Bsvt(d) => d.apply(lambda),
        }
    }

    pub fn sure(
        &self,
        lambda: T::Real,
        tau: T::Real,
        opts: &DivergenceOptions<T::Real>,
    ) -> Result<SureReport<T::Real>> {
        check_lambda(lambda)?;
        match self {
            Prepared::Svt(f) => {
                let (m, n) = self.shape();
                sure_from_spectrum(&f.sigma, m, n, T::FIELD, &SpectralFunction::SoftThreshold(lambda), tau, opts)
            }
            Prepared::Bsvt(d) => d.sure(lambda, tau, opts),
        }
    }

    /// `‖estimate(λ) − x0‖²_F` for every λ.
    ///
    /// For SVT this expands to `Σ fₖ² − 2Σ fₖ·Re(uₖᴴ x0 vₖ) + ‖x0‖²` with
    /// `fₖ = (σₖ − λ)₊`, so one projection serves the whole grid.
    pub fn losses(&self, x0: &Matrix<T>, lambdas: &[T::Real]) -> Result<Vec<T::Real>> {
        if x0.shape() != self.shape() {
            return Err(Error::ShapeMismatch(format!(
                "reference is {}x{}, observation is {}x{}",
                x0.rows(),
                x0.cols(),
                self.shape().0,
                self.shape().1
            )));
        }
        lambdas.iter().try_for_each(|&l| check_lambda(l))?;
        match self {
            Prepared::Svt(f) => {
                let proj = f.project_diagonal(x0);
                let energy = x0.frobenius_norm_sqr();
                let two = <T::Real as RealScalar>::lit(2.0);
                Ok(lambdas
                    .iter()
                    .map(|&l| {
                        let mut acc = energy;
                        for (&s, &p) in f.sigma.iter().zip(&proj) {
                            let v = soft_threshold_scalar(s, l);
                            acc += v * (v - two * p);
                        }
                        acc
                    })
                    .collect())
            }
            Prepared::Bsvt(d) => lambdas
                .iter()
                .map(|&l| Ok((&d.apply(l)? - x0).frobenius_norm_sqr()))
                .collect(),
        }
    }
}
