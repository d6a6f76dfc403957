//! SURE curves over threshold grids and SURE-driven threshold selection.

use num_traits::Zero;
use rayon::prelude::*;

use crate::divergence::closed_form::DivergenceOptions;
use crate::divergence::sure::SureReport;
use crate::error::{Error, Result};
use crate::linalg::Matrix;
use crate::risk::estimator::{Estimator, Prepared};
use crate::risk::golden::{try_golden_section_min, SearchScale};
use crate::scalar::{Field, RealScalar, Scalar};

/// `count` points from `lo` to `hi` equispaced in `ln λ`; requires `lo > 0`.
pub fn log_grid<R: RealScalar>(lo: R, hi: R, count: usize) -> Result<Vec<R>> {
    if !(lo > R::zero()) {
        return Err(Error::InvalidArgument(format!("log grid needs lo > 0, got {lo}")));
    }
    Ok(lin_grid(lo.ln(), hi.ln(), count)?
        .into_iter()
        .enumerate()
        .map(|(k, u)| match k {
            0 => lo,
            k if k + 1 == count => hi,
            _ => u.exp(),
        })
        .collect())
}

/// `count` equispaced points from `lo` to `hi` inclusive.
pub fn lin_grid<R: RealScalar>(lo: R, hi: R, count: usize) -> Result<Vec<R>> {
    if count == 0 || !lo.is_finite() || !hi.is_finite() || hi < lo || (count > 1 && hi == lo) {
        return Err(Error::InvalidArgument(format!("bad grid {lo}:{hi}:{count}")));
    }
    if count == 1 {
        return Ok(vec![lo]);
    }
    let step = (hi - lo) / R::from_usize_lossy(count - 1);
    Ok((0..count)
        .map(|k| if k + 1 == count { hi } else { lo + step * R::from_usize_lossy(k) })
        .collect())
}

#[derive(Debug, Clone, PartialEq)]
pub struct SweepMetadata<R> {
    pub rows: usize,
    pub cols: usize,
    pub field: Field,
    pub tau: R,
    pub snr: Option<R>,
    pub seed: Option<u64>,
    pub estimator: Estimator,
}

#[derive(Debug, Clone, PartialEq)]
pub struct SweepResult<R> {
    pub lambdas: Vec<R>,
    pub sure_values: Vec<R>,
    pub mc_risk: Option<Vec<R>>,
    /// First grid point attaining the minimum SURE.
    pub argmin_lambda: R,
    pub argmin_index: usize,
    pub metadata: SweepMetadata<R>,
}

impl<R: RealScalar> SweepResult<R> {
    pub fn with_mc_risk(mut self, mc: Vec<R>) -> Result<Self> {
        if mc.len() != self.lambdas.len() {
            return Err(Error::ShapeMismatch(format!(
                "{} risk values for {} thresholds",
                mc.len(),
                self.lambdas.len()
            )));
        }
        self.mc_risk = Some(mc);
        Ok(self)
    }

    pub fn with_provenance(mut self, snr: Option<R>, seed: Option<u64>) -> Self {
        self.metadata.snr = snr;
        self.metadata.seed = seed;
        self
    }
}

fn check_grid<R: RealScalar>(lambdas: &[R]) -> Result<()> {
    if lambdas.is_empty() {
        return Err(Error::InvalidArgument("empty threshold grid".into()));
    }
    if let Some(&l) = lambdas.iter().find(|&&l| !(l >= R::zero()) || !l.is_finite()) {
        return Err(Error::InvalidArgument(format!("threshold must be finite and >= 0, got {l}")));
    }
    if let Some(k) = lambdas.windows(2).position(|w| !(w[0] < w[1])) {
        return Err(Error::UnsortedInput { index: k + 1 });
    }
    Ok(())
}

/// Index of the first minimum.
pub fn argmin<R: RealScalar>(values: &[R]) -> usize {
    let mut best = 0;
    for (k, &v) in values.iter().enumerate() {
        if v < values[best] {
            best = k;
        }
    }
    best
}

/// SURE reports of a prepared observation over an ascending grid.
pub fn sure_curve<T: Scalar>(
    prepared: &Prepared<T>,
    lambdas: &[T::Real],
    tau: T::Real,
    opts: &DivergenceOptions<T::Real>,
) -> Result<Vec<SureReport<T::Real>>> {
    check_grid(lambdas)?;
    lambdas.par_iter().map(|&l| prepared.sure(l, tau, opts)).collect()
}

/// SURE of the estimator at every λ of an ascending grid.
pub fn sweep<T: Scalar>(
    y: &Matrix<T>,
    lambdas: &[T::Real],
    tau: T::Real,
    estimator: &Estimator,
) -> Result<SweepResult<T::Real>> {
    check_grid(lambdas)?;
    let prepared = Prepared::new(y, estimator)?;
    let reports = sure_curve(&prepared, lambdas, tau, &DivergenceOptions::default())?;
    let sure_values: Vec<T::Real> = reports.iter().map(|r| r.sure).collect();
    let k = argmin(&sure_values);
    Ok(SweepResult {
        lambdas: lambdas.to_vec(),
        argmin_lambda: lambdas[k],
        argmin_index: k,
        sure_values,
        mc_risk: None,
        metadata: SweepMetadata {
            rows: y.rows(),
            cols: y.cols(),
            field: T::FIELD,
            tau,
            snr: None,
            seed: None,
            estimator: *estimator,
        },
    })
}

/// Threshold minimizing SURE on `[lo, hi]` by golden-section search
/// (log-λ when `lo > 0`), with the SURE report at the returned λ.
pub fn select_lambda<T: Scalar>(
    y: &Matrix<T>,
    tau: T::Real,
    estimator: &Estimator,
    lo: T::Real,
    hi: T::Real,
    tol: T::Real,
) -> Result<(T::Real, SureReport<T::Real>)> {
    let prepared = Prepared::new(y, estimator)?;
    select_lambda_prepared(&prepared, tau, lo, hi, tol)
}

pub fn select_lambda_prepared<T: Scalar>(
    prepared: &Prepared<T>,
    tau: T::Real,
    lo: T::Real,
    hi: T::Real,
    tol: T::Real,
) -> Result<(T::Real, SureReport<T::Real>)> {
    let opts = DivergenceOptions::default();
    if !(lo >= T::Real::zero()) {
        return Err(Error::BadBracket {
            lo: lo.to_f64_lossy(),
            hi: hi.to_f64_lossy(),
            tol: tol.to_f64_lossy(),
        });
    }
    let best = try_golden_section_min(|l| Ok(prepared.sure(l, tau, &opts)?.sure), lo, hi, tol, SearchScale::Auto)?;
    Ok((best, prepared.sure(best, tau, &opts)?))
}
