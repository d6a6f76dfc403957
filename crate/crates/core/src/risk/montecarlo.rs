//! Monte-Carlo reference risk.
//!
//! Trial `j` draws its noise from seed `seed ⊕ j`, so results do not depend
//! on how trials are scheduled; means are accumulated in trial order.

use rayon::prelude::*;

use crate::divergence::closed_form::DivergenceOptions;
use crate::error::{Error, Result};
use crate::linalg::Matrix;
use crate::risk::estimator::{Estimator, Prepared};
use crate::risk::noise::{add_noise, trial_seed, NoiseModel};
use crate::scalar::{RealScalar, Scalar};

/// Loss and SURE of one noisy draw over a threshold grid.
#[derive(Debug, Clone, PartialEq)]
pub struct TrialCurves<R> {
    pub trial: u64,
    pub loss: Vec<R>,
    pub sure: Vec<R>,
}

fn check_trials(trials: usize) -> Result<()> {
    if trials == 0 {
        Err(Error::InvalidArgument("at least one trial is required".into()))
    } else {
        Ok(())
    }
}

fn run_trials<T: Scalar>(
    x0: &Matrix<T>,
    lambdas: &[T::Real],
    noise: &NoiseModel<T::Real>,
    trials: usize,
    estimator: &Estimator,
    with_sure: bool,
) -> Result<Vec<TrialCurves<T::Real>>> {
    check_trials(trials)?;
    let opts = DivergenceOptions::default();
    (0..trials as u64)
        .into_par_iter()
        .map(|j| {
            let y = add_noise(x0, &noise.with_seed(trial_seed(noise.seed, j)))?;
            let prepared = Prepared::new(&y, estimator)?;
            let loss = prepared.losses(x0, lambdas)?;
            let sure = if with_sure {
                lambdas
                    .iter()
                    .map(|&l| Ok(prepared.sure(l, noise.tau, &opts)?.sure))
                    .collect::<Result<Vec<_>>>()?
            } else {
                Vec::new()
            };
            Ok(TrialCurves { trial: j, loss, sure })
        })
        .collect()
}

/// Loss and SURE for each of `trials` independent draws of `x0 + W`.
pub fn paired_trials<T: Scalar>(
    x0: &Matrix<T>,
    lambdas: &[T::Real],
    noise: &NoiseModel<T::Real>,
    trials: usize,
    estimator: &Estimator,
) -> Result<Vec<TrialCurves<T::Real>>> {
    run_trials(x0, lambdas, noise, trials, estimator, true)
}

fn column_mean<R: RealScalar>(rows: &[Vec<R>], k: usize) -> R {
    let sum = rows.iter().fold(R::zero(), |acc, r| acc + r[k]);
    sum / R::from_usize_lossy(rows.len())
}

/// Mean squared Frobenius error of the estimator at each λ over `trials`
/// draws.
pub fn mc_risk<T: Scalar>(
    x0: &Matrix<T>,
    lambdas: &[T::Real],
    noise: &NoiseModel<T::Real>,
    trials: usize,
    estimator: &Estimator,
) -> Result<Vec<T::Real>> {
    let runs = run_trials(x0, lambdas, noise, trials, estimator, false)?;
    let losses: Vec<Vec<T::Real>> = runs.into_iter().map(|t| t.loss).collect();
    Ok((0..lambdas.len()).map(|k| column_mean(&losses, k)).collect())
}

/// Per-λ summary of paired trials.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct BiasSummary<R> {
    pub lambda: R,
    pub mc_risk: R,
    pub mean_sure: R,
    /// Standard error of the mean of per-trial `loss − SURE`.
    pub se_diff: R,
}

impl<R: RealScalar> BiasSummary<R> {
    /// `|mean SURE − MC risk|` in units of the standard error.
    pub fn z_score(&self) -> R {
        let gap = (self.mean_sure - self.mc_risk).abs();
        if self.se_diff > R::zero() {
            gap / self.se_diff
        } else if gap == R::zero() {
            R::zero()
        } else {
            R::infinity()
        }
    }
}

/// Summaries of paired trials, one per λ.
pub fn bias_summary<R: RealScalar>(lambdas: &[R], trials: &[TrialCurves<R>]) -> Vec<BiasSummary<R>> {
    let n = R::from_usize_lossy(trials.len());
    lambdas
        .iter()
        .enumerate()
        .map(|(k, &lambda)| {
            let diffs: Vec<R> = trials.iter().map(|t| t.loss[k] - t.sure[k]).collect();
            let mean_diff = diffs.iter().fold(R::zero(), |a, &d| a + d) / n;
            let var = if trials.len() > 1 {
                diffs.iter().fold(R::zero(), |a, &d| a + (d - mean_diff) * (d - mean_diff))
                    / (n - R::one())
            } else {
                R::zero()
            };
            let mean_of = |pick: fn(&TrialCurves<R>) -> &[R]| {
                trials.iter().fold(R::zero(), |a, t| a + pick(t)[k]) / n
            };
            BiasSummary {
                lambda,
                mc_risk: mean_of(|t| &t.loss),
                mean_sure: mean_of(|t| &t.sure),
                se_diff: (var / n).sqrt(),
            }
        })
        .collect()
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::risk::generate::low_rank_matrix;
    use crate::scalar::Field;
    use crate::spectral::svt;
    use num_complex::Complex64;

    #[test]
    fn noiseless_risk_is_deterministic_error() {
        let x0: Matrix<f64> = low_rank_matrix(6, 5, 2, 1).unwrap();
        let nm = NoiseModel::new(Field::Real, 0.0, 3).unwrap();
        let lambdas = [0.0, 1.0, 3.0];
        let r = mc_risk(&x0, &lambdas, &nm, 4, &Estimator::Svt).unwrap();
        for (&l, &v) in lambdas.iter().zip(&r) {
            let direct = (&svt(&x0, l).unwrap() - &x0).frobenius_norm_sqr();
            assert!((v - direct).abs() <= 1e-10 * direct.max(1.0), "{v} vs {direct}");
        }
    }

    #[test]
    fn zero_threshold_risk_is_noise_energy() {
        let x0: Matrix<Complex64> = low_rank_matrix(10, 8, 2, 2).unwrap();
        let tau = 0.5;
        let nm = NoiseModel::new(Field::Complex, tau, 4).unwrap();
        let trials = 200;
        let runs = paired_trials(&x0, &[0.0], &nm, trials, &Estimator::Svt).unwrap();
        let losses: Vec<f64> = runs.iter().map(|t| t.loss[0]).collect();
        let mean = losses.iter().sum::<f64>() / trials as f64;
        let var = losses.iter().map(|v| (v - mean).powi(2)).sum::<f64>() / (trials as f64 - 1.0);
        let se = (var / trials as f64).sqrt();
        let expect = 2.0 * 80.0 * tau * tau;
        assert!((mean - expect).abs() <= 3.0 * se, "{mean} vs {expect} (se {se})");
        // SURE at λ = 0 is the constant it should be.
        assert!(runs.iter().all(|t| (t.sure[0] - expect).abs() < 1e-9));
    }

    #[test]
    fn trial_order_does_not_matter() {
        let x0: Matrix<f64> = low_rank_matrix(6, 4, 1, 5).unwrap();
        let nm = NoiseModel::new(Field::Real, 0.2, 8).unwrap();
        let a = paired_trials(&x0, &[0.3], &nm, 6, &Estimator::Svt).unwrap();
        let b = paired_trials(&x0, &[0.3], &nm, 6, &Estimator::Svt).unwrap();
        assert_eq!(a, b);
        assert!(mc_risk(&x0, &[0.3], &nm, 0, &Estimator::Svt).is_err());
    }
}
