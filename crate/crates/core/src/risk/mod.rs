//! Noise models, test ensembles, Monte-Carlo risk and threshold selection.

pub mod estimator;
pub mod generate;
pub mod golden;
pub mod montecarlo;
pub mod noise;
pub mod sweep;

pub use estimator::{Estimator, Prepared};
pub use generate::{ensemble_rank, gen_test_matrix, low_rank_matrix, sigmoid_spectrum};
pub use golden::{golden_section_min, try_golden_section_min, SearchScale};
pub use montecarlo::{bias_summary, mc_risk, paired_trials, BiasSummary, TrialCurves};
pub use noise::{add_noise, tau_from_snr, trial_seed, NoiseModel};
pub use sweep::{
    argmin, lin_grid, log_grid, select_lambda, select_lambda_prepared, sure_curve, sweep, SweepMetadata,
    SweepResult,
};
