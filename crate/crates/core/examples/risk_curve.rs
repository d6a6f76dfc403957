//! SURE against Monte-Carlo risk for one synthetic panel.
//!
//! ```text
//! cargo run --release -p sure-svt --example risk_curve -- [kind] [snr] [m] [n] [trials]
//! ```
//!
//! Prints `lambda,sure,mc_risk` over `λ = τ·10^u`, `u ∈ [-1, 4]`, 101 points,
//! then the sup-norm gap relative to the peak risk.

use sure_svt::risk::{add_noise, gen_test_matrix, log_grid, mc_risk, sweep, tau_from_snr, Estimator, NoiseModel};
use sure_svt::{Field, RealMatrix};

fn arg<T: std::str::FromStr>(args: &[String], i: usize, default: T) -> T {
    args.get(i).and_then(|a| a.parse().ok()).unwrap_or(default)
}

fn main() -> sure_svt::Result<()> {
    let args: Vec<String> = std::env::args().skip(1).collect();
    let kind: u32 = arg(&args, 0, 2);
    let snr: f64 = arg(&args, 1, 1.0);
    let m: usize = arg(&args, 2, 50);
    let n: usize = arg(&args, 3, 125);
    let trials: usize = arg(&args, 4, 50);

    let x0: RealMatrix = gen_test_matrix(kind, m, n, 1)?;
    let tau = tau_from_snr(snr, m, n)?;
    let grid: Vec<f64> = log_grid(1e-1, 1e4, 101)?.into_iter().map(|g| g * tau).collect();
    let noise = NoiseModel::new(Field::Real, tau, 7)?;
    let risk = mc_risk(&x0, &grid, &noise, trials, &Estimator::Svt)?;
    let y = add_noise(&x0, &noise.with_seed(u64::MAX))?;
    let curve = sweep(&y, &grid, tau, &Estimator::Svt)?;

    println!("lambda,sure,mc_risk");
    for ((l, s), r) in grid.iter().zip(&curve.sure_values).zip(&risk) {
        println!("{l:e},{s:e},{r:e}");
    }
    let peak = risk.iter().copied().fold(0.0, f64::max);
    let gap = risk.iter().zip(&curve.sure_values).map(|(r, s)| (r - s).abs()).fold(0.0, f64::max);
    println!("# argmin_lambda={:e} sup_gap/peak={:.4}", curve.argmin_lambda, gap / peak);
    Ok(())
}
