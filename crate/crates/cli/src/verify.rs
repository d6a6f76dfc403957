//! Self-verification suites run by `sure-svt verify`.

use std::io::Write;

use num_complex::Complex64;
use sure_svt::blockwise::{bsvt, div_bsvt, embed_block_add, extract_block, BlockConfig};
use sure_svt::divergence::{div_spectral_repeated, div_spectral_simple, fd_divergence, fd_divergence_oracle, sure_svt};
use sure_svt::linalg::{singular_values, svd, SpectrumProfile};
use sure_svt::risk::noise::{gaussian_matrix, seeded_rng};
use sure_svt::spectral::directional_derivative;
use sure_svt::{svt, Field, Matrix, Scalar, SpectralFunction};

use crate::args::{Suite, VerifyArgs};
use crate::error::{CliError, CliResult};

type Check = Result<String, String>;

struct Ctx {
    seed: u64,
    sizes: Vec<(usize, usize)>,
    fault: Option<Suite>,
}

impl Ctx {
    /// `-1` for the suite under fault injection.
    fn sign(&self, suite: Suite) -> f64 {
        if self.fault == Some(suite) {
            -1.0
        } else {
            1.0
        }
    }
}

pub fn parse_sizes(s: &str) -> CliResult<Vec<(usize, usize)>> {
    s.split(',')
        .map(|item| {
            let (m, n) = item
                .trim()
                .split_once('x')
                .ok_or_else(|| CliError::Usage(format!("size '{item}' is not MxN")))?;
            let parse = |t: &str| match t.parse::<usize>() {
                Ok(v) if v >= 2 => Ok(v),
                _ => Err(CliError::Usage(format!("size '{item}' needs dimensions >= 2"))),
            };
            Ok((parse(m)?, parse(n)?))
        })
        .collect()
}

fn random<T: Scalar<Real = f64>>(seed: u64, m: usize, n: usize) -> Matrix<T> {
    gaussian_matrix(&mut seeded_rng(seed), m, n, 1.0)
}

fn close(a: f64, b: f64, tol: f64) -> bool {
    (a - b).abs() <= tol * a.abs().max(b.abs()).max(1.0)
}

/// Thresholds well inside the gaps of a simple spectrum.
fn probe_thresholds(sigma: &[f64]) -> Vec<f64> {
    let r = sigma.len();
    if r == 1 {
        return vec![0.5 * sigma[0]];
    }
    vec![
        0.5 * (sigma[0] + sigma[1]),
        0.5 * (sigma[r - 2] + sigma[r - 1]),
        0.5 * sigma[r - 1],
    ]
}

fn both_fields(f: impl Fn(Field) -> Check) -> Check {
    let a = f(Field::Real)?;
    let b = f(Field::Complex)?;
    Ok(format!("real: {a}; complex: {b}"))
}

fn svd_suite<T: Scalar<Real = f64>>(ctx: &Ctx, sign: f64) -> Check {
    let mut worst = 0.0f64;
    for (k, &(m, n)) in ctx.sizes.iter().enumerate() {
        for j in 0..3 {
            let x: Matrix<T> = random(ctx.seed ^ (100 * k + j) as u64, m, n);
            let f = svd(&x).map_err(|e| e.to_string())?;
            let resid = (&x - &f.reconstruct().scaled(sign)).frobenius_norm() / f.sigma_max().max(1.0);
            let orth = f.orthonormality_defect() / m.max(n) as f64;
            worst = worst.max(resid).max(orth);
            if resid > 1e-10 || orth > 1e-10 {
                return Err(format!("{m}x{n}: residual {resid:e}, orthonormality {orth:e}"));
            }
        }
    }
    Ok(format!("worst defect {worst:.1e}"))
}

fn lambda_zero_suite<T: Scalar<Real = f64>>(ctx: &Ctx, sign: f64) -> Check {
    for (k, &(m, n)) in ctx.sizes.iter().enumerate() {
        for j in 0..5 {
            let x: Matrix<T> = random(ctx.seed ^ (200 * k + j) as u64, m, n);
            let sigma = singular_values(&x).map_err(|e| e.to_string())?;
            let d = sign
                * div_spectral_simple(&sigma, m, n, &SpectralFunction::SoftThreshold(0.0), T::FIELD)
                    .map_err(|e| e.to_string())?;
            let expect = (T::FIELD.beta() * m * n) as f64;
            if !close(d, expect, 1e-9) {
                return Err(format!("{m}x{n}: divergence {d} vs {expect}"));
            }
        }
    }
    Ok("divergence at zero threshold equals the coordinate count".into())
}

fn fd_suite<T: Scalar<Real = f64>>(ctx: &Ctx, sign: f64) -> Check {
    let mut count = 0;
    for (k, &(m, n)) in ctx.sizes.iter().enumerate() {
        for j in 0..3 {
            let x: Matrix<T> = random(ctx.seed ^ (300 * k + j) as u64, m, n);
            let sigma = singular_values(&x).map_err(|e| e.to_string())?;
            let h = 1e-5 * sigma[0].max(1.0);
            let mut fs: Vec<SpectralFunction<f64>> =
                probe_thresholds(&sigma).into_iter().map(SpectralFunction::SoftThreshold).collect();
            fs.push(SpectralFunction::Identity);
            fs.push(SpectralFunction::Scale(0.7));
            for f in &fs {
                let closed = sign * div_spectral_simple(&sigma, m, n, f, T::FIELD).map_err(|e| e.to_string())?;
                let fd = fd_divergence_oracle(&x, f, h).map_err(|e| e.to_string())?;
                if !close(closed, fd, 1e-4) {
                    return Err(format!("{m}x{n} {f:?}: closed form {closed} vs finite difference {fd}"));
                }
                count += 1;
            }
        }
    }
    Ok(format!("{count} comparisons"))
}

fn differential_suite<T: Scalar<Real = f64>>(ctx: &Ctx, sign: f64) -> Check {
    let h = 1e-6;
    for (k, &(m, n)) in ctx.sizes.iter().enumerate() {
        for j in 0..3 {
            let seed = ctx.seed ^ (400 * k + j) as u64;
            let x: Matrix<T> = random(seed, m, n);
            let delta: Matrix<T> = random(seed.wrapping_add(7_777), m, n);
            let sigma = singular_values(&x).map_err(|e| e.to_string())?;
            let lambda = probe_thresholds(&sigma)[0];
            let f = SpectralFunction::SoftThreshold(lambda);
            let closed = directional_derivative(&x, &delta, &f).map_err(|e| e.to_string())?.scaled(sign);
            let plus = svt(&(&x + &delta.scaled(h)), lambda).map_err(|e| e.to_string())?;
            let minus = svt(&(&x - &delta.scaled(h)), lambda).map_err(|e| e.to_string())?;
            let fd = (&plus - &minus).scaled(0.5 / h);
            let err = (&closed - &fd).max_abs();
            if err > 1e-5 * fd.max_abs().max(1.0) {
                return Err(format!("{m}x{n}: max deviation {err:e}"));
            }
        }
    }
    Ok("product rule matches central differences".into())
}

fn tiling_suite<T: Scalar<Real = f64>>(ctx: &Ctx, sign: f64) -> Check {
    let fail = |e: sure_svt::Error| e.to_string();
    let cfg = BlockConfig::new(5, 4, 2).map_err(fail)?;
    let ones = Matrix::<T>::from_fn(20, 3, |_, _| T::one());
    let mut acc = Matrix::<T>::zeros(20, 3);
    for b in 0..cfg.num_blocks() {
        embed_block_add(&mut acc, &extract_block(&ones, b, &cfg).map_err(fail)?, b, &cfg);
    }
    if acc != ones.scaled(4.0) {
        return Err("blocks do not cover every pixel exactly k² times".into());
    }

    let x: Matrix<T> = random(ctx.seed ^ 500, 12, 5);
    let single = bsvt(&x, &BlockConfig::single(4, 3).map_err(fail)?, 0.8).map_err(fail)?;
    let plain = svt(&x, 0.8).map_err(fail)?;
    if (&single - &plain).frobenius_norm() > 1e-12 * plain.frobenius_norm() {
        return Err("single-block tiling differs from SVT".into());
    }

    let x: Matrix<T> = random(ctx.seed ^ 501, 36, 4);
    let cfg = BlockConfig::new(6, 6, 2).map_err(fail)?;
    let d0 = sign * div_bsvt(&x, &cfg, 0.0).map_err(fail)?;
    let expect = (T::FIELD.beta() * 36 * 4) as f64;
    if !close(d0, expect, 1e-9) {
        return Err(format!("divergence at zero threshold {d0} vs {expect}"));
    }
    let closed = sign * div_bsvt(&x, &cfg, 0.5).map_err(fail)?;
    let fd = fd_divergence(&x, 1e-5, |z| bsvt(z, &cfg, 0.5)).map_err(fail)?;
    if !close(closed, fd, 1e-3) {
        return Err(format!("block divergence {closed} vs finite difference {fd}"));
    }
    Ok(format!("partition, reduction, divergence {closed:.4}"))
}

fn continuity_suite(field: Field, sign: f64) -> Check {
    let cases: [(&[f64], &[usize], usize, usize, SpectralFunction<f64>); 4] = [
        (&[2.0], &[2], 2, 2, SpectralFunction::SoftThreshold(1.0)),
        (&[2.0, 1.0], &[2, 1], 3, 5, SpectralFunction::SoftThreshold(0.5)),
        (&[1.0, 0.0], &[2, 1], 4, 3, SpectralFunction::SoftThreshold(0.5)),
        (&[1.0, 0.0], &[2, 1], 3, 4, SpectralFunction::Scale(0.7)),
    ];
    for (s, d, m, n, f) in cases {
        let profile = SpectrumProfile::new(s.to_vec(), d.to_vec(), 1e-8).map_err(|e| e.to_string())?;
        let grouped = sign * div_spectral_repeated(&profile, m, n, &f, field).map_err(|e| e.to_string())?;
        let total: usize = d.iter().sum();
        let t = 1e-6;
        let mut sigma = Vec::with_capacity(total);
        for (&si, &di) in s.iter().zip(d) {
            for _ in 0..di {
                let k = sigma.len();
                sigma.push(si + t * (0.1 + 0.37 * (total - k) as f64));
            }
        }
        let limit = div_spectral_simple(&sigma, m, n, &f, field).map_err(|e| e.to_string())?;
        if (grouped - limit).abs() > 1e-5 {
            return Err(format!("profile {s:?}/{d:?}: grouped {grouped} vs limit {limit}"));
        }
    }
    if field == Field::Real {
        let p = SpectrumProfile::new(vec![2.0], vec![2], 1e-8).map_err(|e| e.to_string())?;
        let v = sign
            * div_spectral_repeated(&p, 2, 2, &SpectralFunction::SoftThreshold(1.0), field)
                .map_err(|e| e.to_string())?;
        if (v - 3.5).abs() > 1e-12 {
            return Err(format!("worked value {v} vs 3.5"));
        }
    }
    Ok("grouped formula matches non-tangential limits".into())
}

fn sure_suite<T: Scalar<Real = f64>>(ctx: &Ctx, sign: f64) -> Check {
    let fail = |e: sure_svt::Error| e.to_string();
    for (k, &(m, n)) in ctx.sizes.iter().enumerate() {
        let y: Matrix<T> = random(ctx.seed ^ (600 + k) as u64, m, n);
        let tau = 0.3;
        let coords = (T::FIELD.beta() * m * n) as f64;
        let at_zero = sign * sure_svt(&y, 0.0, tau).map_err(fail)?.sure;
        if !close(at_zero, coords * tau * tau, 1e-12) {
            return Err(format!("{m}x{n}: SURE at zero {at_zero}"));
        }
        let huge = 2.0 * singular_values(&y).map_err(fail)?[0];
        let top = sign * sure_svt(&y, huge, tau).map_err(fail)?.sure;
        if !close(top, y.frobenius_norm_sqr() - coords * tau * tau, 1e-12) {
            return Err(format!("{m}x{n}: SURE above the spectrum {top}"));
        }
    }
    Ok("endpoint identities hold".into())
}

/// Runs every suite, printing one line each; stops at the first failure.
pub fn run_verify(args: &VerifyArgs, out: &mut dyn Write) -> CliResult<()> {
    let ctx = Ctx {
        seed: args.seed,
        sizes: parse_sizes(&args.sizes)?,
        fault: args.inject_fault,
    };
    let suites: [(Suite, &str); 7] = [
        (Suite::Svd, "svd"),
        (Suite::LambdaZero, "lambda-zero"),
        (Suite::FdOracle, "fd-oracle"),
        (Suite::SvdDifferential, "svd-differential"),
        (Suite::Tiling, "tiling"),
        (Suite::Continuity, "continuity"),
        (Suite::Sure, "sure"),
    ];
    let io = |source| CliError::Io {
        path: "<stdout>".into(),
        source,
    };
    for (suite, name) in suites {
        let s = ctx.sign(suite);
        let result = match suite {
            Suite::Svd => both_fields(|f| match f {
                Field::Real => svd_suite::<f64>(&ctx, s),
                Field::Complex => svd_suite::<Complex64>(&ctx, s),
            }),
            Suite::LambdaZero => both_fields(|f| match f {
                Field::Real => lambda_zero_suite::<f64>(&ctx, s),
                Field::Complex => lambda_zero_suite::<Complex64>(&ctx, s),
            }),
            Suite::FdOracle => both_fields(|f| match f {
                Field::Real => fd_suite::<f64>(&ctx, s),
                Field::Complex => fd_suite::<Complex64>(&ctx, s),
            }),
            Suite::SvdDifferential => both_fields(|f| match f {
                Field::Real => differential_suite::<f64>(&ctx, s),
                Field::Complex => differential_suite::<Complex64>(&ctx, s),
            }),
            Suite::Tiling => both_fields(|f| match f {
                Field::Real => tiling_suite::<f64>(&ctx, s),
                Field::Complex => tiling_suite::<Complex64>(&ctx, s),
            }),
            Suite::Continuity => both_fields(|f| continuity_suite(f, s)),
            Suite::Sure => both_fields(|f| match f {
                Field::Real => sure_suite::<f64>(&ctx, s),
                Field::Complex => sure_suite::<Complex64>(&ctx, s),
            }),
        };
        match result {
            Ok(detail) => writeln!(out, "PASS {name}: {detail}").map_err(io)?,
            Err(msg) => {
                writeln!(out, "FAIL {name}: {msg}").map_err(io)?;
                return Err(CliError::Verification(format!("{name}: {msg}")));
            }
        }
    }
    writeln!(out, "all suites passed").map_err(io)?;
    Ok(())
}
