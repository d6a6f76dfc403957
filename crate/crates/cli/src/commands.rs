//! Command implementations.

use std::fs;
use std::io::Write;
use std::path::Path;

use num_complex::Complex64;
use sure_svt::blockwise::{bsvt, casorati, inverse_casorati, BlockConfig};
use sure_svt::risk::{gen_test_matrix, mc_risk, select_lambda_prepared, sweep, tau_from_snr, Estimator, NoiseModel, Prepared};
use sure_svt::{svt, Matrix};

use crate::args::{DenoiseArgs, EstimatorArgs, EstimatorKind, FieldArg, GenArgs, NoiseArgs, SelectArgs, SvdArgs, SweepArgs};
use crate::error::{CliError, CliResult};
use crate::format::{format_f64, parse_document, write_mat, write_ser, AnyMatrix, AnySeries, Document, FileScalar};

/// A matrix read from disk, remembering whether it came from a series.
#[derive(Debug, Clone, PartialEq)]
pub struct Input<T> {
    pub matrix: Matrix<T>,
    /// `(nx, ny)` when the file was SER1.
    pub frame: Option<(usize, usize)>,
}

#[derive(Debug, Clone, PartialEq)]
pub enum AnyInput {
    Real(Input<f64>),
    Complex(Input<Complex64>),
}

pub fn read_document(path: &Path) -> CliResult<Document> {
    let text = fs::read_to_string(path).map_err(|source| CliError::Io {
        path: path.to_path_buf(),
        source,
    })?;
    parse_document(&text).map_err(|message| CliError::Format {
        path: path.to_path_buf(),
        message,
    })
}

pub fn load_input(path: &Path) -> CliResult<AnyInput> {
    Ok(match read_document(path)? {
        Document::Matrix(AnyMatrix::Real(m)) => AnyInput::Real(Input { matrix: m, frame: None }),
        Document::Matrix(AnyMatrix::Complex(m)) => AnyInput::Complex(Input { matrix: m, frame: None }),
        Document::Series(AnySeries::Real(s)) => AnyInput::Real(Input {
            matrix: casorati(&s),
            frame: Some((s.nx(), s.ny())),
        }),
        Document::Series(AnySeries::Complex(s)) => AnyInput::Complex(Input {
            matrix: casorati(&s),
            frame: Some((s.nx(), s.ny())),
        }),
    })
}

/// Writes `text` to `out`, or to `stdout` when no path is given.
pub fn emit(out: Option<&Path>, text: &str, stdout: &mut dyn Write) -> CliResult<()> {
    match out {
        Some(path) => fs::write(path, text).map_err(|source| CliError::Io {
            path: path.to_path_buf(),
            source,
        }),
        None => stdout.write_all(text.as_bytes()).map_err(|source| CliError::Io {
            path: "<stdout>".into(),
            source,
        }),
    }
}

fn render<T: FileScalar>(m: &Matrix<T>, frame: Option<(usize, usize)>) -> CliResult<String> {
    Ok(match frame {
        Some((nx, ny)) => write_ser(&inverse_casorati(m, nx, ny)?),
        None => write_mat(m),
    })
}

impl NoiseArgs {
    /// τ from `--tau` or `--snr` for an `rows × cols` observation.
    pub fn resolve(&self, rows: usize, cols: usize) -> CliResult<f64> {
        match (self.tau, self.snr) {
            (Some(t), None) if t > 0.0 && t.is_finite() => Ok(t),
            (Some(t), None) => Err(CliError::Usage(format!("--tau must be positive, got {t}"))),
            (None, Some(s)) => Ok(tau_from_snr(s, rows, cols)?),
            (None, None) => Err(CliError::Usage("one of --tau or --snr is required".into())),
            (Some(_), Some(_)) => Err(CliError::Usage("--tau and --snr are mutually exclusive".into())),
        }
    }
}

impl EstimatorArgs {
    pub fn resolve(&self, rows: usize, frame: Option<(usize, usize)>) -> CliResult<Estimator> {
        match self.estimator {
            EstimatorKind::Svt => {
                if self.block_size.is_some() {
                    return Err(CliError::Usage("--block-size requires --estimator bsvt".into()));
                }
                Ok(Estimator::Svt)
            }
            EstimatorKind::Bsvt => {
                let k = self
                    .block_size
                    .ok_or_else(|| CliError::Usage("--estimator bsvt requires --block-size".into()))?;
                let (nx, ny) = match (self.nx.zip(self.ny), frame) {
                    (Some(d), _) | (None, Some(d)) => d,
                    (None, None) => {
                        return Err(CliError::Usage(
                            "--estimator bsvt needs a SER1 input or --nx and --ny".into(),
                        ))
                    }
                };
                if rows % (nx * ny) != 0 {
                    return Err(CliError::Usage(format!(
                        "{rows} rows are not a whole number of {nx}x{ny} channels"
                    )));
                }
                let cfg = BlockConfig::new(nx, ny, k)?.with_channels(rows / (nx * ny))?;
                Ok(Estimator::Bsvt(cfg))
            }
        }
    }
}

pub fn cmd_gen(args: &GenArgs, stdout: &mut dyn Write) -> CliResult<()> {
    let text = match args.field {
        FieldArg::Real => write_mat(&gen_test_matrix::<f64>(args.kind, args.m, args.n, args.seed)?),
        FieldArg::Complex => write_mat(&gen_test_matrix::<Complex64>(args.kind, args.m, args.n, args.seed)?),
    };
    emit(args.out.as_deref(), &text, stdout)
}

fn svd_report<T: FileScalar>(m: &Matrix<T>, rank_tol: f64) -> CliResult<String> {
    let sigma = sure_svt::linalg::singular_values(m)?;
    let smax = sigma.first().copied().unwrap_or(0.0);
    let rank = sigma.iter().filter(|&&s| s > rank_tol * smax).count();
    let mut out = format!("# rows={} cols={} field={} rank={rank}\n", m.rows(), m.cols(), T::FIELD);
    for s in sigma {
        out.push_str(&format_f64(s));
        out.push('\n');
    }
    Ok(out)
}

pub fn cmd_svd(args: &SvdArgs, stdout: &mut dyn Write) -> CliResult<()> {
    if !(args.rank_tol >= 0.0) {
        return Err(CliError::Usage("--rank-tol must be >= 0".into()));
    }
    let text = match load_input(&args.input)? {
        AnyInput::Real(i) => svd_report(&i.matrix, args.rank_tol)?,
        AnyInput::Complex(i) => svd_report(&i.matrix, args.rank_tol)?,
    };
    emit(None, &text, stdout)
}

/// Scalars that can be recovered from an [`AnyInput`] of their own field.
pub trait InputScalar: FileScalar {
    fn take(any: AnyInput) -> Option<Input<Self>>;
}

impl InputScalar for f64 {
    fn take(any: AnyInput) -> Option<Input<Self>> {
        match any {
            AnyInput::Real(i) => Some(i),
            AnyInput::Complex(_) => None,
        }
    }
}

impl InputScalar for Complex64 {
    fn take(any: AnyInput) -> Option<Input<Self>> {
        match any {
            AnyInput::Complex(i) => Some(i),
            AnyInput::Real(_) => None,
        }
    }
}

fn load_reference<T: InputScalar>(path: &Path, like: &Input<T>) -> CliResult<Matrix<T>> {
    let m = T::take(load_input(path)?)
        .ok_or_else(|| CliError::Usage(format!("{}: field differs from the input", path.display())))?
        .matrix;
    if m.shape() != like.matrix.shape() {
        return Err(CliError::Usage(format!(
            "{}: shape {}x{} differs from the input {}x{}",
            path.display(),
            m.rows(),
            m.cols(),
            like.matrix.rows(),
            like.matrix.cols()
        )));
    }
    Ok(m)
}

fn sweep_csv<T: InputScalar>(input: &Input<T>, args: &SweepArgs) -> CliResult<String> {
    let y = &input.matrix;
    let tau = args.noise.resolve(y.rows(), y.cols())?;
    let est = args.estimator.resolve(y.rows(), input.frame)?;
    let grid = args.grid.values()?;
    let mut result = sweep(y, &grid, tau, &est)?.with_provenance(args.noise.snr, Some(args.seed));
    if let (Some(trials), Some(x0_path)) = (args.mc, args.x0.as_deref()) {
        let x0 = load_reference(x0_path, input)?;
        let noise = NoiseModel::new(T::FIELD, tau, args.seed)?;
        result = result.with_mc_risk(mc_risk(&x0, &grid, &noise, trials, &est)?)?;
    }
    let mut out = String::from(if result.mc_risk.is_some() { "lambda,sure,mc_risk\n" } else { "lambda,sure\n" });
    for k in 0..result.lambdas.len() {
        out.push_str(&format_f64(result.lambdas[k]));
        out.push(',');
        out.push_str(&format_f64(result.sure_values[k]));
        if let Some(mc) = &result.mc_risk {
            out.push(',');
            out.push_str(&format_f64(mc[k]));
        }
        out.push('\n');
    }
    out.push_str(&format!("# argmin_lambda={}\n", format_f64(result.argmin_lambda)));
    Ok(out)
}

pub fn cmd_sweep(args: &SweepArgs, stdout: &mut dyn Write) -> CliResult<()> {
    let text = match load_input(&args.input)? {
        AnyInput::Real(i) => sweep_csv(&i, args)?,
        AnyInput::Complex(i) => sweep_csv(&i, args)?,
    };
    emit(args.out.as_deref(), &text, stdout)
}

fn default_tol(tol: Option<f64>, hi: f64) -> CliResult<f64> {
    let t = tol.unwrap_or(1e-6 * hi);
    if t > 0.0 && t.is_finite() {
        Ok(t)
    } else {
        Err(CliError::Usage(format!("--tol must be positive, got {t}")))
    }
}

fn select_text<T: FileScalar>(input: &Input<T>, args: &SelectArgs) -> CliResult<String> {
    let y = &input.matrix;
    let tau = args.noise.resolve(y.rows(), y.cols())?;
    let est = args.estimator.resolve(y.rows(), input.frame)?;
    let prepared = Prepared::new(y, &est)?;
    let tol = default_tol(args.tol, args.hi)?;
    let (best, report) = select_lambda_prepared(&prepared, tau, args.lo, args.hi, tol)?;
    Ok(format!("lambda={}\nsure={}\n", format_f64(best), format_f64(report.sure)))
}

pub fn cmd_select(args: &SelectArgs, stdout: &mut dyn Write) -> CliResult<()> {
    let text = match load_input(&args.input)? {
        AnyInput::Real(i) => select_text(&i, args)?,
        AnyInput::Complex(i) => select_text(&i, args)?,
    };
    emit(None, &text, stdout)
}

/// Denoised output and the threshold used (reported when chosen by SURE).
fn denoise_text<T: FileScalar>(input: &Input<T>, args: &DenoiseArgs) -> CliResult<(String, Option<f64>)> {
    let y = &input.matrix;
    let est = args.estimator.resolve(y.rows(), input.frame)?;
    let (lambda, chosen) = match args.lambda {
        Some(l) => (l, None),
        None => {
            let tau = args.noise.resolve(y.rows(), y.cols())?;
            let prepared = Prepared::new(y, &est)?;
            let hi = args.hi.unwrap_or_else(|| prepared.sigma_max());
            if hi == 0.0 {
                (0.0, Some(0.0))
            } else {
                let lo = args.lo.unwrap_or(1e-6 * hi);
                let tol = default_tol(args.tol, hi)?;
                let (best, _) = select_lambda_prepared(&prepared, tau, lo, hi, tol)?;
                (best, Some(best))
            }
        }
    };
    let estimate = match est {
        Estimator::Svt => svt(y, lambda)?,
        Estimator::Bsvt(cfg) => bsvt(y, &cfg, lambda)?,
    };
    Ok((render(&estimate, input.frame)?, chosen))
}

pub fn cmd_denoise(args: &DenoiseArgs, stdout: &mut dyn Write, stderr: &mut dyn Write) -> CliResult<()> {
    let (text, chosen) = match load_input(&args.input)? {
        AnyInput::Real(i) => denoise_text(&i, args)?,
        AnyInput::Complex(i) => denoise_text(&i, args)?,
    };
    emit(args.out.as_deref(), &text, stdout)?;
    if let Some(l) = chosen {
        let line = format!("lambda={}\n", format_f64(l));
        // Keep standard output a clean file when the estimate goes there.
        let sink: &mut dyn Write = if args.out.is_some() { stdout } else { stderr };
        emit(None, &line, sink)?;
    }
    Ok(())
}
