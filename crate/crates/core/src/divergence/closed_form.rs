//! Closed-form divergence of spectral estimators.
//!
//! With `p = |m − n|`, a simple full-rank spectrum gives
//!
//! ```text
//! real:    Σ [f′(σᵢ) + p·f(σᵢ)/σᵢ]        + 2 Σ_{i≠j} σᵢ f(σᵢ)/(σᵢ² − σⱼ²)
//! complex: Σ [f′(σᵢ) + (2p + 1)·f(σᵢ)/σᵢ] + 4 Σ_{i≠j} σᵢ f(σᵢ)/(σᵢ² − σⱼ²)
//! ```
//!
//! and a spectrum with distinct values `sᵢ` of multiplicity `dᵢ` uses the
//! continuous extension of the same expression. Each unordered pair of the
//! cross sum is evaluated as `(σᵢfᵢ − σⱼfⱼ) / ((σᵢ − σⱼ)(σᵢ + σⱼ))`.


use crate::error::{Error, Result};
use crate::linalg::spectrum::{default_gap_tol, group_spectrum, is_simple_full_rank, pairs};
use crate::linalg::SpectrumProfile;
use crate::scalar::{Field, RealScalar};
use crate::spectral::SpectralFunction;

/// What to do when the spectrum has ties or zeros.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Default)]
pub enum RepeatedPolicy {
    /// Group within `gap_tol` and use the continuous extension.
    #[default]
    Extend,
    /// Fail with `NotSimple` / `RankDeficient`.
    Strict,
    /// Report a divergence of zero.
    Zero,
}

/// What to do when a singular value sits on a kink of `f` (within `gap_tol`).
#[derive(Debug, Clone, Copy, PartialEq, Eq, Default)]
pub enum TiePolicy {
    /// Classify the value as not exceeding the kink and flag the result.
    #[default]
    Nudge,
    /// Fail with `ThresholdTie` (thresholds) or `NonDifferentiablePoint`.
    Strict,
}

#[derive(Debug, Clone, Copy, PartialEq, Default)]
pub struct DivergenceOptions<R> {
    /// Absolute tolerance for ties, zeros and kinks; `None` means
    /// `1e-8·max(1, σ_max)`.
    pub gap_tol: Option<R>,
    pub repeated: RepeatedPolicy,
    pub ties: TiePolicy,
}

impl<R: RealScalar> DivergenceOptions<R> {
    pub fn strict() -> Self {
        Self {
            gap_tol: None,
            repeated: RepeatedPolicy::Strict,
            ties: TiePolicy::Strict,
        }
    }

    pub fn resolve_gap_tol(&self, sigma: &[R]) -> R {
        self.gap_tol.unwrap_or_else(|| default_gap_tol(sigma))
    }
}

/// A divergence value and how it was obtained.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Divergence<R> {
    pub value: R,
    /// The spectrum had ties or zeros and was handled by `RepeatedPolicy`.
    pub repeated_spectrum: bool,
    /// Some singular value was nudged off a kink of `f`.
    pub threshold_tie: bool,
}

fn check_len<R>(sigma: &[R], m: usize, n: usize) -> Result<()> {
    if m == 0 || n == 0 {
        return Err(Error::BadShape(format!("{m}x{n}")));
    }
    if sigma.len() != m.min(n) {
        return Err(Error::ShapeMismatch(format!(
            "{} singular values for a {m}x{n} matrix",
            sigma.len()
        )));
    }
    Ok(())
}

/// `(f(σ), f′(σ), nudged)` with kink handling.
fn evaluate<R: RealScalar>(
    f: &SpectralFunction<R>,
    index: usize,
    sigma: R,
    tol: R,
    ties: TiePolicy,
) -> Result<(R, R, bool)> {
    if let Some(k) = f.kink(index) {
        if (sigma - k).abs() <= tol {
            return match (ties, f) {
                (TiePolicy::Strict, SpectralFunction::SoftThreshold(_)) => Err(Error::ThresholdTie {
                    index,
                    sigma: sigma.to_f64_lossy(),
                    lambda: k.to_f64_lossy(),
                }),
                (TiePolicy::Strict, _) => Err(Error::NonDifferentiablePoint { at: k.to_f64_lossy() }),
                (TiePolicy::Nudge, _) => {
                    let s = sigma.min(k);
                    Ok((f.eval(index, s), f.deriv(index, s), true))
                }
            };
        }
    }
    Ok((f.eval(index, sigma), f.deriv(index, sigma), false))
}

/// `(2|m−n|+1)` complex, `|m−n|` real.
fn ratio_coeff<R: RealScalar>(field: Field, m: usize, n: usize) -> R {
    let p = R::from_usize_lossy(m.abs_diff(n));
    match field {
        Field::Real => p,
        Field::Complex => p + p + R::one(),
    }
}

fn cross_coeff<R: RealScalar>(field: Field) -> R {
    match field {
        Field::Real => R::lit(2.0),
        Field::Complex => R::lit(4.0),
    }
}

/// `Σ_{i<j} wᵢwⱼ (sᵢfᵢ − sⱼfⱼ)/(sᵢ² − sⱼ²)` over strictly decreasing `s`.
fn pair_sum<R: RealScalar>(s: &[R], f: &[R], w: &[R]) -> R {
    let mut total = R::zero();
    for i in 0..s.len() {
        let mut row = R::zero();
        for j in (i + 1)..s.len() {
            let num = s[i] * f[i] - s[j] * f[j];
            row += w[j] * num / ((s[i] - s[j]) * (s[i] + s[j]));
        }
        total += w[i] * row;
    }
    total
}

fn simple_impl<R: RealScalar>(
    sigma: &[R],
    m: usize,
    n: usize,
    f: &SpectralFunction<R>,
    field: Field,
    tol: R,
    ties: TiePolicy,
) -> Result<(R, bool)> {
    let mut values = Vec::with_capacity(sigma.len());
    let mut diag = R::zero();
    let mut tied = false;
    let a = ratio_coeff::<R>(field, m, n);
    for (i, &s) in sigma.iter().enumerate() {
        let (v, d, t) = evaluate(f, i, s, tol, ties)?;
        tied |= t;
        diag += d + a * v / s;
        values.push(v);
    }
    let ones = vec![R::one(); sigma.len()];
    let cross = pair_sum(sigma, &values, &ones);
    Ok((diag + cross_coeff::<R>(field) * cross, tied))
}

fn require_simple<R: RealScalar>(sigma: &[R], tol: R) -> Result<()> {
    match is_simple_full_rank(sigma, tol).defect {
        None => Ok(()),
        Some(d) => Err(d.into_error(tol.to_f64_lossy())),
    }
}

/// Divergence of `f` on a simple, full-rank spectrum. Kinks within the
/// default gap tolerance are errors.
pub fn div_spectral_simple<R: RealScalar>(
    sigma: &[R],
    m: usize,
    n: usize,
    f: &SpectralFunction<R>,
    field: Field,
) -> Result<R> {
    check_len(sigma, m, n)?;
    f.validate()?;
    let tol = default_gap_tol(sigma);
    require_simple(sigma, tol)?;
    simple_impl(sigma, m, n, f, field, tol, TiePolicy::Strict).map(|(v, _)| v)
}

/// Divergence of SVT for real data on a simple, full-rank spectrum:
/// `Σ[1(σᵢ>λ) + |m−n|(1 − λ/σᵢ)₊] + 2Σ_{i≠j} σᵢ(σᵢ−λ)₊/(σᵢ² − σⱼ²)`.
pub fn div_svt_real_simple<R: RealScalar>(sigma: &[R], m: usize, n: usize, lambda: R) -> Result<R> {
    div_spectral_simple(sigma, m, n, &SpectralFunction::SoftThreshold(lambda), Field::Real)
}

/// Complex counterpart of [`div_svt_real_simple`], with `2|m−n| + 1` on the
/// ratio term and 4 on the cross sum.
pub fn div_svt_complex_simple<R: RealScalar>(sigma: &[R], m: usize, n: usize, lambda: R) -> Result<R> {
    div_spectral_simple(sigma, m, n, &SpectralFunction::SoftThreshold(lambda), Field::Complex)
}

fn repeated_impl<R: RealScalar>(
    profile: &SpectrumProfile<R>,
    m: usize,
    n: usize,
    f: &SpectralFunction<R>,
    field: Field,
    ties: TiePolicy,
) -> Result<(R, bool)> {
    if !f.is_uniform() {
        return Err(Error::NonUniformFunction);
    }
    if !f.f_at_zero_is_zero() {
        return Err(Error::FZeroNotZero);
    }
    if profile.total() != m.min(n) {
        return Err(Error::ShapeMismatch(format!(
            "profile describes {} singular values for a {m}x{n} matrix",
            profile.total()
        )));
    }
    let p = m.abs_diff(n);
    let complex = field == Field::Complex;
    let mut diag = R::zero();
    let mut tied = false;
    let mut values = Vec::with_capacity(profile.len());
    let mut weights = Vec::with_capacity(profile.len());
    for (&s, &d) in profile.distinct.iter().zip(&profile.multiplicities) {
        let c = pairs(d);
        let (v, fd, t) = evaluate(f, 0, s, profile.gap_tol, ties)?;
        tied |= t;
        let (deriv_coeff, ratio_coeff) = if s > R::zero() {
            if complex {
                (d + 2 * c, (2 * p + 1) * d + 2 * c)
            } else {
                (d + c, p * d + c)
            }
        } else if complex {
            (2 * (p + 1) * d + 4 * c, 0)
        } else {
            ((p + 1) * d + 2 * c, 0)
        };
        diag += R::from_usize_lossy(deriv_coeff) * fd;
        if ratio_coeff > 0 {
            diag += R::from_usize_lossy(ratio_coeff) * v / s;
        }
        values.push(v);
        weights.push(R::from_usize_lossy(d));
    }
    let cross = pair_sum(&profile.distinct, &values, &weights);
    Ok((diag + cross_coeff::<R>(field) * cross, tied))
}

/// Continuous extension of the divergence to a spectrum with repeated or
/// zero singular values. `f` must be uniform with `f(0) = 0`.
pub fn div_spectral_repeated<R: RealScalar>(
    profile: &SpectrumProfile<R>,
    m: usize,
    n: usize,
    f: &SpectralFunction<R>,
    field: Field,
) -> Result<R> {
    f.validate()?;
    repeated_impl(profile, m, n, f, field, TiePolicy::Strict).map(|(v, _)| v)
}

/// Divergence of `f` at a matrix with singular values `sigma`, dispatching
/// between the simple formula and the policy for ties and zeros.
pub fn divergence<R: RealScalar>(
    sigma: &[R],
    m: usize,
    n: usize,
    f: &SpectralFunction<R>,
    field: Field,
    opts: &DivergenceOptions<R>,
) -> Result<Divergence<R>> {
    check_len(sigma, m, n)?;
    f.validate()?;
    let tol = opts.resolve_gap_tol(sigma);
    let report = is_simple_full_rank(sigma, tol);
    if report.simple_full_rank {
        let (value, tie) = simple_impl(sigma, m, n, f, field, tol, opts.ties)?;
        return Ok(Divergence {
            value,
            repeated_spectrum: false,
            threshold_tie: tie,
        });
    }
    match opts.repeated {
        RepeatedPolicy::Strict => Err(report
            .defect
            .expect("defect is set when not simple")
            .into_error(tol.to_f64_lossy())),
        RepeatedPolicy::Zero => Ok(Divergence {
            value: R::zero(),
            repeated_spectrum: true,
            threshold_tie: false,
        }),
        RepeatedPolicy::Extend => {
            let profile = group_spectrum(sigma, tol)?;
            let (value, tie) = repeated_impl(&profile, m, n, f, field, opts.ties)?;
            Ok(Divergence {
                value,
                repeated_spectrum: true,
                threshold_tie: tie,
            })
        }
    }
}
