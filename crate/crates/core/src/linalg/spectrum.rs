//! Grouping of singular values into distinct values with multiplicities.


use crate::error::{Error, Result};
use crate::scalar::RealScalar;

/// Relative factor of the default grouping tolerance.
pub const DEFAULT_GAP_FACTOR: f64 = 1e-8;

/// Default absolute gap tolerance `1e-8 · max(1, σ_max)`.
pub fn default_gap_tol<R: RealScalar>(sigma: &[R]) -> R {
    let smax = sigma.first().copied().unwrap_or_else(R::zero);
    R::lit(DEFAULT_GAP_FACTOR) * smax.max(R::one())
}

/// Distinct singular values `s₁ > s₂ > … ≥ 0` with multiplicities `dᵢ`.
#[derive(Debug, Clone, PartialEq)]
pub struct SpectrumProfile<R> {
    pub distinct: Vec<R>,
    pub multiplicities: Vec<usize>,
    pub gap_tol: R,
}

impl<R: RealScalar> SpectrumProfile<R> {
    /// Builds a profile directly; used for synthetic spectra.
    pub fn new(distinct: Vec<R>, multiplicities: Vec<usize>, gap_tol: R) -> Result<Self> {
        if distinct.len() != multiplicities.len() || distinct.is_empty() {
            return Err(Error::InvalidArgument(
                "profile needs one multiplicity per distinct value".into(),
            ));
        }
        if multiplicities.iter().any(|&d| d == 0) {
            return Err(Error::InvalidArgument("multiplicities must be positive".into()));
        }
        for (i, w) in distinct.windows(2).enumerate() {
            if !(w[0] - w[1] > gap_tol) {
                return Err(Error::UnsortedInput { index: i + 1 });
            }
        }
        if distinct.iter().any(|&s| s < R::zero()) {
            return Err(Error::InvalidArgument("singular values must be nonnegative".into()));
        }
        Ok(Self {
            distinct,
            multiplicities,
            gap_tol,
        })
    }

    /// Number of distinct values κ.
    pub fn len(&self) -> usize {
        self.distinct.len()
    }

    pub fn is_empty(&self) -> bool {
        self.distinct.is_empty()
    }

    /// `Σ dᵢ`, the number of singular values described.
    pub fn total(&self) -> usize {
        self.multiplicities.iter().sum()
    }

    /// True when every multiplicity is one and no value is zero.
    pub fn is_simple_full_rank(&self) -> bool {
        self.multiplicities.iter().all(|&d| d == 1) && self.distinct.iter().all(|&s| s > R::zero())
    }

    /// Expands back to a sorted spectrum (each distinct value repeated).
    pub fn expand(&self) -> Vec<R> {
        self.distinct
            .iter()
            .zip(&self.multiplicities)
            .flat_map(|(&s, &d)| std::iter::repeat(s).take(d))
            .collect()
    }
}

/// Inversions no larger than `slack` are tolerated as rounding noise.
fn check_sorted<R: RealScalar>(sigma: &[R], slack: R) -> Result<()> {
    for (i, w) in sigma.windows(2).enumerate() {
        if w[1] - w[0] > slack {
            return Err(Error::UnsortedInput { index: i + 1 });
        }
    }
    if let Some(i) = sigma.iter().position(|&s| s < R::zero()) {
        return Err(Error::UnsortedInput { index: i });
    }
    Ok(())
}

/// Greedy left-to-right grouping: a new group starts when the previous
/// value exceeds the current one by more than `gap_tol`. Each group is
/// represented by its mean, and a group whose mean is at most `gap_tol`
/// is snapped to exactly zero.
///
/// The input must be non-increasing up to inversions of at most `gap_tol`.
pub fn group_spectrum<R: RealScalar>(sigma: &[R], gap_tol: R) -> Result<SpectrumProfile<R>> {
    check_sorted(sigma, gap_tol)?;
    let mut distinct = Vec::new();
    let mut multiplicities = Vec::new();
    let mut sum = R::zero();
    let mut count = 0usize;
    for (i, &s) in sigma.iter().enumerate() {
        if i > 0 && (sigma[i - 1] - s).abs() > gap_tol {
            distinct.push(sum / R::from_usize_lossy(count));
            multiplicities.push(count);
            sum = R::zero();
            count = 0;
        }
        sum += s;
        count += 1;
    }
    if count > 0 {
        distinct.push(sum / R::from_usize_lossy(count));
        multiplicities.push(count);
    }
    if let Some(last) = distinct.last_mut() {
        if *last <= gap_tol {
            *last = R::zero();
        }
    }
    Ok(SpectrumProfile {
        distinct,
        multiplicities,
        gap_tol,
    })
}

/// Why a spectrum failed the simple/full-rank test.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum SpectrumDefect {
    /// `σ[index]` and `σ[index + 1]` are within the gap tolerance.
    Repeated { index: usize },
    /// `σ[index]` is within the gap tolerance of zero.
    RankDeficient { index: usize },
}

impl SpectrumDefect {
    pub fn into_error(self, gap_tol: f64) -> Error {
        match self {
            SpectrumDefect::Repeated { index } => Error::NotSimple { index, gap_tol },
            SpectrumDefect::RankDeficient { index } => Error::RankDeficient { index, gap_tol },
        }
    }
}

/// Simplicity and full-rank check with the first offending index.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct SimplicityReport {
    pub simple_full_rank: bool,
    pub defect: Option<SpectrumDefect>,
}

/// True iff every consecutive gap exceeds `gap_tol` and `σ_min > gap_tol`.
pub fn is_simple_full_rank<R: RealScalar>(sigma: &[R], gap_tol: R) -> SimplicityReport {
    let mut defect = None;
    for (i, w) in sigma.windows(2).enumerate() {
        if !(w[0] - w[1] > gap_tol) {
            defect = Some(SpectrumDefect::Repeated { index: i });
            break;
        }
    }
    if defect.is_none() {
        if let Some(&last) = sigma.last() {
            if !(last > gap_tol) {
                defect = Some(SpectrumDefect::RankDeficient {
                    index: sigma.len() - 1,
                });
            }
        }
    }
    SimplicityReport {
        simple_full_rank: defect.is_none(),
        defect,
    }
}

/// Binomial coefficient C(d, 2).
#[inline]
pub(crate) fn pairs(d: usize) -> usize {
    d * d.saturating_sub(1) / 2
}
