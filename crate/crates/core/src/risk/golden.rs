//! Golden-section search for a scalar minimizer.

use crate::error::{Error, Result};
use crate::scalar::RealScalar;

/// Coordinates the bracket is shrunk in.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Default)]
pub enum SearchScale {
    Linear,
    /// Search over `ln λ`; requires `lo > 0`.
    Log,
    /// `Log` when `lo > 0`, otherwise `Linear`.
    #[default]
    Auto,
}

/// Hard cap on iterations; each one shrinks the bracket by `0.618`.
const MAX_ITERATIONS: usize = 400;

/// Minimizes a unimodal `objective` over `[lo, hi]` until the bracket is at
/// most `tol` wide (in the original units) and returns its midpoint.
/// Unimodality is assumed, not checked.
pub fn golden_section_min<R: RealScalar>(objective: impl FnMut(R) -> R, lo: R, hi: R, tol: R) -> Result<R> {
    let mut objective = objective;
    try_golden_section_min(|x| Ok(objective(x)), lo, hi, tol, SearchScale::Auto)
}

/// Fallible objective and explicit scale.
pub fn try_golden_section_min<R: RealScalar>(
    mut objective: impl FnMut(R) -> Result<R>,
    lo: R,
    hi: R,
    tol: R,
    scale: SearchScale,
) -> Result<R> {
    let bad = || Error::BadBracket {
        lo: lo.to_f64_lossy(),
        hi: hi.to_f64_lossy(),
        tol: tol.to_f64_lossy(),
    };
    if !(lo < hi) || !(tol > R::zero()) || !lo.is_finite() || !hi.is_finite() {
        return Err(bad());
    }
    let log = match scale {
        SearchScale::Linear => false,
        SearchScale::Log if lo <= R::zero() => return Err(bad()),
        SearchScale::Log => true,
        SearchScale::Auto => lo > R::zero(),
    };
    let to = |x: R| if log { x.ln() } else { x };
    let from = |u: R| if log { u.exp() } else { u };

    let ratio = (R::lit(5.0).sqrt() - R::one()) / R::lit(2.0);
    let (mut a, mut b) = (to(lo), to(hi));
    let mut x1 = b - ratio * (b - a);
    let mut x2 = a + ratio * (b - a);
    let mut f1 = objective(from(x1))?;
    let mut f2 = objective(from(x2))?;
    for _ in 0..MAX_ITERATIONS {
        if from(b) - from(a) <= tol {
            break;
        }
        if f1 <= f2 {
            b = x2;
            x2 = x1;
            f2 = f1;
            x1 = b - ratio * (b - a);
            f1 = objective(from(x1))?;
        } else {
            a = x1;
            x1 = x2;
            f1 = f2;
            x2 = a + ratio * (b - a);
            f2 = objective(from(x2))?;
        }
    }
    let (la, lb) = (from(a).max(lo), from(b).min(hi));
    Ok((la + lb) / R::lit(2.0))
}
