//! Thin SVD by one-sided (Hestenes) Jacobi rotations.
//!
//! One-sided Jacobi orthogonalizes the columns of the tall orientation of
//! the input by plane rotations accumulated into `V`; the column norms are
//! the singular values. It is slower than bidiagonal QR for large inputs
//! but computes small singular values to high relative accuracy, which the
//! divergence formulas (with their `1/σ` and `1/(σᵢ²−σⱼ²)` terms) depend on.

use num_traits::{Float, One, Zero};

use crate::error::{Error, Result};
use crate::linalg::matrix::{dot, norm_sqr, Matrix};
use crate::linalg::orth::{complete_orthonormal, normalize, project_out};
use crate::scalar::{RealScalar, Scalar};

const MAX_SWEEPS: usize = 80;

/// Reduced SVD `X = U · diag(sigma) · Vᴴ` with `r = min(m, n)` columns.
///
/// `sigma` is non-increasing. Each column of `U` has its largest-modulus
/// entry real and positive (first such entry on exact ties); `V` carries
/// the matching phase.
#[derive(Debug, Clone, PartialEq)]
pub struct SvdFactors<T: Scalar> {
    pub u: Matrix<T>,
    pub sigma: Vec<T::Real>,
    pub v: Matrix<T>,
}

impl<T: Scalar> SvdFactors<T> {
    pub fn rank_bound(&self) -> usize {
        self.sigma.len()
    }

    pub fn sigma_max(&self) -> T::Real {
        self.sigma.first().copied().unwrap_or_else(T::Real::zero)
    }

    /// `U · diag(values) · Vᴴ` for a replacement spectrum `values`.
    pub fn compose(&self, values: &[T::Real]) -> Matrix<T> {
        let (m, r) = self.u.shape();
        let n = self.v.rows();
        debug_assert_eq!(values.len(), r);
        let mut out = Matrix::zeros(m, n);
        for (k, &s) in values.iter().enumerate() {
            if s == T::Real::zero() {
                continue;
            }
            let vk: Vec<T> = (0..n).map(|j| self.v[(j, k)].conj()).collect();
            for i in 0..m {
                let a = self.u[(i, k)].scale(s);
                if a == T::zero() {
                    continue;
                }
                let row = &mut out.as_mut_slice()[i * n..(i + 1) * n];
                for (o, &b) in row.iter_mut().zip(&vk) {
                    *o += a * b;
                }
            }
        }
        out
    }

    pub fn reconstruct(&self) -> Matrix<T> {
        self.compose(&self.sigma)
    }

    /// `Re(uₖᴴ · X · vₖ)` for every k: the coordinates of `x` along the
    /// rank-one directions `uₖvₖᴴ`.
    pub fn project_diagonal(&self, x: &Matrix<T>) -> Vec<T::Real> {
        let r = self.sigma.len();
        let xv = x.matmul(&self.v).expect("shape checked by caller");
        (0..r)
            .map(|k| {
                let mut acc = T::zero();
                for i in 0..self.u.rows() {
                    acc += self.u[(i, k)].conj() * xv[(i, k)];
                }
                acc.re()
            })
            .collect()
    }

    /// Largest componentwise deviation of `UᴴU` and `VᴴV` from the identity.
    pub fn orthonormality_defect(&self) -> T::Real {
        gram_defect(&self.u).max(gram_defect(&self.v))
    }
}

fn gram_defect<T: Scalar>(q: &Matrix<T>) -> T::Real {
    let g = &q.adjoint() * q;
    let mut worst = T::Real::zero();
    for i in 0..g.rows() {
        for j in 0..g.cols() {
            let target = if i == j { T::one() } else { T::zero() };
            worst = worst.max((g[(i, j)] - target).modulus());
        }
    }
    worst
}

/// Thin singular value decomposition.
///
/// Wide inputs are decomposed through their adjoint with the roles of `U`
/// and `V` swapped. Output is a deterministic function of the input bits.
pub fn svd<T: Scalar>(x: &Matrix<T>) -> Result<SvdFactors<T>> {
    x.check_finite()?;
    let (m, n) = x.shape();
    if m >= n {
        tall_svd(x)
    } else {
        let t = tall_svd(&x.adjoint())?;
        let mut out = SvdFactors {
            u: t.v,
            sigma: t.sigma,
            v: t.u,
        };
        fix_phases(&mut out);
        Ok(out)
    }
}

/// Singular values only (same algorithm, same ordering).
pub fn singular_values<T: Scalar>(x: &Matrix<T>) -> Result<Vec<T::Real>> {
    Ok(svd(x)?.sigma)
}

fn tall_svd<T: Scalar>(x: &Matrix<T>) -> Result<SvdFactors<T>> {
    let (m, n) = x.shape();
    debug_assert!(m >= n);
    let zero = T::Real::zero();
    let scale = x.max_abs();

    if n == 0 {
        return Ok(SvdFactors {
            u: Matrix::zeros(m, 0),
            sigma: Vec::new(),
            v: Matrix::zeros(0, 0),
        });
    }
    if scale == zero {
        let mut basis = Vec::new();
        complete_orthonormal(m, &mut basis, n);
        return Ok(SvdFactors {
            u: Matrix::from_columns(m, &basis),
            sigma: vec![zero; n],
            v: Matrix::identity(n),
        });
    }

    let inv = scale.recip();
    let mut a: Vec<Vec<T>> = (0..n)
        .map(|j| (0..m).map(|i| x[(i, j)].scale(inv)).collect())
        .collect();
    let mut v: Vec<Vec<T>> = (0..n)
        .map(|j| {
            let mut e = vec![T::zero(); n];
            e[j] = T::one();
            e
        })
        .collect();

    jacobi_sweeps(&mut a, &mut v)?;

    let mut order: Vec<(usize, T::Real)> =
        a.iter().map(|col| norm_sqr(col).sqrt()).enumerate().collect();
    // Stable: equal norms keep their column order.
    order.sort_by(|p, q| q.1.partial_cmp(&p.1).expect("finite norms"));

    let sigma_max = order[0].1;
    let eps = T::Real::epsilon();
    let negligible = sigma_max * eps * <T::Real as RealScalar>::from_usize_lossy(m.max(n));

    let mut u_cols: Vec<Vec<T>> = Vec::with_capacity(n);
    let mut sigma = Vec::with_capacity(n);
    let mut v_cols = Vec::with_capacity(n);
    let mut deficient = Vec::new();
    for &(j, s) in &order {
        sigma.push(s * scale);
        v_cols.push(v[j].clone());
        if s > negligible {
            let mut col = a[j].clone();
            normalize(&mut col);
            project_out(&mut col, &u_cols);
            normalize(&mut col);
            u_cols.push(col);
        } else {
            deficient.push(u_cols.len());
            u_cols.push(Vec::new());
        }
    }
    if !deficient.is_empty() {
        let mut kept: Vec<Vec<T>> = u_cols.iter().filter(|c| !c.is_empty()).cloned().collect();
        let have = kept.len();
        complete_orthonormal(m, &mut kept, n);
        for (slot, col) in deficient.into_iter().zip(kept.drain(have..)) {
            u_cols[slot] = col;
        }
    }

    let mut out = SvdFactors {
        u: Matrix::from_columns(m, &u_cols),
        sigma,
        v: Matrix::from_columns(n, &v_cols),
    };
    fix_phases(&mut out);
    Ok(out)
}

fn jacobi_sweeps<T: Scalar>(a: &mut [Vec<T>], v: &mut [Vec<T>]) -> Result<()> {
    let n = a.len();
    let m = a[0].len();
    let zero = T::Real::zero();
    let one = T::Real::one();
    let two = <T::Real as RealScalar>::lit(2.0);
    let tol = T::Real::epsilon() * <T::Real as RealScalar>::from_usize_lossy(m).sqrt();

    let mut last_ratio = zero;
    for _sweep in 0..MAX_SWEEPS {
        let mut rotated = false;
        last_ratio = zero;
        for p in 0..n {
            for q in (p + 1)..n {
                let alpha = norm_sqr(&a[p]);
                let beta = norm_sqr(&a[q]);
                if alpha == zero || beta == zero {
                    continue;
                }
                let gamma = dot(&a[p], &a[q]);
                let g = gamma.modulus();
                let ratio = g / (alpha.sqrt() * beta.sqrt());
                last_ratio = last_ratio.max(ratio);
                if ratio <= tol {
                    continue;
                }
                rotated = true;
                let zeta = (beta - alpha) / (two * g);
                let t = if zeta >= zero {
                    one / (zeta + one.hypot(zeta))
                } else {
                    -one / (-zeta + one.hypot(zeta))
                };
                let c = one / one.hypot(t);
                let s = c * t;
                // Phase aligning aᵖᴴ·aq to the positive real axis.
                let phase = gamma.scale(g.recip()).conj();
                rotate_pair(a, p, q, c, s, phase);
                rotate_pair(v, p, q, c, s, phase);
            }
        }
        if !rotated {
            return Ok(());
        }
    }
    Err(Error::ConvergenceFailure {
        sweeps: MAX_SWEEPS,
        residual: last_ratio.to_f64_lossy(),
    })
}

#[inline]
fn rotate_pair<T: Scalar>(cols: &mut [Vec<T>], p: usize, q: usize, c: T::Real, s: T::Real, phase: T) {
    let (lo, hi) = cols.split_at_mut(q);
    let xp = &mut lo[p];
    let xq = &mut hi[0];
    for (a, b) in xp.iter_mut().zip(xq.iter_mut()) {
        let bq = phase * *b;
        let ap = *a;
        *a = ap.scale(c) - bq.scale(s);
        *b = ap.scale(s) + bq.scale(c);
    }
}

/// Makes the largest-modulus entry of each `U` column real and positive,
/// multiplying the matching `V` column by the same phase.
fn fix_phases<T: Scalar>(f: &mut SvdFactors<T>) {
    let (m, r) = f.u.shape();
    let n = f.v.rows();
    for k in 0..r {
        let mut best = 0;
        let mut best_mod = T::Real::zero();
        for i in 0..m {
            let md = f.u[(i, k)].modulus();
            if md > best_mod {
                best_mod = md;
                best = i;
            }
        }
        if best_mod == T::Real::zero() {
            continue;
        }
        let phase = f.u[(best, k)].conj().scale(best_mod.recip());
        if phase == T::one() {
            continue;
        }
        for i in 0..m {
            f.u[(i, k)] = f.u[(i, k)] * phase;
        }
        for j in 0..n {
            f.v[(j, k)] = f.v[(j, k)] * phase;
        }
        f.u[(best, k)] = T::from_real(f.u[(best, k)].re());
    }
}
