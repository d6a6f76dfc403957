//! Closed-form first-order perturbation of the SVD of a simple, full-rank
//! matrix.
//!
//! For the tall orientation `X = U Σ Vᴴ` (m ≥ n) with an orthonormal
//! completion `Ũ = [U Q]`, write `L = Ũᴴ Δ V`. Then
//!
//! * `dσᵢ = Re Lᵢᵢ`,
//! * for `i ≠ j` the pair `(Ω_U,ij, Ω_V,ij)` solves the 2×2 system
//!   `σⱼ a + σᵢ b = Lᵢⱼ`, `σᵢ a + σⱼ b = −conj(Lⱼᵢ)`,
//! * the diagonal of `Ω_U` and `Ω_V` is zero for real data; for complex
//!   data the purely imaginary budget `i·Im Lᵢᵢ / σᵢ` is split evenly
//!   between the two factors,
//! * the tail block is `Ω_Q = Qᴴ Δ V Σ⁻¹`,
//!
//! giving `dU = U Ω_U + Q Ω_Q` and `dV = V Ω_Vᴴ`. Wide inputs are handled
//! through the adjoint, which moves the tail block to the `V` side.

use num_traits::{Float, One};

use crate::error::{Error, Result};
use crate::linalg::matrix::Matrix;
use crate::linalg::orth::orthonormal_complement;
use crate::linalg::spectrum::{default_gap_tol, is_simple_full_rank};
use crate::linalg::svd::{svd, SvdFactors};
use crate::scalar::{RealScalar, Scalar};

/// Which factor the complement (tail) block belongs to.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum TailSide {
    /// `m ≥ n`: the tail completes `U`.
    U,
    /// `m < n`: the tail completes `V`.
    V,
}

/// Directional derivative of the SVD factors along a perturbation `Δ`.
#[derive(Debug, Clone)]
pub struct SvdDifferential<T: Scalar> {
    pub d_sigma: Vec<T::Real>,
    /// Top r×r block of `Ω_U`; anti-symmetric (real) or skew-Hermitian.
    pub omega_u: Matrix<T>,
    /// r×r `Ω_V`; anti-symmetric (real) or skew-Hermitian.
    pub omega_v: Matrix<T>,
    /// Coefficients on the orthonormal complement, `(max(m,n) − r) × r`.
    pub omega_tail: Matrix<T>,
    pub tail_side: TailSide,
    pub du: Matrix<T>,
    pub dv: Matrix<T>,
    /// Factors of `X` the differential is expressed in.
    pub factors: SvdFactors<T>,
}

impl<T: Scalar> SvdDifferential<T> {
    /// Product-rule derivative of the spectral map `X ↦ U·diag(f(σ))·Vᴴ`:
    /// `dU·f(Σ)·Vᴴ + U·diag(f′(σ)·dσ)·Vᴴ + U·f(Σ)·dVᴴ`, given the values
    /// `f(σᵢ)` and derivatives `f′(σᵢ)`.
    pub fn product_rule(&self, values: &[T::Real], derivs: &[T::Real]) -> Matrix<T> {
        let f = &self.factors;
        let r = f.sigma.len();
        debug_assert_eq!(values.len(), r);
        debug_assert_eq!(derivs.len(), r);
        let (m, n) = (f.u.rows(), f.v.rows());
        let mut out = Matrix::zeros(m, n);
        for i in 0..m {
            for j in 0..n {
                let mut acc = T::zero();
                for k in 0..r {
                    let vk = f.v[(j, k)].conj();
                    let uk = f.u[(i, k)];
                    acc += self.du[(i, k)].scale(values[k]) * vk;
                    acc += uk.scale(derivs[k] * self.d_sigma[k]) * vk;
                    acc += uk.scale(values[k]) * self.dv[(j, k)].conj();
                }
                out[(i, j)] = acc;
            }
        }
        out
    }

    /// Product rule with `f` the identity; reproduces `Δ` itself.
    pub fn reconstruct_delta(&self) -> Matrix<T> {
        let ones = vec![T::Real::one(); self.d_sigma.len()];
        self.product_rule(&self.factors.sigma, &ones)
    }
}

/// Differential with the default gap tolerance and an automatically
/// chosen orthonormal completion.
pub fn svd_differential<T: Scalar>(x: &Matrix<T>, delta: &Matrix<T>) -> Result<SvdDifferential<T>> {
    svd_differential_with(x, delta, None, None)
}

/// Differential with an explicit gap tolerance and, optionally, an
/// explicit orthonormal basis of the complement of `U` (for `m ≥ n`) or of
/// `V` (for `m < n`), as a `max(m,n) × (max(m,n) − r)` matrix. The result
/// `du`/`dv` does not depend on which completion is supplied.
pub fn svd_differential_with<T: Scalar>(
    x: &Matrix<T>,
    delta: &Matrix<T>,
    gap_tol: Option<T::Real>,
    complement: Option<&Matrix<T>>,
) -> Result<SvdDifferential<T>> {
    x.same_shape(delta)?;
    delta.check_finite()?;
    let (m, n) = x.shape();
    if m >= n {
        let factors = svd(x)?;
        tall_differential(factors, delta, gap_tol, complement)
    } else {
        let a = svd(&x.adjoint())?;
        let t = tall_differential(a, &delta.adjoint(), gap_tol, complement)?;
        let omega_u = t.omega_v.adjoint();
        let omega_v = t.omega_u.adjoint();
        Ok(SvdDifferential {
            d_sigma: t.d_sigma,
            omega_u,
            omega_v,
            omega_tail: t.omega_tail,
            tail_side: TailSide::V,
            du: t.dv,
            dv: t.du,
            factors: SvdFactors {
                u: t.factors.v,
                sigma: t.factors.sigma,
                v: t.factors.u,
            },
        })
    }
}

fn tall_differential<T: Scalar>(
    factors: SvdFactors<T>,
    delta: &Matrix<T>,
    gap_tol: Option<T::Real>,
    complement: Option<&Matrix<T>>,
) -> Result<SvdDifferential<T>> {
    let sigma = &factors.sigma;
    let r = sigma.len();
    let m = factors.u.rows();
    let tol = gap_tol.unwrap_or_else(|| default_gap_tol(sigma));
    let report = is_simple_full_rank(sigma, tol);
    if let Some(defect) = report.defect {
        return Err(defect.into_error(tol.to_f64_lossy()));
    }

    let q = match complement {
        Some(q) => {
            if q.shape() != (m, m - r) {
                return Err(Error::ShapeMismatch(format!(
                    "complement must be {}x{}, got {}x{}",
                    m,
                    m - r,
                    q.rows(),
                    q.cols()
                )));
            }
            q.clone()
        }
        None => Matrix::from_columns(m, &orthonormal_complement(m, &factors.u.columns())),
    };

    let dv_full = delta.matmul(&factors.v)?;
    let l = factors.u.adjoint().matmul(&dv_full)?;
    let lq = q.adjoint().matmul(&dv_full)?;

    let two = <T::Real as RealScalar>::lit(2.0);
    let d_sigma: Vec<T::Real> = (0..r).map(|i| l[(i, i)].re()).collect();
    let mut omega_u = Matrix::zeros(r, r);
    let mut omega_v = Matrix::zeros(r, r);
    for i in 0..r {
        let (si, lii) = (sigma[i], l[(i, i)]);
        let phase_part = (lii - T::from_real(lii.re())).scale((two * si).recip());
        omega_u[(i, i)] = phase_part;
        omega_v[(i, i)] = phase_part;
        for j in 0..r {
            if i == j {
                continue;
            }
            let sj = sigma[j];
            let den = (si * si - sj * sj).recip();
            let lij = l[(i, j)];
            let lji = l[(j, i)].conj();
            omega_u[(i, j)] = -(lij.scale(sj) + lji.scale(si)).scale(den);
            omega_v[(i, j)] = (lij.scale(si) + lji.scale(sj)).scale(den);
        }
    }
    let omega_tail = Matrix::from_fn(m - r, r, |k, j| lq[(k, j)].scale(sigma[j].recip()));
    let du = &factors.u.matmul(&omega_u)? + &q.matmul(&omega_tail)?;
    let dv = factors.v.matmul(&omega_v.adjoint())?;

    Ok(SvdDifferential {
        d_sigma,
        omega_u,
        omega_v,
        omega_tail,
        tail_side: TailSide::U,
        du,
        dv,
        factors,
    })
}
