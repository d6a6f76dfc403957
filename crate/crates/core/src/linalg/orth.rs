//! Gram-Schmidt helpers: re-orthonormalization and orthonormal completion.

use num_traits::{Float, Zero};

use crate::linalg::matrix::{dot, norm_sqr};
use crate::scalar::{RealScalar, Scalar};

/// Removes from `v` its components along every vector of `basis`, twice
/// (classical "twice is enough" re-orthogonalization).
pub(crate) fn project_out<T: Scalar>(v: &mut [T], basis: &[Vec<T>]) {
    for _ in 0..2 {
        for b in basis {
            let c = dot(b, v);
            if c != T::zero() {
                for (x, &y) in v.iter_mut().zip(b) {
                    *x -= c * y;
                }
            }
        }
    }
}

pub(crate) fn normalize<T: Scalar>(v: &mut [T]) -> T::Real {
    let n = norm_sqr(v).sqrt();
    if n > T::Real::zero() {
        let inv = n.recip();
        for x in v.iter_mut() {
            *x = x.scale(inv);
        }
    }
    n
}

/// Extends the orthonormal set `basis` (vectors of length `dim`) with
/// standard basis vectors projected onto its complement until it holds
/// `target` vectors.
///
/// Candidates are scanned once in index order and accepted when their
/// squared residual exceeds `1/(2·dim)`; at least one candidate always
/// clears that bar while the complement is nonempty.
pub(crate) fn complete_orthonormal<T: Scalar>(dim: usize, basis: &mut Vec<Vec<T>>, target: usize) {
    debug_assert!(target <= dim);
    let bar = <T::Real as RealScalar>::lit(0.5) / <T::Real as RealScalar>::from_usize_lossy(dim);
    let mut k = 0;
    while basis.len() < target && k < dim {
        let mut e = vec![T::zero(); dim];
        e[k] = T::one();
        k += 1;
        project_out(&mut e, basis);
        if norm_sqr(&e) > bar {
            normalize(&mut e);
            project_out(&mut e, basis);
            normalize(&mut e);
            basis.push(e);
        }
    }
    debug_assert_eq!(basis.len(), target, "orthonormal completion ran out of candidates");
}

/// Orthonormal basis of the complement of the (orthonormal) columns in
/// `basis`, of size `dim - basis.len()`.
pub(crate) fn orthonormal_complement<T: Scalar>(dim: usize, basis: &[Vec<T>]) -> Vec<Vec<T>> {
    let mut all = basis.to_vec();
    complete_orthonormal(dim, &mut all, dim);
    all.split_off(basis.len())
}
