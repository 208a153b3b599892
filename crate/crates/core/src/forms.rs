//! Recovery of a bilinear form preserved by a family of matrices.
//!
//! The constraint `M^T J M = J` is linear in `J`, so the best candidate form
//! is the smallest right singular direction of the stacked constraint
//! operator on the d^2 unknowns. When the constraint nullspace has dimension
//! above one, the skew-symmetric candidate is preferred and the result is
//! flagged ambiguous; the symplectic consumers downstream want skew forms.

use num_traits::{Float, One, Zero};

use crate::error::{Error, Result};
use crate::matrix::Matrix;
use crate::scalar::Scalar;
use crate::svd::svd;

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum FormKind {
    Symmetric,
    SkewSymmetric,
    Mixed,
}

/// A recovered invariant form, Frobenius-normalized to unit norm.
#[derive(Debug, Clone)]
pub struct InvariantForm<T: Scalar> {
    pub matrix: Matrix<T>,
    /// `sqrt(sum_i |M_i^T J M_i - J|^2)` for the returned `J`.
    pub residual: T::Real,
    pub kind: FormKind,
    /// True when the constraint nullspace had dimension above one, so the
    /// returned form is the skew-preferred representative of a family.
    pub ambiguous: bool,
}

/// Finds a nonzero `J` minimizing `sum_i |M_i^T J M_i - J|^2` over unit
/// Frobenius norm. Returns `None` when the smallest achievable residual
/// exceeds `tol`.
pub fn invariant_bilinear_form<T: Scalar>(
    mats: &[Matrix<T>],
    tol: T::Real,
) -> Result<Option<InvariantForm<T>>> {
    if mats.is_empty() {
        return Err(Error::EmptyInput("invariant_bilinear_form"));
    }
    let d = mats[0].rows();
    if mats.iter().any(|m| !m.is_square() || m.rows() != d) {
        return Err(Error::DimensionMismatch {
            context: "invariant_bilinear_form",
            detail: "all matrices must be square of equal dimension".into(),
        });
    }
    let dd = d * d;
    // Stacked operator: for each M a block with rows indexed by (a, b) and
    // columns by (i, j), entry M[i, a] * M[j, b], minus the identity.
    let mut op = Matrix::<T>::zeros(mats.len() * dd, dd);
    for (mi, m) in mats.iter().enumerate() {
        let base = mi * dd;
        for a in 0..d {
            for b in 0..d {
                let row = base + a * d + b;
                for i in 0..d {
                    let mia = m[(i, a)];
                    if mia == T::zero() {
                        continue;
                    }
                    for j in 0..d {
                        op[(row, i * d + j)] += mia * m[(j, b)];
                    }
                }
                op[(row, a * d + b)] -= T::one();
            }
        }
    }
    let decomp = svd(&op)?;
    let smallest = decomp.values[dd - 1];
    if smallest > tol {
        return Ok(None);
    }
    // Collect the near-null right singular directions.
    let null_ranks: Vec<usize> = (0..dd).filter(|&i| decomp.values[i] <= tol).collect();
    let ambiguous = null_ranks.len() > 1;

    let vec_to_matrix = |col: &[T]| -> Matrix<T> { Matrix::from_fn(d, d, |i, j| col[i * d + j]) };

    let j_matrix = if !ambiguous {
        vec_to_matrix(&decomp.v.col(dd - 1))
    } else {
        // Within the nullspace, maximize the skew-symmetric component:
        // the top right singular direction of the skew-projected basis.
        let r = null_ranks.len();
        let mut skew_proj = Matrix::<T>::zeros(dd, r);
        let half = T::real_from_f64(0.5);
        for (c, &rank) in null_ranks.iter().enumerate() {
            let col = decomp.v.col(rank);
            let jm = vec_to_matrix(&col);
            let skew = jm.sub(&jm.transpose()).scale(half);
            for i in 0..d {
                for j in 0..d {
                    skew_proj[(i * d + j, c)] = skew[(i, j)];
                }
            }
        }
        let sk = svd(&skew_proj)?;
        let weights = sk.v.col(0);
        let mut combo = vec![T::zero(); dd];
        for (c, &rank) in null_ranks.iter().enumerate() {
            let col = decomp.v.col(rank);
            let w = weights[c];
            for (x, &src) in combo.iter_mut().zip(col.iter()) {
                *x += src * w;
            }
        }
        vec_to_matrix(&combo)
    };

    let norm = j_matrix.frobenius_norm();
    if norm == T::Real::zero() {
        return Ok(None);
    }
    let j_matrix = j_matrix.scale(T::Real::one() / norm);

    // Recompute the residual for the returned candidate directly.
    let residual = mats
        .iter()
        .map(|m| {
            let defect = m.transpose().mul(&j_matrix).mul(m).sub(&j_matrix);
            defect.frobenius_norm().powi(2)
        })
        .sum::<T::Real>()
        .sqrt();
    if residual > tol {
        return Ok(None);
    }

    let sym_defect = j_matrix.sub(&j_matrix.transpose()).frobenius_norm();
    let skew_defect = j_matrix.add(&j_matrix.transpose()).frobenius_norm();
    let class_tol = T::real_from_f64(1e-6);
    let kind = if skew_defect <= class_tol {
        FormKind::SkewSymmetric
    } else if sym_defect <= class_tol {
        FormKind::Symmetric
    } else {
        FormKind::Mixed
    };

    Ok(Some(InvariantForm {
        matrix: j_matrix,
        residual,
        kind,
        ambiguous,
    }))
}
