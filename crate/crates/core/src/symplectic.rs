//! Symplectic bilinear forms: the standard block form, evaluation, and the
//! residual check that a matrix is a form automorphism.

use num_traits::Zero;

use crate::error::{Error, Result};
use crate::matrix::{dot_bilinear, Matrix};
use crate::scalar::Scalar;

/// An invertible skew-symmetric bilinear form on an even-dimensional space.
#[derive(Debug, Clone)]
pub struct SymplecticStructure<T: Scalar> {
    dim: usize,
    form: Matrix<T>,
}

impl<T: Scalar> SymplecticStructure<T> {
    /// Wraps a form matrix, checking invertibility and skew-symmetry
    /// (relative tolerance 1e-12).
    pub fn new(form: Matrix<T>) -> Result<Self> {
        if !form.is_square() {
            return Err(Error::DimensionMismatch {
                context: "SymplecticStructure",
                detail: format!("{}x{} form matrix", form.rows(), form.cols()),
            });
        }
        let dim = form.rows();
        if !dim.is_multiple_of(2) {
            return Err(Error::InvalidParameter(format!(
                "symplectic form needs even dimension, got {dim}"
            )));
        }
        let norm = form.frobenius_norm();
        if norm == T::Real::zero() {
            return Err(Error::SingularMatrix);
        }
        let skew_defect = form.add(&form.transpose()).frobenius_norm() / norm;
        if skew_defect > T::real_from_f64(1e-12) {
            return Err(Error::Validation(format!(
                "form is not skew-symmetric (relative defect {skew_defect})"
            )));
        }
        if form.det().modulus() == T::Real::zero() {
            return Err(Error::SingularMatrix);
        }
        Ok(SymplecticStructure { dim, form })
    }

    pub fn dim(&self) -> usize {
        self.dim
    }

    pub fn form_matrix(&self) -> &Matrix<T> {
        &self.form
    }

    /// Largest singular value of the form matrix; used to normalize pairing
    /// values into [0, 1].
    pub fn operator_norm(&self) -> Result<T::Real> {
        let s = crate::svd::singular_values(&self.form)?;
        Ok(s.values[0])
    }

    /// Maps the form through an entrywise field embedding.
    pub fn map<U: Scalar>(&self, f: impl Fn(T) -> U) -> SymplecticStructure<U> {
        SymplecticStructure {
            dim: self.dim,
            form: self.form.map(f),
        }
    }

    /// True when the form matrix equals the standard block form exactly.
    pub fn is_standard(&self) -> bool {
        let m = self.dim / 2;
        let std = standard_form_matrix::<T>(m);
        self.form == std
    }
}

fn standard_form_matrix<T: Scalar>(m: usize) -> Matrix<T> {
    let d = 2 * m;
    Matrix::from_fn(d, d, |i, j| {
        if j == i + m {
            T::one()
        } else if i == j + m {
            -T::one()
        } else {
            T::zero()
        }
    })
}

/// The standard symplectic structure on `K^{2m}`: the block matrix with
/// `+I_m` in the upper right and `-I_m` in the lower left.
pub fn standard_symplectic<T: Scalar>(m: usize) -> Result<SymplecticStructure<T>> {
    if m == 0 {
        return Err(Error::InvalidParameter("block size m must be >= 1".into()));
    }
    SymplecticStructure::new(standard_form_matrix::<T>(m))
}

/// Evaluates the bilinear form `u^T (B v)`; no conjugation over the complex field.
pub fn omega_eval<T: Scalar>(u: &[T], v: &[T], s: &SymplecticStructure<T>) -> Result<T> {
    if u.len() != s.dim || v.len() != s.dim {
        return Err(Error::DimensionMismatch {
            context: "omega_eval",
            detail: format!(
                "vectors of lengths {} and {} against dim {}",
                u.len(),
                v.len(),
                s.dim
            ),
        });
    }
    let bv = s.form.matvec(v);
    Ok(dot_bilinear(u, &bv))
}

/// Relative residual `|M^T B M - B| / |B|` (Frobenius) and the verdict
/// `residual <= tol`.
pub fn preserves_form<T: Scalar>(
    m: &Matrix<T>,
    b: &Matrix<T>,
    tol: T::Real,
) -> Result<(T::Real, bool)> {
    if !m.is_square() || !b.is_square() || m.rows() != b.rows() {
        return Err(Error::DimensionMismatch {
            context: "preserves_form",
            detail: format!(
                "matrix {}x{} against form {}x{}",
                m.rows(),
                m.cols(),
                b.rows(),
                b.cols()
            ),
        });
    }
    let b_norm = b.frobenius_norm();
    if b_norm == T::Real::zero() {
        return Err(Error::Validation("zero form matrix".into()));
    }
    let residual = m.transpose().mul(b).mul(m).sub(b).frobenius_norm() / b_norm;
    Ok((residual, residual <= tol))
}
