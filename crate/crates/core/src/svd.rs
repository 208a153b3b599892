//! Singular value decomposition by one-sided Jacobi, singular value gaps,
//! and principal angles between subspaces.
//!
//! One-sided Jacobi orthogonalizes the columns of the input, which gives high
//! relative accuracy on the small singular values. That matters here: gap
//! certification divides neighbouring singular values of long word products
//! whose spectra span many orders of magnitude.

use num_traits::{Float, One, Zero};

use crate::error::{Error, Result};
use crate::matrix::{dot_hermitian, vec_norm, Matrix};
use crate::scalar::Scalar;

const MAX_SWEEPS: usize = 128;

/// Full SVD `A = U diag(values) V^H` with `U` (m x m) and `V` (n x n) unitary
/// and `values` descending, length `min(m, n)`.
#[derive(Debug, Clone)]
pub struct Svd<T: Scalar> {
    pub u: Matrix<T>,
    pub values: Vec<T::Real>,
    pub v: Matrix<T>,
}

/// Singular values of a square matrix together with the orthonormal singular
/// frames. `values[i]^2` agrees with the i-th eigenvalue modulus of `M M^*`.
#[derive(Debug, Clone)]
pub struct SingularProfile<T: Scalar> {
    pub values: Vec<T::Real>,
    pub left_frames: Matrix<T>,
    pub right_frames: Matrix<T>,
}

/// Computes the full SVD of an arbitrary rectangular matrix.
pub fn svd<T: Scalar>(m: &Matrix<T>) -> Result<Svd<T>> {
    if !m.is_finite() {
        return Err(Error::NonFinite);
    }
    if m.rows() >= m.cols() {
        svd_tall(m)
    } else {
        // A = U S V^H  <=>  A^H = V S U^H
        let t = svd_tall(&m.conj_transpose())?;
        Ok(Svd {
            u: t.v,
            values: t.values,
            v: t.u,
        })
    }
}

fn svd_tall<T: Scalar>(a: &Matrix<T>) -> Result<Svd<T>> {
    let m = a.rows();
    let n = a.cols();
    debug_assert!(m >= n);
    let mut w = a.clone();
    let mut v = Matrix::<T>::identity(n);
    let eps = T::Real::epsilon();

    let mut converged = false;
    let mut worst_rel = T::Real::zero();
    for _ in 0..MAX_SWEEPS {
        let mut rotated = false;
        worst_rel = T::Real::zero();
        for p in 0..n {
            for q in p + 1..n {
                let wp = w.col(p);
                let wq = w.col(q);
                let alpha: T::Real = wp.iter().map(|x| x.modulus_sq()).sum();
                let beta: T::Real = wq.iter().map(|x| x.modulus_sq()).sum();
                // g = w_p^H w_q
                let g = dot_hermitian(&wq, &wp);
                let g_mod = g.modulus();
                let scale = (alpha * beta).sqrt();
                if scale > T::Real::zero() && g_mod / scale > worst_rel {
                    worst_rel = g_mod / scale;
                }
                if g_mod <= eps * scale || g_mod == T::Real::zero() {
                    continue;
                }
                rotated = true;
                // Phase that makes the 2x2 Gram block real symmetric.
                let phase = g.scale(T::Real::one() / g_mod); // e^{i arg g}
                let zeta = (beta - alpha) / (g_mod + g_mod);
                let t_rot = if zeta >= T::Real::zero() {
                    T::Real::one() / (zeta + (T::Real::one() + zeta * zeta).sqrt())
                } else {
                    -T::Real::one() / (-zeta + (T::Real::one() + zeta * zeta).sqrt())
                };
                let c = T::Real::one() / (T::Real::one() + t_rot * t_rot).sqrt();
                let s = t_rot * c;
                let phase_conj = phase.conj();
                for i in 0..m {
                    let xp = w[(i, p)];
                    let xq = w[(i, q)] * phase_conj;
                    w[(i, p)] = xp.scale(c) - xq.scale(s);
                    w[(i, q)] = xp.scale(s) + xq.scale(c);
                }
                for i in 0..n {
                    let xp = v[(i, p)];
                    let xq = v[(i, q)] * phase_conj;
                    v[(i, p)] = xp.scale(c) - xq.scale(s);
                    v[(i, q)] = xp.scale(s) + xq.scale(c);
                }
            }
        }
        if !rotated {
            converged = true;
            break;
        }
    }
    // Rounding can leave a pair oscillating right at the rotation threshold;
    // a residual at the roundoff level is converged for every consumer here.
    if !converged && worst_rel > T::real_from_f64(4096.0) * eps {
        return Err(Error::SvdNoConvergence);
    }

    // Column norms are the singular values; sort descending.
    let mut order: Vec<usize> = (0..n).collect();
    let norms: Vec<T::Real> = (0..n).map(|j| vec_norm(&w.col(j))).collect();
    order.sort_by(|&i, &j| {
        norms[j]
            .partial_cmp(&norms[i])
            .unwrap_or(std::cmp::Ordering::Equal)
    });

    let values: Vec<T::Real> = order.iter().map(|&j| norms[j]).collect();
    let sigma_max = values.first().copied().unwrap_or(T::Real::zero());
    let tiny = sigma_max * eps * T::real_from_f64((m.max(n)) as f64);

    let mut u = Matrix::<T>::zeros(m, m);
    let mut v_sorted = Matrix::<T>::zeros(n, n);
    let mut u_cols = 0usize;
    for (dst, &src) in order.iter().enumerate() {
        for i in 0..n {
            v_sorted[(i, dst)] = v[(i, src)];
        }
        if values[dst] > tiny && values[dst] > T::Real::zero() {
            let inv = T::Real::one() / values[dst];
            for i in 0..m {
                u[(i, dst)] = w[(i, src)].scale(inv);
            }
            u_cols = dst + 1;
        }
    }
    complete_basis(&mut u, u_cols)?;
    canonicalize_signs(&mut u, &mut v_sorted);
    Ok(Svd {
        u,
        values,
        v: v_sorted,
    })
}

/// Fills columns `from..` of `q` with an orthonormal completion of the
/// preceding columns: each new column is the standard basis vector with the
/// largest residual outside the current span, orthogonalized and normalized.
/// The largest residual is at least `sqrt((m - have) / m)`, so the greedy
/// choice always succeeds while columns remain to fill.
fn complete_basis<T: Scalar>(q: &mut Matrix<T>, from: usize) -> Result<()> {
    let m = q.rows();
    let total = q.cols();
    let mut have = from;
    while have < total {
        let mut best: Option<(T::Real, Vec<T>)> = None;
        for candidate in 0..m {
            let mut col = vec![T::zero(); m];
            col[candidate] = T::one();
            for j in 0..have {
                let prev = q.col(j);
                let proj = dot_hermitian(&col, &prev);
                for i in 0..m {
                    col[i] -= prev[i] * proj;
                }
            }
            let norm = vec_norm(&col);
            if best.as_ref().is_none_or(|(b, _)| norm > *b) {
                best = Some((norm, col));
            }
        }
        let (norm, col) = best.expect("at least one candidate");
        if norm <= T::real_from_f64(1e-6) {
            return Err(Error::RankDeficient);
        }
        let inv = T::Real::one() / norm;
        for i in 0..m {
            q[(i, have)] = col[i].scale(inv);
        }
        have += 1;
    }
    Ok(())
}

/// Deterministic sign/phase policy: the largest-modulus component of every
/// left singular vector is made positive real (ties break at the lowest
/// index), with the matching right vector rotated by the same phase.
fn canonicalize_signs<T: Scalar>(u: &mut Matrix<T>, v: &mut Matrix<T>) {
    let m = u.rows();
    let n = v.rows();
    for j in 0..u.cols() {
        let mut best = T::Real::zero();
        let mut arg = 0usize;
        for i in 0..m {
            let a = u[(i, j)].modulus();
            if a > best {
                best = a;
                arg = i;
            }
        }
        if best == T::Real::zero() {
            continue;
        }
        let phase = u[(arg, j)].scale(T::Real::one() / best);
        let rot = phase.conj();
        for i in 0..m {
            u[(i, j)] *= rot;
        }
        if j < v.cols() {
            for i in 0..n {
                v[(i, j)] *= rot;
            }
        }
    }
}

/// Singular values with frames for a square matrix.
pub fn singular_values<T: Scalar>(m: &Matrix<T>) -> Result<SingularProfile<T>> {
    if !m.is_finite() {
        return Err(Error::NonFinite);
    }
    let s = svd(m)?;
    Ok(SingularProfile {
        values: s.values,
        left_frames: s.u,
        right_frames: s.v,
    })
}

/// Ratio `sigma_k / sigma_{k+1}` (1-indexed), `+inf` when `sigma_{k+1} = 0`.
///
/// Invariant under positive rescaling of the matrix and under multiplication
/// by unitaries on either side.
pub fn gap_ratio<T: Scalar>(m: &Matrix<T>, k: usize) -> Result<T::Real> {
    let d = m.rows().min(m.cols());
    if k == 0 || k >= d {
        return Err(Error::DegreeOutOfRange { k, dim: d });
    }
    let s = svd(m)?;
    let hi = s.values[k - 1];
    let lo = s.values[k];
    if lo == T::Real::zero() {
        return Ok(T::Real::infinity());
    }
    Ok(hi / lo)
}

/// Principal angles (ascending, radians) between the column spans of two
/// orthonormal frames in the same ambient space.
pub fn principal_angles<T: Scalar>(f1: &Matrix<T>, f2: &Matrix<T>) -> Result<Vec<T::Real>> {
    if f1.rows() != f2.rows() {
        return Err(Error::DimensionMismatch {
            context: "principal_angles",
            detail: format!("ambient dimensions {} vs {}", f1.rows(), f2.rows()),
        });
    }
    let cross = f1.conj_transpose().mul(f2);
    let s = svd(&cross)?;
    let one = T::Real::one();
    Ok(s.values
        .iter()
        .map(|&c| {
            let c = if c > one { one } else { c };
            c.acos()
        })
        .collect())
}

/// Largest principal angle; measures how far `f_sub` is from lying inside the
/// span of `f_big` (requires `f_sub.cols() <= f_big.cols()`).
///
/// Computed through the sine: the top singular value of the component of
/// `f_sub` orthogonal to the span of `f_big`. Unlike the arccosine route
/// this resolves angles down to roundoff instead of flooring at
/// `sqrt(machine epsilon)`.
pub fn max_principal_angle<T: Scalar>(f_sub: &Matrix<T>, f_big: &Matrix<T>) -> Result<T::Real> {
    if f_sub.rows() != f_big.rows() || f_sub.cols() > f_big.cols() {
        return Err(Error::DimensionMismatch {
            context: "max_principal_angle",
            detail: format!(
                "{}x{} frame against {}x{}",
                f_sub.rows(),
                f_sub.cols(),
                f_big.rows(),
                f_big.cols()
            ),
        });
    }
    let cross = f_big.conj_transpose().mul(f_sub);
    let residual = f_sub.sub(&f_big.mul(&cross));
    let s = svd(&residual)?;
    let sine = s.values.first().copied().unwrap_or(T::Real::zero());
    let one = T::Real::one();
    Ok(if sine > one { one } else { sine }.asin())
}
