//! Independent oracles and input generators for the integration tests.
//!
//! Everything here deliberately avoids the library's computational paths:
//! eigenvalues come from a two-sided Jacobi iteration on the Gram matrix
//! (not the one-sided singular value code), determinants from Laplace
//! expansion (not LU), and permutation signs from explicit inversion counts
//! (not sorted-merge parity).

#![allow(dead_code)]

use anosov_core::matrix::Matrix;
use anosov_core::scalar::Scalar;
use num_complex::Complex64;
use num_traits::{Float, One, Zero};
use rand::Rng;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

/// Eigenvalue moduli of a Hermitian matrix, descending, via two-sided
/// cyclic Jacobi on the matrix itself.
pub fn hermitian_eigenvalues<T: Scalar>(h: &Matrix<T>) -> Vec<T::Real> {
    assert!(h.is_square());
    let n = h.rows();
    let mut a = h.clone();
    let eps = T::Real::epsilon();
    let scale = a.frobenius_norm().max(T::Real::one());
    for _sweep in 0..256 {
        let mut off = T::Real::zero();
        for p in 0..n {
            for q in p + 1..n {
                off = off.max(a[(p, q)].modulus());
            }
        }
        if off <= eps * scale {
            break;
        }
        for p in 0..n {
            for q in p + 1..n {
                let apq = a[(p, q)];
                let g = apq.modulus();
                if g <= eps * scale {
                    continue;
                }
                let app = a[(p, p)].re();
                let aqq = a[(q, q)].re();
                let phase = apq.scale(T::Real::one() / g);
                let zeta = (aqq - app) / (g + g);
                let t = if zeta >= T::Real::zero() {
                    T::Real::one() / (zeta + (T::Real::one() + zeta * zeta).sqrt())
                } else {
                    -T::Real::one() / (-zeta + (T::Real::one() + zeta * zeta).sqrt())
                };
                let c = T::Real::one() / (T::Real::one() + t * t).sqrt();
                let s = t * c;
                // columns p, q: A <- A J with J = [[c, s], [-s, c]] in the
                // phase-adjusted plane
                let phase_conj = phase.conj();
                for i in 0..n {
                    let aip = a[(i, p)];
                    let aiq = a[(i, q)] * phase_conj;
                    a[(i, p)] = aip.scale(c) - aiq.scale(s);
                    a[(i, q)] = aip.scale(s) + aiq.scale(c);
                }
                // rows p, q: A <- J^H A
                for j in 0..n {
                    let apj = a[(p, j)];
                    let aqj = a[(q, j)] * phase;
                    a[(p, j)] = apj.scale(c) - aqj.scale(s);
                    a[(q, j)] = apj.scale(s) + aqj.scale(c);
                }
            }
        }
    }
    let mut eig: Vec<T::Real> = (0..n).map(|i| a[(i, i)].re().abs()).collect();
    eig.sort_by(|x, y| y.partial_cmp(x).unwrap());
    eig
}

/// Determinant by Laplace expansion along the first row; exponential cost,
/// fine for the minor sizes the oracles need.
pub fn laplace_det<T: Scalar>(m: &Matrix<T>) -> T {
    let n = m.rows();
    assert!(m.is_square());
    if n == 1 {
        return m[(0, 0)];
    }
    let mut acc = T::zero();
    let cols: Vec<usize> = (1..n).collect();
    for j in 0..n {
        let entry = m[(0, j)];
        if entry == T::zero() {
            continue;
        }
        let keep: Vec<usize> = (0..n).filter(|&c| c != j).collect();
        let rows: Vec<usize> = cols.clone();
        let minor = laplace_det(&m.submatrix(&rows, &keep));
        let term = entry * minor;
        if j % 2 == 0 {
            acc += term;
        } else {
            acc -= term;
        }
    }
    acc
}

/// Integer determinant by Laplace expansion; exact.
pub fn int_det(m: &[Vec<i64>]) -> i64 {
    let n = m.len();
    if n == 1 {
        return m[0][0];
    }
    let mut acc = 0i64;
    for j in 0..n {
        if m[0][j] == 0 {
            continue;
        }
        let minor: Vec<Vec<i64>> = (1..n)
            .map(|i| (0..n).filter(|&c| c != j).map(|c| m[i][c]).collect())
            .collect();
        let sign = if j % 2 == 0 { 1 } else { -1 };
        acc += sign * m[0][j] * int_det(&minor);
    }
    acc
}

/// Integer compound matrix: entry (I, J) is the minor with rows I, cols J.
pub fn int_compound(m: &[Vec<i64>], k: usize) -> Vec<Vec<i64>> {
    let d = m.len();
    let subsets = anosov_core::wedge::lex_subsets(d, k);
    subsets
        .iter()
        .map(|rows| {
            subsets
                .iter()
                .map(|cols| {
                    let sub: Vec<Vec<i64>> = rows
                        .iter()
                        .map(|&r| cols.iter().map(|&c| m[r][c]).collect())
                        .collect();
                    int_det(&sub)
                })
                .collect()
        })
        .collect()
}

/// The standard symplectic block matrix over the integers.
pub fn int_standard_form(m: usize) -> Vec<Vec<i64>> {
    let d = 2 * m;
    (0..d)
        .map(|i| {
            (0..d)
                .map(|j| {
                    if j == i + m {
                        1
                    } else if i == j + m {
                        -1
                    } else {
                        0
                    }
                })
                .collect()
        })
        .collect()
}

/// Sign of the permutation given as a sequence of distinct indices, by a
/// full quadratic inversion count.
pub fn permutation_sign(seq: &[usize]) -> i32 {
    let mut inversions = 0usize;
    for i in 0..seq.len() {
        for j in i + 1..seq.len() {
            if seq[i] > seq[j] {
                inversions += 1;
            }
        }
    }
    if inversions.is_multiple_of(2) {
        1
    } else {
        -1
    }
}

pub fn rng(seed: u64) -> ChaCha8Rng {
    ChaCha8Rng::seed_from_u64(seed)
}

pub fn random_real_matrix(rng: &mut ChaCha8Rng, rows: usize, cols: usize) -> Matrix<f64> {
    Matrix::from_fn(rows, cols, |_, _| rng.random_range(-1.0..1.0))
}

pub fn random_complex_matrix(rng: &mut ChaCha8Rng, rows: usize, cols: usize) -> Matrix<Complex64> {
    Matrix::from_fn(rows, cols, |_, _| {
        Complex64::new(rng.random_range(-1.0..1.0), rng.random_range(-1.0..1.0))
    })
}

/// Random real matrix rescaled to determinant exactly one (up to roundoff);
/// regenerates on near-singular draws.
pub fn random_sl_real(rng: &mut ChaCha8Rng, d: usize) -> Matrix<f64> {
    loop {
        let mut m = random_real_matrix(rng, d, d);
        let det = m.det();
        if det.abs() < 1e-3 {
            continue;
        }
        if det < 0.0 {
            // swap the first two rows to flip the sign
            for j in 0..d {
                let a = m[(0, j)];
                m[(0, j)] = m[(1, j)];
                m[(1, j)] = a;
            }
        }
        let det = m.det();
        let scale = det.powf(-1.0 / d as f64);
        return m.scale(scale);
    }
}

/// Random complex matrix rescaled to determinant one via the principal root.
pub fn random_sl_complex(rng: &mut ChaCha8Rng, d: usize) -> Matrix<Complex64> {
    loop {
        let m = random_complex_matrix(rng, d, d);
        let det = m.det();
        if det.norm() < 1e-3 {
            continue;
        }
        let scale = det.powf(-1.0 / d as f64);
        return m.map(|x| x * scale);
    }
}

/// Random unit vector over the reals.
pub fn random_unit_real(rng: &mut ChaCha8Rng, d: usize) -> Vec<f64> {
    loop {
        let v: Vec<f64> = (0..d).map(|_| rng.random_range(-1.0..1.0)).collect();
        let n = anosov_core::matrix::vec_norm(&v);
        if n > 1e-3 {
            return v.iter().map(|x| x / n).collect();
        }
    }
}

/// Random unit vector over the complex numbers.
pub fn random_unit_complex(rng: &mut ChaCha8Rng, d: usize) -> Vec<Complex64> {
    loop {
        let v: Vec<Complex64> = (0..d)
            .map(|_| Complex64::new(rng.random_range(-1.0..1.0), rng.random_range(-1.0..1.0)))
            .collect();
        let n = anosov_core::matrix::vec_norm(&v);
        if n > 1e-3 {
            return v.iter().map(|x| x / n).collect();
        }
    }
}

/// Random orthonormal frame: Gram-Schmidt on a random matrix.
pub fn random_orthonormal_real(rng: &mut ChaCha8Rng, d: usize, k: usize) -> Matrix<f64> {
    loop {
        let m = random_real_matrix(rng, d, k);
        if let Ok(q) = m.orthonormalize_columns() {
            return q;
        }
    }
}
