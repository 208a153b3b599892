//! Exterior powers: compound matrices, wedge bases, Grassmannian coordinate
//! vectors, and top-degree wedge pairings.
//!
//! The basis of the k-th exterior power is indexed by k-element subsets of
//! `{0, .., d-1}` in lexicographic order. Signs come from sorted-merge
//! parity: the sign of the shuffle that sorts a concatenation of disjoint
//! increasing index blocks.

use num_traits::{Float, One};

use crate::error::{Error, Result};
use crate::matrix::{vec_norm, Matrix};
use crate::scalar::Scalar;

/// Largest admissible wedge dimension `C(d, k)`.
pub const WEDGE_DIM_GUARD: usize = 10_000;

/// `C(n, k)` without overflow for the sizes this crate admits.
pub fn binomial(n: usize, k: usize) -> usize {
    if k > n {
        return 0;
    }
    let k = k.min(n - k);
    let mut acc: u128 = 1;
    for i in 0..k {
        acc = acc * (n - i) as u128 / (i + 1) as u128;
    }
    acc.try_into().expect("binomial fits in usize")
}

/// Basis of the k-th exterior power of a d-dimensional space: all k-element
/// subsets of `{0, .., d-1}` in lexicographic order.
#[derive(Debug, Clone)]
pub struct WedgeBasis {
    d: usize,
    k: usize,
    subsets: Vec<Vec<usize>>,
}

impl WedgeBasis {
    pub fn new(d: usize, k: usize) -> Result<Self> {
        if k == 0 || k > d {
            return Err(Error::DegreeOutOfRange { k, dim: d });
        }
        let size = binomial(d, k);
        if size > WEDGE_DIM_GUARD {
            return Err(Error::GuardExceeded {
                context: "wedge basis",
                size,
                limit: WEDGE_DIM_GUARD,
            });
        }
        Ok(WedgeBasis {
            d,
            k,
            subsets: lex_subsets(d, k),
        })
    }

    pub fn ambient_dim(&self) -> usize {
        self.d
    }

    pub fn degree(&self) -> usize {
        self.k
    }

    pub fn len(&self) -> usize {
        self.subsets.len()
    }

    pub fn is_empty(&self) -> bool {
        self.subsets.is_empty()
    }

    pub fn subsets(&self) -> &[Vec<usize>] {
        &self.subsets
    }

    pub fn subset(&self, rank: usize) -> &[usize] {
        &self.subsets[rank]
    }

    /// Lexicographic rank of an increasing k-subset.
    pub fn rank_of(&self, subset: &[usize]) -> usize {
        debug_assert_eq!(subset.len(), self.k);
        let mut rank = 0usize;
        let mut prev: i64 = -1;
        for (pos, &s) in subset.iter().enumerate() {
            for c in (prev + 1) as usize..s {
                rank += binomial(self.d - c - 1, self.k - pos - 1);
            }
            prev = s as i64;
        }
        rank
    }

    /// Complement subset within `{0, .., d-1}`, increasing.
    pub fn complement(&self, subset: &[usize]) -> Vec<usize> {
        let mut mask = vec![false; self.d];
        for &s in subset {
            mask[s] = true;
        }
        (0..self.d).filter(|&i| !mask[i]).collect()
    }
}

/// All k-element subsets of `{0, .., d-1}` in lexicographic order.
pub fn lex_subsets(d: usize, k: usize) -> Vec<Vec<usize>> {
    let mut out = Vec::with_capacity(binomial(d, k));
    let mut cur: Vec<usize> = (0..k).collect();
    loop {
        out.push(cur.clone());
        // advance to next combination
        let mut i = k;
        loop {
            if i == 0 {
                return out;
            }
            i -= 1;
            if cur[i] != i + d - k {
                break;
            }
            if i == 0 {
                return out;
            }
        }
        cur[i] += 1;
        for j in i + 1..k {
            cur[j] = cur[j - 1] + 1;
        }
    }
}

/// Sign of the shuffle sorting the concatenation of two disjoint increasing
/// blocks: `(-1)^{#\{(a, b) in A x B : a > b\}}`.
pub fn merge_sign(a: &[usize], b: &[usize]) -> i32 {
    let mut inversions = 0usize;
    for &x in a {
        for &y in b {
            debug_assert_ne!(x, y);
            if x > y {
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

/// Compound matrix: the action of `m` on the k-th exterior power. Entry
/// `(I, J)` is the k x k minor of `m` with rows `I` and columns `J`.
pub fn exterior_power<T: Scalar>(m: &Matrix<T>, k: usize) -> Result<Matrix<T>> {
    if !m.is_square() {
        return Err(Error::DimensionMismatch {
            context: "exterior_power",
            detail: format!("{}x{} matrix", m.rows(), m.cols()),
        });
    }
    let d = m.rows();
    let basis = WedgeBasis::new(d, k)?;
    if k == 1 {
        return Ok(m.clone());
    }
    let n = basis.len();
    let mut out = Matrix::<T>::zeros(n, n);
    for (ri, rows) in basis.subsets().iter().enumerate() {
        for (rj, cols) in basis.subsets().iter().enumerate() {
            out[(ri, rj)] = m.submatrix(rows, cols).det();
        }
    }
    Ok(out)
}

/// The form induced on the k-th exterior power by a bilinear form matrix;
/// this is just the compound matrix of `b`. For skew-symmetric `b` and odd
/// `k` the result is skew-symmetric again.
pub fn induced_wedge_form<T: Scalar>(b: &Matrix<T>, k: usize) -> Result<Matrix<T>> {
    exterior_power(b, k)
}

/// Unit Grassmannian coordinate vector of the column span of a frame:
/// the k x k row minors over the lexicographic k-subsets, normalized.
///
/// For a frame with orthonormal columns the raw minor vector already has
/// unit norm (Cauchy-Binet); the normalization also admits merely
/// independent columns and rejects rank-deficient input.
pub fn plucker_point<T: Scalar>(frame: &Matrix<T>, basis: &WedgeBasis) -> Result<Vec<T>> {
    let d = frame.rows();
    let k = frame.cols();
    if d != basis.ambient_dim() || k != basis.degree() {
        return Err(Error::DimensionMismatch {
            context: "plucker_point",
            detail: format!(
                "{}x{} frame against basis ({}, {})",
                d,
                k,
                basis.ambient_dim(),
                basis.degree()
            ),
        });
    }
    let all_cols: Vec<usize> = (0..k).collect();
    let mut coords = Vec::with_capacity(basis.len());
    for rows in basis.subsets() {
        coords.push(frame.submatrix(rows, &all_cols).det());
    }
    let norm = vec_norm(&coords);
    let scale = frame.max_abs();
    let floor = T::real_from_f64(1e-10)
        * if scale > T::Real::one() {
            scale.powi(k as i32)
        } else {
            T::Real::one()
        };
    if norm <= floor {
        return Err(Error::RankDeficient);
    }
    let inv = T::Real::one() / norm;
    Ok(coords.iter().map(|c| c.scale(inv)).collect())
}

/// Coefficient of the top form `e_0 ^ .. ^ e_{d-1}` in `u ^ v` for
/// `u, v` in the k-th exterior power with `d = 2k`: the sum over
/// complementary subset pairs `(I, I^c)` of `sign(I, I^c) u_I v_{I^c}`.
pub fn top_form_pairing<T: Scalar>(u: &[T], v: &[T], d: usize, k: usize) -> Result<T> {
    if d != 2 * k {
        return Err(Error::InvalidParameter(format!(
            "top form pairing needs d = 2k, got d = {d}, k = {k}"
        )));
    }
    let basis = WedgeBasis::new(d, k)?;
    if u.len() != basis.len() || v.len() != basis.len() {
        return Err(Error::DimensionMismatch {
            context: "top_form_pairing",
            detail: format!(
                "coordinate lengths {} and {} against {}",
                u.len(),
                v.len(),
                basis.len()
            ),
        });
    }
    let mut acc = T::zero();
    for (ri, subset) in basis.subsets().iter().enumerate() {
        let comp = basis.complement(subset);
        let rj = basis.rank_of(&comp);
        let sign = merge_sign(subset, &comp);
        let term = u[ri] * v[rj];
        if sign > 0 {
            acc += term;
        } else {
            acc -= term;
        }
    }
    Ok(acc)
}

/// Coefficient of the top form in `a ^ b ^ c` where the degrees sum to the
/// ambient dimension. Degree-zero factors are scalars (length-1 slices).
pub fn triple_wedge<T: Scalar>(
    a: &[T],
    deg_a: usize,
    b: &[T],
    deg_b: usize,
    c: &[T],
    deg_c: usize,
    d: usize,
) -> Result<T> {
    if deg_a + deg_b + deg_c != d {
        return Err(Error::InvalidParameter(format!(
            "wedge degrees {deg_a} + {deg_b} + {deg_c} do not sum to dimension {d}"
        )));
    }
    if deg_c == 0 {
        let pair = top_form_pairing(a, b, d, deg_a)?;
        return Ok(pair * c[0]);
    }
    let basis_a = WedgeBasis::new(d, deg_a)?;
    if a.len() != basis_a.len() {
        return Err(Error::DimensionMismatch {
            context: "triple_wedge",
            detail: format!(
                "first factor has {} coordinates, expected {}",
                a.len(),
                basis_a.len()
            ),
        });
    }
    let basis_b_full = WedgeBasis::new(d, deg_b)?;
    let basis_c_full = WedgeBasis::new(d, deg_c)?;
    if b.len() != basis_b_full.len() || c.len() != basis_c_full.len() {
        return Err(Error::DimensionMismatch {
            context: "triple_wedge",
            detail: "factor coordinate lengths do not match their wedge dimensions".into(),
        });
    }
    let mut acc = T::zero();
    for (ra, sa) in basis_a.subsets().iter().enumerate() {
        if a[ra] == T::zero() {
            continue;
        }
        let rest = basis_a.complement(sa);
        // choose the middle block out of the remaining indices
        for picks in lex_subsets(rest.len(), deg_b) {
            let sb: Vec<usize> = picks.iter().map(|&i| rest[i]).collect();
            let mut in_b = vec![false; rest.len()];
            for &i in &picks {
                in_b[i] = true;
            }
            let sc: Vec<usize> = (0..rest.len())
                .filter(|&i| !in_b[i])
                .map(|i| rest[i])
                .collect();
            let rb = basis_b_full.rank_of(&sb);
            let rc = basis_c_full.rank_of(&sc);
            let term = a[ra] * b[rb] * c[rc];
            if term == T::zero() {
                continue;
            }
            let sign = merge_sign(sa, &sb) * merge_sign(sa, &sc) * merge_sign(&sb, &sc);
            if sign > 0 {
                acc += term;
            } else {
                acc -= term;
            }
        }
    }
    Ok(acc)
}
