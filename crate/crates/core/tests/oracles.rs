//! Cross-checks of the library's computational paths against the independent
//! oracles in `support`: Jacobi eigenvalues vs singular values, Laplace
//! minors vs the compound matrices, inversion-count signs vs merge parity,
//! and determinant identities for the wedge pairings.

mod support;

use anosov_core::forms::{invariant_bilinear_form, FormKind};
use anosov_core::matrix::{dot_hermitian, Matrix};
use anosov_core::rep::{schottky_rep, sym_power_sl2};
use anosov_core::svd::singular_values;
use anosov_core::symplectic::{preserves_form, standard_symplectic};
use anosov_core::wedge::{
    exterior_power, lex_subsets, merge_sign, plucker_point, top_form_pairing, WedgeBasis,
};
use num_complex::Complex64;
use support::*;

#[test]
fn singular_values_match_gram_eigenvalues_real() {
    let mut r = rng(101);
    for trial in 0..20 {
        let m = random_real_matrix(&mut r, 5, 5);
        let profile = singular_values(&m).unwrap();
        let gram = m.mul(&m.conj_transpose());
        let eig = hermitian_eigenvalues(&gram);
        let top = profile.values[0] * profile.values[0];
        for (s, l) in profile.values.iter().zip(&eig) {
            assert!(
                (s * s - l).abs() / top <= 1e-10,
                "trial {trial}: {s}^2 vs {l}"
            );
        }
    }
}

#[test]
fn singular_values_match_gram_eigenvalues_complex() {
    let mut r = rng(102);
    for trial in 0..20 {
        let m = random_complex_matrix(&mut r, 5, 5);
        let profile = singular_values(&m).unwrap();
        let gram = m.mul(&m.conj_transpose());
        let eig = hermitian_eigenvalues(&gram);
        let top = profile.values[0] * profile.values[0];
        for (s, l) in profile.values.iter().zip(&eig) {
            assert!(
                (s * s - l).abs() / top <= 1e-10,
                "trial {trial}: {s}^2 vs {l}"
            );
        }
    }
}

#[test]
fn singular_value_duality_under_inversion() {
    let mut r = rng(103);
    for _ in 0..20 {
        let m = random_sl_real(&mut r, 4);
        let inv = m.inverse().unwrap();
        let s = singular_values(&m).unwrap().values;
        let si = singular_values(&inv).unwrap().values;
        let d = s.len();
        for i in 0..d {
            let expect = 1.0 / s[d - 1 - i];
            assert!((si[i] - expect).abs() / expect <= 1e-9, "index {i}");
        }
    }
}

#[test]
fn compound_entries_match_laplace_minors() {
    let mut r = rng(104);
    let m = random_real_matrix(&mut r, 5, 5);
    for k in [2usize, 3] {
        let w = exterior_power(&m, k).unwrap();
        let subsets = lex_subsets(5, k);
        for (ri, rows) in subsets.iter().enumerate() {
            for (rj, cols) in subsets.iter().enumerate() {
                let oracle = laplace_det(&m.submatrix(rows, cols));
                assert!(
                    (w[(ri, rj)] - oracle).abs() <= 1e-12,
                    "k={k} entry ({ri},{rj}): {} vs {oracle}",
                    w[(ri, rj)]
                );
            }
        }
    }
}

#[test]
fn wedge_cubed_of_omega3_matches_integer_oracle() {
    let int_form = int_standard_form(3);
    let oracle = int_compound(&int_form, 3);
    let omega = standard_symplectic::<f64>(3).unwrap();
    let w = exterior_power(omega.form_matrix(), 3).unwrap();
    assert_eq!(w.rows(), 20);
    for i in 0..20 {
        for j in 0..20 {
            assert_eq!(w[(i, j)], oracle[i][j] as f64, "entry ({i},{j})");
            assert_eq!(oracle[i][j], -oracle[j][i], "integer skewness at ({i},{j})");
        }
    }
}

#[test]
fn merge_sign_matches_inversion_count() {
    // every complementary pair in dimension 6, degree 3
    let basis = WedgeBasis::new(6, 3).unwrap();
    for subset in basis.subsets() {
        let comp = basis.complement(subset);
        let mut concat = subset.clone();
        concat.extend_from_slice(&comp);
        assert_eq!(
            merge_sign(subset, &comp),
            permutation_sign(&concat),
            "subset {subset:?}"
        );
    }
}

#[test]
fn plucker_norm_is_cauchy_binet_gram_det() {
    let mut r = rng(105);
    for _ in 0..10 {
        let frame = random_orthonormal_real(&mut r, 4, 2);
        // det(F^T F) = 1 for orthonormal F, so the raw minor vector is unit
        let gram_det = laplace_det(&frame.conj_transpose().mul(&frame));
        assert!((gram_det - 1.0).abs() < 1e-12);
        let basis = WedgeBasis::new(4, 2).unwrap();
        let coords = plucker_point(&frame, &basis).unwrap();
        let norm: f64 = coords.iter().map(|c| c * c).sum::<f64>().sqrt();
        assert!((norm - 1.0).abs() <= 1e-12);
    }
}

#[test]
fn top_form_pairing_matches_block_determinant() {
    // for decomposable classes, the wedge pairing of the coordinate vectors
    // equals the determinant of the stacked frames
    let mut r = rng(106);
    for (d, k) in [(4usize, 2usize), (6, 3)] {
        let basis = WedgeBasis::new(d, k).unwrap();
        for _ in 0..10 {
            let f = random_real_matrix(&mut r, d, k);
            let g = random_real_matrix(&mut r, d, k);
            let all: Vec<usize> = (0..k).collect();
            let pf: Vec<f64> = basis
                .subsets()
                .iter()
                .map(|rows| f.submatrix(rows, &all).det())
                .collect();
            let pg: Vec<f64> = basis
                .subsets()
                .iter()
                .map(|rows| g.submatrix(rows, &all).det())
                .collect();
            let pairing = top_form_pairing(&pf, &pg, d, k).unwrap();
            let block = Matrix::hstack(&[&f, &g]).unwrap();
            let oracle = laplace_det(&block);
            let scale = oracle.abs().max(1.0);
            assert!(
                (pairing - oracle).abs() / scale <= 1e-10,
                "d={d} k={k}: {pairing} vs {oracle}"
            );
        }
    }
}

#[test]
fn diagonal_block_embedding_preserves_standard_form() {
    // diag(lambda, 1/lambda) inside Sp_2: direct multiplication oracle
    let lambda = 2.5f64;
    let m = Matrix::from_rows(&[vec![lambda, 0.0], vec![0.0, 1.0 / lambda]]);
    let omega = standard_symplectic::<f64>(1).unwrap();
    // oracle: (M^T Omega M)_{01} = lambda * (1/lambda) = 1, rest forced
    let product = m.transpose().mul(omega.form_matrix()).mul(&m);
    assert!((product[(0, 1)] - 1.0).abs() < 1e-15);
    assert!((product[(1, 0)] + 1.0).abs() < 1e-15);
    assert_eq!(product[(0, 0)], 0.0);
    assert_eq!(product[(1, 1)], 0.0);
    let (residual, ok) = preserves_form(&m, omega.form_matrix(), 1e-12).unwrap();
    assert!(ok, "residual {residual}");
}

#[test]
fn sym_cubed_of_generic_elements_has_skew_invariant_form() {
    // degree-3 symmetric power of two generic determinant-one 2x2 matrices
    let a: Matrix<f64> = Matrix::from_rows(&[vec![2.0, 0.7], vec![0.3, 0.605]]);
    let a = a.scale(1.0 / a.det().abs().powf(0.5));
    let b: Matrix<f64> = Matrix::from_rows(&[vec![1.1, -0.4], vec![0.8, 0.618]]);
    let b = b.scale(1.0 / b.det().abs().powf(0.5));
    let sa = sym_power_sl2(&a, 4).unwrap();
    let sb = sym_power_sl2(&b, 4).unwrap();
    let form = invariant_bilinear_form(&[sa, sb], 1e-8)
        .unwrap()
        .expect("odd symmetric powers preserve a symplectic form");
    assert_eq!(form.kind, FormKind::SkewSymmetric);
    assert!(form.residual <= 1e-8, "residual {}", form.residual);
    assert!(
        !form.ambiguous,
        "irreducible action has a unique invariant form"
    );
}

#[test]
fn schottky_axes_pair_to_one_under_standard_form() {
    // two rays with flag lines along e_1 and e_{m+1} pair to exactly 1
    for m in 1..=3 {
        let value = anosov_core::limits::standard_basis_pairing::<f64>(m).unwrap();
        assert_eq!(value, 1.0, "m = {m}");
    }
}

#[test]
fn complexified_pipeline_matches_real_singular_data() {
    let rep = schottky_rep(2, 4.0, None).unwrap();
    let crep = anosov_core::rep::complexify(&rep);
    let p = rep.presentation().clone();
    let w = anosov_core::words::reduce_word(&p, &[1, 2, -1, -2, 1]).unwrap();
    let mr = rep.evaluate(&w).unwrap();
    let mc = crep.evaluate(&w).unwrap();
    let sr = singular_values(mr.unit()).unwrap().values;
    let sc = singular_values(mc.unit()).unwrap().values;
    for (a, b) in sr.iter().zip(&sc) {
        assert!((a - b).abs() <= 1e-12);
    }
}

#[test]
fn hermitian_inner_product_convention() {
    // <u, v> is linear in the first slot and conjugates the second
    let i = Complex64::new(0.0, 1.0);
    let u = vec![i, Complex64::new(2.0, 0.0)];
    let v = vec![Complex64::new(0.0, 2.0), Complex64::new(1.0, 1.0)];
    let d = dot_hermitian(&u, &v);
    // i * conj(2i) + 2 * conj(1+i) = i * (-2i) + 2 - 2i = 2 + 2 - 2i
    assert!((d - Complex64::new(4.0, -2.0)).norm() < 1e-14);
}
