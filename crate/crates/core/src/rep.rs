//! Matrix representations of group presentations: validated construction,
//! overflow-safe evaluation on words, and the standard sources of examples
//! (ping-pong generators, symmetric powers of 2x2 matrices, exterior powers,
//! complexification).

use num_complex::Complex64;
use num_traits::{Float, One, Zero};

use crate::error::{Error, Result};
use crate::matrix::Matrix;
use crate::scalar::Scalar;
use crate::symplectic::{preserves_form, SymplecticStructure};
use crate::wedge::{binomial, exterior_power, induced_wedge_form};
use crate::words::{GroupKind, GroupPresentation, Letter, Word};

use rand::Rng;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

/// A matrix with its Frobenius scale factored out on a log scale, so that
/// long products never overflow. The represented matrix is
/// `exp(log_scale) * unit`; singular value ratios of `unit` equal those of
/// the represented matrix.
#[derive(Debug, Clone)]
pub struct ScaledMatrix<T: Scalar> {
    unit: Matrix<T>,
    log_scale: T::Real,
}

impl<T: Scalar> ScaledMatrix<T> {
    /// Wraps a matrix, normalizing it to unit Frobenius norm.
    pub fn from_matrix(m: &Matrix<T>) -> Self {
        let norm = m.frobenius_norm();
        if norm == T::Real::zero() || !norm.is_finite() {
            return ScaledMatrix {
                unit: m.clone(),
                log_scale: T::Real::zero(),
            };
        }
        ScaledMatrix {
            unit: m.scale(T::Real::one() / norm),
            log_scale: norm.ln(),
        }
    }

    /// The identity, stored unscaled so `represented()` is exactly `I`.
    pub fn identity(dim: usize) -> Self {
        ScaledMatrix {
            unit: Matrix::identity(dim),
            log_scale: T::Real::zero(),
        }
    }

    /// Unit-norm direction matrix (gap ratios and singular frames of the
    /// represented matrix are computed from this).
    pub fn unit(&self) -> &Matrix<T> {
        &self.unit
    }

    pub fn log_scale(&self) -> T::Real {
        self.log_scale
    }

    /// Product with renormalization; log factors accumulate.
    pub fn mul(&self, other: &ScaledMatrix<T>) -> ScaledMatrix<T> {
        let raw = self.unit.mul(&other.unit);
        let norm = raw.frobenius_norm();
        ScaledMatrix {
            unit: raw.scale(T::Real::one() / norm),
            log_scale: self.log_scale + other.log_scale + norm.ln(),
        }
    }

    /// Multiplies by a plain matrix on the right, renormalizing.
    pub fn mul_matrix(&self, m: &Matrix<T>) -> ScaledMatrix<T> {
        let raw = self.unit.mul(m);
        let norm = raw.frobenius_norm();
        ScaledMatrix {
            unit: raw.scale(T::Real::one() / norm),
            log_scale: self.log_scale + norm.ln(),
        }
    }

    /// The represented matrix `exp(log_scale) * unit`; may overflow for very
    /// long words, which is exactly what the scaled form avoids.
    pub fn represented(&self) -> Matrix<T> {
        self.unit.scale(self.log_scale.exp())
    }

    /// Relative Frobenius distance between two represented matrices, robust
    /// to the scale split and to how the unit part happens to be normalized.
    pub fn relative_distance(&self, other: &ScaledMatrix<T>) -> T::Real {
        let na = self.unit.frobenius_norm();
        let nb = other.unit.frobenius_norm();
        let scale_gap = ((self.log_scale + na.ln()) - (other.log_scale + nb.ln())).abs();
        let dir_gap = self
            .unit
            .scale(T::Real::one() / na)
            .sub(&other.unit.scale(T::Real::one() / nb))
            .frobenius_norm();
        dir_gap + scale_gap
    }
}

/// A representation: one invertible matrix per generator, with inverses
/// precomputed, and an optional invariant bilinear structure.
#[derive(Debug, Clone)]
pub struct Representation<T: Scalar> {
    presentation: GroupPresentation,
    dim: usize,
    images: Vec<Matrix<T>>,
    inverses: Vec<Matrix<T>>,
    structure: Option<SymplecticStructure<T>>,
}

impl<T: Scalar> Representation<T> {
    /// Validated constructor; inverses are computed here.
    pub fn new(
        presentation: GroupPresentation,
        images: Vec<Matrix<T>>,
        structure: Option<SymplecticStructure<T>>,
    ) -> Result<Self> {
        let inverses: Result<Vec<Matrix<T>>> = images.iter().map(|m| m.inverse()).collect();
        Self::from_parts(presentation, images, inverses?, structure)
    }

    /// Validated constructor with caller-supplied inverses (used by functors
    /// that transform image and inverse consistently).
    pub fn from_parts(
        presentation: GroupPresentation,
        images: Vec<Matrix<T>>,
        inverses: Vec<Matrix<T>>,
        structure: Option<SymplecticStructure<T>>,
    ) -> Result<Self> {
        if images.len() != presentation.generator_count() {
            return Err(Error::Validation(format!(
                "{} generator images for {} generators",
                images.len(),
                presentation.generator_count()
            )));
        }
        if images.is_empty() {
            return Err(Error::EmptyInput("Representation"));
        }
        let dim = images[0].rows();
        for m in images.iter().chain(inverses.iter()) {
            if !m.is_square() || m.rows() != dim {
                return Err(Error::Validation(
                    "generator images must be square of equal dimension".into(),
                ));
            }
            if !m.is_finite() {
                return Err(Error::NonFinite);
            }
        }
        // Validation tolerances hold verbatim on well-conditioned images and
        // degrade with the condition number: the stored entries of highly
        // graded images (long symmetric or exterior powers) already carry
        // roundoff that any determinant or inverse check inherits.
        let sqrt_d = T::real_from_f64(dim as f64).sqrt();
        let mut kappa_max = T::Real::one();
        for (g, (m, inv)) in images.iter().zip(&inverses).enumerate() {
            let profile = crate::svd::singular_values(m)?;
            let smallest = profile.values[dim - 1];
            if smallest == T::Real::zero() {
                return Err(Error::SingularMatrix);
            }
            let kappa = profile.values[0] / smallest;
            if kappa > kappa_max {
                kappa_max = kappa;
            }
            let slack = T::real_from_f64(1e-13) * kappa;
            let det_mod = profile
                .values
                .iter()
                .fold(T::Real::zero(), |acc, &s| acc + s.ln())
                .exp();
            let tol_det = T::real_from_f64(1e-9).max(slack);
            if (det_mod - T::Real::one()).abs() > tol_det {
                return Err(Error::Validation(format!(
                    "generator {} has |det| = {det_mod}, expected 1",
                    g + 1
                )));
            }
            let defect = m.mul(inv).sub(&Matrix::identity(dim)).frobenius_norm() / sqrt_d;
            let tol_inv = T::real_from_f64(1e-10).max(slack);
            if defect > tol_inv {
                return Err(Error::Validation(format!(
                    "generator {} inverse defect {defect}",
                    g + 1
                )));
            }
        }
        let cond_slack = T::real_from_f64(1e-13) * kappa_max;
        if let Some(s) = &structure {
            if s.dim() != dim {
                return Err(Error::Validation(format!(
                    "form dimension {} against representation dimension {dim}",
                    s.dim()
                )));
            }
            let tol_form = T::real_from_f64(1e-9).max(cond_slack);
            for (g, m) in images.iter().enumerate() {
                let (residual, ok) = preserves_form(m, s.form_matrix(), tol_form)?;
                if !ok {
                    return Err(Error::Validation(format!(
                        "generator {} does not preserve the declared form (residual {residual})",
                        g + 1
                    )));
                }
            }
        }
        let rep = Representation {
            presentation,
            dim,
            images,
            inverses,
            structure,
        };
        // a surface-group assignment must kill the relator
        if let GroupKind::Surface { .. } = rep.presentation.kind() {
            let relator: Vec<Letter> = rep.presentation.relator().unwrap();
            let value = rep.evaluate_letters(&relator)?;
            let defect = value
                .represented()
                .sub(&Matrix::identity(dim))
                .frobenius_norm()
                / sqrt_d;
            if defect > T::real_from_f64(1e-8).max(cond_slack) {
                return Err(Error::Validation(format!(
                    "images do not satisfy the surface relator (defect {defect})"
                )));
            }
        }
        Ok(rep)
    }

    pub fn presentation(&self) -> &GroupPresentation {
        &self.presentation
    }

    pub fn dim(&self) -> usize {
        self.dim
    }

    pub fn generator_images(&self) -> &[Matrix<T>] {
        &self.images
    }

    pub fn structure(&self) -> Option<&SymplecticStructure<T>> {
        self.structure.as_ref()
    }

    /// Image of a single signed letter.
    pub fn letter_image(&self, l: Letter) -> Result<&Matrix<T>> {
        let idx = l.unsigned_abs() as usize;
        if l == 0 || idx > self.images.len() {
            return Err(Error::InvalidGenerator {
                index: l,
                generators: self.images.len(),
            });
        }
        Ok(if l > 0 {
            &self.images[idx - 1]
        } else {
            &self.inverses[idx - 1]
        })
    }

    /// Left-to-right product over the word with renormalization after every
    /// multiplication. The empty word gives exactly the identity.
    pub fn evaluate(&self, w: &Word) -> Result<ScaledMatrix<T>> {
        self.evaluate_letters(w.letters())
    }

    fn evaluate_letters(&self, letters: &[Letter]) -> Result<ScaledMatrix<T>> {
        let mut acc = ScaledMatrix::identity(self.dim);
        for &l in letters {
            acc = acc.mul_matrix(self.letter_image(l)?);
        }
        Ok(acc)
    }

    /// The contragredient (inverse-transpose) representation; it swaps the
    /// singular value spectrum, so gap profiles at index k match those of the
    /// original at index d - k.
    pub fn contragredient(&self) -> Representation<T> {
        let images: Vec<Matrix<T>> = self.inverses.iter().map(|m| m.transpose()).collect();
        let inverses: Vec<Matrix<T>> = self.images.iter().map(|m| m.transpose()).collect();
        Representation {
            presentation: self.presentation.clone(),
            dim: self.dim,
            images,
            inverses,
            structure: None,
        }
    }
}

/// Ping-pong generators for a free group of rank `n >= 2`: generator `i` is
/// `R_i diag(lambda, 1/lambda) R_i^{-1}` with rotation angles `i pi / (2n)`.
/// A seed perturbs every angle by at most 0.05 rad; `None` keeps the exact
/// schedule. The axes are pairwise transverse, so word products expand
/// uniformly; every image preserves the standard area form.
pub fn schottky_rep(n: usize, lambda: f64, seed: Option<u64>) -> Result<Representation<f64>> {
    if n < 2 {
        return Err(Error::InvalidParameter(format!(
            "ping-pong rank must be >= 2, got {n}"
        )));
    }
    if lambda < 2.0 {
        return Err(Error::InvalidParameter(format!(
            "expansion factor must be >= 2 for a safe ping-pong configuration, got {lambda}"
        )));
    }
    let presentation = GroupPresentation::free(n)?;
    let mut rng = seed.map(ChaCha8Rng::seed_from_u64);
    let mut images = Vec::with_capacity(n);
    for i in 0..n {
        let mut angle = i as f64 * std::f64::consts::PI / (2.0 * n as f64);
        if let Some(rng) = rng.as_mut() {
            angle += 0.05 * (rng.random::<f64>() * 2.0 - 1.0);
        }
        let (s, c) = angle.sin_cos();
        let rot = Matrix::from_rows(&[vec![c, -s], vec![s, c]]);
        let rot_inv = Matrix::from_rows(&[vec![c, s], vec![-s, c]]);
        let diag = Matrix::from_rows(&[vec![lambda, 0.0], vec![0.0, 1.0 / lambda]]);
        images.push(rot.mul(&diag).mul(&rot_inv));
    }
    // every 2x2 determinant-one matrix preserves the standard area form
    let structure = crate::symplectic::standard_symplectic::<f64>(1)?;
    Representation::new(presentation, images, Some(structure))
}

/// Action of a 2x2 matrix on homogeneous polynomials of degree `d - 1`, in
/// the monomial basis weighted by square roots of binomial coefficients so
/// that rotations map to orthogonal matrices. Multiplicative in the input.
pub fn sym_power_sl2<T: Scalar>(a: &Matrix<T>, d: usize) -> Result<Matrix<T>> {
    if !a.is_square() || a.rows() != 2 {
        return Err(Error::DimensionMismatch {
            context: "sym_power_sl2",
            detail: format!("{}x{} input, expected 2x2", a.rows(), a.cols()),
        });
    }
    if d < 2 {
        return Err(Error::InvalidParameter(format!(
            "target dimension must be >= 2, got {d}"
        )));
    }
    let n = d - 1; // polynomial degree
    let (aa, ab, ac, ad) = (a[(0, 0)], a[(0, 1)], a[(1, 0)], a[(1, 1)]);
    let weights: Vec<T::Real> = (0..=n)
        .map(|j| T::real_from_f64(binomial(n, j) as f64).sqrt())
        .collect();
    let mut out = Matrix::<T>::zeros(d, d);
    // powers of the four entries up to n
    let pow = |base: T, e: usize| -> T {
        let mut acc = T::one();
        for _ in 0..e {
            acc *= base;
        }
        acc
    };
    for j in 0..=n {
        // (a x + c y)^{n-j} (b x + d y)^j, coefficient of x^{n-i} y^i
        for i in 0..=n {
            let mut coeff = T::zero();
            let q_lo = i.saturating_sub(n - j);
            let q_hi = j.min(i);
            for q in q_lo..=q_hi {
                let p = i - q;
                let c1 = T::from_f64(binomial(n - j, p) as f64);
                let c2 = T::from_f64(binomial(j, q) as f64);
                coeff += c1 * c2 * pow(aa, n - j - p) * pow(ac, p) * pow(ab, j - q) * pow(ad, q);
            }
            out[(i, j)] = coeff.scale(weights[j] / weights[i]);
        }
    }
    Ok(out)
}

/// Applies [`sym_power_sl2`] to every generator of a 2x2 representation.
/// For even `d` the image preserves a skew form, recoverable with
/// [`crate::forms::invariant_bilinear_form`]; attaching it is the caller's
/// choice since the recovered form is basis dependent.
pub fn sym_power_rep<T: Scalar>(
    rep: &Representation<T>,
    d: usize,
    structure: Option<SymplecticStructure<T>>,
) -> Result<Representation<T>> {
    if rep.dim() != 2 {
        return Err(Error::InvalidParameter(format!(
            "symmetric power source must be 2-dimensional, got {}",
            rep.dim()
        )));
    }
    let images: Result<Vec<Matrix<T>>> = rep.images.iter().map(|m| sym_power_sl2(m, d)).collect();
    let inverses: Result<Vec<Matrix<T>>> =
        rep.inverses.iter().map(|m| sym_power_sl2(m, d)).collect();
    Representation::from_parts(rep.presentation.clone(), images?, inverses?, structure)
}

/// The induced action on the k-th exterior power. When the input carries a
/// form and `k` is odd, the induced wedge form is validated to be skew and
/// attached; for even `k` no structure is declared.
pub fn exterior_power_rep<T: Scalar>(
    rep: &Representation<T>,
    k: usize,
) -> Result<Representation<T>> {
    let d = rep.dim();
    if k == 0 || 2 * k > d {
        return Err(Error::DegreeOutOfRange { k, dim: d });
    }
    let images: Result<Vec<Matrix<T>>> = rep.images.iter().map(|m| exterior_power(m, k)).collect();
    let inverses: Result<Vec<Matrix<T>>> =
        rep.inverses.iter().map(|m| exterior_power(m, k)).collect();
    let structure = match (&rep.structure, k % 2) {
        (Some(s), 1) => {
            let induced = induced_wedge_form(s.form_matrix(), k)?;
            let norm = induced.frobenius_norm();
            let skew_defect = induced.add(&induced.transpose()).frobenius_norm() / norm;
            if skew_defect > T::real_from_f64(1e-12) {
                return Err(Error::Validation(format!(
                    "induced wedge form is not skew (defect {skew_defect})"
                )));
            }
            Some(SymplecticStructure::new(induced)?)
        }
        _ => None,
    };
    Representation::from_parts(rep.presentation.clone(), images?, inverses?, structure)
}

/// Reinterprets a real representation over the complex field; evaluation,
/// gap profiles, and form pairings are unchanged.
pub fn complexify(rep: &Representation<f64>) -> Representation<Complex64> {
    let lift = |m: &Matrix<f64>| m.map(|x| Complex64::new(x, 0.0));
    Representation {
        presentation: rep.presentation.clone(),
        dim: rep.dim,
        images: rep.images.iter().map(lift).collect(),
        inverses: rep.inverses.iter().map(lift).collect(),
        structure: rep
            .structure
            .as_ref()
            .map(|s| s.map(|x| Complex64::new(x, 0.0))),
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::words::reduce_word;

    fn word(p: &GroupPresentation, letters: &[Letter]) -> Word {
        reduce_word(p, letters).unwrap()
    }

    #[test]
    fn empty_word_is_exact_identity() {
        let rep = schottky_rep(2, 4.0, None).unwrap();
        let id = rep.evaluate(&Word::empty()).unwrap();
        assert_eq!(id.represented(), Matrix::identity(2));
        assert_eq!(id.log_scale(), 0.0);
    }

    #[test]
    fn single_generator_matches_image() {
        let rep = schottky_rep(2, 4.0, None).unwrap();
        let p = rep.presentation().clone();
        let got = rep.evaluate(&word(&p, &[1])).unwrap().represented();
        let want = &rep.generator_images()[0];
        assert!(got.sub(want).frobenius_norm() < 1e-12 * want.frobenius_norm());
    }

    #[test]
    fn first_schottky_generator_is_diagonal() {
        let rep = schottky_rep(2, 4.0, None).unwrap();
        let g1 = &rep.generator_images()[0];
        let want = Matrix::from_rows(&[vec![4.0, 0.0], vec![0.0, 0.25]]);
        assert!(g1.sub(&want).frobenius_norm() < 1e-12);
    }

    #[test]
    fn schottky_generators_share_singular_values_and_trace() {
        let lambda = 4.0;
        let rep = schottky_rep(3, lambda, None).unwrap();
        for g in rep.generator_images() {
            let prof = crate::svd::singular_values(g).unwrap();
            assert!((prof.values[0] - lambda).abs() < 1e-10);
            assert!((prof.values[1] - 1.0 / lambda).abs() < 1e-10);
            let trace = g[(0, 0)] + g[(1, 1)];
            assert!((trace - (lambda + 1.0 / lambda)).abs() < 1e-10);
        }
    }

    #[test]
    fn schottky_rejects_degenerate_parameters() {
        assert!(schottky_rep(1, 4.0, None).is_err());
        assert!(schottky_rep(2, 1.5, None).is_err());
    }

    #[test]
    fn schottky_seed_perturbs_reproducibly() {
        let a = schottky_rep(2, 4.0, Some(11)).unwrap();
        let b = schottky_rep(2, 4.0, Some(11)).unwrap();
        let c = schottky_rep(2, 4.0, Some(12)).unwrap();
        let dist_ab = a.generator_images()[1]
            .sub(&b.generator_images()[1])
            .frobenius_norm();
        let dist_ac = a.generator_images()[1]
            .sub(&c.generator_images()[1])
            .frobenius_norm();
        assert_eq!(dist_ab, 0.0);
        assert!(dist_ac > 0.0);
    }

    #[test]
    fn unreduced_words_evaluate_like_reduced() {
        let rep = schottky_rep(2, 4.0, None).unwrap();
        let p = rep.presentation().clone();
        // a b b^-1 versus a
        let w1 = rep.evaluate(&word(&p, &[1, 2, -2])).unwrap();
        let w2 = rep.evaluate(&word(&p, &[1])).unwrap();
        assert!(w1.relative_distance(&w2) < 1e-10);
    }

    #[test]
    fn evaluation_is_multiplicative_in_scaled_arithmetic() {
        let rep = schottky_rep(2, 4.0, None).unwrap();
        let p = rep.presentation().clone();
        let w1 = word(&p, &[1, 2, 1]);
        let w2 = word(&p, &[2, -1, 2]);
        let combined = rep.evaluate(&word(&p, &w1.concat(&w2))).unwrap();
        let split = rep.evaluate(&w1).unwrap().mul(&rep.evaluate(&w2).unwrap());
        assert!(combined.relative_distance(&split) < 1e-9);
    }

    #[test]
    fn long_words_do_not_overflow() {
        let rep = schottky_rep(2, 4.0, None).unwrap();
        let p = rep.presentation().clone();
        let letters: Vec<Letter> = (0..200).map(|i| if i % 2 == 0 { 1 } else { 2 }).collect();
        let out = rep.evaluate(&word(&p, &letters)).unwrap();
        assert!(out.unit().is_finite());
        assert!(out.log_scale().is_finite());
        assert!(
            out.log_scale() > 100.0,
            "products of expanding maps must grow"
        );
    }

    #[test]
    fn sym_power_identity_and_degree_two() {
        let id = Matrix::<f64>::identity(2);
        assert_eq!(sym_power_sl2(&id, 5).unwrap(), Matrix::identity(5));
        let a = Matrix::from_rows(&[vec![1.0, 2.0], vec![0.5, 2.0]]);
        assert_eq!(sym_power_sl2(&a, 2).unwrap(), a);
    }

    #[test]
    fn sym_power_diagonal_weights() {
        let lam = 3.0f64;
        let a = Matrix::from_rows(&[vec![lam, 0.0], vec![0.0, 1.0 / lam]]);
        let s = sym_power_sl2(&a, 4).unwrap();
        let expect = [lam.powi(3), lam, 1.0 / lam, lam.powi(-3)];
        for i in 0..4 {
            for j in 0..4 {
                let want = if i == j { expect[i] } else { 0.0 };
                assert!((s[(i, j)] - want).abs() < 1e-12, "entry ({i},{j})");
            }
        }
    }

    #[test]
    fn sym_power_multiplicative() {
        let a = Matrix::from_rows(&[vec![2.0, 1.0], vec![1.0, 1.0]]);
        let b = Matrix::from_rows(&[vec![1.0, -1.0], vec![0.5, 0.5]]);
        for d in [3usize, 4, 6] {
            let lhs = sym_power_sl2(&a.mul(&b), d).unwrap();
            let rhs = sym_power_sl2(&a, d)
                .unwrap()
                .mul(&sym_power_sl2(&b, d).unwrap());
            let rel = lhs.sub(&rhs).frobenius_norm() / lhs.frobenius_norm();
            assert!(rel < 1e-9, "d = {d}, rel = {rel}");
        }
    }

    #[test]
    fn sym_power_sends_rotations_to_orthogonal() {
        let t = 0.83f64;
        let r = Matrix::from_rows(&[vec![t.cos(), -t.sin()], vec![t.sin(), t.cos()]]);
        let s = sym_power_sl2(&r, 5).unwrap();
        let gram = s.transpose().mul(&s);
        assert!(gram.sub(&Matrix::identity(5)).frobenius_norm() < 1e-12);
    }

    #[test]
    fn exterior_rep_k1_is_same() {
        let rep = schottky_rep(2, 4.0, None).unwrap();
        let e1 = exterior_power_rep(&rep, 1).unwrap();
        for (a, b) in rep.generator_images().iter().zip(e1.generator_images()) {
            assert_eq!(a, b);
        }
        assert!(
            e1.structure().is_some(),
            "odd degree keeps the declared form"
        );
    }

    #[test]
    fn exterior_rep_rejects_large_degree() {
        let rep = schottky_rep(2, 4.0, None).unwrap();
        assert!(
            exterior_power_rep(&rep, 2).is_err(),
            "2k > d must be rejected"
        );
    }

    #[test]
    fn complexify_preserves_evaluation() {
        let rep = schottky_rep(2, 4.0, None).unwrap();
        let crep = complexify(&rep);
        let p = rep.presentation().clone();
        let w = word(&p, &[1, 2, -1, 2, 2]);
        let real = rep.evaluate(&w).unwrap();
        let cplx = crep.evaluate(&w).unwrap();
        assert!((real.log_scale() - cplx.log_scale()).abs() < 1e-12);
        let dir_gap = cplx
            .unit()
            .sub(&real.unit().map(|x| Complex64::new(x, 0.0)))
            .frobenius_norm();
        assert!(dir_gap < 1e-12);
        assert!(crep.structure().is_some());
    }

    #[test]
    fn validation_rejects_non_unimodular() {
        let p = GroupPresentation::free(2).unwrap();
        let bad = Matrix::from_rows(&[vec![2.0, 0.0], vec![0.0, 2.0]]);
        let good = Matrix::from_rows(&[vec![1.0, 1.0], vec![0.0, 1.0]]);
        assert!(matches!(
            Representation::new(p, vec![bad, good], None),
            Err(Error::Validation(_))
        ));
    }

    #[test]
    fn validation_rejects_form_violation() {
        let p = GroupPresentation::free(2).unwrap();
        // this matrix has det 1 but does not preserve the 4-dim standard form
        let mut m = Matrix::<f64>::identity(4);
        m[(0, 1)] = 1.0;
        m[(2, 3)] = -1.0;
        let omega = crate::symplectic::standard_symplectic::<f64>(2).unwrap();
        let id = Matrix::identity(4);
        assert!(matches!(
            Representation::new(p, vec![m, id], Some(omega)),
            Err(Error::Validation(_))
        ));
    }

    #[test]
    fn contragredient_flips_singular_spectrum() {
        let rep = schottky_rep(2, 4.0, None).unwrap();
        let dual = rep.contragredient();
        let p = rep.presentation().clone();
        let w = word(&p, &[1, 2]);
        let orig = crate::svd::singular_values(rep.evaluate(&w).unwrap().unit()).unwrap();
        let flip = crate::svd::singular_values(dual.evaluate(&w).unwrap().unit()).unwrap();
        // sigma_i(dual) proportional to 1/sigma_{d+1-i}(orig): ratios match reversed
        let r1 = orig.values[0] / orig.values[1];
        let r2 = flip.values[0] / flip.values[1];
        assert!((r1 - r2).abs() / r1 < 1e-9);
    }
}
