//! Boundary limit map approximation along rays, transversality and pairing
//! diagnostics, the section lift of a family of projective points, and
//! hyperconvexity scans over ray triples.
//!
//! A flag at a boundary ray is approximated by the dominant left singular
//! frame of the word products along the ray; the complementary flag at the
//! same point comes from the inverse word product, whose contracted right
//! frame spans the same subspace in exact arithmetic. Computing the two from
//! separate products keeps the compatibility check a genuine two-route
//! consistency test.

use num_traits::{Float, One, Zero};

use crate::error::{Error, Result};
use crate::matrix::{dot_hermitian, normalize, vec_norm, Matrix};
use crate::rep::Representation;
use crate::scalar::Scalar;
use crate::svd::{gap_ratio, max_principal_angle, svd};
use crate::symplectic::{omega_eval, standard_symplectic, SymplecticStructure};
use crate::wedge::{plucker_point, triple_wedge, WedgeBasis};
use crate::words::BoundaryRay;

/// Approximation of a k-dimensional boundary flag along a ray.
#[derive(Debug, Clone)]
pub struct FlagSample<T: Scalar> {
    pub ray: BoundaryRay,
    pub k: usize,
    /// Orthonormal d x k frame spanning the approximate flag.
    pub frame: Matrix<T>,
    pub depth_used: usize,
    /// Principal angle between the approximants at the last two depths.
    pub convergence_gap: f64,
    /// Orthonormal d x (d-k) frame for the complementary flag at the same
    /// point, from the inverse word product; `None` when k = d.
    pub dual_frame: Option<Matrix<T>>,
}

/// Follows the ray until the dominant k-frame stabilizes, then extracts the
/// complementary frame from the inverse word product at the same depth.
///
/// Convergence at depth n is declared when either the product's own
/// truncation bound `sigma_{k+1} / sigma_k` or the principal angle between
/// the depth n and n-1 frames falls below `tol`. Depths where
/// `sigma_k / sigma_1` drops under the double-precision resolution floor are
/// never used: past that point the k-th singular direction of the stored
/// product is numerical noise and deeper words only degrade the frame.
///
/// Fails fast with [`Error::GapSanityFailed`] when the first product along
/// the ray shows no singular value gap at index k, and with
/// [`Error::FlagNoConvergence`] when the depth budget or the resolution
/// floor is reached without stabilizing; the error carries the last
/// observed angle as a diagnostic.
pub fn flag_approx<T: Scalar>(
    rep: &Representation<T>,
    ray: &BoundaryRay,
    k: usize,
    max_depth: usize,
    tol: f64,
) -> Result<FlagSample<T>> {
    let d = rep.dim();
    if k == 0 || k > d {
        return Err(Error::DegreeOutOfRange { k, dim: d });
    }
    if max_depth == 0 {
        return Err(Error::InvalidParameter("max_depth must be >= 1".into()));
    }
    if k == d {
        return Ok(FlagSample {
            ray: ray.clone(),
            k,
            frame: Matrix::identity(d),
            depth_used: 1,
            convergence_gap: 0.0,
            dual_frame: None,
        });
    }
    let presentation = rep.presentation();

    // gap sanity check on the first product along the ray
    let first = rep.evaluate(&ray.word_at(presentation, 1)?)?;
    let first_gap = T::real_to_f64(gap_ratio(first.unit(), k)?);
    if first_gap <= 1.0 + 1e-12 {
        return Err(Error::GapSanityFailed {
            k,
            ratio: first_gap,
        });
    }

    const RESOLUTION_FLOOR: f64 = 1e-13;
    let mut prev_frame: Option<Matrix<T>> = None;
    let mut last_gap = f64::INFINITY;
    for depth in 1..=max_depth {
        let word = ray.word_at(presentation, depth)?;
        let product = rep.evaluate(&word)?;
        let decomp = svd(product.unit())?;
        let resolution = T::real_to_f64(decomp.values[k - 1] / decomp.values[0]);
        if (resolution.is_nan() || resolution <= RESOLUTION_FLOOR) && prev_frame.is_some() {
            break;
        }
        let frame = decomp.u.col_range(0, k);
        let truncation = T::real_to_f64(decomp.values[k] / decomp.values[k - 1]);
        let successive = match &prev_frame {
            Some(prev) => {
                let angle = T::real_to_f64(max_principal_angle(prev, &frame)?);
                last_gap = angle;
                angle
            }
            None => f64::INFINITY,
        };
        if truncation < tol || successive < tol {
            // complementary flag from the inverse word at the same depth
            let inv_product = rep.evaluate(&word.inverse())?;
            let inv_decomp = svd(inv_product.unit())?;
            let dual_frame = inv_decomp.v.col_range(k, d);
            return Ok(FlagSample {
                ray: ray.clone(),
                k,
                frame,
                depth_used: depth,
                convergence_gap: successive.min(truncation),
                dual_frame: Some(dual_frame),
            });
        }
        prev_frame = Some(frame);
    }
    Err(Error::FlagNoConvergence {
        max_depth,
        last_gap,
    })
}

/// Smallest singular value of the concatenation `[F1 | F2]` of two
/// orthonormal frames with dimensions summing to the ambient dimension;
/// positive exactly when the spans are complementary.
pub fn transversality_gap<T: Scalar>(f1: &Matrix<T>, f2: &Matrix<T>) -> Result<T::Real> {
    let d = f1.rows();
    if f2.rows() != d || f1.cols() + f2.cols() != d {
        return Err(Error::DimensionMismatch {
            context: "transversality_gap",
            detail: format!(
                "frames {}x{} and {}x{}",
                f1.rows(),
                f1.cols(),
                f2.rows(),
                f2.cols()
            ),
        });
    }
    check_orthonormal(f1, "transversality_gap")?;
    check_orthonormal(f2, "transversality_gap")?;
    min_singular_value(&Matrix::hstack(&[f1, f2])?)
}

fn min_singular_value<T: Scalar>(m: &Matrix<T>) -> Result<T::Real> {
    let s = svd(m)?;
    Ok(*s.values.last().expect("at least one singular value"))
}

fn check_orthonormal<T: Scalar>(f: &Matrix<T>, context: &'static str) -> Result<()> {
    let gram = f.conj_transpose().mul(f);
    let defect = gram.sub(&Matrix::identity(f.cols())).frobenius_norm();
    if defect > T::real_from_f64(1e-8) {
        return Err(Error::Validation(format!(
            "{context}: frame is not orthonormal (defect {defect})"
        )));
    }
    Ok(())
}

/// One entry of a pairing scan.
#[derive(Debug, Clone)]
pub struct PairEntry {
    pub i: usize,
    pub j: usize,
    /// Normalized `|omega(u_i, u_j)|`, in [0, 1].
    pub value: f64,
    pub depth_i: usize,
    pub depth_j: usize,
}

/// Pairing values of the line flags over all ray pairs.
#[derive(Debug, Clone)]
pub struct PairingReport {
    pub entries: Vec<PairEntry>,
    pub min_value: f64,
    pub argmin: (usize, usize),
    /// Rays whose flag approximation failed, with the failure text; pairs
    /// touching them are skipped.
    pub skipped_rays: Vec<(usize, String)>,
    pub skipped_pairs: usize,
    pub depth: usize,
}

/// Evaluates the normalized form pairing `|omega(u_x, u_y)| / |form|_op`
/// over every unordered pair of rays, where `u` are unit spanning vectors of
/// the approximated line flags. Values are independent of the unit-scalar
/// choice of the spanning vectors.
pub fn pairing_scan<T: Scalar>(
    rep: &Representation<T>,
    rays: &[BoundaryRay],
    depth: usize,
    tol: f64,
) -> Result<PairingReport> {
    let structure = rep.structure().ok_or(Error::MissingForm("pairing_scan"))?;
    if rays.len() < 2 {
        return Err(Error::InvalidParameter(
            "pairing scan needs at least two rays".into(),
        ));
    }
    check_pairwise_distinct(rays)?;
    let op_norm = structure.operator_norm()?;

    let mut lines: Vec<std::result::Result<FlagSample<T>, String>> = Vec::with_capacity(rays.len());
    let mut skipped_rays = Vec::new();
    for (i, ray) in rays.iter().enumerate() {
        match flag_approx(rep, ray, 1, depth, tol) {
            Ok(s) => lines.push(Ok(s)),
            Err(e) => {
                skipped_rays.push((i, e.to_string()));
                lines.push(Err(e.to_string()));
            }
        }
    }

    let mut entries = Vec::new();
    let mut skipped_pairs = 0usize;
    let mut min_value = f64::INFINITY;
    let mut argmin = (0usize, 0usize);
    for i in 0..rays.len() {
        for j in i + 1..rays.len() {
            let (Ok(si), Ok(sj)) = (&lines[i], &lines[j]) else {
                skipped_pairs += 1;
                continue;
            };
            let u = si.frame.col(0);
            let v = sj.frame.col(0);
            let pairing = omega_eval(&u, &v, structure)?.modulus();
            let value = T::real_to_f64(pairing / op_norm);
            entries.push(PairEntry {
                i,
                j,
                value,
                depth_i: si.depth_used,
                depth_j: sj.depth_used,
            });
            if value < min_value {
                min_value = value;
                argmin = (i, j);
            }
        }
    }
    if entries.is_empty() {
        return Err(Error::EmptyInput("pairing_scan (all pairs skipped)"));
    }
    Ok(PairingReport {
        entries,
        min_value,
        argmin,
        skipped_rays,
        skipped_pairs,
        depth,
    })
}

fn check_pairwise_distinct(rays: &[BoundaryRay]) -> Result<()> {
    for i in 0..rays.len() {
        for j in i + 1..rays.len() {
            if rays[i] == rays[j] {
                return Err(Error::InvalidParameter(format!(
                    "rays {i} and {j} describe the same boundary point"
                )));
            }
        }
    }
    Ok(())
}

/// Lifts projective points transverse to a hyperplane to unit vectors,
/// continuously in the input.
///
/// The hyperplane is `W = g . span(e_2, .., e_d)`, given both through an
/// orthonormal frame `w_frame` (d x (d-1)) and the change of basis `g`. A
/// point `[a g e_1 + g v]` with `v` in `span(e_2, .., e_d)` lifts to the
/// normalization of `g e_1 + a^{-1} g v`, i.e. the unit spanning vector
/// whose leading coordinate in the `g` basis is positive real.
pub fn lift_section<T: Scalar>(
    points: &[Vec<T>],
    w_frame: &Matrix<T>,
    g: &Matrix<T>,
    tol: f64,
) -> Result<Vec<Vec<T>>> {
    let d = g.rows();
    if !g.is_square() {
        return Err(Error::DimensionMismatch {
            context: "lift_section",
            detail: "change of basis must be square".into(),
        });
    }
    if w_frame.rows() != d || w_frame.cols() != d - 1 {
        return Err(Error::DimensionMismatch {
            context: "lift_section",
            detail: format!("hyperplane frame {}x{}", w_frame.rows(), w_frame.cols()),
        });
    }
    check_orthonormal(w_frame, "lift_section")?;
    // the frame must span g . <e_2, .., e_d>
    let g_tail = g.col_range(1, d).orthonormalize_columns()?;
    let frame_angle = T::real_to_f64(max_principal_angle(&g_tail, w_frame)?);
    if frame_angle > 1e-8 {
        return Err(Error::InvalidParameter(format!(
            "hyperplane frame does not span g . <e_2, .., e_d> (angle {frame_angle})"
        )));
    }
    let g_inv = g.inverse()?;
    let mut lifts = Vec::with_capacity(points.len());
    for (index, p) in points.iter().enumerate() {
        if p.len() != d {
            return Err(Error::DimensionMismatch {
                context: "lift_section",
                detail: format!("point {index} has dimension {}", p.len()),
            });
        }
        let unit_p = normalize(p)?;
        let gap = T::real_to_f64(min_singular_value(&Matrix::hstack(&[
            &Matrix::column(&unit_p),
            w_frame,
        ])?)?);
        if gap <= tol {
            return Err(Error::NonTransverse { index, gap });
        }
        let coords = g_inv.matvec(p);
        let leading = coords[0];
        if leading.modulus() <= T::real_from_f64(tol) * vec_norm(&coords) {
            return Err(Error::NonTransverse {
                index,
                gap: T::real_to_f64(leading.modulus()),
            });
        }
        let inv_leading = T::one() / leading;
        let rescaled: Vec<T> = coords.iter().map(|&c| c * inv_leading).collect();
        let lifted = normalize(&g.matvec(&rescaled))?;
        lifts.push(lifted);
    }
    Ok(lifts)
}

/// Evaluates both sides of the pairing-distance identity for unit vectors
/// under the standard structure: the form pairing `|omega(u, v)|`, and the
/// projective distance `|<u, n>|` to the form-orthogonal hyperplane of `v`,
/// whose unit Euclidean normal is the entrywise conjugate of `Omega v`.
/// The two agree to roundoff.
pub fn pairing_distance_identity<T: Scalar>(
    u: &[T],
    v: &[T],
    s: &SymplecticStructure<T>,
) -> Result<(T::Real, T::Real)> {
    if !s.is_standard() {
        return Err(Error::InvalidParameter(
            "pairing-distance identity requires the standard block form".into(),
        ));
    }
    let unit_tol = T::real_from_f64(1e-8);
    for (name, w) in [("first", u), ("second", v)] {
        if w.len() != s.dim() {
            return Err(Error::DimensionMismatch {
                context: "pairing_distance_identity",
                detail: format!("{name} vector has length {}", w.len()),
            });
        }
        if (vec_norm(w) - T::Real::one()).abs() > unit_tol {
            return Err(Error::InvalidParameter(format!(
                "{name} vector is not unit"
            )));
        }
    }
    let pairing = omega_eval(u, v, s)?.modulus();
    let normal: Vec<T> = s.form_matrix().matvec(v).iter().map(|x| x.conj()).collect();
    let dist = dot_hermitian(u, &normal).modulus();
    Ok((pairing, dist))
}

/// Principal angle between the Grassmannian coordinate point of the k-flag
/// and the line flag of the induced exterior power representation at the
/// same ray: the two routes land on the same projective point.
pub fn plucker_compatibility<T: Scalar>(
    rep: &Representation<T>,
    ray: &BoundaryRay,
    k: usize,
    max_depth: usize,
    tol: f64,
) -> Result<f64> {
    let flag = flag_approx(rep, ray, k, max_depth, tol)?;
    let basis = WedgeBasis::new(rep.dim(), k)?;
    let coords = plucker_point(&flag.frame, &basis)?;
    let wedge_rep = crate::rep::exterior_power_rep(rep, k)?;
    let wedge_flag = flag_approx(&wedge_rep, ray, 1, max_depth, tol)?;
    let line = wedge_flag.frame.col(0);
    let cosine = dot_hermitian(&coords, &line).modulus();
    let clamped = if cosine > T::Real::one() {
        T::Real::one()
    } else {
        cosine
    };
    Ok(T::real_to_f64(clamped.acos()))
}

/// One entry of a hyperconvexity scan: the triple `(x, y, w)` by ray index,
/// the smallest singular value of `[F_p(x) | F_q(y) | F_{d-r}(w)]`, and,
/// when the signed wedge applies, its value and the relative antisymmetry
/// defect under swapping x and y.
#[derive(Debug, Clone)]
pub struct TripleEntry {
    pub x: usize,
    pub y: usize,
    pub w: usize,
    pub gap: f64,
    pub h_value: Option<(f64, f64)>,
    pub swap_defect: Option<f64>,
}

#[derive(Debug, Clone)]
pub struct HyperconvexReport {
    pub p: usize,
    pub q: usize,
    pub r: usize,
    pub entries: Vec<TripleEntry>,
    pub min_gap: f64,
    pub argmin: (usize, usize, usize),
    /// Worst relative antisymmetry defect across triples, when evaluated.
    pub max_swap_defect: Option<f64>,
    pub skipped_rays: Vec<(usize, String)>,
    pub skipped_triples: usize,
}

/// Scans index-ordered triples (x < y < w) of distinct rays and measures the
/// transversality of `F_p(x) + F_q(y) + F_{d-r}(w)` through the smallest
/// singular value of the concatenated frames.
///
/// When `p = q`, `r = 2p`, and `p` is odd, the signed wedge
/// `f_p(x) ^ f_p(y) ^ V_0(w)` is evaluated as well (with `f_p` the
/// Grassmannian coordinates of the flags and `V_0` those of the `d - 2p`
/// flag at `w`) and checked to flip sign under swapping x and y.
pub fn hyperconvexity_scan<T: Scalar>(
    rep: &Representation<T>,
    p: usize,
    q: usize,
    r: usize,
    rays: &[BoundaryRay],
    depth: usize,
    tol: f64,
) -> Result<HyperconvexReport> {
    let d = rep.dim();
    if p == 0 || q == 0 || p + q > r || r > d {
        return Err(Error::InvalidParameter(format!(
            "hyperconvexity degrees must satisfy 1 <= p, q and p + q <= r <= d, got ({p}, {q}, {r}) with d = {d}"
        )));
    }
    if rays.len() < 3 {
        return Err(Error::InvalidParameter(
            "hyperconvexity scan needs at least three rays".into(),
        ));
    }
    check_pairwise_distinct(rays)?;
    let signed_wedge = p == q && r == 2 * p && p % 2 == 1 && d > 2 * p;

    // one flag of each required degree per ray
    let mut degrees = vec![p];
    if !degrees.contains(&q) {
        degrees.push(q);
    }
    let deg_w = d - r;
    if deg_w > 0 && !degrees.contains(&deg_w) {
        degrees.push(deg_w);
    }
    let mut flags: Vec<Vec<Option<Matrix<T>>>> = vec![Vec::new(); rays.len()];
    let mut skipped_rays: Vec<(usize, String)> = Vec::new();
    for (i, ray) in rays.iter().enumerate() {
        let mut per_degree = vec![None; degrees.len()];
        let mut failure: Option<String> = None;
        for (slot, &deg) in degrees.iter().enumerate() {
            match flag_approx(rep, ray, deg, depth, tol) {
                Ok(s) => per_degree[slot] = Some(s.frame),
                Err(e) => {
                    failure = Some(e.to_string());
                    break;
                }
            }
        }
        if let Some(msg) = failure {
            skipped_rays.push((i, msg));
            flags[i] = vec![None; degrees.len()];
        } else {
            flags[i] = per_degree;
        }
    }
    let slot_of = |deg: usize| degrees.iter().position(|&x| x == deg).unwrap();

    // Grassmannian coordinates for the signed wedge, fixed once per ray so
    // the swap comparison uses consistent lift phases.
    let mut wedge_coords_p: Vec<Option<Vec<T>>> = vec![None; rays.len()];
    let mut wedge_coords_w: Vec<Option<Vec<T>>> = vec![None; rays.len()];
    if signed_wedge {
        let basis_p = WedgeBasis::new(d, p)?;
        let basis_w = WedgeBasis::new(d, d - 2 * p)?;
        for i in 0..rays.len() {
            if let Some(f) = &flags[i][slot_of(p)] {
                wedge_coords_p[i] = Some(plucker_point(f, &basis_p)?);
            }
            if let Some(f) = &flags[i][slot_of(d - r)] {
                wedge_coords_w[i] = Some(plucker_point(f, &basis_w)?);
            }
        }
    }

    let mut entries = Vec::new();
    let mut skipped_triples = 0usize;
    let mut min_gap = f64::INFINITY;
    let mut argmin = (0usize, 0usize, 0usize);
    let mut max_swap_defect: Option<f64> = None;
    for x in 0..rays.len() {
        for y in x + 1..rays.len() {
            for w in y + 1..rays.len() {
                let fx = flags[x][slot_of(p)].as_ref();
                let fy = flags[y][slot_of(q)].as_ref();
                let fw = if deg_w > 0 {
                    flags[w][slot_of(deg_w)].as_ref()
                } else {
                    None
                };
                let (Some(fx), Some(fy)) = (fx, fy) else {
                    skipped_triples += 1;
                    continue;
                };
                if deg_w > 0 && fw.is_none() {
                    skipped_triples += 1;
                    continue;
                }
                let concat = match fw {
                    Some(fw) => Matrix::hstack(&[fx, fy, fw])?,
                    None => Matrix::hstack(&[fx, fy])?,
                };
                let gap = T::real_to_f64(min_singular_value(&concat)?);
                let mut h_value = None;
                let mut swap_defect = None;
                if signed_wedge {
                    if let (Some(cx), Some(cy), Some(cw)) =
                        (&wedge_coords_p[x], &wedge_coords_p[y], &wedge_coords_w[w])
                    {
                        let h_xy = triple_wedge(cx, p, cy, p, cw, d - 2 * p, d)?;
                        let h_yx = triple_wedge(cy, p, cx, p, cw, d - 2 * p, d)?;
                        let scale = h_xy.modulus().max(h_yx.modulus());
                        let defect = if scale > T::Real::zero() {
                            T::real_to_f64((h_xy + h_yx).modulus() / scale)
                        } else {
                            0.0
                        };
                        h_value = Some((T::real_to_f64(h_xy.re()), T::real_to_f64(h_xy.im())));
                        swap_defect = Some(defect);
                        max_swap_defect =
                            Some(max_swap_defect.map_or(defect, |m: f64| m.max(defect)));
                    }
                }
                if gap < min_gap {
                    min_gap = gap;
                    argmin = (x, y, w);
                }
                entries.push(TripleEntry {
                    x,
                    y,
                    w,
                    gap,
                    h_value,
                    swap_defect,
                });
            }
        }
    }
    if entries.is_empty() {
        return Err(Error::EmptyInput(
            "hyperconvexity_scan (all triples skipped)",
        ));
    }
    Ok(HyperconvexReport {
        p,
        q,
        r,
        entries,
        min_gap,
        argmin,
        max_swap_defect,
        skipped_rays,
        skipped_triples,
    })
}

/// Convenience: the transverse pairing of two unit lines under the standard
/// structure at matched basis points is exactly 1.
pub fn standard_basis_pairing<T: Scalar>(m: usize) -> Result<T::Real> {
    let s = standard_symplectic::<T>(m)?;
    let d = 2 * m;
    let mut e1 = vec![T::zero(); d];
    e1[0] = T::one();
    let mut em1 = vec![T::zero(); d];
    em1[m] = T::one();
    Ok(omega_eval(&e1, &em1, &s)?.modulus())
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::rep::{complexify, schottky_rep, sym_power_rep};
    use crate::words::{sample_boundary, GroupPresentation};

    fn pipeline_sp4() -> Representation<f64> {
        let base = schottky_rep(2, 4.0, None).unwrap();
        let sym = sym_power_rep(&base, 4, None).unwrap();
        let form = crate::forms::invariant_bilinear_form(sym.generator_images(), 1e-8)
            .unwrap()
            .expect("even symmetric power preserves a skew form");
        // antisymmetrize away the recovery roundoff before declaring the form
        let skew = form.matrix.sub(&form.matrix.transpose()).scale(0.5);
        let skew = skew.scale(1.0 / skew.frobenius_norm());
        let structure = SymplecticStructure::new(skew).unwrap();
        sym_power_rep(&base, 4, Some(structure)).unwrap()
    }

    #[test]
    fn flag_of_diagonal_ray_is_first_axis() {
        let rep = schottky_rep(2, 4.0, None).unwrap();
        let p = rep.presentation().clone();
        let ray = BoundaryRay::periodic(&p, &[1], 1).unwrap();
        let flag = flag_approx(&rep, &ray, 1, 10, 1e-10).unwrap();
        // generator one is diag(4, 1/4): dominant direction e_1
        let e1_angle = (flag.frame[(0, 0)].abs()).min(1.0).acos();
        assert!(e1_angle < 1e-8, "angle {e1_angle}");
        assert!(flag.convergence_gap < 1e-10);
        // compatibility: the line lies inside the complementary dual frame span
        let dual = flag.dual_frame.as_ref().unwrap();
        let angle = max_principal_angle(&flag.frame, dual).unwrap();
        assert!(angle < 1e-6, "containment angle {angle}");
    }

    #[test]
    fn flag_full_space_is_trivial() {
        let rep = schottky_rep(2, 4.0, None).unwrap();
        let p = rep.presentation().clone();
        let ray = BoundaryRay::periodic(&p, &[1], 1).unwrap();
        let flag = flag_approx(&rep, &ray, 2, 5, 1e-9).unwrap();
        assert_eq!(flag.frame.cols(), 2);
        assert_eq!(flag.convergence_gap, 0.0);
    }

    #[test]
    fn flag_fails_on_gapless_representation() {
        let p = GroupPresentation::free(2).unwrap();
        let rot = |t: f64| Matrix::from_rows(&[vec![t.cos(), -t.sin()], vec![t.sin(), t.cos()]]);
        let rep = Representation::new(p.clone(), vec![rot(0.7), rot(1.9)], None).unwrap();
        let ray = BoundaryRay::periodic(&p, &[1], 1).unwrap();
        assert!(matches!(
            flag_approx(&rep, &ray, 1, 8, 1e-9),
            Err(Error::GapSanityFailed { .. })
        ));
    }

    #[test]
    fn flag_equivariance_under_prefix_shift() {
        let rep = pipeline_sp4();
        let p = rep.presentation().clone();
        let ray = BoundaryRay::periodic(&p, &[1], 1).unwrap();
        let shifted = BoundaryRay::new(&p, &[2], &[1], 1).unwrap();
        let base = flag_approx(&rep, &ray, 1, 24, 1e-11).unwrap();
        let moved = flag_approx(&rep, &shifted, 1, 24, 1e-11).unwrap();
        // frame at b.a^inf equals rho(b) applied to the frame at a^inf
        let image = rep.generator_images()[1]
            .mul(&base.frame)
            .orthonormalize_columns()
            .unwrap();
        let angle = max_principal_angle(&image, &moved.frame).unwrap();
        assert!(angle < 1e-6, "equivariance angle {angle}");
    }

    #[test]
    fn transversality_gap_examples() {
        let d = 4;
        let e1 = Matrix::<f64>::identity(d).col_range(0, 1);
        let rest = Matrix::<f64>::identity(d).col_range(1, d);
        let gap = transversality_gap(&e1, &rest).unwrap();
        assert!((gap - 1.0).abs() < 1e-12);

        // overlapping spans: [e1] against span(e1, e3, e4)
        let mut overlap = Matrix::<f64>::zeros(d, d - 1);
        overlap[(0, 0)] = 1.0;
        overlap[(2, 1)] = 1.0;
        overlap[(3, 2)] = 1.0;
        let gap = transversality_gap(&e1, &overlap).unwrap();
        assert!(gap.abs() < 1e-12);
    }

    #[test]
    fn transversality_gap_tilted_line() {
        // [cos t e1 + sin t e2] against span(e2, .., e_d): gap = sqrt(1 - sin t)
        let d = 4;
        let t = std::f64::consts::FRAC_PI_4;
        let mut line = Matrix::<f64>::zeros(d, 1);
        line[(0, 0)] = t.cos();
        line[(1, 0)] = t.sin();
        let rest = Matrix::<f64>::identity(d).col_range(1, d);
        let gap = transversality_gap(&line, &rest).unwrap();
        assert!((gap - (1.0 - t.sin()).sqrt()).abs() < 1e-12);
    }

    #[test]
    fn transversality_rejects_bad_shapes() {
        let e1 = Matrix::<f64>::identity(3).col_range(0, 1);
        let small = Matrix::<f64>::identity(3).col_range(1, 2);
        assert!(transversality_gap(&e1, &small).is_err());
    }

    #[test]
    fn pairing_scan_positive_on_pipeline() {
        let rep = pipeline_sp4();
        let p = rep.presentation().clone();
        let rays = sample_boundary(&p, 8, 5, 3).unwrap();
        let report = pairing_scan(&rep, &rays, 20, 1e-9).unwrap();
        assert_eq!(report.entries.len(), 8 * 7 / 2);
        assert!(report.skipped_rays.is_empty());
        assert!(
            report.min_value > 0.0,
            "minimum pairing {}",
            report.min_value
        );
        for e in &report.entries {
            assert!((0.0..=1.0 + 1e-12).contains(&e.value));
        }
    }

    #[test]
    fn pairing_scan_requires_form() {
        let base = schottky_rep(2, 4.0, None).unwrap();
        let sym = sym_power_rep(&base, 4, None).unwrap();
        let p = sym.presentation().clone();
        let rays = sample_boundary(&p, 3, 4, 1).unwrap();
        assert!(matches!(
            pairing_scan(&sym, &rays, 10, 1e-9),
            Err(Error::MissingForm(_))
        ));
    }

    #[test]
    fn pairing_scan_rejects_duplicate_rays() {
        let rep = pipeline_sp4();
        let p = rep.presentation().clone();
        let ray = BoundaryRay::periodic(&p, &[1], 1).unwrap();
        assert!(pairing_scan(&rep, &[ray.clone(), ray], 10, 1e-9).is_err());
    }

    #[test]
    fn lift_section_fixture() {
        // identity basis: [2 e1 + e2] lifts to (e1 + 0.5 e2) normalized
        let d = 3;
        let g = Matrix::<f64>::identity(d);
        let w = g.col_range(1, d);
        let mut point = vec![0.0; d];
        point[0] = 2.0;
        point[1] = 1.0;
        let lifts = lift_section(&[point], &w, &g, 1e-9).unwrap();
        let expect = normalize(&[1.0, 0.5, 0.0]).unwrap();
        for (a, b) in lifts[0].iter().zip(&expect) {
            assert!((a - b).abs() < 1e-14);
        }
        // [e1] lifts to e1 itself
        let lifts = lift_section(&[vec![1.0, 0.0, 0.0]], &w, &g, 1e-9).unwrap();
        assert!((lifts[0][0] - 1.0).abs() < 1e-14);
    }

    #[test]
    fn lift_section_rejects_hyperplane_points() {
        let d = 3;
        let g = Matrix::<f64>::identity(d);
        let w = g.col_range(1, d);
        let result = lift_section(&[vec![0.0, 1.0, 0.0]], &w, &g, 1e-9);
        assert!(matches!(result, Err(Error::NonTransverse { index: 0, .. })));
    }

    #[test]
    fn lift_section_is_continuous_along_paths() {
        // rotate a line through transverse positions; adjacent lifts stay aligned
        let d = 3;
        let g = Matrix::<f64>::identity(d);
        let w = g.col_range(1, d);
        let points: Vec<Vec<f64>> = (0..100)
            .map(|i| {
                let t = -1.0 + 2.0 * (i as f64) / 99.0;
                vec![t.cos(), 0.8 * t.sin(), 0.2 * t.sin()]
            })
            .collect();
        let lifts = lift_section(&points, &w, &g, 1e-9).unwrap();
        for pair in lifts.windows(2) {
            let dot: f64 = dot_hermitian(&pair[0], &pair[1]);
            assert!(dot > 0.9, "adjacent lift alignment {dot}");
        }
        // and each lift spans its input line
        for (p, l) in points.iter().zip(&lifts) {
            let pu = normalize(p).unwrap();
            let cross = dot_hermitian(&pu, l).abs();
            assert!((cross - 1.0).abs() < 1e-12);
        }
    }

    #[test]
    fn pairing_distance_identity_basis_case() {
        for m in [1usize, 2, 3] {
            let s = standard_symplectic::<f64>(m).unwrap();
            let d = 2 * m;
            let mut u = vec![0.0; d];
            u[0] = 1.0;
            let mut v = vec![0.0; d];
            v[m] = 1.0;
            let (pairing, dist) = pairing_distance_identity(&u, &v, &s).unwrap();
            assert_eq!(pairing, 1.0);
            assert_eq!(dist, 1.0);
            let (self_pair, self_dist) = pairing_distance_identity(&u, &u, &s).unwrap();
            assert_eq!(self_pair, 0.0);
            assert_eq!(self_dist, 0.0);
        }
    }

    #[test]
    fn pairing_distance_identity_rejects_non_unit() {
        let s = standard_symplectic::<f64>(1).unwrap();
        assert!(pairing_distance_identity(&[2.0, 0.0], &[1.0, 0.0], &s).is_err());
    }

    #[test]
    fn plucker_compatibility_diagonal_and_pipeline() {
        let rep = pipeline_sp4();
        let p = rep.presentation().clone();
        let ray = BoundaryRay::periodic(&p, &[1], 1).unwrap();
        let angle = plucker_compatibility(&rep, &ray, 2, 16, 1e-7).unwrap();
        assert!(angle < 1e-6, "angle {angle}");
        // k = 1 is the identity comparison
        let angle1 = plucker_compatibility(&rep, &ray, 1, 16, 1e-10).unwrap();
        assert!(angle1 < 1e-10, "angle {angle1}");
    }

    #[test]
    fn hyperconvexity_scan_on_pipeline() {
        let rep = pipeline_sp4();
        let p = rep.presentation().clone();
        let rays = sample_boundary(&p, 5, 4, 5).unwrap();
        let report = hyperconvexity_scan(&rep, 1, 1, 2, &rays, 20, 1e-4).unwrap();
        assert_eq!(report.entries.len(), 10); // C(5, 3)
        assert!(report.min_gap > 0.0, "min gap {}", report.min_gap);
        let defect = report
            .max_swap_defect
            .expect("signed wedge applies for (1,1,2)");
        assert!(defect < 1e-10, "swap defect {defect}");
    }

    #[test]
    fn hyperconvexity_rejects_bad_degrees() {
        let rep = pipeline_sp4();
        let p = rep.presentation().clone();
        let rays = sample_boundary(&p, 3, 4, 5).unwrap();
        assert!(hyperconvexity_scan(&rep, 2, 2, 3, &rays, 10, 1e-9).is_err());
        assert!(hyperconvexity_scan(&rep, 1, 1, 9, &rays, 10, 1e-9).is_err());
    }

    #[test]
    fn complexified_pairing_values_match() {
        let rep = pipeline_sp4();
        let crep = complexify(&rep);
        let p = rep.presentation().clone();
        let rays = sample_boundary(&p, 6, 5, 3).unwrap();
        let real_report = pairing_scan(&rep, &rays, 20, 1e-9).unwrap();
        let cplx_report = pairing_scan(&crep, &rays, 20, 1e-9).unwrap();
        for (a, b) in real_report.entries.iter().zip(&cplx_report.entries) {
            assert!((a.value - b.value).abs() < 1e-12, "pair ({}, {})", a.i, a.j);
        }
    }
}
