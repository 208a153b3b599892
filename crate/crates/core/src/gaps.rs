//! Empirical certification of uniform singular value gaps over word balls:
//! per-length gap statistics, exponential growth fitting, and a verdict with
//! explicit thresholds.
//!
//! The certificate is finite-ball evidence, never a proof: it reports the
//! fitted growth rate of the per-length minimum gap ratio together with the
//! policy thresholds that produced the verdict.

use crate::error::{Error, Result};
use crate::rep::Representation;
use crate::scalar::Scalar;
use crate::svd::gap_ratio;
use crate::words::{enumerate_sphere, GroupKind, Word, DEFAULT_SPHERE_CAP};

/// Gap ratio statistics over one sphere of the word metric.
#[derive(Debug, Clone, PartialEq)]
pub struct LengthStats {
    pub length: usize,
    pub count: usize,
    pub min_ratio: f64,
    pub geo_mean_ratio: f64,
    pub max_ratio: f64,
}

/// Per-length gap statistics over the spheres `1..=radius`.
#[derive(Debug, Clone)]
pub struct GapProfile {
    pub k: usize,
    pub radius: usize,
    pub per_length: Vec<LengthStats>,
}

impl GapProfile {
    pub fn min_observed_ratio(&self) -> f64 {
        self.per_length
            .iter()
            .map(|s| s.min_ratio)
            .fold(f64::INFINITY, f64::min)
    }

    /// True when the per-length minima are non-decreasing from `from_length` on.
    pub fn minima_non_decreasing(&self, from_length: usize) -> bool {
        let mins: Vec<f64> = self
            .per_length
            .iter()
            .filter(|s| s.length >= from_length)
            .map(|s| s.min_ratio)
            .collect();
        mins.windows(2).all(|ab| ab[0] <= ab[1])
    }
}

/// Least-squares exponential growth fit of the per-length minima.
#[derive(Debug, Clone, Copy)]
pub struct GrowthFit {
    /// Fitted rate per unit word length (slope of log minima).
    pub mu_hat: f64,
    /// Fitted log intercept.
    pub log_c_hat: f64,
    /// Coefficient of determination of the log-linear fit.
    pub fit_quality: f64,
}

/// Certification policy.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct GapThresholds {
    /// Minimal acceptable fitted rate.
    pub mu_min: f64,
    /// Minimal ball radius for any verdict stronger than inconclusive.
    pub min_radius: usize,
    /// Lengths below this are ignored by the fit and the monotonicity rule.
    pub burn_in: usize,
    /// Sphere size guard.
    pub sphere_cap: usize,
}

impl Default for GapThresholds {
    fn default() -> Self {
        GapThresholds {
            mu_min: 0.05,
            min_radius: 4,
            burn_in: 2,
            sphere_cap: DEFAULT_SPHERE_CAP,
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Verdict {
    Pass,
    Fail,
    Inconclusive,
}

impl std::fmt::Display for Verdict {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        let s = match self {
            Verdict::Pass => "pass",
            Verdict::Fail => "fail",
            Verdict::Inconclusive => "inconclusive",
        };
        f.write_str(s)
    }
}

/// Result of a certification run. `scope_note` records that the verdict is
/// finite-ball evidence, and `word_universe` documents the word set the
/// statistics ran over.
#[derive(Debug, Clone)]
pub struct GapCertificate {
    pub k: usize,
    pub radius: usize,
    pub mu_hat: f64,
    pub log_c_hat: f64,
    pub fit_quality: f64,
    pub min_observed_ratio: f64,
    pub minima_monotone: bool,
    pub verdict: Verdict,
    pub thresholds: GapThresholds,
    pub profile: GapProfile,
    pub word_universe: &'static str,
    pub scope_note: &'static str,
}

fn stats_for_words<T: Scalar>(
    rep: &Representation<T>,
    words: &[Word],
    k: usize,
    length: usize,
) -> Result<LengthStats> {
    let mut min_ratio = f64::INFINITY;
    let mut max_ratio = 0.0f64;
    let mut log_sum = 0.0f64;
    for w in words {
        let m = rep.evaluate(w)?;
        let ratio = T::real_to_f64(gap_ratio(m.unit(), k)?);
        min_ratio = min_ratio.min(ratio);
        max_ratio = max_ratio.max(ratio);
        log_sum += ratio.ln();
    }
    let count = words.len();
    // the exponential of the mean log is in [min, max] up to roundoff
    let geo_mean_ratio = (log_sum / count as f64).exp().clamp(min_ratio, max_ratio);
    Ok(LengthStats {
        length,
        count,
        min_ratio,
        geo_mean_ratio,
        max_ratio,
    })
}

/// Number of worker threads, from the `ANOSOV_THREADS` environment variable
/// (default 1).
pub fn configured_threads() -> usize {
    std::env::var("ANOSOV_THREADS")
        .ok()
        .and_then(|v| v.parse::<usize>().ok())
        .filter(|&n| n >= 1)
        .unwrap_or(1)
}

/// Exhaustive gap ratio statistics over the spheres `1..=radius`.
///
/// Words are partitioned by first letter and the per-partition statistics
/// merged in a fixed order, so the result does not depend on the worker
/// thread count.
///
/// Any gap index `1 <= k < d` is admitted here: indices past `d/2` arise
/// through the duality between a profile at `k` and the inverse-transpose
/// profile at `d - k`. The certification entry point restricts to the
/// conventional range `k <= d/2`.
pub fn gap_profile<T: Scalar>(
    rep: &Representation<T>,
    k: usize,
    radius: usize,
    cap: usize,
) -> Result<GapProfile> {
    let d = rep.dim();
    if k == 0 || k >= d {
        return Err(Error::DegreeOutOfRange { k, dim: d });
    }
    if radius == 0 {
        return Err(Error::InvalidParameter("ball radius must be >= 1".into()));
    }
    let threads = configured_threads();
    let mut per_length = Vec::with_capacity(radius);
    for length in 1..=radius {
        let words = enumerate_sphere(rep.presentation(), length, cap)?;
        // fixed partition by leading letter regardless of thread count
        let gen_count = rep.presentation().generator_count();
        let mut buckets: Vec<Vec<Word>> = vec![Vec::new(); 2 * gen_count];
        for w in words {
            let lead = w.letters()[0];
            let slot = if lead > 0 {
                (lead as usize - 1) * 2
            } else {
                ((-lead) as usize - 1) * 2 + 1
            };
            buckets[slot].push(w);
        }
        let partials: Vec<Result<Option<LengthStats>>> = if threads <= 1 {
            buckets
                .iter()
                .map(|b| {
                    if b.is_empty() {
                        Ok(None)
                    } else {
                        stats_for_words(rep, b, k, length).map(Some)
                    }
                })
                .collect()
        } else {
            std::thread::scope(|scope| {
                let handles: Vec<_> = buckets
                    .iter()
                    .map(|b| {
                        scope.spawn(move || {
                            if b.is_empty() {
                                Ok(None)
                            } else {
                                stats_for_words(rep, b, k, length).map(Some)
                            }
                        })
                    })
                    .collect();
                handles
                    .into_iter()
                    .map(|h| h.join().expect("worker panicked"))
                    .collect()
            })
        };
        // associative merge in bucket order: (min, max, sum of logs, count)
        let mut min_ratio = f64::INFINITY;
        let mut max_ratio = 0.0f64;
        let mut log_sum = 0.0f64;
        let mut count = 0usize;
        for p in partials {
            if let Some(s) = p? {
                min_ratio = min_ratio.min(s.min_ratio);
                max_ratio = max_ratio.max(s.max_ratio);
                log_sum += s.geo_mean_ratio.ln() * s.count as f64;
                count += s.count;
            }
        }
        if count == 0 {
            return Err(Error::EmptyInput("gap_profile sphere"));
        }
        per_length.push(LengthStats {
            length,
            count,
            min_ratio,
            geo_mean_ratio: (log_sum / count as f64).exp().clamp(min_ratio, max_ratio),
            max_ratio,
        });
    }
    Ok(GapProfile {
        k,
        radius,
        per_length,
    })
}

/// Ordinary least squares of `log(min ratio at length)` against length over
/// `length >= burn_in`; the slope estimates the exponential rate.
pub fn fit_gap_growth(profile: &GapProfile, burn_in: usize) -> Result<GrowthFit> {
    let points: Vec<(f64, f64)> = profile
        .per_length
        .iter()
        .filter(|s| s.length >= burn_in)
        .map(|s| (s.length as f64, s.min_ratio.ln()))
        .collect();
    if points.len() < 3 {
        return Err(Error::InsufficientData {
            have: points.len(),
            need: 3,
        });
    }
    if points.iter().any(|(_, y)| !y.is_finite()) {
        return Err(Error::NonFinite);
    }
    let n = points.len() as f64;
    let sx: f64 = points.iter().map(|(x, _)| x).sum();
    let sy: f64 = points.iter().map(|(_, y)| y).sum();
    let sxx: f64 = points.iter().map(|(x, _)| x * x).sum();
    let sxy: f64 = points.iter().map(|(x, y)| x * y).sum();
    let denom = n * sxx - sx * sx;
    let slope = (n * sxy - sx * sy) / denom;
    let intercept = (sy - slope * sx) / n;
    let mean_y = sy / n;
    let ss_tot: f64 = points.iter().map(|(_, y)| (y - mean_y).powi(2)).sum();
    let ss_res: f64 = points
        .iter()
        .map(|(x, y)| (y - slope * x - intercept).powi(2))
        .sum();
    let fit_quality = if ss_tot <= f64::EPSILON * n {
        1.0
    } else {
        1.0 - ss_res / ss_tot
    };
    Ok(GrowthFit {
        mu_hat: slope,
        log_c_hat: intercept,
        fit_quality,
    })
}

/// Runs the profile, fits the growth rate, and applies the verdict policy:
///
/// * pass: fitted rate at least `mu_min`, per-length minima non-decreasing
///   past the burn-in, and every observed ratio above 1;
/// * fail: no growth at all (non-positive rate or a ratio at 1 or below);
/// * inconclusive: positive but sub-threshold evidence, non-monotone minima,
///   or a ball radius below the configured minimum.
pub fn certify<T: Scalar>(
    rep: &Representation<T>,
    k: usize,
    radius: usize,
    thresholds: &GapThresholds,
) -> Result<GapCertificate> {
    let d = rep.dim();
    if k == 0 || 2 * k > d {
        return Err(Error::DegreeOutOfRange { k, dim: d });
    }
    let profile = gap_profile(rep, k, radius, thresholds.sphere_cap)?;
    let word_universe = match rep.presentation().kind() {
        GroupKind::Free { .. } => "all freely reduced words (exact spheres)",
        GroupKind::Surface { .. } => {
            "Dehn-reduced representatives (group elements may repeat; minima only tighten)"
        }
    };
    let scope_note =
        "finite word-ball evidence at the stated radius; not a proof of the gap property";

    let min_observed_ratio = profile.min_observed_ratio();
    let minima_monotone = profile.minima_non_decreasing(thresholds.burn_in);

    if radius < thresholds.min_radius {
        return Ok(GapCertificate {
            k,
            radius,
            mu_hat: 0.0,
            log_c_hat: 0.0,
            fit_quality: 0.0,
            min_observed_ratio,
            minima_monotone,
            verdict: Verdict::Inconclusive,
            thresholds: *thresholds,
            profile,
            word_universe,
            scope_note,
        });
    }

    let fit = fit_gap_growth(&profile, thresholds.burn_in)?;
    let verdict = if fit.mu_hat >= thresholds.mu_min && minima_monotone && min_observed_ratio > 1.0
    {
        Verdict::Pass
    } else if fit.mu_hat <= 0.0 || min_observed_ratio <= 1.0 {
        Verdict::Fail
    } else {
        Verdict::Inconclusive
    };
    Ok(GapCertificate {
        k,
        radius,
        mu_hat: fit.mu_hat,
        log_c_hat: fit.log_c_hat,
        fit_quality: fit.fit_quality,
        min_observed_ratio,
        minima_monotone,
        verdict,
        thresholds: *thresholds,
        profile,
        word_universe,
        scope_note,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::matrix::Matrix;
    use crate::rep::{schottky_rep, sym_power_rep};
    use crate::words::GroupPresentation;

    fn synthetic_profile(mins: &[f64]) -> GapProfile {
        GapProfile {
            k: 1,
            radius: mins.len(),
            per_length: mins
                .iter()
                .enumerate()
                .map(|(i, &m)| LengthStats {
                    length: i + 1,
                    count: 1,
                    min_ratio: m,
                    geo_mean_ratio: m,
                    max_ratio: m,
                })
                .collect(),
        }
    }

    #[test]
    fn fit_exact_exponential() {
        let mins: Vec<f64> = (1..=6).map(|l| (2.0 * l as f64).exp()).collect();
        let fit = fit_gap_growth(&synthetic_profile(&mins), 2).unwrap();
        assert!((fit.mu_hat - 2.0).abs() < 1e-10);
        assert!((fit.fit_quality - 1.0).abs() < 1e-10);
        assert!(fit.log_c_hat.abs() < 1e-9);
    }

    #[test]
    fn fit_constant_profile() {
        let mins = vec![1.0; 6];
        let fit = fit_gap_growth(&synthetic_profile(&mins), 2).unwrap();
        assert_eq!(fit.mu_hat, 0.0);
        assert_eq!(fit.fit_quality, 1.0);
    }

    #[test]
    fn fit_needs_three_points() {
        let mins = vec![1.0, 2.0, 3.0, 4.0];
        assert!(matches!(
            fit_gap_growth(&synthetic_profile(&mins), 3),
            Err(Error::InsufficientData { .. })
        ));
    }

    #[test]
    fn profile_counts_match_sphere_formula() {
        let rep = schottky_rep(2, 4.0, None).unwrap();
        let profile = gap_profile(&rep, 1, 4, DEFAULT_SPHERE_CAP).unwrap();
        let counts: Vec<usize> = profile.per_length.iter().map(|s| s.count).collect();
        assert_eq!(counts, vec![4, 12, 36, 108]);
        for s in &profile.per_length {
            assert!(s.min_ratio <= s.geo_mean_ratio && s.geo_mean_ratio <= s.max_ratio);
        }
    }

    #[test]
    fn schottky_certifies_at_radius_five() {
        let rep = schottky_rep(2, 4.0, None).unwrap();
        let cert = certify(&rep, 1, 5, &GapThresholds::default()).unwrap();
        assert_eq!(cert.verdict, Verdict::Pass);
        assert!(cert.mu_hat > 1.0, "expansion rate was {}", cert.mu_hat);
        assert!(cert.min_observed_ratio > 1.0);
    }

    #[test]
    fn rotation_representation_fails() {
        let p = GroupPresentation::free(2).unwrap();
        let rot = |t: f64| Matrix::from_rows(&[vec![t.cos(), -t.sin()], vec![t.sin(), t.cos()]]);
        let rep = Representation::new(p, vec![rot(0.7), rot(1.9)], None).unwrap();
        let cert = certify(&rep, 1, 4, &GapThresholds::default()).unwrap();
        assert_eq!(cert.verdict, Verdict::Fail);
        assert!((cert.min_observed_ratio - 1.0).abs() < 1e-9);
    }

    #[test]
    fn small_radius_is_inconclusive_by_policy() {
        let rep = schottky_rep(2, 4.0, None).unwrap();
        let cert = certify(&rep, 1, 2, &GapThresholds::default()).unwrap();
        assert_eq!(cert.verdict, Verdict::Inconclusive);
    }

    #[test]
    fn certificate_is_invariant_under_unitary_conjugation() {
        let rep = schottky_rep(2, 4.0, None).unwrap();
        let sym = sym_power_rep(&rep, 3, None).unwrap();
        let t = 0.6f64;
        let (s, c) = t.sin_cos();
        // a rotation in the plane of the first two coordinates of K^3
        let u = Matrix::from_rows(&[vec![c, -s, 0.0], vec![s, c, 0.0], vec![0.0, 0.0, 1.0]]);
        let u_inv = u.transpose();
        let conj_images: Vec<Matrix<f64>> = sym
            .generator_images()
            .iter()
            .map(|m| u.mul(m).mul(&u_inv))
            .collect();
        let conj = Representation::new(sym.presentation().clone(), conj_images, None).unwrap();
        let a = certify(&sym, 1, 4, &GapThresholds::default()).unwrap();
        let b = certify(&conj, 1, 4, &GapThresholds::default()).unwrap();
        assert_eq!(a.verdict, b.verdict);
        assert!((a.mu_hat - b.mu_hat).abs() < 1e-8);
        assert!((a.min_observed_ratio - b.min_observed_ratio).abs() < 1e-8);
    }

    #[test]
    fn surface_group_profile_runs_on_dehn_reduced_words() {
        // commuting images kill the commutator relator exactly; the profile
        // runs over Dehn-reduced representatives and the zero-exponent words
        // force a failing verdict
        let p = GroupPresentation::surface(2).unwrap();
        let d = Matrix::from_rows(&[vec![2.0, 0.0], vec![0.0, 0.5]]);
        let powers: Vec<Matrix<f64>> = (1..=4)
            .map(|e| {
                let mut m = Matrix::<f64>::identity(2);
                for _ in 0..e {
                    m = m.mul(&d);
                }
                m
            })
            .collect();
        let rep = Representation::new(p, powers, None).unwrap();
        let cert = certify(&rep, 1, 4, &GapThresholds::default()).unwrap();
        assert_eq!(cert.verdict, Verdict::Fail);
        assert!(cert.word_universe.contains("Dehn"));
        assert!((cert.min_observed_ratio - 1.0).abs() < 1e-9);
        for s in &cert.profile.per_length {
            assert!(s.count > 0);
        }
    }

    #[test]
    fn duality_profile_matches_contragredient() {
        // a 3-dimensional representation with genuinely distinct gap indices
        let p = GroupPresentation::free(2).unwrap();
        let a = Matrix::from_rows(&[
            vec![3.0, 0.0, 0.0],
            vec![0.5, 0.8, 0.0],
            vec![0.2, -0.3, 1.0 / 2.4],
        ]);
        let b = Matrix::from_rows(&[
            vec![0.9, 0.4, -0.2],
            vec![0.0, 1.25, 0.3],
            vec![0.0, 0.0, 1.0 / 1.125],
        ]);
        let rep = Representation::new(p, vec![a, b], None).unwrap();
        let dual = rep.contragredient();
        // profile at k equals the inverse-transpose profile at d - k
        let p_k = gap_profile(&rep, 1, 4, DEFAULT_SPHERE_CAP).unwrap();
        let p_dual = gap_profile(&dual, 2, 4, DEFAULT_SPHERE_CAP).unwrap();
        for (s, t) in p_k.per_length.iter().zip(&p_dual.per_length) {
            assert_eq!(s.count, t.count);
            for (x, y) in [
                (s.min_ratio, t.min_ratio),
                (s.geo_mean_ratio, t.geo_mean_ratio),
                (s.max_ratio, t.max_ratio),
            ] {
                assert!((x - y).abs() / x < 1e-9, "length {}: {x} vs {y}", s.length);
            }
        }
    }
}
