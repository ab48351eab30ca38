//! α of vanishing functions `v = (a−b)²F²/(ab)²`, its bounds and limits, and
//! certified roots of its numerator for the mean-curvature and norm cases.

use crate::expressions::{CurvatureFunction, EvalError};
use crate::numeric::{bisect, bisect_predicate, exact_decimal};
use serde::ser::SerializeStruct;
use serde::{Serialize, Serializer};
use thiserror::Error;

#[derive(Debug, Clone, PartialEq, Error)]
pub enum VanishingError {
    #[error(transparent)]
    Eval(#[from] EvalError),
    #[error("the denominator of α_v vanishes at ρ = {rho}")]
    Pole { rho: f64 },
    #[error("σ = {0} must exceed 1")]
    SigmaNotAboveOne(f64),
    #[error("σ = {0} must be positive")]
    SigmaNotPositive(f64),
    #[error("the leading behaviour of α_v is only derived for ξ ≥ 0, got ξ = {0}")]
    NegativeXi(f64),
}

/// α of any vanishing function for `F`, from the jet of `F` at `(ρ, 1)`:
/// `(F − ρ(1−ρ)F_a) / (ρ(ρF + (1−ρ)F_b))`.
pub fn alpha_vanishing_f(f: &CurvatureFunction, rho: f64) -> Result<f64, VanishingError> {
    let j = f.eval_jet2(rho, 1.0)?;
    let den = rho * (rho * j.value + (1.0 - rho) * j.db);
    if den == 0.0 {
        return Err(VanishingError::Pole { rho });
    }
    Ok((j.value - rho * (1.0 - rho) * j.da) / den)
}

/// `α_{v,β,σ}(ρ) = (1 + βρ(1 − (1−ρ)σ)) / (ρ((1−ρ)σ + ρ(βρ + 1)))` with
/// `β = beta(ρ)`.
pub fn alpha_vanishing_beta(beta: impl Fn(f64) -> f64, sigma: f64, rho: f64) -> f64 {
    let b = beta(rho);
    let num = 1.0 + b * rho * (1.0 - (1.0 - rho) * sigma);
    let den = rho * ((1.0 - rho) * sigma + rho * (b * rho + 1.0));
    num / den
}

/// β of `F^σ_ξ`, usable as the `beta` argument above.
pub fn family_beta(xi: f64) -> impl Fn(f64) -> f64 + Copy {
    move |rho: f64| rho.powf(xi - 1.0)
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct MonotoneReport {
    /// `α(σ₁) > α(σ₂)` at every grid point.
    pub strictly_decreasing: bool,
    /// Smallest `α(σ₁) − α(σ₂)` and where it occurs.
    pub min_gap: f64,
    pub worst_rho: f64,
    pub max_abs_gap: f64,
}

/// Compare `α_{v,β,σ₁}` and `α_{v,β,σ₂}` on the grid.
pub fn check_monotone_sigma(
    beta: impl Fn(f64) -> f64,
    sigma1: f64,
    sigma2: f64,
    grid: &[f64],
) -> Result<MonotoneReport, VanishingError> {
    for s in [sigma1, sigma2] {
        if s <= 0.0 {
            return Err(VanishingError::SigmaNotPositive(s));
        }
    }
    let mut rep = MonotoneReport {
        strictly_decreasing: true,
        min_gap: f64::INFINITY,
        worst_rho: f64::NAN,
        max_abs_gap: 0.0,
    };
    for &rho in grid {
        let gap = alpha_vanishing_beta(&beta, sigma1, rho) - alpha_vanishing_beta(&beta, sigma2, rho);
        if gap < rep.min_gap {
            rep.min_gap = gap;
            rep.worst_rho = rho;
        }
        rep.max_abs_gap = rep.max_abs_gap.max(gap.abs());
        rep.strictly_decreasing &= gap > 0.0;
    }
    Ok(rep)
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct UpperBoundReport {
    /// `α_v < 1/ρ` at every grid point.
    pub holds: bool,
    /// Smallest `1/ρ − α_v` relative to `1/ρ`, and where it occurs.
    pub min_rel_margin: f64,
    pub worst_rho: f64,
}

/// Check `α_{v,β,σ}(ρ) < 1/ρ` on the grid, for σ > 1.
pub fn check_upper_bound(
    beta: impl Fn(f64) -> f64,
    sigma: f64,
    grid: &[f64],
) -> Result<UpperBoundReport, VanishingError> {
    if sigma <= 1.0 {
        return Err(VanishingError::SigmaNotAboveOne(sigma));
    }
    let mut rep = UpperBoundReport {
        holds: true,
        min_rel_margin: f64::INFINITY,
        worst_rho: f64::NAN,
    };
    for &rho in grid {
        let m = 1.0 - rho * alpha_vanishing_beta(&beta, sigma, rho);
        if m < rep.min_rel_margin {
            rep.min_rel_margin = m;
            rep.worst_rho = rho;
        }
        rep.holds &= m > 0.0;
    }
    Ok(rep)
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(rename_all = "kebab-case")]
pub enum LimitScaling {
    /// `ρ·α_v → value`.
    RhoInverse,
    /// `α_v → value`.
    Constant,
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct VanishingLimit {
    pub scaling: LimitScaling,
    pub value: f64,
    /// Extrapolated from `ρ_k = 2^{−k}`.
    pub numeric: f64,
}

/// Leading behaviour of `α_v` for `F^σ_ξ` as ρ → 0 (σ > 0, ξ ≥ 0).
pub fn limits_vanishing(xi: f64, sigma: f64) -> Result<VanishingLimit, VanishingError> {
    if sigma <= 0.0 {
        return Err(VanishingError::SigmaNotPositive(sigma));
    }
    if xi < 0.0 {
        return Err(VanishingError::NegativeXi(xi));
    }
    let (scaling, value) = if xi > 0.0 {
        (LimitScaling::RhoInverse, 1.0 / sigma)
    } else if sigma == 2.0 {
        (LimitScaling::Constant, 1.0)
    } else {
        (LimitScaling::RhoInverse, (2.0 - sigma) / sigma)
    };
    let beta = family_beta(xi);
    let seq: Vec<f64> = (20..=40)
        .map(|k| {
            let rho = 2f64.powi(-k);
            let a = alpha_vanishing_beta(beta, sigma, rho);
            match scaling {
                LimitScaling::RhoInverse => rho * a,
                LimitScaling::Constant => a,
            }
        })
        .collect();
    Ok(VanishingLimit {
        scaling,
        value,
        numeric: extrapolate(&seq),
    })
}

/// Richardson step for a sequence sampled at halving ρ with an O(ρ) error.
fn extrapolate(seq: &[f64]) -> f64 {
    let n = seq.len();
    2.0 * seq[n - 1] - seq[n - 2]
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(rename_all = "kebab-case")]
pub enum RootMethod {
    ClosedForm,
    Bisection,
}

/// A root of a numerator polynomial with a bracket.
///
/// For a simple root, `p(lo)·p(hi) < 0`. For a double root (method
/// `ClosedForm`) the bracket is a sign change of `p′` instead.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct RootCertificate {
    pub root: f64,
    pub bracket: (f64, f64),
    pub residual: f64,
    pub method: RootMethod,
}

impl Serialize for RootCertificate {
    fn serialize<S: Serializer>(&self, s: S) -> Result<S::Ok, S::Error> {
        let mut st = s.serialize_struct("RootCertificate", 4)?;
        st.serialize_field("root", &self.root)?;
        st.serialize_field(
            "bracket",
            &[exact_decimal(self.bracket.0), exact_decimal(self.bracket.1)],
        )?;
        st.serialize_field("residual", &self.residual)?;
        st.serialize_field("method", &self.method)?;
        st.end()
    }
}

/// Relative size below which the minimum of the numerator counts as zero.
pub const DOUBLE_ROOT_TOL: f64 = 1e-12;

/// Vanishing-α numerator for mean curvature: `σρ² + (1−σ)ρ + 1`.
pub fn mean_numerator(sigma: f64, rho: f64) -> f64 {
    (sigma * rho + (1.0 - sigma)) * rho + 1.0
}

/// Vanishing-α numerator for `|A|`: `σρ³ + (1−σ)ρ² + 1`.
pub fn norm_numerator(sigma: f64, rho: f64) -> f64 {
    (sigma * rho + (1.0 - sigma)) * rho * rho + 1.0
}

fn mean_scale(sigma: f64, rho: f64) -> f64 {
    sigma * rho * rho + (1.0 - sigma).abs() * rho + 1.0
}

fn norm_scale(sigma: f64, rho: f64) -> f64 {
    sigma * rho.powi(3) + (1.0 - sigma).abs() * rho * rho + 1.0
}

/// Roots in (0, 1) of a numerator that is positive at 0 and 1 with a single
/// interior minimum at `rc`.
fn roots_with_minimum(
    p: impl Fn(f64) -> f64,
    dp: impl Fn(f64) -> f64,
    scale: impl Fn(f64) -> f64,
    rc: f64,
) -> Vec<RootCertificate> {
    let pc = p(rc);
    if pc.abs() <= DOUBLE_ROOT_TOL * scale(rc) {
        // p′ may also vanish at 0, so bracket away from it
        let b = bisect(&dp, 0.5 * rc, 0.5 * (rc + 1.0)).expect("p′ changes sign at the minimum");
        let h = (b.hi - b.lo).max(f64::EPSILON * rc);
        let (lo, hi) = (b.mid - h, b.mid + h);
        return vec![RootCertificate {
            root: b.mid,
            bracket: (lo, hi),
            residual: p(b.mid),
            method: RootMethod::ClosedForm,
        }];
    }
    if pc > 0.0 {
        return vec![];
    }
    [(0.0, rc), (rc, 1.0)]
        .into_iter()
        .map(|(lo, hi)| {
            let b = bisect(&p, lo, hi).expect("p changes sign around the minimum");
            RootCertificate {
                root: b.mid,
                bracket: (b.lo, b.hi),
                residual: p(b.mid),
                method: RootMethod::Bisection,
            }
        })
        .collect()
}

/// Roots of `α_{v,H^σ}` in (0, 1), by bisection on the numerator.
pub fn roots_mean(sigma: f64) -> Result<Vec<RootCertificate>, VanishingError> {
    if sigma <= 1.0 {
        return Err(VanishingError::SigmaNotAboveOne(sigma));
    }
    let rc = (sigma - 1.0) / (2.0 * sigma);
    Ok(roots_with_minimum(
        |r| mean_numerator(sigma, r),
        |r| 2.0 * sigma * r + 1.0 - sigma,
        |r| mean_scale(sigma, r),
        rc,
    ))
}

/// `ρ∓ = (σ − 1 ∓ √(σ² − 6σ + 1)) / (2σ)`, empty when the discriminant is negative.
pub fn roots_mean_closed_form(sigma: f64) -> Vec<f64> {
    let disc = sigma * sigma - 6.0 * sigma + 1.0;
    if disc < 0.0 {
        return vec![];
    }
    let q = disc.sqrt();
    vec![(sigma - 1.0 - q) / (2.0 * sigma), (sigma - 1.0 + q) / (2.0 * sigma)]
}

/// `3 + 2√2`: onset of roots for the mean-curvature numerator.
pub fn mean_root_onset() -> f64 {
    3.0 + 2.0 * std::f64::consts::SQRT_2
}

/// Roots of `α_{v,|A|^σ}` in (0, 1), by bisection on the numerator.
pub fn roots_norm(sigma: f64) -> Result<Vec<RootCertificate>, VanishingError> {
    if sigma <= 1.0 {
        return Err(VanishingError::SigmaNotAboveOne(sigma));
    }
    let rc = 2.0 * (sigma - 1.0) / (3.0 * sigma);
    Ok(roots_with_minimum(
        |r| norm_numerator(sigma, r),
        |r| r * (3.0 * sigma * r + 2.0 * (1.0 - sigma)),
        |r| norm_scale(sigma, r),
        rc,
    ))
}

/// Real roots in (0, 1) of `σρ³ + (1−σ)ρ² + 1` by the trigonometric formula.
pub fn roots_norm_closed_form(sigma: f64) -> Vec<f64> {
    // depressed cubic t³ + pt + q with ρ = t − b/(3a)
    let (a, b, d) = (sigma, 1.0 - sigma, 1.0);
    let shift = b / (3.0 * a);
    let p = -b * b / (3.0 * a * a);
    let q = 2.0 * b.powi(3) / (27.0 * a.powi(3)) + d / a;
    if p >= 0.0 {
        return vec![];
    }
    let m = 2.0 * (-p / 3.0).sqrt();
    let arg = 3.0 * q / (p * m);
    if arg.abs() > 1.0 {
        return vec![];
    }
    let theta = arg.acos() / 3.0;
    let mut r: Vec<f64> = (0..3)
        .map(|k| m * (theta - 2.0 * std::f64::consts::PI * k as f64 / 3.0).cos() - shift)
        .filter(|r| *r > 0.0 && *r < 1.0)
        .collect();
    r.sort_by(f64::total_cmp);
    r
}

/// σ⋆: smallest σ for which the norm numerator has a root in (0, 1), from
/// `(39 + ∛(51759 − 5832√2) + 9∛(71 + 8√2)) / 12`, the real root of the
/// discriminant `4σ³ − 39σ² + 12σ − 4`.
pub fn sigma_star() -> f64 {
    let s2 = std::f64::consts::SQRT_2;
    (39.0 + (51759.0 - 5832.0 * s2).cbrt() + 9.0 * (71.0 + 8.0 * s2).cbrt()) / 12.0
}

/// The radical with coefficient 8 on the second cube root, as it is
/// commonly printed. It evaluates to about 9.081 and is kept for comparison.
pub fn sigma_star_printed_radical() -> f64 {
    let s2 = std::f64::consts::SQRT_2;
    (39.0 + (51759.0 - 5832.0 * s2).cbrt() + 8.0 * (71.0 + 8.0 * s2).cbrt()) / 12.0
}

/// σ⋆ by bisection on "the numerator has a root in (0, 1)".
pub fn sigma_star_bisection() -> f64 {
    let has_root = |s: f64| {
        let rc = 2.0 * (s - 1.0) / (3.0 * s);
        norm_numerator(s, rc) <= 0.0
    };
    let (lo, hi) = bisect_predicate(has_root, 2.0, 20.0, 0.0);
    0.5 * (lo + hi)
}

/// `4σ³ − 39σ² + 12σ − 4`: zero exactly at σ⋆.
pub fn norm_discriminant(sigma: f64) -> f64 {
    ((4.0 * sigma - 39.0) * sigma + 12.0) * sigma - 4.0
}

/// ρ⋆ = 2(σ⋆ − 1)/(3σ⋆), the double root at σ = σ⋆.
pub fn rho_star() -> f64 {
    let s = sigma_star();
    2.0 * (s - 1.0) / (3.0 * s)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::velocities::{make_velocity, VelocityFamilySpec};

    #[test]
    fn alpha_examples() {
        let h = make_velocity(&VelocityFamilySpec::new(1.0, 1.0).unwrap()).unwrap();
        for rho in [0.1, 0.5, 0.9] {
            assert!((alpha_vanishing_f(&h, rho).unwrap() - 1.0 / rho).abs() < 1e-12 / rho);
        }
        let h6 = make_velocity(&VelocityFamilySpec::new(1.0, 6.0).unwrap()).unwrap();
        assert!(alpha_vanishing_f(&h6, 1.0 / 3.0).unwrap().abs() < 1e-14);
        assert!((alpha_vanishing_f(&h6, 1.0).unwrap() - 1.0).abs() < 1e-15);
        assert!((alpha_vanishing_beta(|_| 1.0, 2.0, 0.5) - 8.0 / 7.0).abs() < 1e-15);
        assert!((alpha_vanishing_beta(|r| r, 4.2, 1.0) - 1.0).abs() < 1e-15);
        // 1 − 2(1−ρ) cancels, so ρ is kept moderate
        assert!((alpha_vanishing_beta(|r| 1.0 / r, 2.0, 1e-6) - 1.0).abs() < 1e-8);
    }

    #[test]
    fn limits() {
        let l = limits_vanishing(1.0, 4.0).unwrap();
        assert_eq!((l.scaling, l.value), (LimitScaling::RhoInverse, 0.25));
        assert!((l.numeric - 0.25).abs() < 1e-9);
        let l = limits_vanishing(0.0, 1.5).unwrap();
        assert!((l.value - 1.0 / 3.0).abs() < 1e-15 && (l.numeric - l.value).abs() < 1e-9);
        let l = limits_vanishing(0.0, 2.0).unwrap();
        assert_eq!((l.scaling, l.value), (LimitScaling::Constant, 1.0));
    }

    #[test]
    fn mean_roots() {
        let r = roots_mean(6.0).unwrap();
        assert_eq!(r.len(), 2);
        assert!((r[0].root - 1.0 / 3.0).abs() < 1e-12 && (r[1].root - 0.5).abs() < 1e-12);
        assert!(roots_mean(5.0).unwrap().is_empty());
        assert!(roots_mean(4.0).unwrap().is_empty());
        let r = roots_mean(mean_root_onset()).unwrap();
        assert_eq!(r.len(), 1);
        assert_eq!(r[0].method, RootMethod::ClosedForm);
        assert!((r[0].root - (std::f64::consts::SQRT_2 - 1.0)).abs() < 1e-9);
    }

    #[test]
    fn norm_roots() {
        let r = roots_norm(10.0).unwrap();
        assert_eq!(r.len(), 2);
        assert!((r[0].root - 0.5).abs() < 1e-12);
        assert!((r[1].root - (1.0 + 6f64.sqrt()) / 5.0).abs() < 1e-12);
        assert!(roots_norm(9.0).unwrap().is_empty());
        let cf = roots_norm_closed_form(10.0);
        assert!((cf[0] - 0.5).abs() < 1e-12 && (cf[1] - r[1].root).abs() < 1e-12);
    }

    #[test]
    fn sigma_star_values() {
        let s = sigma_star();
        assert!((s - 9.444).abs() < 1e-3);
        assert!((s - sigma_star_bisection()).abs() < 1e-9);
        assert!(norm_discriminant(s).abs() < 1e-9);
        assert!((sigma_star_printed_radical() - 9.081).abs() < 1e-3);
        assert!((rho_star() - 0.596).abs() < 1e-3);
        assert!(roots_norm(s - 0.01).unwrap().is_empty());
        let r = roots_norm(s).unwrap();
        assert_eq!(r.len(), 1);
        assert!((r[0].root - rho_star()).abs() < 1e-9);
    }

    #[test]
    fn certificate_json_uses_exact_decimals() {
        let r = roots_mean(6.0).unwrap()[0];
        let v = serde_json::to_value(r).unwrap();
        let lo = v["bracket"][0].as_str().unwrap();
        assert!(lo.starts_with("0.333333333333333") && lo.len() > 40);
    }
}
