//! The quantity α = −w_a/w_b on `(ρ, 1)`, its asymptotic class as ρ → 0,
//! and the lower/upper bound on α implied by C ≤ 0.

use crate::expressions::{CurvatureFunction, EvalError};
use serde::Serialize;
use thiserror::Error;

#[derive(Debug, Clone, PartialEq, Error)]
pub enum AlphaError {
    #[error(transparent)]
    Eval(#[from] EvalError),
    #[error("w_b vanishes at ρ = {rho}; α is undefined")]
    ZeroWb { rho: f64 },
    #[error("w_b changes sign between ρ = {lo} and ρ = {hi}")]
    WbSignChange { lo: f64, hi: f64 },
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct AlphaSample {
    pub rho: f64,
    pub alpha: f64,
    pub alpha_a: f64,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize)]
#[serde(rename_all = "lowercase")]
pub enum AlphaClass {
    /// α → c, α_a → 0.
    Alpha1,
    /// α = c/ρ + o(ρ⁻¹), α_a = −c/ρ² + ….
    Alpha2,
    /// α = (c + dρ)/ρ² + o(ρ⁻¹), α_a = −(2c + dρ)/ρ³ + ….
    Alpha3,
    Unclassified,
}

impl AlphaClass {
    pub fn name(self) -> &'static str {
        match self {
            AlphaClass::Alpha1 => "alpha1",
            AlphaClass::Alpha2 => "alpha2",
            AlphaClass::Alpha3 => "alpha3",
            AlphaClass::Unclassified => "unclassified",
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct AlphaAsymptotics {
    pub class: AlphaClass,
    pub c: f64,
    pub d: f64,
    /// Relative spread of the scaled α over the last dyadic samples.
    pub fit_residual: f64,
    /// α_a agrees with the derivative prescribed by the class.
    pub alpha_a_consistent: bool,
}

#[derive(Debug, Clone, Serialize)]
pub struct AlphaProfile {
    pub samples: Vec<AlphaSample>,
    pub asymptotics: AlphaAsymptotics,
}

impl AlphaProfile {
    pub fn min_alpha(&self) -> Option<AlphaSample> {
        self.samples.iter().copied().min_by(|x, y| x.alpha.total_cmp(&y.alpha))
    }
}

/// Dyadic exponents `k` of the fit points `ρ_k = 2^{−k}`.
pub const FIT_RANGE: std::ops::RangeInclusive<i32> = 10..=40;
/// Number of trailing dyadic samples a class fit must be stable over.
pub const FIT_TAIL: usize = 10;
/// Largest accepted relative spread over the tail.
pub const FIT_TOLERANCE: f64 = 1e-3;

/// α and α_a at `(ρ, 1)`.
pub fn alpha_at(w: &CurvatureFunction, rho: f64) -> Result<AlphaSample, AlphaError> {
    let j = w.eval_jet2(rho, 1.0)?;
    if j.db == 0.0 {
        return Err(AlphaError::ZeroWb { rho });
    }
    Ok(AlphaSample {
        rho,
        alpha: -j.da / j.db,
        alpha_a: -(j.daa * j.db - j.da * j.dab) / (j.db * j.db),
    })
}

/// α samples on `grid` plus the fitted asymptotic class.
pub fn alpha_profile(w: &CurvatureFunction, grid: &[f64]) -> Result<AlphaProfile, AlphaError> {
    let mut samples = Vec::with_capacity(grid.len());
    let mut prev: Option<(f64, f64)> = None;
    for &rho in grid {
        let wb = w.eval_jet2(rho, 1.0)?.db;
        if let Some((r0, wb0)) = prev {
            if wb0.signum() != wb.signum() {
                return Err(AlphaError::WbSignChange {
                    lo: r0.min(rho),
                    hi: r0.max(rho),
                });
            }
        }
        prev = Some((rho, wb));
        samples.push(alpha_at(w, rho)?);
    }
    Ok(AlphaProfile {
        samples,
        asymptotics: fit_alpha_asymptotics(w)?,
    })
}

fn tail_fit(vals: &[f64]) -> (f64, f64) {
    let c = *vals.last().unwrap();
    let (lo, hi) = vals
        .iter()
        .fold((f64::INFINITY, f64::NEG_INFINITY), |(l, h), &v| (l.min(v), h.max(v)));
    let spread = if c == 0.0 { f64::INFINITY } else { (hi - lo) / c.abs() };
    (c, spread)
}

/// Fit the ρ → 0 class of α from `ρ_k = 2^{−k}`, `k = 10..=40`.
///
/// Tries α → c, then ρα → c, then ρ²α → c; a class is accepted when the
/// scaled α has relative spread below [`FIT_TOLERANCE`] over the last
/// [`FIT_TAIL`] samples and its limit is positive.
pub fn fit_alpha_asymptotics(w: &CurvatureFunction) -> Result<AlphaAsymptotics, AlphaError> {
    let pts: Vec<AlphaSample> = FIT_RANGE
        .map(|k| alpha_at(w, 2f64.powi(-k)))
        .collect::<Result<_, _>>()?;
    let tail = &pts[pts.len() - FIT_TAIL..];
    let last = *pts.last().unwrap();
    let mut best_residual = f64::INFINITY;

    for (p, class) in [
        (0, AlphaClass::Alpha1),
        (1, AlphaClass::Alpha2),
        (2, AlphaClass::Alpha3),
    ] {
        let scaled: Vec<f64> = tail.iter().map(|s| s.rho.powi(p) * s.alpha).collect();
        let (c, spread) = tail_fit(&scaled);
        best_residual = best_residual.min(spread);
        if !(c > 0.0 && spread < FIT_TOLERANCE) {
            continue;
        }
        let r = last.rho;
        let (d, consistent) = match class {
            AlphaClass::Alpha1 => (0.0, (r * last.alpha_a).abs() <= FIT_TOLERANCE * c),
            AlphaClass::Alpha2 => {
                let v = r * r * last.alpha_a;
                (0.0, (v + c).abs() <= FIT_TOLERANCE * c)
            }
            _ => {
                // next-order coefficient from ρ²α = c + dρ + … at k = 20, 21
                let g = |k: i32| {
                    let s = alpha_at(w, 2f64.powi(-k))?;
                    Ok::<_, AlphaError>(s.rho * s.rho * s.alpha)
                };
                let rk = 2f64.powi(-20);
                let d = 2.0 * (g(20)? - g(21)?) / rk;
                let v = r * r * r * last.alpha_a;
                (d, (v + 2.0 * c).abs() <= FIT_TOLERANCE * c)
            }
        };
        return Ok(AlphaAsymptotics {
            class,
            c,
            d,
            fit_residual: spread,
            alpha_a_consistent: consistent,
        });
    }
    Ok(AlphaAsymptotics {
        class: AlphaClass::Unclassified,
        c: f64::NAN,
        d: f64::NAN,
        fit_residual: best_residual,
        alpha_a_consistent: false,
    })
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(rename_all = "kebab-case")]
pub enum BoundDirection {
    /// An MPF needs α ≥ bound.
    AtLeast,
    /// An MPF needs α ≤ bound.
    AtMost,
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct AlphaBound {
    pub value: f64,
    pub direction: BoundDirection,
}

#[derive(Debug, Clone, PartialEq, Error)]
pub enum BoundError {
    #[error("σ must be nonzero")]
    ZeroSigma,
    #[error("A(ρ) = 0 at ρ = {rho}: the bound has a pole")]
    Pole { rho: f64 },
}

/// Bound on α at ρ implied by `C^α_β(ρ) ≤ 0` for `F^σ_ξ`.
///
/// `C^α_β = sgn(σ)(B − αρA)` with `A = σ + ρ(1−σ) + βρ²`,
/// `B = 1 + βρ(1 − σ + ρσ)`, `β = ρ^{ξ−1}`, so the bound is `B/(ρA)` and
/// its direction follows from the signs of σ and A.
pub fn alpha_bound(xi: f64, sigma: f64, rho: f64) -> Result<AlphaBound, BoundError> {
    if sigma == 0.0 {
        return Err(BoundError::ZeroSigma);
    }
    let beta = rho.powf(xi - 1.0);
    let a = sigma + rho * (1.0 - sigma) + beta * rho * rho;
    let b = 1.0 + beta * rho * (1.0 - sigma + rho * sigma);
    if a == 0.0 {
        return Err(BoundError::Pole { rho });
    }
    let direction = if (sigma > 0.0) == (a > 0.0) {
        BoundDirection::AtLeast
    } else {
        BoundDirection::AtMost
    };
    Ok(AlphaBound {
        value: b / (rho * a),
        direction,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::expressions::parse_expression;

    fn fit(t: &str, s: f64) -> AlphaAsymptotics {
        fit_alpha_asymptotics(&parse_expression(t, s).unwrap()).unwrap()
    }

    #[test]
    fn class_examples() {
        let a = fit("(a-b)^2", 0.0);
        assert_eq!(a.class, AlphaClass::Alpha1);
        assert!((a.c - 1.0).abs() < 1e-12 && a.alpha_a_consistent);

        let a = fit("(a-b)^2/(a*b)^2", 0.0);
        assert_eq!(a.class, AlphaClass::Alpha3);
        assert!((a.c - 1.0).abs() < 1e-9 && a.d.abs() < 1e-4 && a.alpha_a_consistent);

        let a = fit("(a-b)^2*(a+b)^(2*s)/(a*b)^2", 3.0);
        assert_eq!(a.class, AlphaClass::Alpha2);
        assert!((a.c - 1.0 / 3.0).abs() < 1e-4 && a.alpha_a_consistent);
    }

    #[test]
    fn sign_change_of_wb_is_reported() {
        // the second factor vanishes at ρ = (3 − √5)/2
        let w = parse_expression("(a-b)^2*(a^2-3*a*b+b^2)^2", 0.0).unwrap();
        let grid = crate::sampling::log_uniform(1e-3, 0.999, 400);
        assert!(matches!(
            alpha_profile(&w, &grid),
            Err(AlphaError::WbSignChange { .. }) | Err(AlphaError::ZeroWb { .. })
        ));
    }

    #[test]
    fn bound_examples() {
        let b = alpha_bound(0.0, 2.0, 1e-3).unwrap();
        assert!((b.value - 1.0).abs() < 1e-12);
        assert_eq!(b.direction, BoundDirection::AtLeast);
        for rho in [1e-6, 1e-8] {
            let b = alpha_bound(1.0, 3.0, rho).unwrap();
            assert!((rho * b.value - 1.0 / 3.0).abs() < 1e-4);
            let b = alpha_bound(0.0, -1.0, rho).unwrap();
            assert!((rho * b.value - 3.0 / -1.0).abs() < 1e-4);
        }
    }
}
