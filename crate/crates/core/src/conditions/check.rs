//! Decision of the five MPF conditions for a candidate `w` and velocity `F`.

use super::alpha::{fit_alpha_asymptotics, AlphaAsymptotics, AlphaClass};
use super::terms::{c_from_jets, diagonal_limit_in, eg_from_jets, Term, TermError};
use crate::expressions::{CurvatureFunction, Df64, EvalError, Jet2, Real};
use crate::sampling;
use crate::velocities::VelocityFamilySpec;
use serde::Serialize;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(rename_all = "lowercase")]
pub enum Verdict {
    Pass,
    Fail,
    Inconclusive,
}

impl Verdict {
    /// Fail dominates, then inconclusive.
    pub fn combine(self, other: Verdict) -> Verdict {
        use Verdict::*;
        match (self, other) {
            (Fail, _) | (_, Fail) => Fail,
            (Inconclusive, _) | (_, Inconclusive) => Inconclusive,
            _ => Pass,
        }
    }
}

/// Arithmetic used for jets and terms.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Default, Serialize)]
#[serde(rename_all = "lowercase")]
pub enum Precision {
    #[default]
    Double,
    /// Double-double evaluation, for candidates close to a sign threshold.
    Compensated,
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct CheckConfig {
    /// Log-uniform ρ points on `[rho_min, 1 − rho_min]`.
    pub n_log: usize,
    /// Extra uniform random ρ points on the same interval.
    pub n_random: usize,
    pub seed: u64,
    pub rho_min: f64,
    /// Non-positivity tolerance: `T ≤ η·scale` passes.
    pub eta: f64,
    pub precision: Precision,
}

impl Default for CheckConfig {
    fn default() -> Self {
        CheckConfig {
            n_log: 2048,
            n_random: 512,
            seed: 0,
            rho_min: 1e-6,
            eta: 1e-9,
            precision: Precision::Double,
        }
    }
}

impl CheckConfig {
    /// The ρ grid in fixed order: log-uniform points, then random points.
    pub fn grid(&self) -> Vec<f64> {
        let (lo, hi) = (self.rho_min, 1.0 - self.rho_min);
        let mut g = sampling::log_uniform(lo, hi, self.n_log);
        g.extend(sampling::uniform(lo, hi, self.n_random, self.seed));
        g
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
#[serde(untagged)]
pub enum Witness {
    Rho { rho: f64 },
    Point { a: f64, b: f64 },
}

/// Verdict of one condition.
///
/// `margin` is signed so that positive means satisfied: for (IV) it is
/// `−max(value/scale)` over the grid, for (I) and (III) the smallest
/// normalized value of the quantity required to be positive.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct ConditionResult {
    pub verdict: Verdict,
    pub witness: Option<Witness>,
    pub margin: f64,
    pub detail: String,
}

impl ConditionResult {
    fn new(verdict: Verdict, witness: Option<Witness>, margin: f64, detail: impl Into<String>) -> Self {
        ConditionResult {
            verdict,
            witness,
            margin,
            detail: detail.into(),
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct ConditionReport {
    #[serde(rename = "I")]
    pub i: ConditionResult,
    #[serde(rename = "II")]
    pub ii: ConditionResult,
    #[serde(rename = "III")]
    pub iii: ConditionResult,
    #[serde(rename = "IV")]
    pub iv: ConditionResult,
    #[serde(rename = "V")]
    pub v: ConditionResult,
    pub overall: Verdict,
    pub chi: Option<f64>,
    pub sigma: f64,
    pub alpha: Option<AlphaAsymptotics>,
}

impl ConditionReport {
    pub fn conditions(&self) -> [(&'static str, &ConditionResult); 5] {
        [
            ("I", &self.i),
            ("II", &self.ii),
            ("III", &self.iii),
            ("IV", &self.iv),
            ("V", &self.v),
        ]
    }

    /// First failing condition with its witness, if any.
    pub fn first_failure(&self) -> Option<(&'static str, &ConditionResult)> {
        self.conditions().into_iter().find(|(_, r)| r.verdict == Verdict::Fail)
    }

    pub fn to_json(&self) -> serde_json::Value {
        serde_json::to_value(self).expect("report serializes")
    }
}

/// Check (I)–(V) for `w` against the velocity `F^σ_ξ` given by `spec`.
pub fn check_mpf(
    w: &CurvatureFunction,
    f: &CurvatureFunction,
    spec: &VelocityFamilySpec,
    cfg: &CheckConfig,
) -> ConditionReport {
    check_mpf_sigma(w, f, spec.sigma, cfg)
}

/// Check (I)–(V) for a velocity `F` known only through its degree σ.
pub fn check_mpf_sigma(w: &CurvatureFunction, f: &CurvatureFunction, sigma: f64, cfg: &CheckConfig) -> ConditionReport {
    match cfg.precision {
        Precision::Double => run::<f64>(w, f, sigma, cfg),
        Precision::Compensated => run::<Df64>(w, f, sigma, cfg),
    }
}

fn run<T: Real>(w: &CurvatureFunction, f: &CurvatureFunction, sigma: f64, cfg: &CheckConfig) -> ConditionReport {
    let grid = cfg.grid();
    let i = cond_i::<T>(w, &grid, cfg.eta);
    let (ii, chi) = cond_ii(w, sigma);
    let iii = cond_iii::<T>(w, &grid);
    let iv = cond_iv::<T>(w, f, &grid, cfg.eta);
    let (v, alpha) = cond_v(w, sigma);
    let overall = [&i, &ii, &iii, &iv, &v]
        .iter()
        .fold(Verdict::Pass, |acc, r| acc.combine(r.verdict));
    ConditionReport {
        i,
        ii,
        iii,
        iv,
        v,
        overall,
        chi,
        sigma,
        alpha,
    }
}

/// Relative width of the rounding band for the strict sign conditions.
const STRICT_BAND_ULPS: f64 = 64.0;

/// Sign of `pick(jet)` at `(a, b)` normalized by `(|w| + |a w_a| + |b w_b|)/a`.
///
/// A value inside the rounding band of `T` is re-evaluated in double-double
/// arithmetic; `None` means it stays inside the band there as well.
fn strict_sign<T: Real>(
    w: &CurvatureFunction,
    a: f64,
    b: f64,
    pick: fn(&Jet2) -> f64,
) -> Result<(f64, Option<f64>), EvalError> {
    fn normalized(j: &Jet2, a: f64, b: f64, v: f64) -> f64 {
        let scale = (j.value.abs() + (a * j.da).abs() + (b * j.db).abs()) / a;
        if scale == 0.0 {
            0.0
        } else {
            v / scale
        }
    }
    let j = w.eval_jet2_in::<T>(a, b)?.to_f64();
    let m = normalized(&j, a, b, pick(&j));
    if m.abs() > STRICT_BAND_ULPS * T::epsilon() {
        return Ok((m, Some(m)));
    }
    let jd = w.eval_jet2_in::<Df64>(a, b)?.to_f64();
    let md = normalized(&jd, a, b, pick(&jd));
    if md.abs() > STRICT_BAND_ULPS * Df64::epsilon() {
        Ok((md, Some(md)))
    } else {
        Ok((md, None))
    }
}

fn cond_i<T: Real>(w: &CurvatureFunction, grid: &[f64], eta: f64) -> ConditionResult {
    let mut margin = f64::INFINITY;
    let mut witness = None;
    let mut inconclusive = None;
    let mut failed = false;
    for &rho in grid {
        let (m, resolved) = match strict_sign::<T>(w, rho, 1.0, |j| j.value) {
            Ok(x) => x,
            Err(e) => {
                return ConditionResult::new(
                    Verdict::Inconclusive,
                    Some(Witness::Rho { rho }),
                    f64::NAN,
                    e.to_string(),
                )
            }
        };
        if m < margin {
            margin = m;
            witness = Some(Witness::Rho { rho });
        }
        match resolved {
            Some(_) if m < 0.0 => failed = true,
            None if inconclusive.is_none() => inconclusive = Some(rho),
            _ => {}
        }
    }
    if failed {
        return ConditionResult::new(Verdict::Fail, witness, margin, "w < 0 off the diagonal");
    }
    if let Some(rho) = inconclusive {
        return ConditionResult::new(
            Verdict::Inconclusive,
            Some(Witness::Rho { rho }),
            margin,
            "w within rounding of zero off the diagonal",
        );
    }
    // w must vanish on the diagonal
    for a in [0.5, 1.0, 2.0] {
        match w.eval_jet2_in::<T>(a, a) {
            Ok(j) => {
                let j = j.to_f64();
                let scale = a * a * (j.daa.abs() + j.dab.abs() + j.dbb.abs());
                if j.value.abs() > eta * scale {
                    return ConditionResult::new(
                        Verdict::Fail,
                        Some(Witness::Point { a, b: a }),
                        margin,
                        format!("w({a}, {a}) = {} ≠ 0", j.value),
                    );
                }
            }
            Err(e) => {
                return ConditionResult::new(
                    Verdict::Inconclusive,
                    Some(Witness::Point { a, b: a }),
                    margin,
                    e.to_string(),
                );
            }
        }
    }
    ConditionResult::new(Verdict::Pass, witness, margin, "w > 0 off the diagonal, w = 0 on it")
}

fn cond_ii(w: &CurvatureFunction, sigma: f64) -> (ConditionResult, Option<f64>) {
    let chi = match w.degree() {
        Ok(d) => d,
        Err(e) => {
            return (
                ConditionResult::new(Verdict::Inconclusive, None, f64::NAN, e.to_string()),
                None,
            )
        }
    };
    let m = chi * sigma.signum();
    let kind = if sigma > 0.0 { "a contracting" } else { "an expanding" };
    let verdict = if m > 0.0 { Verdict::Pass } else { Verdict::Fail };
    (
        ConditionResult::new(verdict, None, m, format!("χ = {chi} for {kind} velocity")),
        Some(chi),
    )
}

fn cond_iii<T: Real>(w: &CurvatureFunction, grid: &[f64]) -> ConditionResult {
    let mut margin = f64::INFINITY;
    let mut witness = None;
    let mut failed = false;
    let mut inconclusive = None;
    for &rho in grid {
        // w_a < 0 at (ρ, 1) and w_a > 0 at (1, ρ)
        for (a, b, sign) in [(rho, 1.0, -1.0), (1.0, rho, 1.0)] {
            let (m, resolved) = match strict_sign::<T>(w, a, b, |j| j.da) {
                Ok(x) => x,
                Err(e) => {
                    return ConditionResult::new(
                        Verdict::Inconclusive,
                        Some(Witness::Point { a, b }),
                        f64::NAN,
                        e.to_string(),
                    )
                }
            };
            let m = sign * m;
            if m < margin {
                margin = m;
                witness = Some(Witness::Point { a, b });
            }
            match resolved {
                Some(_) if m < 0.0 => failed = true,
                None if inconclusive.is_none() => inconclusive = Some(Witness::Point { a, b }),
                _ => {}
            }
        }
    }
    if failed {
        return ConditionResult::new(Verdict::Fail, witness, margin, "w_a has the wrong sign");
    }
    if let Some(wit) = inconclusive {
        return ConditionResult::new(Verdict::Inconclusive, Some(wit), margin, "w_a within rounding of zero");
    }
    ConditionResult::new(
        Verdict::Pass,
        witness,
        margin,
        "w_a < 0 for a < b and w_a > 0 for a > b",
    )
}

fn cond_iv<T: Real>(w: &CurvatureFunction, f: &CurvatureFunction, grid: &[f64], eta: f64) -> ConditionResult {
    let mut worst = (f64::NEG_INFINITY, None, 'C');
    let mut consider = |t: Term, label: char, wit: Witness| {
        let r = t.ratio();
        if r > worst.0 {
            worst = (r, Some(wit), label);
        }
        !t.is_nonpositive(eta)
    };
    let mut failed = false;
    for &rho in grid {
        let wit = Witness::Rho { rho };
        let (wj, fj) = match (w.eval_jet2_in::<T>(rho, 1.0), f.eval_jet2_in::<T>(rho, 1.0)) {
            (Ok(x), Ok(y)) => (x, y),
            (Err(e), _) | (_, Err(e)) => {
                return ConditionResult::new(Verdict::Inconclusive, Some(wit), f64::NAN, e.to_string())
            }
        };
        let (a, b) = (T::from_f64(rho), T::one());
        failed |= consider(c_from_jets(&wj, &fj, a, b), 'C', wit);
        match eg_from_jets(&wj, &fj, a, b) {
            Ok((e, g)) => {
                failed |= consider(e, 'E', wit);
                failed |= consider(g, 'G', wit);
            }
            Err(e) => return ConditionResult::new(Verdict::Inconclusive, Some(wit), f64::NAN, e.to_string()),
        }
    }
    let diag = Witness::Point { a: 1.0, b: 1.0 };
    match diagonal_limit_in::<T>(w, f, 1.0) {
        Ok((e, g)) => {
            failed |= consider(e, 'E', diag);
            failed |= consider(g, 'G', diag);
        }
        Err(TermError::Eval(e)) => {
            return ConditionResult::new(Verdict::Inconclusive, Some(diag), f64::NAN, e.to_string())
        }
        Err(e) => return ConditionResult::new(Verdict::Inconclusive, Some(diag), f64::NAN, e.to_string()),
    }
    let (ratio, witness, label) = worst;
    if failed {
        ConditionResult::new(Verdict::Fail, witness, -ratio, format!("{label} > 0"))
    } else {
        ConditionResult::new(Verdict::Pass, witness, -ratio, format!("C, E, G ≤ 0; closest: {label}"))
    }
}

/// Admissible α classes: contracting {α₁, α₂}, expanding {α₂, α₃}.
pub fn admissible_classes(sigma: f64) -> [AlphaClass; 2] {
    if sigma > 0.0 {
        [AlphaClass::Alpha1, AlphaClass::Alpha2]
    } else {
        [AlphaClass::Alpha2, AlphaClass::Alpha3]
    }
}

fn cond_v(w: &CurvatureFunction, sigma: f64) -> (ConditionResult, Option<AlphaAsymptotics>) {
    let fit = match fit_alpha_asymptotics(w) {
        Ok(f) => f,
        Err(e) => {
            return (
                ConditionResult::new(Verdict::Inconclusive, None, f64::NAN, e.to_string()),
                None,
            )
        }
    };
    let res = if fit.class == AlphaClass::Unclassified {
        ConditionResult::new(
            Verdict::Inconclusive,
            Some(Witness::Rho { rho: 2f64.powi(-40) }),
            -fit.fit_residual,
            "α fits no asymptotic class",
        )
    } else if !admissible_classes(sigma).contains(&fit.class) || !fit.alpha_a_consistent {
        let why = if fit.alpha_a_consistent {
            format!("class {} is not admissible", fit.class.name())
        } else {
            format!("α_a does not follow class {}", fit.class.name())
        };
        ConditionResult::new(Verdict::Fail, Some(Witness::Rho { rho: 2f64.powi(-40) }), fit.c, why)
    } else {
        ConditionResult::new(
            Verdict::Pass,
            None,
            fit.c,
            format!("class {} with c = {}", fit.class.name(), fit.c),
        )
    };
    (res, Some(fit))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::expressions::parse_expression;
    use crate::velocities::make_velocity;

    fn pair(w: &str, xi: f64, sigma: f64) -> (CurvatureFunction, CurvatureFunction, VelocityFamilySpec) {
        let spec = VelocityFamilySpec::new(xi, sigma).unwrap();
        (parse_expression(w, sigma).unwrap(), make_velocity(&spec).unwrap(), spec)
    }

    #[test]
    fn andrews_passes() {
        let (w, f, s) = pair("(a-b)^2", 0.0, 2.0);
        let r = check_mpf(&w, &f, &s, &CheckConfig::default());
        assert_eq!(r.overall, Verdict::Pass, "{r:#?}");
    }

    #[test]
    fn degree_one_fails_with_witness() {
        let (w, f, s) = pair("(a-b)^2", 1.0, 1.0);
        let r = check_mpf(&w, &f, &s, &CheckConfig::default());
        assert_eq!(r.overall, Verdict::Fail);
        assert_eq!(r.iv.verdict, Verdict::Fail);
        assert!(r.iv.witness.is_some());
    }

    #[test]
    fn schnurer_mean_expanding_passes() {
        let (w, f, s) = pair("(a-b)^2/((a+b)*a*b)", 1.0, -1.0);
        let r = check_mpf(&w, &f, &s, &CheckConfig::default());
        assert_eq!(r.overall, Verdict::Pass, "{r:#?}");
    }

    #[test]
    fn compensated_precision_agrees() {
        let (w, f, s) = pair("(a-b)^2*(a+b)^(2*s)/(a*b)^2", 1.0, 3.0);
        let cfg = CheckConfig {
            n_log: 256,
            n_random: 64,
            precision: Precision::Compensated,
            ..CheckConfig::default()
        };
        assert_eq!(check_mpf(&w, &f, &s, &cfg).overall, Verdict::Pass);
    }

    #[test]
    fn report_json_shape() {
        let (w, f, s) = pair("(a-b)^2", 1.0, 1.0);
        let j = check_mpf(&w, &f, &s, &CheckConfig::default()).to_json();
        assert_eq!(j["IV"]["verdict"], "fail");
        assert!(j["IV"]["witness"]["rho"].is_number());
        assert_eq!(j["I"]["verdict"], "pass");
    }
}
