//! Leading behaviour of `C^α_β`, `E^α_β`, `G^α_β` as ρ → 0 for each
//! α-class and each regime of the exponent of β.
//!
//! The records use the convention `β = ρ^ξ`, `β_a = ξρ^{ξ−1}`: the ξ of
//! [`limit_table`] is the family ξ minus one.

use crate::conditions::terms::rho_terms_in;
use crate::conditions::AlphaClass;
use crate::expressions::{Df64, Real};
use serde::Serialize;
use std::fmt;
use thiserror::Error;

#[derive(Debug, Clone, PartialEq, Error)]
pub enum LimitError {
    #[error("σ must be nonzero")]
    ZeroSigma,
    #[error("c = {0} must be positive")]
    NonPositiveC(f64),
    #[error("no limits for class {class} with σ = {sigma}: {reason}")]
    NotCovered {
        class: &'static str,
        sigma: f64,
        reason: &'static str,
    },
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize)]
pub enum Quantity {
    C,
    E,
    G,
}

impl fmt::Display for Quantity {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{self:?}")
    }
}

/// Range of the (pre-shift) ξ a record applies to.
#[derive(Debug, Clone, Copy, PartialEq)]
pub enum Regime {
    Gt(f64),
    Eq(f64),
    Lt(f64),
    Between(f64, f64),
}

impl Regime {
    pub fn contains(self, xi: f64) -> bool {
        match self {
            Regime::Gt(x) => xi > x,
            Regime::Eq(x) => xi == x,
            Regime::Lt(x) => xi < x,
            Regime::Between(lo, hi) => lo < xi && xi < hi,
        }
    }

    /// Representative ξ values used for the numeric sweep.
    pub fn samples(self) -> Vec<f64> {
        match self {
            Regime::Gt(x) => vec![x + 0.5, x + 2.0],
            Regime::Eq(x) => vec![x],
            Regime::Lt(x) => vec![x - 0.5, x - 2.0],
            Regime::Between(lo, hi) => vec![0.5 * (lo + hi)],
        }
    }
}

impl fmt::Display for Regime {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Regime::Gt(x) => write!(f, "xi>{x}"),
            Regime::Eq(x) => write!(f, "xi={x}"),
            Regime::Lt(x) => write!(f, "xi<{x}"),
            Regime::Between(lo, hi) => write!(f, "{lo}<xi<{hi}"),
        }
    }
}

/// Arguments of a closed form.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct LimitArgs {
    pub xi: f64,
    pub sigma: f64,
    pub c: f64,
    pub d: f64,
}

/// `lim ρ^{scaling}·T(ρ) = value` as functions of the arguments.
#[derive(Clone, Copy)]
pub struct ClosedForm {
    pub scaling: fn(f64) -> f64,
    pub scaling_text: &'static str,
    pub value: fn(&LimitArgs) -> f64,
    pub value_text: &'static str,
}

/// One transcribed limit.
#[derive(Clone, Copy)]
pub struct LimitSpec {
    pub class: AlphaClass,
    pub quantity: Quantity,
    pub regime: Regime,
    pub form: ClosedForm,
    /// The form as printed, when it differs from `form`.
    pub printed: Option<ClosedForm>,
}

impl LimitSpec {
    pub fn id(&self) -> String {
        format!("{}/{}/{}", self.class.name(), self.quantity, self.regime)
    }
}

macro_rules! cf {
    ($sc:expr, $st:expr, $val:expr, $vt:expr) => {
        ClosedForm {
            scaling: $sc,
            scaling_text: $st,
            value: $val,
            value_text: $vt,
        }
    };
}

fn sg(a: &LimitArgs) -> f64 {
    a.sigma.signum()
}

const A1: AlphaClass = AlphaClass::Alpha1;
const A2: AlphaClass = AlphaClass::Alpha2;
const A3: AlphaClass = AlphaClass::Alpha3;

fn spec(class: AlphaClass, quantity: Quantity, regime: Regime, form: ClosedForm) -> LimitSpec {
    LimitSpec {
        class,
        quantity,
        regime,
        form,
        printed: None,
    }
}

fn erratum(mut s: LimitSpec, printed: ClosedForm) -> LimitSpec {
    s.printed = Some(printed);
    s
}

/// All transcribed limits.
pub fn limit_specs() -> Vec<LimitSpec> {
    use Quantity::{C, E, G};
    use Regime::{Between, Eq, Gt, Lt};
    vec![
        spec(A1, C, Gt(-1.0), cf!(|_| 0.0, "0", |a| sg(a), "sgn(σ)")),
        spec(
            A1,
            C,
            Eq(-1.0),
            cf!(|_| 0.0, "0", |a| sg(a) * (2.0 - a.sigma), "sgn(σ)(−σ+2)"),
        ),
        spec(
            A1,
            C,
            Lt(-1.0),
            cf!(|x| -(x + 1.0), "−(ξ+1)", |a| sg(a) * (1.0 - a.sigma), "sgn(σ)(−σ+1)"),
        ),
        spec(
            A1,
            E,
            Gt(1.0),
            cf!(|_| 0.0, "0", |a| -a.c.powi(3) * (a.sigma + 1.0), "−c³(σ+1)"),
        ),
        spec(
            A1,
            G,
            Gt(1.0),
            cf!(|_| 0.0, "0", |a| a.c * (a.c * (a.sigma - 1.0) - 2.0), "c(c(σ−1)−2)"),
        ),
        spec(
            A1,
            E,
            Eq(1.0),
            cf!(
                |_| 0.0,
                "0",
                |a| -a.c * (a.c * a.c * (a.sigma + 1.0) + 1.0),
                "−c(c²(σ+1)+1)"
            ),
        ),
        spec(
            A1,
            G,
            Eq(1.0),
            cf!(
                |_| 0.0,
                "0",
                |a| a.c * (a.c * (a.sigma - 1.0) - 2.0) + 1.0,
                "c(c(σ−1)−2)+1"
            ),
        ),
        spec(
            A1,
            E,
            Between(0.0, 1.0),
            cf!(|x| -(x - 1.0), "−(ξ−1)", |a| -a.c * a.xi, "−cξ"),
        ),
        spec(A1, G, Between(0.0, 1.0), cf!(|x| -(x - 1.0), "−(ξ−1)", |a| a.xi, "ξ")),
        spec(
            A1,
            E,
            Eq(0.0),
            cf!(
                |_| 0.0,
                "0",
                |a| -a.c * (a.c + 1.0) * (a.c * (a.sigma + 1.0) + a.sigma - 1.0),
                "−c(c+1)(c(σ+1)+σ−1)"
            ),
        ),
        spec(
            A1,
            G,
            Eq(0.0),
            cf!(
                |_| 0.0,
                "0",
                |a| (a.c + 1.0) * (a.c * (a.sigma - 1.0) + a.sigma - 3.0),
                "(c+1)(c(σ−1)+σ−3)"
            ),
        ),
        spec(
            A1,
            E,
            Between(-1.0, 0.0),
            cf!(|x| -(x - 1.0), "−(ξ−1)", |a| -a.c * a.xi, "−cξ"),
        ),
        spec(A1, G, Between(-1.0, 0.0), cf!(|x| -(x - 1.0), "−(ξ−1)", |a| a.xi, "ξ")),
        spec(
            A1,
            E,
            Eq(-1.0),
            cf!(|_| 2.0, "2", |a| -a.c * (a.sigma - 2.0), "−c(σ−2)"),
        ),
        spec(A1, G, Eq(-1.0), cf!(|_| 2.0, "2", |a| a.sigma - 2.0, "σ−2")),
        spec(
            A1,
            E,
            Lt(-1.0),
            cf!(|x| -2.0 * x, "−2ξ", |a| -a.c * (a.sigma - 1.0), "−c(σ−1)"),
        ),
        spec(A1, G, Lt(-1.0), cf!(|x| -2.0 * x, "−2ξ", |a| a.sigma - 1.0, "σ−1")),
        // α₂
        spec(
            A2,
            C,
            Gt(-1.0),
            cf!(|_| 0.0, "0", |a| sg(a) * (1.0 - a.c * a.sigma), "sgn(σ)(−(cσ−1))"),
        ),
        spec(
            A2,
            C,
            Eq(-1.0),
            cf!(
                |_| 0.0,
                "0",
                |a| sg(a) * (2.0 - a.c * a.sigma - a.sigma),
                "sgn(σ)(−(cσ+σ−2))"
            ),
        ),
        erratum(
            spec(
                A2,
                C,
                Lt(-1.0),
                cf!(|x| -(x + 1.0), "−(ξ+1)", |a| sg(a) * (1.0 - a.sigma), "sgn(σ)(−σ+1)"),
            ),
            cf!(|_| 0.0, "0", |a| sg(a) * (1.0 - a.sigma), "sgn(σ)(−σ+1)"),
        ),
        spec(
            A2,
            E,
            Gt(-1.0),
            cf!(|_| 3.0, "3", |a| -a.c.powi(3) * (a.sigma + 1.0), "−c³(σ+1)"),
        ),
        erratum(
            spec(
                A2,
                G,
                Gt(-1.0),
                cf!(|_| 2.0, "2", |a| a.c * (a.c * a.sigma - 1.0), "c(cσ−1)"),
            ),
            cf!(|_| 2.0, "2", |a| a.c * a.sigma - 1.0, "−(−cσ+1)"),
        ),
        spec(
            A2,
            E,
            Eq(-1.0),
            cf!(
                |_| 3.0,
                "3",
                |a| -a.c * (a.c + 1.0) * (a.c * a.sigma + 2.0 * a.c + a.sigma),
                "−c(c+1)(cσ+2c+σ)"
            ),
        ),
        spec(
            A2,
            G,
            Eq(-1.0),
            cf!(
                |_| 2.0,
                "2",
                |a| (a.c + 1.0) * (a.c * a.sigma + a.sigma - 2.0),
                "(c+1)(cσ+σ−2)"
            ),
        ),
        spec(
            A2,
            E,
            Lt(-1.0),
            cf!(|x| -(2.0 * x - 1.0), "−(2ξ−1)", |a| -a.c * (a.c + a.sigma), "−c(c+σ)"),
        ),
        spec(A2, G, Lt(-1.0), cf!(|x| -2.0 * x, "−2ξ", |a| a.sigma - 1.0, "σ−1")),
        // α₃: expanding only, C carries sgn(σ) = −1
        spec(A3, C, Gt(-2.0), cf!(|_| 1.0, "1", |a| a.c * a.sigma, "cσ")),
        spec(
            A3,
            C,
            Eq(-2.0),
            cf!(|_| 1.0, "1", |a| a.c * a.sigma + a.c + a.sigma - 1.0, "cσ+c+σ−1"),
        ),
        spec(
            A3,
            C,
            Lt(-2.0),
            cf!(|x| -(x + 1.0), "−(ξ+1)", |a| a.c + a.sigma - 1.0, "c+σ−1"),
        ),
        spec(
            A3,
            E,
            Gt(-1.0),
            cf!(|_| 6.0, "6", |a| -a.c.powi(3) * (a.sigma + 1.0), "−c³(σ+1)"),
        ),
        spec(
            A3,
            G,
            Gt(-1.0),
            cf!(|_| 4.0, "4", |a| a.c * a.c * (a.sigma + 1.0), "c²(σ+1)"),
        ),
        spec(
            A3,
            E,
            Eq(-1.0),
            cf!(|_| 6.0, "6", |a| -a.c.powi(3) * (a.sigma + 2.0), "−c³(σ+2)"),
        ),
        spec(
            A3,
            G,
            Eq(-1.0),
            cf!(|_| 4.0, "4", |a| a.c * a.c * (a.sigma + 2.0), "c²(σ+2)"),
        ),
        spec(
            A3,
            E,
            Between(-2.0, -1.0),
            cf!(|x| -(x - 5.0), "−(ξ−5)", |a| -a.c.powi(3) * (a.xi + 2.0), "−c³(ξ+2)"),
        ),
        erratum(
            spec(
                A3,
                G,
                Between(-2.0, -1.0),
                cf!(|x| -(x - 3.0), "−(ξ−3)", |a| a.c * a.c * (a.xi + 2.0), "c²(ξ+2)"),
            ),
            cf!(|x| -(x - 2.0), "−(ξ−2)", |a| a.c * a.c * (a.xi + 2.0), "c²(ξ+2)"),
        ),
        spec(
            A3,
            E,
            Eq(-2.0),
            cf!(
                |_| 6.0,
                "6",
                |a| -a.c * (a.c * a.c * (a.sigma + 3.0) + 2.0 * a.c * (a.sigma + 2.0) + a.sigma + 1.0 + a.d),
                "−c(c²(σ+3)+2c(σ+2)+σ+1+d)"
            ),
        ),
        spec(
            A3,
            G,
            Eq(-2.0),
            cf!(
                |_| 4.0,
                "4",
                |a| a.c * a.c * (a.sigma + 1.0) + 2.0 * a.c * a.sigma + a.sigma - 1.0 - a.c * a.d,
                "c²(σ+1)+2cσ+σ−1−cd"
            ),
        ),
        spec(
            A3,
            E,
            Between(-3.0, -2.0),
            cf!(|x| -(x - 5.0), "−(ξ−5)", |a| -a.c.powi(3) * (a.xi + 2.0), "−c³(ξ+2)"),
        ),
        erratum(
            spec(
                A3,
                G,
                Between(-3.0, -2.0),
                cf!(|x| -(x - 3.0), "−(ξ−3)", |a| a.c * a.c * (a.xi + 2.0), "c²(ξ+2)"),
            ),
            cf!(|x| -(x - 3.0), "−(ξ−3)", |a| -a.c.powi(3) * (a.xi + 2.0), "−c³(ξ+2)"),
        ),
        spec(
            A3,
            E,
            Eq(-3.0),
            cf!(
                |_| 8.0,
                "8",
                |a| a.c * (a.c * a.c - 2.0 * a.c - a.sigma - 1.0 - a.d),
                "c(c²−2c−σ−1−d)"
            ),
        ),
        spec(
            A3,
            G,
            Eq(-3.0),
            cf!(|_| 6.0, "6", |a| -a.c * a.c + a.sigma - 1.0, "−c²+σ−1"),
        ),
        spec(
            A3,
            E,
            Lt(-3.0),
            cf!(
                |x| -(2.0 * x - 2.0),
                "−(2ξ−2)",
                |a| -a.c * (2.0 * a.c + a.sigma + 1.0 + a.d),
                "−c(2c+σ+1+d)"
            ),
        ),
        spec(A3, G, Lt(-3.0), cf!(|x| -2.0 * x, "−2ξ", |a| a.sigma - 1.0, "σ−1")),
    ]
}

/// Ids of the records whose printed form was corrected.
pub fn errata_ids() -> Vec<String> {
    limit_specs()
        .iter()
        .filter(|s| s.printed.is_some())
        .map(|s| s.id())
        .collect()
}

/// Agreement of a closed form with extrapolation.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct FormCheck {
    pub scaling_exponent: f64,
    pub scaling_text: &'static str,
    pub limit_value: f64,
    pub expression: &'static str,
    pub numeric: f64,
    pub matches: bool,
}

/// A limit record evaluated at one `(ξ, σ, c, d)`.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct LimitRecord {
    pub id: String,
    pub quantity: Quantity,
    pub alpha_class: AlphaClass,
    pub xi_regime: String,
    pub args: LimitArgs,
    pub scaling_exponent: f64,
    pub limit_value: f64,
    pub expression: &'static str,
    pub numeric: f64,
    pub matches: bool,
    /// The printed form, present only for corrected records.
    pub printed: Option<FormCheck>,
    /// The printed form disagrees with extrapolation here.
    pub flagged: bool,
}

/// Relative tolerance of the numeric check (absolute below 1).
pub const LIMIT_TOL: f64 = 1e-4;
const K_RANGE: std::ops::RangeInclusive<i32> = 16..=44;

fn ansatz(class: AlphaClass, c: f64, d: f64, r: Df64) -> (Df64, Df64) {
    let c = Df64::from_f64(c);
    let d = Df64::from_f64(d);
    let two = Df64::from_f64(2.0);
    match class {
        AlphaClass::Alpha1 => (c, Df64::zero()),
        AlphaClass::Alpha2 => (c / r, -c / (r * r)),
        _ => ((c + d * r) / (r * r), -(two * c + d * r) / (r * r * r)),
    }
}

/// `T(ρ)` with the α-ansatz and `β = ρ^ξ`, in double-double.
pub fn quantity_at(class: AlphaClass, q: Quantity, args: &LimitArgs, rho: f64) -> f64 {
    let r = Df64::from_f64(rho);
    let (al, ala) = ansatz(class, args.c, args.d, r);
    let be = r.powf(args.xi);
    let bea = Df64::from_f64(args.xi) * be / r;
    let t = rho_terms_in(al, ala, be, bea, args.sigma, r);
    match q {
        Quantity::C => t.c.value,
        Quantity::E => t.e.value,
        Quantity::G => t.g.value,
    }
}

/// `ρ^e·T(ρ)` along `ρ_k = 2^{−k}` and its Aitken-accelerated limit.
pub fn extrapolate(class: AlphaClass, q: Quantity, args: &LimitArgs, exponent: f64) -> f64 {
    let seq: Vec<f64> = K_RANGE
        .map(|k| {
            let rho = 2f64.powi(-k);
            (-(k as f64) * exponent).exp2() * quantity_at(class, q, args, rho)
        })
        .collect();
    aitken(&seq)
}

fn aitken(seq: &[f64]) -> f64 {
    let n = seq.len();
    let (t0, t1, t2) = (seq[n - 3], seq[n - 2], seq[n - 1]);
    let den = t2 - 2.0 * t1 + t0;
    if !den.is_finite() || den.abs() <= 1e-14 * t2.abs().max(1e-300) {
        return t2;
    }
    let acc = t2 - (t2 - t1) * (t2 - t1) / den;
    if acc.is_finite() {
        acc
    } else {
        t2
    }
}

fn close(num: f64, value: f64) -> bool {
    num.is_finite() && (num - value).abs() <= LIMIT_TOL * value.abs().max(1.0)
}

fn check_form(form: &ClosedForm, spec: &LimitSpec, args: &LimitArgs) -> FormCheck {
    let e = (form.scaling)(args.xi);
    let v = (form.value)(args);
    let numeric = extrapolate(spec.class, spec.quantity, args, e);
    FormCheck {
        scaling_exponent: e,
        scaling_text: form.scaling_text,
        limit_value: v,
        expression: form.value_text,
        numeric,
        matches: close(numeric, v),
    }
}

fn evaluate(spec: &LimitSpec, args: LimitArgs) -> LimitRecord {
    let main = check_form(&spec.form, spec, &args);
    let printed = spec.printed.as_ref().map(|p| check_form(p, spec, &args));
    let flagged = printed.as_ref().is_some_and(|p| !p.matches);
    LimitRecord {
        id: spec.id(),
        quantity: spec.quantity,
        alpha_class: spec.class,
        xi_regime: spec.regime.to_string(),
        args,
        scaling_exponent: main.scaling_exponent,
        limit_value: main.limit_value,
        expression: main.expression,
        numeric: main.numeric,
        matches: main.matches,
        printed,
        flagged,
    }
}

fn validate(class: AlphaClass, sigma: f64, c: f64) -> Result<(), LimitError> {
    if sigma == 0.0 {
        return Err(LimitError::ZeroSigma);
    }
    if c <= 0.0 {
        return Err(LimitError::NonPositiveC(c));
    }
    let not_covered = |reason| {
        Err(LimitError::NotCovered {
            class: class.name(),
            sigma,
            reason,
        })
    };
    match class {
        AlphaClass::Alpha1 if sigma < 0.0 => not_covered("the α₁-condition is for contracting velocities"),
        AlphaClass::Alpha3 if sigma > 0.0 => not_covered("the α₃-condition is for expanding velocities"),
        AlphaClass::Unclassified => not_covered("no asymptotic class"),
        _ => Ok(()),
    }
}

/// All limit records applicable to `(class, ξ)` evaluated at `(σ, c, d)`.
///
/// `xi` is the exponent of `β = ρ^ξ`; for `F^σ_ξ` pass the family ξ minus one.
pub fn limit_table(class: AlphaClass, xi: f64, sigma: f64, c: f64, d: f64) -> Result<Vec<LimitRecord>, LimitError> {
    validate(class, sigma, c)?;
    let args = LimitArgs { xi, sigma, c, d };
    Ok(limit_specs()
        .iter()
        .filter(|s| s.class == class && s.regime.contains(xi))
        .map(|s| evaluate(s, args))
        .collect())
}

/// Sampled σ, c and d values of the sweep.
pub const SWEEP_SIGMAS: [f64; 5] = [-2.0, -0.5, 0.5, 2.0, 7.0];
pub const SWEEP_CS: [f64; 3] = [0.3, 1.0, 2.0];
pub const SWEEP_DS: [f64; 3] = [-1.0, 0.0, 1.0];

/// Every record over the sampled `(ξ, σ, c, d)`, within each regime's validity.
pub fn limit_sweep() -> Vec<LimitRecord> {
    let mut out = Vec::new();
    for s in limit_specs() {
        for xi in s.regime.samples() {
            for &sigma in &SWEEP_SIGMAS {
                if validate(s.class, sigma, 1.0).is_err() {
                    continue;
                }
                for &c in &SWEEP_CS {
                    let ds: &[f64] = if s.class == AlphaClass::Alpha3 {
                        &SWEEP_DS
                    } else {
                        &[0.0]
                    };
                    for &d in ds {
                        out.push(evaluate(&s, LimitArgs { xi, sigma, c, d }));
                    }
                }
            }
        }
    }
    out
}

/// Summary of [`limit_sweep`].
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct SweepSummary {
    pub records: usize,
    /// Records whose implemented form disagrees with extrapolation.
    pub mismatches: Vec<String>,
    /// Ids whose printed form disagreed somewhere.
    pub flagged: Vec<String>,
}

pub fn summarize(records: &[LimitRecord]) -> SweepSummary {
    let mut mismatches: Vec<String> = records
        .iter()
        .filter(|r| !r.matches)
        .map(|r| {
            format!(
                "{} at ξ={} σ={} c={} d={}",
                r.id, r.args.xi, r.args.sigma, r.args.c, r.args.d
            )
        })
        .collect();
    mismatches.dedup();
    let mut flagged: Vec<String> = records.iter().filter(|r| r.flagged).map(|r| r.id.clone()).collect();
    flagged.sort();
    flagged.dedup();
    SweepSummary {
        records: records.len(),
        mismatches,
        flagged,
    }
}
