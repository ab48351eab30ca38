//! The constant term C and the gradient terms E, G, in the (a,b)-form built
//! from jets and in the ρ-form written in α, α_a, β, β_a.

use crate::expressions::{CurvatureFunction, EvalError, Jet2, Real};
use serde::Serialize;
use thiserror::Error;

#[derive(Debug, Clone, PartialEq, Error)]
pub enum TermError {
    #[error(transparent)]
    Eval(#[from] EvalError),
    #[error("E and G divide by a − b; use the diagonal limit at a = b = {a}")]
    Diagonal { a: f64 },
    #[error("α = −w_a/w_b is undefined at (a, b) = ({a}, {b}) since w_b = 0")]
    AlphaUndefined { a: f64, b: f64 },
}

/// A term value with the magnitude of its additive constituents.
///
/// `value ≤ η·scale` counts as non-positive.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct Term {
    pub value: f64,
    pub scale: f64,
}

impl Term {
    /// `value / scale`, or 0 for an all-zero term.
    pub fn ratio(&self) -> f64 {
        if self.scale == 0.0 {
            0.0
        } else {
            self.value / self.scale
        }
    }

    pub fn is_nonpositive(&self, eta: f64) -> bool {
        self.value <= eta * self.scale
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
#[serde(untagged)]
pub enum Location {
    Point { a: f64, b: f64 },
    Rho { rho: f64 },
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(rename_all = "kebab-case")]
pub enum TermForm {
    AbForm,
    RhoForm,
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct TermTriple {
    #[serde(rename = "C")]
    pub c: Term,
    #[serde(rename = "E")]
    pub e: Term,
    #[serde(rename = "G")]
    pub g: Term,
    pub location: Location,
    pub form: TermForm,
}

impl TermTriple {
    /// Largest `value/scale` of the three terms and its label.
    pub fn worst(&self) -> (char, f64) {
        [('C', self.c), ('E', self.e), ('G', self.g)]
            .into_iter()
            .map(|(l, t)| (l, t.ratio()))
            .fold(('C', f64::NEG_INFINITY), |acc, x| if x.1 > acc.1 { x } else { acc })
    }
}

pub(crate) fn c_from_jets<T: Real>(w: &Jet2<T>, f: &Jet2<T>, a: T, b: T) -> Term {
    let ab = a * b;
    let d = a - b;
    let t1 = f.value * w.da * a * a;
    let t2 = f.value * w.db * b * b;
    let t3 = f.da * w.db * ab * d;
    let t4 = f.db * w.da * ab * d;
    let value = (t1 + t2 + t3 - t4).to_f64();
    let scale = [t1, t2, t3, t4].iter().map(|t| t.to_f64().abs()).sum();
    Term { value, scale }
}

pub(crate) fn eg_from_jets<T: Real>(w: &Jet2<T>, f: &Jet2<T>, a: T, b: T) -> Result<(Term, Term), TermError> {
    let (af, bf) = (a.to_f64(), b.to_f64());
    if af == bf {
        return Err(TermError::Diagonal { a: af });
    }
    if w.db == T::zero() {
        return Err(TermError::AlphaUndefined { a: af, b: bf });
    }
    let two = T::from_f64(2.0);
    let al = -(w.da / w.db);
    let al2 = al * al;
    let qf = f.daa + two * f.dab * al + f.dbb * al2;
    let qw = w.daa + two * w.dab * al + w.dbb * al2;
    let d = a - b;
    let cross = (w.db * f.da - w.da * f.db) / d;

    let e = w.da * qf - f.da * qw + two * cross * al2;
    let g = (w.db * qf - f.db * qw + two * cross) / al2;

    let x = |t: T| t.to_f64().abs();
    let (alf, al2f, df) = (x(al), x(al2), x(d));
    let qf_abs = x(f.daa) + 2.0 * x(f.dab) * alf + x(f.dbb) * al2f;
    let qw_abs = x(w.daa) + 2.0 * x(w.dab) * alf + x(w.dbb) * al2f;
    let cross_abs = (x(w.db * f.da) + x(w.da * f.db)) / df;
    let e_scale = x(w.da) * qf_abs + x(f.da) * qw_abs + 2.0 * cross_abs * al2f;
    let g_scale = (x(w.db) * qf_abs + x(f.db) * qw_abs + 2.0 * cross_abs) / al2f;
    Ok((
        Term {
            value: e.to_f64(),
            scale: e_scale,
        },
        Term {
            value: g.to_f64(),
            scale: g_scale,
        },
    ))
}

/// `C_w(a, b)` in the factored form
/// `F(w_a a² + w_b b²) + F_a w_b ab(a−b) − F_b w_a ab(a−b)`.
pub fn constant_term_c(w: &CurvatureFunction, f: &CurvatureFunction, a: f64, b: f64) -> Result<Term, TermError> {
    let (wj, fj) = (w.eval_jet2(a, b)?, f.eval_jet2(a, b)?);
    Ok(c_from_jets(&wj, &fj, a, b))
}

/// `C_w(a, b)` exactly as written in condition (IV), without factoring.
pub fn constant_term_c_expanded(
    w: &CurvatureFunction,
    f: &CurvatureFunction,
    a: f64,
    b: f64,
) -> Result<f64, TermError> {
    let (w, f) = (w.eval_jet2(a, b)?, f.eval_jet2(a, b)?);
    let m = f.da * a * a + f.db * b * b;
    let r = f.value - f.da * a - f.db * b;
    Ok(w.da * a * (m + r * a) + w.db * b * (m + r * b))
}

/// `(E_w(a, b), G_w(a, b))` for `a ≠ b`.
pub fn gradient_terms_eg(
    w: &CurvatureFunction,
    f: &CurvatureFunction,
    a: f64,
    b: f64,
) -> Result<(Term, Term), TermError> {
    let (wj, fj) = (w.eval_jet2(a, b)?, f.eval_jet2(a, b)?);
    eg_from_jets(&wj, &fj, a, b)
}

pub(crate) fn eg_in<T: Real>(
    w: &CurvatureFunction,
    f: &CurvatureFunction,
    a: f64,
    b: f64,
) -> Result<(Term, Term), TermError> {
    let (wj, fj) = (w.eval_jet2_in::<T>(a, b)?, f.eval_jet2_in::<T>(a, b)?);
    eg_from_jets(&wj, &fj, T::from_f64(a), T::from_f64(b))
}

/// Steps used by [`diagonal_limit_eg`].
pub const DIAGONAL_STEPS: (f64, f64) = (1e-4, 5e-5);

pub(crate) fn diagonal_limit_in<T: Real>(
    w: &CurvatureFunction,
    f: &CurvatureFunction,
    a: f64,
) -> Result<(Term, Term), TermError> {
    let (h1, h2) = DIAGONAL_STEPS;
    let (e1, g1) = eg_in::<T>(w, f, a, a * (1.0 + h1))?;
    let (e2, g2) = eg_in::<T>(w, f, a, a * (1.0 + h2))?;
    // first-order Richardson step for h2 = h1/2
    let rich = |t1: Term, t2: Term| Term {
        value: 2.0 * t2.value - t1.value,
        scale: t1.scale.max(t2.scale),
    };
    Ok((rich(e1, e2), rich(g1, g2)))
}

/// One-sided limit of `(E, G)` along `b → a⁺`, by Richardson extrapolation
/// from `b = a(1 + h)` with `h ∈ {1e−4, 5e−5}`.
pub fn diagonal_limit_eg(w: &CurvatureFunction, f: &CurvatureFunction, a: f64) -> Result<(Term, Term), TermError> {
    diagonal_limit_in::<f64>(w, f, a)
}

/// `C`, `E`, `G` at `(a, b)` with `a ≠ b`.
pub fn ab_terms(w: &CurvatureFunction, f: &CurvatureFunction, a: f64, b: f64) -> Result<TermTriple, TermError> {
    let c = constant_term_c(w, f, a, b)?;
    let (e, g) = gradient_terms_eg(w, f, a, b)?;
    Ok(TermTriple {
        c,
        e,
        g,
        location: Location::Point { a, b },
        form: TermForm::AbForm,
    })
}

/// `C^α_β`, `E^α_β`, `G^α_β` at ρ.
pub fn rho_terms(alpha: f64, alpha_a: f64, beta: f64, beta_a: f64, sigma: f64, rho: f64) -> TermTriple {
    rho_terms_in(alpha, alpha_a, beta, beta_a, sigma, rho)
}

/// [`rho_terms`] evaluated in any [`Real`]; the result is rounded to f64.
pub(crate) fn rho_terms_in<T: Real>(al: T, ala: T, be: T, bea: T, sigma: f64, r: T) -> TermTriple {
    let one = T::one();
    let s = T::from_f64(sigma);
    let sg = T::from_f64(sigma.signum());
    let om = one - r;
    let br1 = be * r + one;
    let sum_abs = |xs: &[T]| xs.iter().fold(T::zero(), |acc, x| acc + x.abs());

    let c1 = (one - al * r * r) * br1;
    let c2 = (al + be) * (r - one) * r * s;
    let c_scale = (one + (al * r * r).abs()) * br1.abs() + c2.abs();

    let amr = al * r - one;
    let e1 = -ala * be * amr * br1 * om;
    let e2 = -al * bea * amr * amr * om;
    let e_in = [
        al * (one + r + om * s),
        be * om * (s - one),
        T::from_f64(2.0) * al * be * r,
    ];
    let e3 = -al * (al + be) * (e_in[0] + e_in[1] + e_in[2]);
    let e_scale = e1.abs() + e2.abs() + (al * (al + be)).abs() * sum_abs(&e_in);

    let g1 = -ala * amr * br1 * om;
    let g2 = bea * amr * amr * om;
    let g_in = [al * om * (one - s), be * (one + r - om * s), T::from_f64(2.0)];
    let g3 = -(al + be) * (g_in[0] + g_in[1] + g_in[2]);
    let g_scale = g1.abs() + g2.abs() + (al + be).abs() * sum_abs(&g_in);

    let term = |value: T, scale: T| Term {
        value: value.to_f64(),
        scale: scale.to_f64(),
    };
    TermTriple {
        c: term(sg * (c1 + c2), c_scale),
        e: term(e1 + e2 + e3, e_scale),
        g: term(g1 + g2 + g3, g_scale),
        location: Location::Rho { rho: r.to_f64() },
        form: TermForm::RhoForm,
    }
}

/// α, α_a, β, β_a together with `w_b` and `F_b`, all at `(ρ, 1)`.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct AlphaBeta {
    pub alpha: f64,
    pub alpha_a: f64,
    pub beta: f64,
    pub beta_a: f64,
    pub w_b: f64,
    pub f_b: f64,
}

pub fn alpha_beta_at(w: &CurvatureFunction, f: &CurvatureFunction, rho: f64) -> Result<AlphaBeta, TermError> {
    let wj = w.eval_jet2(rho, 1.0)?;
    let fj = f.eval_jet2(rho, 1.0)?;
    if wj.db == 0.0 {
        return Err(TermError::AlphaUndefined { a: rho, b: 1.0 });
    }
    Ok(AlphaBeta {
        alpha: -wj.da / wj.db,
        alpha_a: -(wj.daa * wj.db - wj.da * wj.dab) / (wj.db * wj.db),
        beta: fj.da / fj.db,
        beta_a: (fj.daa * fj.db - fj.da * fj.dab) / (fj.db * fj.db),
        w_b: wj.db,
        f_b: fj.db,
    })
}

/// The ρ-form at `(ρ, 1)` computed from the jets of `w` and `F`.
pub fn rho_terms_of(
    w: &CurvatureFunction,
    f: &CurvatureFunction,
    sigma: f64,
    rho: f64,
) -> Result<TermTriple, TermError> {
    let ab = alpha_beta_at(w, f, rho)?;
    Ok(rho_terms(ab.alpha, ab.alpha_a, ab.beta, ab.beta_a, sigma, rho))
}
