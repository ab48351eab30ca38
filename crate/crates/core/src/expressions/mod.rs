//! Symmetric homogeneous functions of the principal curvatures `(a, b)`.
//!
//! Functions are parsed from a small grammar (see [`parser`]) and evaluated
//! with second-order forward-mode jets, so every partial derivative up to
//! order two is exact up to rounding.

pub mod jet;
pub mod parser;
pub mod real;

pub use jet::Jet2;
pub use parser::ParseError;
pub use real::{Df64, Real};

use serde::Serialize;
use std::cmp::Ordering;
use std::fmt;
use thiserror::Error;

#[derive(Debug, Clone, PartialEq, Error)]
pub enum EvalError {
    #[error("domain error at (a, b) = ({a}, {b}): {msg}")]
    Domain { a: f64, b: f64, msg: String },
    #[error("no usable sample: the function vanishes at every sample")]
    AllZero,
}

/// Expression tree. The parameter `s` is substituted at parse time.
#[derive(Debug, Clone, PartialEq)]
pub enum Expr {
    A,
    B,
    Const(f64),
    Add(Box<Expr>, Box<Expr>),
    Sub(Box<Expr>, Box<Expr>),
    Mul(Box<Expr>, Box<Expr>),
    Div(Box<Expr>, Box<Expr>),
    Neg(Box<Expr>),
    /// Power with a constant exponent.
    Pow(Box<Expr>, f64),
    Sqrt(Box<Expr>),
}

fn is_integer_exponent(p: f64) -> bool {
    p.fract() == 0.0 && p.abs() <= 1.0e6
}

impl Expr {
    /// Value of an expression free of `a` and `b`.
    pub fn constant_value(&self) -> Option<f64> {
        Some(match self {
            Expr::A | Expr::B => return None,
            Expr::Const(c) => *c,
            Expr::Add(x, y) => x.constant_value()? + y.constant_value()?,
            Expr::Sub(x, y) => x.constant_value()? - y.constant_value()?,
            Expr::Mul(x, y) => x.constant_value()? * y.constant_value()?,
            Expr::Div(x, y) => x.constant_value()? / y.constant_value()?,
            Expr::Neg(x) => -x.constant_value()?,
            Expr::Pow(x, p) => x.constant_value()?.powf(*p),
            Expr::Sqrt(x) => x.constant_value()?.sqrt(),
        })
    }

    /// Homogeneity degree read off the tree, if every sum is balanced.
    ///
    /// Constants have degree 0 but are absorbed by sums with a homogeneous
    /// partner only when they are exactly zero.
    pub fn structural_degree(&self) -> Option<f64> {
        match self {
            Expr::A | Expr::B => Some(1.0),
            Expr::Const(_) => Some(0.0),
            Expr::Add(x, y) | Expr::Sub(x, y) => {
                let zx = x.constant_value() == Some(0.0);
                let zy = y.constant_value() == Some(0.0);
                match (zx, zy) {
                    (true, _) => y.structural_degree(),
                    (_, true) => x.structural_degree(),
                    _ => {
                        let (dx, dy) = (x.structural_degree()?, y.structural_degree()?);
                        ((dx - dy).abs() <= 1e-12 * (1.0 + dx.abs())).then_some(dx)
                    }
                }
            }
            Expr::Mul(x, y) => Some(x.structural_degree()? + y.structural_degree()?),
            Expr::Div(x, y) => Some(x.structural_degree()? - y.structural_degree()?),
            Expr::Neg(x) => x.structural_degree(),
            Expr::Pow(x, p) => Some(x.structural_degree()? * p),
            Expr::Sqrt(x) => Some(x.structural_degree()? / 2.0),
        }
    }

    pub fn eval_jet<T: Real>(&self, a: T, b: T) -> Result<Jet2<T>, EvalError> {
        let dom = |msg: &str| EvalError::Domain {
            a: a.to_f64(),
            b: b.to_f64(),
            msg: msg.to_string(),
        };
        Ok(match self {
            Expr::A => Jet2::var_a(a),
            Expr::B => Jet2::var_b(b),
            Expr::Const(c) => Jet2::constant(T::from_f64(*c)),
            Expr::Add(x, y) => x.eval_jet(a, b)? + y.eval_jet(a, b)?,
            Expr::Sub(x, y) => x.eval_jet(a, b)? - y.eval_jet(a, b)?,
            Expr::Mul(x, y) => x.eval_jet(a, b)? * y.eval_jet(a, b)?,
            Expr::Div(x, y) => {
                let d = y.eval_jet(a, b)?;
                if d.value == T::zero() {
                    return Err(dom("division by zero"));
                }
                x.eval_jet(a, b)? / d
            }
            Expr::Neg(x) => -x.eval_jet(a, b)?,
            Expr::Pow(x, p) => {
                let base = x.eval_jet(a, b)?;
                if is_integer_exponent(*p) {
                    if base.value == T::zero() && *p < 0.0 {
                        return Err(dom("zero raised to a negative power"));
                    }
                    base.powi(*p as i32)
                } else {
                    if base.value.partial_cmp(&T::zero()) != Some(Ordering::Greater) {
                        return Err(dom(&format!("nonpositive base under real power {p}")));
                    }
                    base.powf(*p)
                }
            }
            Expr::Sqrt(x) => {
                let arg = x.eval_jet(a, b)?;
                if arg.value.partial_cmp(&T::zero()) != Some(Ordering::Greater) {
                    return Err(dom("nonpositive argument of sqrt"));
                }
                arg.sqrt()
            }
        })
    }

    fn precedence(&self) -> u8 {
        match self {
            Expr::Add(..) | Expr::Sub(..) => 1,
            Expr::Mul(..) | Expr::Div(..) => 2,
            Expr::Neg(_) => 3,
            Expr::Pow(..) => 4,
            Expr::Const(c) if *c < 0.0 => 3,
            _ => 5,
        }
    }
}

fn fmt_num(x: f64) -> String {
    format!("{x}")
}

impl fmt::Display for Expr {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let wrap = |e: &Expr, min: u8| -> String {
            if e.precedence() < min {
                format!("({e})")
            } else {
                format!("{e}")
            }
        };
        match self {
            Expr::A => write!(f, "a"),
            Expr::B => write!(f, "b"),
            Expr::Const(c) => write!(f, "{}", fmt_num(*c)),
            Expr::Add(x, y) => write!(f, "{}+{}", wrap(x, 1), wrap(y, 2)),
            Expr::Sub(x, y) => write!(f, "{}-{}", wrap(x, 1), wrap(y, 2)),
            Expr::Mul(x, y) => write!(f, "{}*{}", wrap(x, 2), wrap(y, 3)),
            Expr::Div(x, y) => write!(f, "{}/{}", wrap(x, 2), wrap(y, 3)),
            Expr::Neg(x) => write!(f, "-{}", wrap(x, 3)),
            Expr::Pow(x, p) => {
                let base = wrap(x, 5);
                if *p >= 0.0 && is_integer_exponent(*p) {
                    write!(f, "{base}^{}", fmt_num(*p))
                } else {
                    write!(f, "{base}^({})", fmt_num(*p))
                }
            }
            Expr::Sqrt(x) => write!(f, "sqrt({x})"),
        }
    }
}

/// An evaluable symmetric function of `(a, b)` with an optional degree χ.
#[derive(Debug, Clone)]
pub struct CurvatureFunction {
    expr: Expr,
    text: String,
    degree_hint: Option<f64>,
}

/// Parse `text` with the parameter `s` set to `parameter_value`.
///
/// The degree hint is read off the exponents when the tree is balanced.
pub fn parse_expression(text: &str, parameter_value: f64) -> Result<CurvatureFunction, ParseError> {
    let expr = parser::parse(text, parameter_value)?;
    let degree_hint = expr.structural_degree();
    Ok(CurvatureFunction {
        expr,
        text: text.trim().to_string(),
        degree_hint,
    })
}

/// Worst sample of a residual check.
#[derive(Debug, Clone, Copy, Serialize)]
pub struct ResidualReport {
    pub max_rel_residual: f64,
    pub max_abs_residual: f64,
    pub worst: (f64, f64),
}

#[derive(Debug, Clone, Copy, Serialize)]
pub struct DegreeEstimate {
    pub degree: f64,
    /// max − min of the per-sample estimates.
    pub spread: f64,
    pub used_samples: usize,
}

impl CurvatureFunction {
    pub fn from_expr(expr: Expr) -> Self {
        let degree_hint = expr.structural_degree();
        let text = expr.to_string();
        CurvatureFunction {
            expr,
            text,
            degree_hint,
        }
    }

    pub fn with_degree_hint(mut self, chi: Option<f64>) -> Self {
        self.degree_hint = chi;
        self
    }

    pub fn expr(&self) -> &Expr {
        &self.expr
    }

    pub fn text(&self) -> &str {
        &self.text
    }

    pub fn degree_hint(&self) -> Option<f64> {
        self.degree_hint
    }

    pub fn eval(&self, a: f64, b: f64) -> Result<f64, EvalError> {
        Ok(self.eval_jet2(a, b)?.value)
    }

    pub fn eval_jet2(&self, a: f64, b: f64) -> Result<Jet2, EvalError> {
        self.expr.eval_jet(a, b)
    }

    /// Evaluate in another scalar type, e.g. [`Df64`].
    pub fn eval_jet2_in<T: Real>(&self, a: f64, b: f64) -> Result<Jet2<T>, EvalError> {
        self.expr.eval_jet(T::from_f64(a), T::from_f64(b))
    }

    /// Largest relative mismatch of `f(a,b)` against `f(b,a)` (values and swapped partials).
    pub fn check_symmetry(&self, samples: &[(f64, f64)]) -> Result<ResidualReport, EvalError> {
        let mut rep = ResidualReport {
            max_rel_residual: 0.0,
            max_abs_residual: 0.0,
            worst: samples.first().copied().unwrap_or((1.0, 1.0)),
        };
        for &(a, b) in samples {
            let p = self.eval_jet2(a, b)?;
            let q = self.eval_jet2(b, a)?.swapped();
            let pairs = [
                (p.value, q.value),
                (p.da, q.da),
                (p.db, q.db),
                (p.daa, q.daa),
                (p.dab, q.dab),
                (p.dbb, q.dbb),
            ];
            for (u, v) in pairs {
                let abs = (u - v).abs();
                let scale = u.abs().max(v.abs());
                let rel = if scale == 0.0 { 0.0 } else { abs / scale };
                if rel > rep.max_rel_residual {
                    rep.max_rel_residual = rel;
                    rep.worst = (a, b);
                }
                rep.max_abs_residual = rep.max_abs_residual.max(abs);
            }
        }
        Ok(rep)
    }

    /// Residual of Euler's identity `a f_a + b f_b = χ f`.
    ///
    /// The relative residual is taken against `|a f_a| + |b f_b| + |χ f|`.
    pub fn check_euler(&self, chi: f64, samples: &[(f64, f64)]) -> Result<ResidualReport, EvalError> {
        let mut rep = ResidualReport {
            max_rel_residual: 0.0,
            max_abs_residual: 0.0,
            worst: samples.first().copied().unwrap_or((1.0, 1.0)),
        };
        for &(a, b) in samples {
            let j = self.eval_jet2(a, b)?;
            let r = a * j.da + b * j.db - chi * j.value;
            let scale = (a * j.da).abs() + (b * j.db).abs() + (chi * j.value).abs();
            let rel = if scale == 0.0 { 0.0 } else { r.abs() / scale };
            if rel > rep.max_rel_residual {
                rep.max_rel_residual = rel;
                rep.worst = (a, b);
            }
            rep.max_abs_residual = rep.max_abs_residual.max(r.abs());
        }
        Ok(rep)
    }

    /// Residual of `f(t a, t b) = t^χ f(a, b)` over the given scale factors.
    pub fn check_homogeneity(
        &self,
        chi: f64,
        samples: &[(f64, f64)],
        factors: &[f64],
    ) -> Result<ResidualReport, EvalError> {
        let mut rep = ResidualReport {
            max_rel_residual: 0.0,
            max_abs_residual: 0.0,
            worst: samples.first().copied().unwrap_or((1.0, 1.0)),
        };
        for &(a, b) in samples {
            let f = self.eval(a, b)?;
            for &t in factors {
                let g = self.eval(t * a, t * b)?;
                let want = t.powf(chi) * f;
                let abs = (g - want).abs();
                let scale = g.abs().max(want.abs());
                let rel = if scale == 0.0 { 0.0 } else { abs / scale };
                if rel > rep.max_rel_residual {
                    rep.max_rel_residual = rel;
                    rep.worst = (a, b);
                }
                rep.max_abs_residual = rep.max_abs_residual.max(abs);
            }
        }
        Ok(rep)
    }

    /// Median of `(a f_a + b f_b) / f` over samples where `f ≠ 0`.
    pub fn estimate_degree(&self, samples: &[(f64, f64)]) -> Result<DegreeEstimate, EvalError> {
        let mut est = Vec::with_capacity(samples.len());
        for &(a, b) in samples {
            let j = self.eval_jet2(a, b)?;
            let scale = (a * j.da).abs() + (b * j.db).abs();
            if j.value == 0.0 || j.value.abs() <= 1e-14 * scale {
                continue;
            }
            est.push((a * j.da + b * j.db) / j.value);
        }
        if est.is_empty() {
            return Err(EvalError::AllZero);
        }
        est.sort_by(|x, y| x.total_cmp(y));
        let n = est.len();
        let degree = if n % 2 == 1 {
            est[n / 2]
        } else {
            0.5 * (est[n / 2 - 1] + est[n / 2])
        };
        Ok(DegreeEstimate {
            degree,
            spread: est[n - 1] - est[0],
            used_samples: n,
        })
    }

    /// Degree hint if present, otherwise the estimate on a fixed sample set.
    pub fn degree(&self) -> Result<f64, EvalError> {
        match self.degree_hint {
            Some(d) => Ok(d),
            None => Ok(self.estimate_degree(&crate::sampling::default_pairs())?.degree),
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn f(text: &str, s: f64) -> CurvatureFunction {
        parse_expression(text, s).unwrap()
    }

    #[test]
    fn jet_examples() {
        let j = f("(a-b)^2", 0.0).eval_jet2(1.0, 1.0).unwrap();
        assert_eq!((j.value, j.da, j.db), (0.0, 0.0, 0.0));
        assert_eq!((j.daa, j.dab, j.dbb), (2.0, -2.0, 2.0));
        let j = f("a*b", 0.0).eval_jet2(2.0, 3.0).unwrap();
        assert_eq!((j.da, j.db), (3.0, 2.0));
        let j = f("(a^2+b^2)^(1/2)", 0.0).eval_jet2(3.0, 4.0).unwrap();
        assert!((j.value - 5.0).abs() < 1e-14);
        assert!((j.da - 0.6).abs() < 1e-15 && (j.db - 0.8).abs() < 1e-15);
    }

    #[test]
    fn domain_errors() {
        let g = f("(a-b)^(1/2)", 0.0);
        assert!(matches!(g.eval(1.0, 2.0), Err(EvalError::Domain { .. })));
        let g = f("(a-b)^-1", 0.0);
        assert!(matches!(g.eval(1.0, 1.0), Err(EvalError::Domain { .. })));
        // integer powers of negative bases are fine
        assert_eq!(f("(a-b)^3", 0.0).eval(1.0, 2.0).unwrap(), -1.0);
    }

    #[test]
    fn structural_degrees() {
        let cases = [
            ("((a-b)^2*(a+b)^(2*s))/((a*b)^2)", 3.0, Some(4.0)),
            ("(a-b)^2/(a*b)^2", 0.0, Some(-2.0)),
            ("(a-b)^2*(a^2+b^2)*(a*b)^(s-2)/(a+b)", -0.5, Some(-2.0)),
            ("a*b - b*a", 0.0, Some(2.0)),
            ("a + 1", 0.0, None),
            ("sqrt(a*b)", 0.0, Some(1.0)),
        ];
        for (t, s, d) in cases {
            assert_eq!(f(t, s).degree_hint(), d, "{t}");
        }
    }

    #[test]
    fn zero_function_is_trivially_symmetric() {
        let g = f("a*b - b*a", 0.0);
        let rep = g.check_symmetry(&[(1.0, 2.0), (0.3, 7.0)]).unwrap();
        assert_eq!(rep.max_abs_residual, 0.0);
        assert!(matches!(g.estimate_degree(&[(1.0, 2.0)]), Err(EvalError::AllZero)));
    }

    #[test]
    fn euler_examples() {
        let samples = crate::sampling::default_pairs();
        let r = f("a*b", 0.0).check_euler(2.0, &samples).unwrap();
        assert_eq!(r.max_abs_residual, 0.0);
        let r = f("(a+b)^3", 0.0).check_euler(3.0, &samples).unwrap();
        assert!(r.max_rel_residual <= 1e-12);
        let schulze = f("((a-b)^2*(a+b)^(2*s))/((a*b)^2)", 3.0);
        let chi = schulze.degree_hint().unwrap();
        assert_eq!(chi, 4.0);
        assert!(schulze.check_euler(chi, &samples).unwrap().max_rel_residual <= 1e-10);
    }

    #[test]
    fn degree_estimates() {
        let samples = crate::sampling::default_pairs();
        let d = f("(a-b)^2", 0.0).estimate_degree(&samples).unwrap().degree;
        assert!((d - 2.0).abs() < 1e-9);
        let d = f("(a-b)^2/(a*b)^2", 0.0).estimate_degree(&samples).unwrap().degree;
        assert!((d + 2.0).abs() < 1e-9);
        let g = f("(a-b)^2*(a^2+b^2)*(a*b)^(s-2)/(a+b)", -0.5);
        let d = g.estimate_degree(&samples).unwrap().degree;
        assert!((d + 2.0).abs() < 1e-9);
    }

    #[test]
    fn display_round_trips() {
        for t in [
            "(a-b)^2*(a+b)^(2*s)/(a*b)^2",
            "-(a+b)^(-1)",
            "(a-b)^2*(a^3+b^3)*(a*b)^s/(sqrt(a^2+b^2)*(a*b)^2)",
            "a-(b-a)",
            "a/(b*a)",
        ] {
            let g = f(t, -0.7);
            let h = parse_expression(&g.expr().to_string(), 123.0).unwrap();
            for &(a, b) in &[(0.3, 1.7), (2.0, 5.0)] {
                let (u, v) = (g.eval(a, b).unwrap(), h.eval(a, b).unwrap());
                assert!((u - v).abs() <= 1e-14 * u.abs().max(1.0), "{t}: {u} vs {v}");
            }
        }
    }

    #[test]
    fn compensated_evaluation_agrees() {
        let g = f("(a-b)^2*(a+b)^(2*s)/(a*b)^2", 2.7);
        let p = g.eval_jet2(0.37, 1.0).unwrap();
        let q = g.eval_jet2_in::<Df64>(0.37, 1.0).unwrap().to_f64();
        for (u, v) in [(p.value, q.value), (p.da, q.da), (p.dab, q.dab), (p.dbb, q.dbb)] {
            assert!((u - v).abs() <= 1e-13 * u.abs().max(1.0));
        }
    }
}
