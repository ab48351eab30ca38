//! Exact univariate polynomials over ordered fields (ℚ and ℚ(√2)), Sturm
//! sequences, and negativity certificates on `(0, r]`.

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{One, ToPrimitive, Zero};
use serde::Serialize;
use std::cmp::Ordering;
use std::fmt;
use std::ops::{Add, Div, Mul, Neg, Sub};
use thiserror::Error;

/// An ordered field with exact arithmetic.
pub trait OrderedField:
    Clone
    + fmt::Display
    + PartialEq
    + Add<Output = Self>
    + Sub<Output = Self>
    + Mul<Output = Self>
    + Div<Output = Self>
    + Neg<Output = Self>
{
    fn zero() -> Self;
    fn one() -> Self;
    fn from_rational(q: BigRational) -> Self;
    fn sign(&self) -> Ordering;
    fn to_f64(&self) -> f64;

    fn is_zero(&self) -> bool {
        self.sign() == Ordering::Equal
    }
}

impl OrderedField for BigRational {
    fn zero() -> Self {
        Zero::zero()
    }
    fn one() -> Self {
        One::one()
    }
    fn from_rational(q: BigRational) -> Self {
        q
    }
    fn sign(&self) -> Ordering {
        self.cmp(&Zero::zero())
    }
    fn to_f64(&self) -> f64 {
        ToPrimitive::to_f64(self).unwrap_or(f64::NAN)
    }
}

/// `a + b√2` with rational `a`, `b`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct QSqrt2 {
    pub a: BigRational,
    pub b: BigRational,
}

impl QSqrt2 {
    pub fn new(a: BigRational, b: BigRational) -> Self {
        QSqrt2 { a, b }
    }

    pub fn from_ints(a: i64, b: i64) -> Self {
        QSqrt2::new(BigRational::from_integer(a.into()), BigRational::from_integer(b.into()))
    }

    fn conj(&self) -> Self {
        QSqrt2::new(self.a.clone(), -self.b.clone())
    }

    /// `a² − 2b²`.
    fn norm(&self) -> BigRational {
        &self.a * &self.a - BigRational::from_integer(2.into()) * &self.b * &self.b
    }
}

impl fmt::Display for QSqrt2 {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if Zero::is_zero(&self.b) {
            write!(f, "{}", self.a)
        } else {
            write!(f, "{} + {}√2", self.a, self.b)
        }
    }
}

impl Add for QSqrt2 {
    type Output = QSqrt2;
    fn add(self, o: QSqrt2) -> QSqrt2 {
        QSqrt2::new(self.a + o.a, self.b + o.b)
    }
}

impl Sub for QSqrt2 {
    type Output = QSqrt2;
    fn sub(self, o: QSqrt2) -> QSqrt2 {
        QSqrt2::new(self.a - o.a, self.b - o.b)
    }
}

impl Neg for QSqrt2 {
    type Output = QSqrt2;
    fn neg(self) -> QSqrt2 {
        QSqrt2::new(-self.a, -self.b)
    }
}

impl Mul for QSqrt2 {
    type Output = QSqrt2;
    fn mul(self, o: QSqrt2) -> QSqrt2 {
        let two = BigRational::from_integer(2.into());
        QSqrt2::new(&self.a * &o.a + two * &self.b * &o.b, &self.a * &o.b + &self.b * &o.a)
    }
}

impl Div for QSqrt2 {
    type Output = QSqrt2;
    fn div(self, o: QSqrt2) -> QSqrt2 {
        let n = o.norm();
        assert!(!Zero::is_zero(&n), "division by zero in ℚ(√2)");
        let p = self * o.conj();
        QSqrt2::new(p.a / &n, p.b / n)
    }
}

impl OrderedField for QSqrt2 {
    fn zero() -> Self {
        QSqrt2::from_ints(0, 0)
    }
    fn one() -> Self {
        QSqrt2::from_ints(1, 0)
    }
    fn from_rational(q: BigRational) -> Self {
        QSqrt2::new(q, Zero::zero())
    }
    fn sign(&self) -> Ordering {
        let sa = self.a.cmp(&Zero::zero());
        let sb = self.b.cmp(&Zero::zero());
        if sb == Ordering::Equal || sa == sb {
            return if sa == Ordering::Equal { sb } else { sa };
        }
        if sa == Ordering::Equal {
            return sb;
        }
        // opposite signs: compare a² with 2b²
        match self.norm().cmp(&Zero::zero()) {
            Ordering::Greater => sa,
            Ordering::Less => sb,
            Ordering::Equal => Ordering::Equal,
        }
    }
    fn to_f64(&self) -> f64 {
        OrderedField::to_f64(&self.a) + OrderedField::to_f64(&self.b) * std::f64::consts::SQRT_2
    }
}

/// Exact rational from a finite double.
pub fn rational_from_f64(x: f64) -> BigRational {
    BigRational::from_float(x).expect("finite value")
}

pub fn rational(n: i64, d: i64) -> BigRational {
    BigRational::new(BigInt::from(n), BigInt::from(d))
}

/// Polynomial with coefficients in ascending powers.
#[derive(Debug, Clone, PartialEq)]
pub struct Poly<F> {
    coeffs: Vec<F>,
}

impl<F: OrderedField> Poly<F> {
    pub fn new(mut coeffs: Vec<F>) -> Self {
        while coeffs.last().is_some_and(|c| c.is_zero()) {
            coeffs.pop();
        }
        Poly { coeffs }
    }

    pub fn coeffs(&self) -> &[F] {
        &self.coeffs
    }

    pub fn is_zero(&self) -> bool {
        self.coeffs.is_empty()
    }

    /// Degree, or `None` for the zero polynomial.
    pub fn degree(&self) -> Option<usize> {
        self.coeffs.len().checked_sub(1)
    }

    pub fn eval(&self, x: &F) -> F {
        self.coeffs
            .iter()
            .rev()
            .fold(F::zero(), |acc, c| acc * x.clone() + c.clone())
    }

    pub fn derivative(&self) -> Self {
        Poly::new(
            self.coeffs
                .iter()
                .enumerate()
                .skip(1)
                .map(|(i, c)| c.clone() * F::from_rational(BigRational::from_integer((i as i64).into())))
                .collect(),
        )
    }

    /// Remainder of Euclidean division by a nonzero `d`.
    pub fn rem(&self, d: &Self) -> Self {
        let dd = d.degree().expect("division by the zero polynomial");
        let lead = d.coeffs[dd].clone();
        let mut r = self.coeffs.clone();
        while r.len() > dd && !r.is_empty() {
            let k = r.len() - 1;
            let q = r[k].clone() / lead.clone();
            for (i, c) in d.coeffs.iter().enumerate() {
                let idx = k - dd + i;
                r[idx] = r[idx].clone() - q.clone() * c.clone();
            }
            r.pop();
            while r.last().is_some_and(|c| c.is_zero()) {
                r.pop();
            }
        }
        Poly::new(r)
    }

    /// Divide out the largest power of x, returning the exponent removed.
    pub fn strip_x_power(&self) -> (Self, usize) {
        let k = self.coeffs.iter().take_while(|c| c.is_zero()).count();
        (Poly::new(self.coeffs[k..].to_vec()), k)
    }

    /// Sturm sequence `p, p′, −rem(p, p′), …`.
    pub fn sturm_sequence(&self) -> Vec<Self> {
        let mut seq = vec![self.clone(), self.derivative()];
        while !seq.last().unwrap().is_zero() {
            let n = seq.len();
            let r = seq[n - 2].rem(&seq[n - 1]);
            seq.push(-r);
        }
        seq.pop();
        seq
    }

    pub fn to_f64_coeffs(&self) -> Vec<f64> {
        self.coeffs.iter().map(|c| c.to_f64()).collect()
    }
}

impl<F: OrderedField> Neg for Poly<F> {
    type Output = Poly<F>;
    fn neg(self) -> Poly<F> {
        Poly::new(self.coeffs.into_iter().map(|c| -c).collect())
    }
}

impl<F: OrderedField> fmt::Display for Poly<F> {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.coeffs.is_empty() {
            return write!(f, "0");
        }
        let parts: Vec<String> = self
            .coeffs
            .iter()
            .enumerate()
            .filter(|(_, c)| !c.is_zero())
            .map(|(i, c)| match i {
                0 => format!("({c})"),
                1 => format!("({c})ρ"),
                _ => format!("({c})ρ^{i}"),
            })
            .collect();
        write!(f, "{}", parts.join(" + "))
    }
}

/// Sign variations of the Sturm sequence at x (zeros skipped).
pub fn sign_variations<F: OrderedField>(seq: &[Poly<F>], x: &F) -> usize {
    let signs: Vec<Ordering> = seq
        .iter()
        .map(|p| p.eval(x).sign())
        .filter(|s| *s != Ordering::Equal)
        .collect();
    signs.windows(2).filter(|w| w[0] != w[1]).count()
}

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum CertifyError {
    #[error("the polynomial is identically zero")]
    ZeroPolynomial,
    #[error("the interval end must be positive")]
    BadInterval,
}

/// Outcome of [`certify_negative`].
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct NegativityCertificate {
    /// `p < 0` on all of `(0, r]`.
    pub negative: bool,
    /// Distinct roots of `p` in `(0, r)`, by Sturm's theorem.
    pub roots_in_interval: usize,
    /// Power of ρ divided out before counting (positive on the interval).
    pub stripped_power: usize,
    pub sturm_length: usize,
    /// Sign of `p` at `r/2` and at `r`.
    pub sign_at_midpoint: i8,
    pub sign_at_end: i8,
    pub interval_end: String,
    pub field: &'static str,
}

fn sign_i8(o: Ordering) -> i8 {
    match o {
        Ordering::Less => -1,
        Ordering::Equal => 0,
        Ordering::Greater => 1,
    }
}

/// Names the coefficient field in certificates.
pub trait FieldName {
    const NAME: &'static str;
}

impl FieldName for BigRational {
    const NAME: &'static str = "Q";
}

impl FieldName for QSqrt2 {
    const NAME: &'static str = "Q(sqrt2)";
}

/// Exact proof (or refutation) of `p(ρ) < 0` for all `ρ ∈ (0, r]`.
///
/// A factor `ρ^k` is divided out; the remaining polynomial must be nonzero
/// at 0 and at r, have no roots in (0, r) by Sturm counting, and be
/// negative at `r/2`.
pub fn certify_negative<F: OrderedField + FieldName>(
    p: &Poly<F>,
    r: &F,
) -> Result<NegativityCertificate, CertifyError> {
    if p.is_zero() {
        return Err(CertifyError::ZeroPolynomial);
    }
    if r.sign() != Ordering::Greater {
        return Err(CertifyError::BadInterval);
    }
    let (q, k) = p.strip_x_power();
    let seq = q.sturm_sequence();
    let zero = F::zero();
    let v0 = sign_variations(&seq, &zero);
    let vr = sign_variations(&seq, r);
    // Sturm counts roots in (0, r] when q(0) ≠ 0; a root at r is reported via the end sign
    let roots = v0.saturating_sub(vr);
    let mid = r.clone() / F::from_rational(rational(2, 1));
    let sm = sign_i8(q.eval(&mid).sign());
    let se = sign_i8(q.eval(r).sign());
    let roots_open = if se == 0 { roots.saturating_sub(1) } else { roots };
    Ok(NegativityCertificate {
        negative: roots == 0 && se < 0 && sm < 0,
        roots_in_interval: roots_open,
        stripped_power: k,
        sturm_length: seq.len(),
        sign_at_midpoint: sm,
        sign_at_end: se,
        interval_end: r.to_string(),
        field: F::NAME,
    })
}

/// Integer-coefficient polynomial over ℚ.
pub fn int_poly(coeffs: &[i64]) -> Poly<BigRational> {
    Poly::new(coeffs.iter().map(|&c| rational(c, 1)).collect())
}

/// Dense f64 sign scan of a polynomial on `(0, r]`: returns the largest value.
pub fn dense_scan_max(coeffs: &[f64], r: f64, n: usize) -> f64 {
    (1..=n)
        .map(|i| horner(coeffs, r * i as f64 / n as f64))
        .fold(f64::NEG_INFINITY, f64::max)
}

pub fn horner(coeffs: &[f64], x: f64) -> f64 {
    coeffs.iter().rev().fold(0.0, |acc, c| acc * x + c)
}

/// Parse one coefficient: an integer, `p/q`, or a decimal (read exactly).
pub fn parse_rational(s: &str) -> Option<BigRational> {
    let s = s.trim();
    if let Some((n, d)) = s.split_once('/') {
        let n: BigInt = n.trim().parse().ok()?;
        let d: BigInt = d.trim().parse().ok()?;
        if d.is_zero() {
            return None;
        }
        return Some(BigRational::new(n, d));
    }
    if let Ok(n) = s.parse::<BigInt>() {
        return Some(BigRational::from_integer(n));
    }
    let x: f64 = s.parse().ok()?;
    x.is_finite().then(|| rational_from_f64(x))
}
