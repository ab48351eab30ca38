//! Scalar types used by the evaluator: plain `f64` and a double-double
//! `Df64` for compensated evaluation close to sign thresholds.

use std::cmp::Ordering;
use std::fmt;
use std::ops::{Add, Div, Mul, Neg, Sub};

/// Minimal real-number interface needed by [`Jet2`](super::Jet2).
pub trait Real:
    Copy
    + fmt::Debug
    + PartialOrd
    + Add<Output = Self>
    + Sub<Output = Self>
    + Mul<Output = Self>
    + Div<Output = Self>
    + Neg<Output = Self>
{
    fn from_f64(x: f64) -> Self;
    fn to_f64(self) -> f64;
    /// Unit roundoff of the type.
    fn epsilon() -> f64;
    fn sqrt(self) -> Self;
    fn exp(self) -> Self;
    fn ln(self) -> Self;

    fn zero() -> Self {
        Self::from_f64(0.0)
    }
    fn one() -> Self {
        Self::from_f64(1.0)
    }
    fn abs(self) -> Self {
        if self < Self::zero() {
            -self
        } else {
            self
        }
    }
    /// Integer power by repeated squaring; `0^0 = 1`.
    fn powi(self, n: i32) -> Self {
        let mut base = if n < 0 { Self::one() / self } else { self };
        let mut e = n.unsigned_abs();
        let mut acc = Self::one();
        while e > 0 {
            if e & 1 == 1 {
                acc = acc * base;
            }
            base = base * base;
            e >>= 1;
        }
        acc
    }
    /// Real power for a positive base.
    fn powf(self, p: f64) -> Self {
        (self.ln() * Self::from_f64(p)).exp()
    }
}

impl Real for f64 {
    fn from_f64(x: f64) -> Self {
        x
    }
    fn to_f64(self) -> f64 {
        self
    }
    fn epsilon() -> f64 {
        f64::EPSILON
    }
    fn sqrt(self) -> Self {
        f64::sqrt(self)
    }
    fn exp(self) -> Self {
        f64::exp(self)
    }
    fn ln(self) -> Self {
        f64::ln(self)
    }
    fn powi(self, n: i32) -> Self {
        f64::powi(self, n)
    }
    fn powf(self, p: f64) -> Self {
        f64::powf(self, p)
    }
}

/// Unevaluated sum `hi + lo` with `|lo| ≤ ulp(hi)/2` (about 106 bits).
#[derive(Clone, Copy, Debug, Default, PartialEq)]
pub struct Df64 {
    pub hi: f64,
    pub lo: f64,
}

#[inline]
fn two_sum(a: f64, b: f64) -> (f64, f64) {
    let s = a + b;
    let bb = s - a;
    let err = (a - (s - bb)) + (b - bb);
    (s, err)
}

#[inline]
fn quick_two_sum(a: f64, b: f64) -> (f64, f64) {
    let s = a + b;
    (s, b - (s - a))
}

#[inline]
fn two_prod(a: f64, b: f64) -> (f64, f64) {
    let p = a * b;
    (p, a.mul_add(b, -p))
}

const LN2: Df64 = Df64 {
    hi: std::f64::consts::LN_2,
    lo: 2.319_046_813_846_299_6e-17,
};

impl Df64 {
    pub const fn new(hi: f64, lo: f64) -> Self {
        Df64 { hi, lo }
    }

    fn mul_f64(self, b: f64) -> Self {
        let (p, e) = two_prod(self.hi, b);
        let (hi, lo) = quick_two_sum(p, e + self.lo * b);
        Df64 { hi, lo }
    }

    fn ldexp(self, k: i32) -> Self {
        let f = 2f64.powi(k);
        Df64 {
            hi: self.hi * f,
            lo: self.lo * f,
        }
    }
}

impl From<f64> for Df64 {
    fn from(x: f64) -> Self {
        Df64 { hi: x, lo: 0.0 }
    }
}

impl PartialOrd for Df64 {
    fn partial_cmp(&self, other: &Self) -> Option<Ordering> {
        match self.hi.partial_cmp(&other.hi) {
            Some(Ordering::Equal) => self.lo.partial_cmp(&other.lo),
            o => o,
        }
    }
}

impl Add for Df64 {
    type Output = Df64;
    fn add(self, b: Df64) -> Df64 {
        let (s, e) = two_sum(self.hi, b.hi);
        let (t, f) = two_sum(self.lo, b.lo);
        let (s, e) = quick_two_sum(s, e + t);
        let (hi, lo) = quick_two_sum(s, e + f);
        Df64 { hi, lo }
    }
}

impl Neg for Df64 {
    type Output = Df64;
    fn neg(self) -> Df64 {
        Df64 {
            hi: -self.hi,
            lo: -self.lo,
        }
    }
}

impl Sub for Df64 {
    type Output = Df64;
    fn sub(self, b: Df64) -> Df64 {
        self + (-b)
    }
}

impl Mul for Df64 {
    type Output = Df64;
    fn mul(self, b: Df64) -> Df64 {
        let (p, e) = two_prod(self.hi, b.hi);
        let e = e + (self.hi * b.lo + self.lo * b.hi);
        let (hi, lo) = quick_two_sum(p, e);
        Df64 { hi, lo }
    }
}

impl Div for Df64 {
    type Output = Df64;
    fn div(self, b: Df64) -> Df64 {
        let q1 = self.hi / b.hi;
        let r = self - b.mul_f64(q1);
        let q2 = r.hi / b.hi;
        let r = r - b.mul_f64(q2);
        let q3 = r.hi / b.hi;
        let (hi, lo) = quick_two_sum(q1, q2);
        Df64 { hi, lo } + Df64::from(q3)
    }
}

impl Real for Df64 {
    fn from_f64(x: f64) -> Self {
        Df64::from(x)
    }
    fn to_f64(self) -> f64 {
        self.hi + self.lo
    }
    fn epsilon() -> f64 {
        2f64.powi(-104)
    }
    fn sqrt(self) -> Self {
        if self.hi <= 0.0 {
            return Df64::from(f64::sqrt(self.hi));
        }
        let s = Df64::from(self.hi.sqrt());
        // one Newton step doubles the number of correct bits
        s + (self - s * s) / s.mul_f64(2.0)
    }
    fn exp(self) -> Self {
        if self.hi > 709.0 {
            return Df64::from(f64::INFINITY);
        }
        if self.hi < -745.0 {
            return Df64::from(0.0);
        }
        let k = (self.hi / LN2.hi).round();
        let r = self - LN2.mul_f64(k);
        // shrink further so that the Taylor series converges fast
        let m = 5;
        let r = r.ldexp(-m);
        let mut term = Df64::from(1.0);
        let mut sum = Df64::from(1.0);
        for i in 1..=24 {
            term = term * r / Df64::from(i as f64);
            sum = sum + term;
            if term.hi.abs() < 1e-36 {
                break;
            }
        }
        for _ in 0..m {
            sum = sum * sum;
        }
        sum.ldexp(k as i32)
    }
    fn ln(self) -> Self {
        if self.hi <= 0.0 {
            return Df64::from(f64::NAN);
        }
        let mut y = Df64::from(self.hi.ln());
        for _ in 0..2 {
            y = y + self * (-y).exp() - Df64::from(1.0);
        }
        y
    }
}

impl fmt::Display for Df64 {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{:e}", self.hi + self.lo)
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn df64_exp_one_matches_known_digits() {
        let e = Df64::from(1.0).exp();
        assert_eq!(e.hi, std::f64::consts::E);
        // exp loses a few bits to the squarings; about 100 correct bits remain
        assert!((e.lo - 1.445_646_891_729_250_2e-16).abs() < 1e-29);
    }

    #[test]
    fn df64_ln_inverts_exp() {
        for &x in &[0.3, 1.0, 2.5, 17.0, 1e-3] {
            let v = Df64::from(x);
            let back = v.ln().exp();
            let rel = ((back - v) / v).to_f64().abs();
            assert!(rel < 1e-29, "x={x} rel={rel}");
        }
    }

    #[test]
    fn df64_sqrt_two_squared() {
        let two = Df64::from(2.0);
        let s = two.sqrt();
        let r = (s * s - two).to_f64().abs();
        assert!(r < 1e-31);
    }

    #[test]
    fn df64_catches_cancellation_f64_misses() {
        // (1 + 1e-20) - 1 is lost in f64
        let x = Df64::from(1.0) + Df64::from(1e-20);
        let d = (x - Df64::from(1.0)).to_f64();
        assert!((d - 1e-20).abs() < 1e-35);
    }

    #[test]
    fn powi_handles_negative_exponents_and_zero() {
        assert_eq!(Real::powi(2.0f64, -2), 0.25);
        assert_eq!(Real::powi(0.0f64, 0), 1.0);
        let p = Df64::from(3.0).powi(-3).to_f64();
        assert!((p - 1.0 / 27.0).abs() < 1e-17);
    }
}
