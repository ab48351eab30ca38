//! Second-order forward-mode jets in two variables.

use super::real::Real;
use serde::Serialize;
use std::ops::{Add, Div, Mul, Neg, Sub};

/// Value, gradient and Hessian of a function of `(a, b)`.
///
/// The mixed partial is stored once, so `f_ab = f_ba` by construction.
#[derive(Clone, Copy, Debug, PartialEq, Serialize)]
pub struct Jet2<T = f64> {
    pub value: T,
    pub da: T,
    pub db: T,
    pub daa: T,
    pub dab: T,
    pub dbb: T,
}

impl<T: Real> Jet2<T> {
    pub fn constant(c: T) -> Self {
        let z = T::zero();
        Jet2 {
            value: c,
            da: z,
            db: z,
            daa: z,
            dab: z,
            dbb: z,
        }
    }

    /// The coordinate function `a` at the point `a`.
    pub fn var_a(a: T) -> Self {
        Jet2 {
            da: T::one(),
            ..Self::constant(a)
        }
    }

    /// The coordinate function `b` at the point `b`.
    pub fn var_b(b: T) -> Self {
        Jet2 {
            db: T::one(),
            ..Self::constant(b)
        }
    }

    /// Compose with a scalar function `g`, given `g(x), g'(x), g''(x)` at `x = self.value`.
    pub fn chain(self, g0: T, g1: T, g2: T) -> Self {
        Jet2 {
            value: g0,
            da: g1 * self.da,
            db: g1 * self.db,
            daa: g2 * self.da * self.da + g1 * self.daa,
            dab: g2 * self.da * self.db + g1 * self.dab,
            dbb: g2 * self.db * self.db + g1 * self.dbb,
        }
    }

    /// Integer power, valid for any sign of the base (negative `n` needs a nonzero base).
    pub fn powi(self, n: i32) -> Self {
        let x = self.value;
        match n {
            0 => Self::constant(T::one()),
            1 => self,
            _ => {
                let nf = T::from_f64(n as f64);
                let g1 = nf * x.powi(n - 1);
                let g2 = nf * T::from_f64((n - 1) as f64) * x.powi(n - 2);
                self.chain(x.powi(n), g1, g2)
            }
        }
    }

    /// Real power; the caller guarantees a positive base.
    pub fn powf(self, p: f64) -> Self {
        let x = self.value;
        let g0 = x.powf(p);
        let pt = T::from_f64(p);
        let g1 = pt * g0 / x;
        let g2 = pt * T::from_f64(p - 1.0) * g0 / (x * x);
        self.chain(g0, g1, g2)
    }

    /// Square root; the caller guarantees a positive argument.
    pub fn sqrt(self) -> Self {
        let s = self.value.sqrt();
        let half = T::from_f64(0.5);
        let g1 = half / s;
        let g2 = -(half * g1) / self.value;
        self.chain(s, g1, g2)
    }

    pub fn recip(self) -> Self {
        let x = self.value;
        let inv = T::one() / x;
        self.chain(inv, -(inv * inv), T::from_f64(2.0) * inv * inv * inv)
    }

    /// Swap the roles of `a` and `b`.
    pub fn swapped(self) -> Self {
        Jet2 {
            value: self.value,
            da: self.db,
            db: self.da,
            daa: self.dbb,
            dab: self.dab,
            dbb: self.daa,
        }
    }

    pub fn to_f64(self) -> Jet2<f64> {
        Jet2 {
            value: self.value.to_f64(),
            da: self.da.to_f64(),
            db: self.db.to_f64(),
            daa: self.daa.to_f64(),
            dab: self.dab.to_f64(),
            dbb: self.dbb.to_f64(),
        }
    }
}

impl<T: Real> Add for Jet2<T> {
    type Output = Self;
    fn add(self, o: Self) -> Self {
        Jet2 {
            value: self.value + o.value,
            da: self.da + o.da,
            db: self.db + o.db,
            daa: self.daa + o.daa,
            dab: self.dab + o.dab,
            dbb: self.dbb + o.dbb,
        }
    }
}

impl<T: Real> Sub for Jet2<T> {
    type Output = Self;
    fn sub(self, o: Self) -> Self {
        self + (-o)
    }
}

impl<T: Real> Neg for Jet2<T> {
    type Output = Self;
    fn neg(self) -> Self {
        Jet2 {
            value: -self.value,
            da: -self.da,
            db: -self.db,
            daa: -self.daa,
            dab: -self.dab,
            dbb: -self.dbb,
        }
    }
}

impl<T: Real> Mul for Jet2<T> {
    type Output = Self;
    fn mul(self, o: Self) -> Self {
        Jet2 {
            value: self.value * o.value,
            da: self.da * o.value + self.value * o.da,
            db: self.db * o.value + self.value * o.db,
            daa: self.daa * o.value + T::from_f64(2.0) * self.da * o.da + self.value * o.daa,
            dab: self.dab * o.value + self.da * o.db + self.db * o.da + self.value * o.dab,
            dbb: self.dbb * o.value + T::from_f64(2.0) * self.db * o.db + self.value * o.dbb,
        }
    }
}

impl<T: Real> Div for Jet2<T> {
    type Output = Self;
    #[allow(clippy::suspicious_arithmetic_impl)]
    fn div(self, o: Self) -> Self {
        self * o.recip()
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn square_of_difference_at_diagonal() {
        let d = Jet2::var_a(1.0) - Jet2::var_b(1.0);
        let j = d.powi(2);
        assert_eq!(
            (j.value, j.da, j.db, j.daa, j.dab, j.dbb),
            (0.0, 0.0, 0.0, 2.0, -2.0, 2.0)
        );
    }

    #[test]
    fn quotient_rule() {
        // a / b at (2, 4)
        let j = Jet2::var_a(2.0) / Jet2::var_b(4.0);
        assert!((j.value - 0.5).abs() < 1e-15);
        assert!((j.da - 0.25).abs() < 1e-15);
        assert!((j.db + 0.125).abs() < 1e-15);
        assert!((j.dab + 1.0 / 16.0).abs() < 1e-15);
        assert!((j.dbb - 2.0 * 2.0 / 64.0).abs() < 1e-15);
    }

    #[test]
    fn powf_matches_powi_on_integers() {
        let x = Jet2::var_a(1.7) + Jet2::var_b(0.4);
        let p = x.powf(3.0);
        let q = x.powi(3);
        for (u, v) in [(p.value, q.value), (p.da, q.da), (p.daa, q.daa), (p.dab, q.dab)] {
            assert!((u - v).abs() < 1e-12 * v.abs().max(1.0));
        }
    }
}
