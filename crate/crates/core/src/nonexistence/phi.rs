//! Φ = (δΦ₁ + Φ₂)/Φ₃ for `H^σ` and `|A|^σ`, the δ-search for σ_δ and the
//! feasibility checks behind the hand bounds.

use super::poly::{certify_negative, horner, rational, rational_from_f64, NegativityCertificate, Poly, QSqrt2};
use super::NonexistenceError;
use crate::conditions::rho_terms;
use crate::vanishing::{alpha_vanishing_beta, mean_root_onset, roots_mean, roots_norm, sigma_star};
use crate::velocities::VelocityFamily;
use num_rational::BigRational;
use serde::Serialize;
use std::fmt;
use std::ops::{Add, Mul, Neg, Sub};
use std::str::FromStr;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize)]
#[serde(rename_all = "lowercase")]
pub enum PhiFamily {
    Mean,
    Norm,
}

impl PhiFamily {
    pub fn velocity(self) -> VelocityFamily {
        match self {
            PhiFamily::Mean => VelocityFamily::Mean,
            PhiFamily::Norm => VelocityFamily::Norm,
        }
    }

    /// β = F_a/F_b at `(ρ, 1)` and its ρ-derivative.
    fn beta(self, rho: f64) -> (f64, f64) {
        match self {
            PhiFamily::Mean => (1.0, 0.0),
            PhiFamily::Norm => (rho, 1.0),
        }
    }

    /// Smallest σ₀ for which the vanishing α has a root in (0, 1).
    pub fn root_onset(self) -> f64 {
        match self {
            PhiFamily::Mean => mean_root_onset(),
            PhiFamily::Norm => sigma_star(),
        }
    }

    /// Smaller root of the vanishing α at σ₀, if any.
    pub fn rho0(self, sigma0: f64) -> Option<f64> {
        let roots = match self {
            PhiFamily::Mean => roots_mean(sigma0),
            PhiFamily::Norm => roots_norm(sigma0),
        };
        roots.ok()?.first().map(|r| r.root)
    }

    /// `(σ₀, δ)` of the hand-derived bound σ_δ = σ₀ + δ.
    pub fn hand_bound(self) -> (f64, f64) {
        match self {
            PhiFamily::Mean => (6.0, 1.0),
            PhiFamily::Norm => (10.0, 1.0),
        }
    }
}

impl fmt::Display for PhiFamily {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            PhiFamily::Mean => "mean",
            PhiFamily::Norm => "norm",
        })
    }
}

impl FromStr for PhiFamily {
    type Err = NonexistenceError;
    fn from_str(s: &str) -> Result<Self, Self::Err> {
        match s.to_ascii_lowercase().as_str() {
            "mean" => Ok(PhiFamily::Mean),
            "norm" => Ok(PhiFamily::Norm),
            _ => Err(NonexistenceError::NoPhiFamily(s.to_string())),
        }
    }
}

impl TryFrom<VelocityFamily> for PhiFamily {
    type Error = NonexistenceError;
    fn try_from(f: VelocityFamily) -> Result<Self, Self::Error> {
        match f {
            VelocityFamily::Mean => Ok(PhiFamily::Mean),
            VelocityFamily::Norm => Ok(PhiFamily::Norm),
            other => Err(NonexistenceError::NoPhiFamily(other.name().to_string())),
        }
    }
}

/// Coefficient ring for the Φ polynomials: f64, ℚ or ℚ(√2).
pub trait Coef: Clone + Add<Output = Self> + Sub<Output = Self> + Mul<Output = Self> + Neg<Output = Self> {
    fn int(n: i64) -> Self;
}

impl Coef for f64 {
    fn int(n: i64) -> Self {
        n as f64
    }
}

impl Coef for BigRational {
    fn int(n: i64) -> Self {
        rational(n, 1)
    }
}

impl Coef for QSqrt2 {
    fn int(n: i64) -> Self {
        QSqrt2::from_ints(n, 0)
    }
}

fn pmul<T: Coef>(p: &[T], q: &[T]) -> Vec<T> {
    let mut out = vec![T::int(0); p.len() + q.len() - 1];
    for (i, a) in p.iter().enumerate() {
        for (j, b) in q.iter().enumerate() {
            out[i + j] = out[i + j].clone() + a.clone() * b.clone();
        }
    }
    out
}

/// `a·s² + b·s + c` for integer a, b, c.
fn quad<T: Coef>(s: &T, a: i64, b: i64, c: i64) -> T {
    T::int(a) * s.clone() * s.clone() + T::int(b) * s.clone() + T::int(c)
}

/// Φ₁ in ascending powers of ρ.
pub fn phi1_coeffs<T: Coef>(family: PhiFamily, s0: &T) -> Vec<T> {
    let i = T::int;
    let om = i(1) - s0.clone();
    let (sq, last) = match family {
        // (ρ−1)(ρ²+1)²(ρ² + (1−σ₀)ρ + σ₀)
        PhiFamily::Mean => (vec![i(1), i(0), i(2), i(0), i(1)], vec![s0.clone(), om, i(1)]),
        // (ρ−1)(ρ³+1)²(ρ³ + (1−σ₀)ρ + σ₀)
        PhiFamily::Norm => (
            vec![i(1), i(0), i(0), i(2), i(0), i(0), i(1)],
            vec![s0.clone(), om, i(0), i(1)],
        ),
    };
    pmul(&pmul(&[i(-1), i(1)], &sq), &last)
}

/// Φ₂ in ascending powers of ρ.
pub fn phi2_coeffs<T: Coef>(family: PhiFamily, s0: &T) -> Vec<T> {
    let q = |a, b, c| quad(s0, a, b, c);
    match family {
        PhiFamily::Mean => vec![
            T::int(0),
            q(0, 3, -1),
            q(-4, 4, 0),
            q(8, -9, 7),
            q(-4, 0, 4),
            q(0, 5, 1),
            q(0, -4, 4),
            q(0, 1, 1),
        ],
        PhiFamily::Norm => vec![
            T::int(0),
            q(0, 3, -1),
            q(0, -3, 3),
            q(-5, 9, -4),
            q(13, -19, 12),
            q(-14, 22, -8),
            q(10, -22, 12),
            q(-5, 15, -4),
            q(1, -5, 4),
            q(0, -1, 1),
            q(0, 1, 1),
        ],
    }
}

/// Φ₃ (positive on (0, 1) for σ₀ > 1) in ascending powers of ρ.
pub fn phi3_coeffs<T: Coef>(family: PhiFamily, s0: &T) -> Vec<T> {
    let i = T::int;
    let om = i(1) - s0.clone();
    let inner = match family {
        PhiFamily::Mean => vec![s0.clone(), om, i(1)],
        PhiFamily::Norm => vec![s0.clone(), om, i(0), i(1)],
    };
    let base = pmul(&[i(0), i(0), i(1), i(-2), i(1)], &[s0.clone() - i(1)]);
    pmul(&base, &pmul(&inner, &inner))
}

/// `δΦ₁ + Φ₂` in ascending powers of ρ.
pub fn phi_tilde_coeffs<T: Coef>(family: PhiFamily, s0: &T, delta: &T) -> Vec<T> {
    let p1 = phi1_coeffs(family, s0);
    let p2 = phi2_coeffs(family, s0);
    let n = p1.len().max(p2.len());
    (0..n)
        .map(|k| {
            let a = p1.get(k).cloned().unwrap_or_else(|| T::int(0));
            let b = p2.get(k).cloned().unwrap_or_else(|| T::int(0));
            delta.clone() * a + b
        })
        .collect()
}

/// Φ₁, Φ₂, Φ₃ at σ₀ with ρ₀, the first root of the matching vanishing α.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct PhiDecomposition {
    pub family: PhiFamily,
    pub sigma0: f64,
    pub phi1: Vec<f64>,
    pub phi2: Vec<f64>,
    pub phi3: Vec<f64>,
    pub rho0: Option<f64>,
}

impl PhiDecomposition {
    pub fn new(family: PhiFamily, sigma0: f64) -> Self {
        PhiDecomposition {
            family,
            sigma0,
            phi1: phi1_coeffs(family, &sigma0),
            phi2: phi2_coeffs(family, &sigma0),
            phi3: phi3_coeffs(family, &sigma0),
            rho0: family.rho0(sigma0),
        }
    }

    pub fn eval(&self, rho: f64, delta: f64) -> f64 {
        (delta * horner(&self.phi1, rho) + horner(&self.phi2, rho)) / horner(&self.phi3, rho)
    }
}

/// Φ(ρ, σ₀, δ) from the polynomials.
pub fn phi(family: PhiFamily, rho: f64, sigma0: f64, delta: f64) -> (f64, PhiDecomposition) {
    let d = PhiDecomposition::new(family, sigma0);
    (d.eval(rho, delta), d)
}

/// Φ assembled directly: `−G^α_β / ((1 − αρ)(1 − ρ)(1 + βρ))` with the
/// vanishing α at σ₀, its ρ-derivative, and power σ₀ + δ in G.
pub fn phi_assembled(family: PhiFamily, rho: f64, sigma0: f64, delta: f64) -> f64 {
    let (beta, beta_a) = family.beta(rho);
    let alpha = alpha_vanishing_beta(|r| family.beta(r).0, sigma0, rho);
    let alpha_a = vanishing_alpha_derivative(family, sigma0, rho);
    let g = rho_terms(alpha, alpha_a, beta, beta_a, sigma0 + delta, rho).g.value;
    -g / ((1.0 - alpha * rho) * (1.0 - rho) * (1.0 + beta * rho))
}

/// dα_v/dρ by the quotient rule on `N/D`.
fn vanishing_alpha_derivative(family: PhiFamily, s: f64, r: f64) -> f64 {
    let (n, dn, d, dd) = match family {
        PhiFamily::Mean => (
            1.0 + r - r * s + r * r * s,
            1.0 - s + 2.0 * r * s,
            r * s - r * r * s + r.powi(3) + r * r,
            s - 2.0 * r * s + 3.0 * r * r + 2.0 * r,
        ),
        PhiFamily::Norm => (
            1.0 + r * r - r * r * s + r.powi(3) * s,
            2.0 * r - 2.0 * r * s + 3.0 * r * r * s,
            r * s - r * r * s + r.powi(4) + r * r,
            s - 2.0 * r * s + 4.0 * r.powi(3) + 2.0 * r,
        ),
    };
    (dn * d - n * dd) / (d * d)
}

/// Maximum subdivision depth of [`negative_on`].
pub const MAX_DEPTH: u32 = 60;
/// Maximum number of intervals examined by [`negative_on`].
pub const MAX_INTERVALS: usize = 1 << 22;
const INITIAL_SEGMENTS: usize = 1024;

/// `p < 0` on `[0, r]` by subdivision. Each interval is settled by a
/// first-order bound (midpoint value plus a slope bound) or, failing that,
/// a second-order one (midpoint value and derivative plus a curvature
/// bound), with a rounding-error bound on every evaluated quantity. The
/// second-order test keeps the number of live intervals bounded near a
/// double root. An interval still undecided at [`MAX_DEPTH`], or a search
/// exceeding [`MAX_INTERVALS`], counts as not negative.
pub fn negative_on(coeffs: &[f64], r: f64) -> bool {
    let n = coeffs.len() as f64;
    let gamma = 4.0 * n * f64::EPSILON;
    let deriv: Vec<f64> = coeffs.iter().enumerate().skip(1).map(|(i, c)| i as f64 * c).collect();
    let magnitude = |cs: &[f64], x: f64| cs.iter().rev().fold(0.0, |acc, c| acc * x.abs() + c.abs());
    let check = |l: f64, h: f64| -> Option<bool> {
        let m = 0.5 * (l + h);
        let hw = 0.5 * (h - l);
        let v = horner(coeffs, m);
        let err = gamma * magnitude(coeffs, m);
        if v - err >= 0.0 {
            return Some(false);
        }
        let x = l.abs().max(h.abs());
        let slope = magnitude(&deriv, x);
        if v + err + slope * hw < 0.0 {
            return Some(true);
        }
        let dv = horner(&deriv, m);
        let derr = gamma * magnitude(&deriv, m);
        let curvature: f64 = deriv
            .iter()
            .enumerate()
            .skip(1)
            .map(|(i, c)| i as f64 * c.abs() * x.powi(i as i32 - 1))
            .sum();
        let bound = v + err + (dv.abs() + derr) * hw + 0.5 * curvature * hw * hw;
        // guard the bound itself against rounding
        if bound + 4.0 * f64::EPSILON * bound.abs() < 0.0 {
            Some(true)
        } else {
            None
        }
    };
    if horner(coeffs, r) >= 0.0 {
        return false;
    }
    let mut stack: Vec<(f64, f64, u32)> = (0..INITIAL_SEGMENTS)
        .map(|i| {
            let l = r * i as f64 / INITIAL_SEGMENTS as f64;
            let h = r * (i + 1) as f64 / INITIAL_SEGMENTS as f64;
            (l, h, 0)
        })
        .collect();
    let mut examined = 0usize;
    while let Some((l, h, depth)) = stack.pop() {
        examined += 1;
        if examined > MAX_INTERVALS {
            return false;
        }
        match check(l, h) {
            Some(true) => {}
            Some(false) => return false,
            None if depth >= MAX_DEPTH => return false,
            None => {
                let m = 0.5 * (l + h);
                stack.push((l, m, depth + 1));
                stack.push((m, h, depth + 1));
            }
        }
    }
    true
}

/// Result of the δ-search.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct SigmaDelta {
    pub family: PhiFamily,
    pub sigma0: f64,
    pub rho0: f64,
    /// Smallest certified δ (upper end of the final bisection bracket).
    pub delta: f64,
    /// Lower end of the final bracket: not certified.
    pub delta_lower: f64,
    pub sigma_delta: f64,
    pub tolerance: f64,
    pub method: &'static str,
    /// Exact Sturm certificate at `delta`, when ρ₀ is exactly representable.
    pub exact: Option<NegativityCertificate>,
}

/// Upper end of the δ bracket.
pub const DELTA_CAP: f64 = 2.0;
/// Default δ-search tolerance.
pub const DELTA_TOL: f64 = 1e-4;

fn tilde_f64(family: PhiFamily, s0: f64, delta: f64) -> Vec<f64> {
    phi_tilde_coeffs(family, &s0, &delta)
}

/// Smallest δ ∈ [0, 2] (to `tolerance`) with `δΦ₁ + Φ₂ < 0` on `(0, ρ₀]`.
pub fn find_sigma_delta(family: PhiFamily, sigma0: f64, tolerance: f64) -> Result<SigmaDelta, NonexistenceError> {
    if sigma0 < family.root_onset() * (1.0 - 1e-14) {
        return Err(NonexistenceError::BelowOnset {
            sigma0,
            onset: family.root_onset(),
        });
    }
    let rho0 = family.rho0(sigma0).ok_or(NonexistenceError::BelowOnset {
        sigma0,
        onset: family.root_onset(),
    })?;
    let neg = |d: f64| negative_on(&tilde_f64(family, sigma0, d), rho0);
    if !neg(DELTA_CAP) {
        return Err(NonexistenceError::NoDelta { cap: DELTA_CAP });
    }
    let (lo, hi) = if neg(0.0) {
        (0.0, 0.0)
    } else {
        crate::numeric::bisect_predicate(neg, 0.0, DELTA_CAP, tolerance)
    };
    Ok(SigmaDelta {
        family,
        sigma0,
        rho0,
        delta: hi,
        delta_lower: lo,
        sigma_delta: sigma0 + hi,
        tolerance,
        method: "bisection on δ; subdivision with derivative bound on (0, ρ₀]",
        exact: exact_certificate(family, sigma0, rho0, hi),
    })
}

/// Sign feasibility of `δΦ₁ + Φ₂ < 0` on `(0, ρ₀]` for fixed σ₀, δ.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct Feasibility {
    pub family: PhiFamily,
    pub sigma0: f64,
    pub delta: f64,
    pub sigma_delta: f64,
    pub rho0: f64,
    pub negative: bool,
    pub exact: Option<NegativityCertificate>,
}

pub fn feasibility(family: PhiFamily, sigma0: f64, delta: f64) -> Result<Feasibility, NonexistenceError> {
    let rho0 = family.rho0(sigma0).ok_or(NonexistenceError::BelowOnset {
        sigma0,
        onset: family.root_onset(),
    })?;
    let exact = exact_certificate(family, sigma0, rho0, delta);
    let numeric = negative_on(&tilde_f64(family, sigma0, delta), rho0);
    Ok(Feasibility {
        family,
        sigma0,
        delta,
        sigma_delta: sigma0 + delta,
        rho0,
        negative: exact.as_ref().map_or(numeric, |c| c.negative && numeric),
        exact,
    })
}

/// Exact certificate when ρ₀ is known exactly: σ₀ = 3 + 2√2 for the mean
/// family (ρ₀ = √2 − 1, over ℚ(√2)), or a rational ρ₀ with small
/// denominator that is an exact root of the numerator (over ℚ).
fn exact_certificate(family: PhiFamily, sigma0: f64, rho0: f64, delta: f64) -> Option<NegativityCertificate> {
    let d = rational_from_f64(delta);
    if family == PhiFamily::Mean && sigma0 == mean_root_onset() {
        let s0 = QSqrt2::from_ints(3, 2);
        let r0 = QSqrt2::from_ints(-1, 1);
        let dq = QSqrt2::new(d, rational(0, 1));
        let p = Poly::new(phi_tilde_coeffs(family, &s0, &dq));
        return certify_negative(&p, &r0).ok();
    }
    let s0 = rational_from_f64(sigma0);
    let r0 = exact_rational_root(family, &s0, rho0)?;
    let p = Poly::new(phi_tilde_coeffs(family, &s0, &d));
    certify_negative(&p, &r0).ok()
}

/// A rational with denominator ≤ 1000 within 1e−9 of `approx` that is an
/// exact root of the vanishing-α numerator.
fn exact_rational_root(family: PhiFamily, s0: &BigRational, approx: f64) -> Option<BigRational> {
    let numerator = |r: &BigRational| -> BigRational {
        let one = rational(1, 1);
        let r2 = r * r;
        match family {
            PhiFamily::Mean => s0 * &r2 + (&one - s0) * r + &one,
            PhiFamily::Norm => s0 * &r2 * r + (&one - s0) * &r2 + &one,
        }
    };
    (1..=1000i64).find_map(|den| {
        let num = (approx * den as f64).round() as i64;
        if (num as f64 / den as f64 - approx).abs() > 1e-9 {
            return None;
        }
        let q = rational(num, den);
        (numerator(&q) == rational(0, 1)).then_some(q)
    })
}

/// `δΦ₁ + Φ₂` at integer σ₀ and δ over ℚ.
pub fn phi_tilde_integer(family: PhiFamily, sigma0: i64, delta: i64) -> Poly<BigRational> {
    Poly::new(phi_tilde_coeffs(family, &rational(sigma0, 1), &rational(delta, 1)))
}
