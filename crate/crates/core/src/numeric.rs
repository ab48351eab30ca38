//! Small numeric helpers shared by the modules: bracketing bisection,
//! exact decimal rendering of doubles, significant-digit rounding.

use num_bigint::BigInt;
use thiserror::Error;

#[derive(Debug, Clone, PartialEq, Error)]
pub enum BracketError {
    #[error("no sign change on [{lo}, {hi}]: f(lo) = {flo}, f(hi) = {fhi}")]
    NoSignChange { lo: f64, hi: f64, flo: f64, fhi: f64 },
}

/// Result of [`bisect`]: the final bracket and its midpoint.
#[derive(Debug, Clone, Copy)]
pub struct Bracket {
    pub lo: f64,
    pub hi: f64,
    pub mid: f64,
    pub iterations: usize,
}

/// Bisection on a sign change, run until the bracket stops shrinking in `f64`.
pub fn bisect<F: Fn(f64) -> f64>(f: F, mut lo: f64, mut hi: f64) -> Result<Bracket, BracketError> {
    let (flo, fhi) = (f(lo), f(hi));
    if flo == 0.0 {
        return Ok(Bracket {
            lo,
            hi: lo,
            mid: lo,
            iterations: 0,
        });
    }
    if fhi == 0.0 {
        return Ok(Bracket {
            lo: hi,
            hi,
            mid: hi,
            iterations: 0,
        });
    }
    if flo.signum() == fhi.signum() {
        return Err(BracketError::NoSignChange { lo, hi, flo, fhi });
    }
    let neg_lo = flo < 0.0;
    let mut it = 0;
    while it < 2000 {
        let mid = 0.5 * (lo + hi);
        if mid <= lo || mid >= hi {
            break;
        }
        let fm = f(mid);
        if fm == 0.0 {
            return Ok(Bracket {
                lo: mid,
                hi: mid,
                mid,
                iterations: it + 1,
            });
        }
        if (fm < 0.0) == neg_lo {
            lo = mid;
        } else {
            hi = mid;
        }
        it += 1;
    }
    Ok(Bracket {
        lo,
        hi,
        mid: 0.5 * (lo + hi),
        iterations: it,
    })
}

/// Bisection on a monotone predicate: returns `(lo, hi)` with `!pred(lo)`,
/// `pred(hi)` and `hi − lo ≤ tol`.
pub fn bisect_predicate<P: FnMut(f64) -> bool>(mut pred: P, mut lo: f64, mut hi: f64, tol: f64) -> (f64, f64) {
    while hi - lo > tol {
        let mid = 0.5 * (lo + hi);
        if mid <= lo || mid >= hi {
            break;
        }
        if pred(mid) {
            hi = mid;
        } else {
            lo = mid;
        }
    }
    (lo, hi)
}

/// Exact decimal expansion of a finite double (every double is a dyadic
/// rational, hence a terminating decimal).
pub fn exact_decimal(x: f64) -> String {
    if x == 0.0 {
        return "0".into();
    }
    if !x.is_finite() {
        return format!("{x}");
    }
    let bits = x.to_bits();
    let neg = bits >> 63 == 1;
    let exp_bits = ((bits >> 52) & 0x7ff) as i64;
    let frac = bits & ((1u64 << 52) - 1);
    let (mant, exp) = if exp_bits == 0 {
        (frac, -1074)
    } else {
        (frac | (1u64 << 52), exp_bits - 1075)
    };
    let mut s = if exp >= 0 {
        (BigInt::from(mant) << exp as usize).to_string()
    } else {
        let k = (-exp) as usize;
        let digits = (BigInt::from(mant) * num_traits::pow(BigInt::from(5u32), k)).to_string();
        let digits = if digits.len() <= k {
            format!("{}{}", "0".repeat(k + 1 - digits.len()), digits)
        } else {
            digits
        };
        let (int, frac) = digits.split_at(digits.len() - k);
        let frac = frac.trim_end_matches('0');
        if frac.is_empty() {
            int.to_string()
        } else {
            format!("{int}.{frac}")
        }
    };
    if neg {
        s.insert(0, '-');
    }
    s
}

/// Round to `digits` significant decimal digits.
pub fn round_sig(x: f64, digits: usize) -> f64 {
    if x == 0.0 || !x.is_finite() {
        return x;
    }
    format!("{:.*e}", digits.saturating_sub(1), x).parse().unwrap_or(x)
}

/// Render with at most `digits` significant digits, without exponent for
/// moderate magnitudes.
pub fn fmt_sig(x: f64, digits: usize) -> String {
    let r = round_sig(x, digits);
    if r == 0.0 {
        return "0".into();
    }
    let m = r.abs();
    if (1e-5..1e15).contains(&m) {
        format!("{r}")
    } else {
        format!("{r:e}")
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn exact_decimal_known_values() {
        assert_eq!(exact_decimal(0.5), "0.5");
        assert_eq!(exact_decimal(-3.0), "-3");
        assert_eq!(
            exact_decimal(0.1),
            "0.1000000000000000055511151231257827021181583404541015625"
        );
        assert_eq!(exact_decimal(1024.0), "1024");
        // 3^40 exceeds 2^53; the nearest double is printed exactly
        assert_eq!(exact_decimal(3.0f64.powi(40)), "12157665459056928768");
    }

    #[test]
    fn bisect_sqrt2() {
        let b = bisect(|x| x * x - 2.0, 0.0, 2.0).unwrap();
        assert!((b.mid - 2f64.sqrt()).abs() < 1e-15);
        assert!(b.lo <= b.mid && b.mid <= b.hi);
        assert!(bisect(|x| x * x + 1.0, 0.0, 2.0).is_err());
    }

    #[test]
    fn sig_digits() {
        assert_eq!(fmt_sig(5.980166012345678, 12), "5.98016601235");
        assert_eq!(fmt_sig(0.1 + 0.2, 12), "0.3");
        assert_eq!(fmt_sig(1e-9, 12), "1e-9");
    }
}
