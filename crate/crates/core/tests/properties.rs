//! Property tests for the invariants of the velocity family, the jets, the
//! vanishing α and the exact sign certificates.

use mpf_core::conditions::terms::{ab_terms, rho_terms_of};
use mpf_core::nonexistence::poly::{dense_scan_max, rational, rational_from_f64, OrderedField};
use mpf_core::nonexistence::{certify_negative, negative_on, Poly, QSqrt2};
use mpf_core::vanishing::{alpha_vanishing_beta, alpha_vanishing_f, family_beta, mean_numerator, roots_mean};
use mpf_core::{make_velocity, parse_expression, VelocityFamilySpec};
use num_rational::BigRational;
use proptest::prelude::*;
use std::cmp::Ordering;

fn close(x: f64, y: f64, rel: f64) -> bool {
    (x - y).abs() <= rel * x.abs().max(y.abs()).max(1.0)
}

fn xi_strategy() -> impl Strategy<Value = f64> {
    prop_oneof![Just(0.0), Just(1.0), Just(-1.0), -3.0..3.0f64]
}

fn sigma_strategy() -> impl Strategy<Value = f64> {
    prop_oneof![-3.0..-0.1f64, 0.1..3.0f64]
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(256))]

    #[test]
    fn family_is_symmetric(xi in xi_strategy(), sigma in sigma_strategy(), a in 0.05..20.0f64, b in 0.05..20.0f64) {
        let f = make_velocity(&VelocityFamilySpec::new(xi, sigma).unwrap()).unwrap();
        let (p, q) = (f.eval_jet2(a, b).unwrap(), f.eval_jet2(b, a).unwrap());
        prop_assert!(close(p.value, q.value, 1e-12));
        prop_assert!(close(p.da, q.db, 1e-11));
        prop_assert!(close(p.daa, q.dbb, 1e-10));
        prop_assert!(close(p.dab, q.dab, 1e-10));
    }

    #[test]
    fn family_satisfies_euler_identity(xi in xi_strategy(), sigma in sigma_strategy(), a in 0.05..20.0f64, b in 0.05..20.0f64) {
        let f = make_velocity(&VelocityFamilySpec::new(xi, sigma).unwrap()).unwrap();
        let j = f.eval_jet2(a, b).unwrap();
        let lhs = a * j.da + b * j.db;
        let scale = (a * j.da).abs() + (b * j.db).abs() + (sigma * j.value).abs();
        prop_assert!((lhs - sigma * j.value).abs() <= 1e-12 * scale);
        // second order: a F_aa + b F_ab = (σ − 1) F_a
        let lhs2 = a * j.daa + b * j.dab;
        let scale2 = (a * j.daa).abs() + (b * j.dab).abs() + ((sigma - 1.0) * j.da).abs();
        prop_assert!((lhs2 - (sigma - 1.0) * j.da).abs() <= 1e-11 * scale2);
    }

    #[test]
    fn family_is_increasing(xi in xi_strategy(), sigma in sigma_strategy(), a in 0.05..20.0f64, b in 0.05..20.0f64) {
        let f = make_velocity(&VelocityFamilySpec::new(xi, sigma).unwrap()).unwrap();
        let j = f.eval_jet2(a, b).unwrap();
        prop_assert!(j.da > 0.0 && j.db > 0.0);
    }

    #[test]
    fn family_beta_matches_jet(xi in xi_strategy(), sigma in sigma_strategy(), rho in 0.01..1.0f64) {
        let spec = VelocityFamilySpec::new(xi, sigma).unwrap();
        let j = make_velocity(&spec).unwrap().eval_jet2(rho, 1.0).unwrap();
        prop_assert!(close(j.da / j.db, spec.beta(rho), 1e-12));
    }

    #[test]
    fn vanishing_alpha_forms_agree(xi in xi_strategy(), sigma in sigma_strategy(), rho in 0.05..0.95f64) {
        let f = make_velocity(&VelocityFamilySpec::new(xi, sigma).unwrap()).unwrap();
        let from_f = alpha_vanishing_f(&f, rho);
        let from_beta = alpha_vanishing_beta(family_beta(xi), sigma, rho);
        if let Ok(v) = from_f {
            if v.is_finite() && from_beta.is_finite() && v.abs() < 1e8 {
                prop_assert!(close(v, from_beta, 1e-8), "{} vs {}", v, from_beta);
            }
        }
    }

    #[test]
    fn jets_match_finite_differences(
        idx in 0usize..4,
        s in 0.5..2.5f64,
        a in 0.5..3.0f64,
        b in 0.5..3.0f64,
    ) {
        let texts = ["a^2*b + s*a*b^3", "(a^s + b^s)^(1/s)", "(a - b)^2/(a + b) + a^(-1)*b^3", "sqrt(a*b)/(a + b)"];
        let f = parse_expression(texts[idx], s).unwrap();
        let j = f.eval_jet2(a, b).unwrap();
        let h = 1e-4;
        let v = |x: f64, y: f64| f.eval(x, y).unwrap();
        let da = (v(a + h, b) - v(a - h, b)) / (2.0 * h);
        let db = (v(a, b + h) - v(a, b - h)) / (2.0 * h);
        let daa = (v(a + h, b) - 2.0 * v(a, b) + v(a - h, b)) / (h * h);
        let dab = (v(a + h, b + h) - v(a + h, b - h) - v(a - h, b + h) + v(a - h, b - h)) / (4.0 * h * h);
        let scale = j.value.abs().max(1.0);
        prop_assert!((j.da - da).abs() <= 1e-6 * scale);
        prop_assert!((j.db - db).abs() <= 1e-6 * scale);
        prop_assert!((j.daa - daa).abs() <= 1e-4 * scale);
        prop_assert!((j.dab - dab).abs() <= 1e-4 * scale);
    }

    #[test]
    fn rho_form_matches_ab_form(xi in xi_strategy(), sigma in 0.2..3.0f64, rho in 0.05..0.95f64) {
        // symmetric, degree 2
        let w = parse_expression("a^2 + b^2 + a*b", 0.0).unwrap();
        let f = make_velocity(&VelocityFamilySpec::new(xi, sigma).unwrap()).unwrap();
        let ab = ab_terms(&w, &f, rho, 1.0).unwrap();
        let rf = rho_terms_of(&w, &f, sigma, rho).unwrap();
        for (x, y) in [(ab.c, rf.c), (ab.e, rf.e), (ab.g, rf.g)] {
            // the two forms differ by positive factors, so compare signs where decisive
            if x.ratio().abs() > 1e-6 && y.ratio().abs() > 1e-6 {
                prop_assert_eq!(x.value > 0.0, y.value > 0.0);
            }
        }
    }

    #[test]
    fn mean_roots_are_roots(sigma in 1.01..60.0f64) {
        let roots = roots_mean(sigma).unwrap();
        let disc = sigma * sigma - 6.0 * sigma + 1.0;
        if disc < -1e-9 {
            prop_assert!(roots.is_empty());
        } else if disc > 1e-9 {
            prop_assert_eq!(roots.len(), 2);
        }
        for r in roots {
            prop_assert!(r.root > 0.0 && r.root < 1.0);
            prop_assert!(mean_numerator(sigma, r.root).abs() <= 1e-9 * sigma.max(1.0));
            prop_assert!(r.bracket.0 <= r.root && r.root <= r.bracket.1);
        }
    }

    #[test]
    fn sturm_certificate_agrees_with_dense_scan(coeffs in prop::collection::vec(-6i64..6, 1..6), r_num in 1i64..8) {
        let p = Poly::new(coeffs.iter().map(|&c| rational(c, 1)).collect());
        prop_assume!(!p.is_zero());
        let r = rational(r_num, 4);
        let cert = certify_negative(&p, &r).unwrap();
        let f: Vec<f64> = coeffs.iter().map(|&c| c as f64).collect();
        let rf = r_num as f64 / 4.0;
        // scan the open interval (0, r]
        let scan = (1..=4000)
            .map(|i| mpf_core::nonexistence::poly::horner(&f, rf * i as f64 / 4000.0))
            .fold(f64::NEG_INFINITY, f64::max);
        if cert.negative {
            prop_assert!(scan < 0.0);
        }
        if scan > 0.0 {
            prop_assert!(!cert.negative);
        }
        // sign changes seen by the scan never exceed the Sturm count
        let mut changes = 0usize;
        let mut prev = 0.0f64;
        for i in 1..=4000 {
            let v = mpf_core::nonexistence::poly::horner(&f, rf * i as f64 / 4000.0);
            if v != 0.0 {
                if prev != 0.0 && (v > 0.0) != (prev > 0.0) {
                    changes += 1;
                }
                prev = v;
            }
        }
        prop_assert!(changes <= cert.roots_in_interval + usize::from(cert.sign_at_end == 0));
    }

    #[test]
    fn numeric_negativity_is_sound(coeffs in prop::collection::vec(-6i64..6, 1..6), r_num in 1i64..8) {
        let f: Vec<f64> = coeffs.iter().map(|&c| c as f64).collect();
        let rf = r_num as f64 / 4.0;
        if negative_on(&f, rf) {
            let p = Poly::new(coeffs.iter().map(|&c| rational(c, 1)).collect());
            let cert = certify_negative(&p, &rational(r_num, 4)).unwrap();
            prop_assert!(cert.negative);
            prop_assert_eq!(cert.stripped_power, 0);
            prop_assert!(dense_scan_max(&f, rf, 1000) < 0.0);
        }
    }

    #[test]
    fn qsqrt2_is_a_field(a in -50i64..50, b in -50i64..50, c in -50i64..50, d in -50i64..50) {
        let x = QSqrt2::from_ints(a, b);
        let y = QSqrt2::from_ints(c, d);
        prop_assert_eq!(x.clone() + y.clone() - y.clone(), x.clone());
        if !OrderedField::is_zero(&y) {
            prop_assert_eq!((x.clone() * y.clone()) / y.clone(), x.clone());
        }
        let v = OrderedField::to_f64(&x);
        if v.abs() > 1e-9 {
            let expected = if v > 0.0 { Ordering::Greater } else { Ordering::Less };
            prop_assert_eq!(x.sign(), expected);
        }
        // sign of a product is the product of signs
        let prod = (x.clone() * y.clone()).sign();
        let expected = match (x.sign(), y.sign()) {
            (Ordering::Equal, _) | (_, Ordering::Equal) => Ordering::Equal,
            (s, t) if s == t => Ordering::Greater,
            _ => Ordering::Less,
        };
        prop_assert_eq!(prod, expected);
    }

    #[test]
    fn rational_from_f64_is_exact(x in -1e6..1e6f64) {
        let q: BigRational = rational_from_f64(x);
        prop_assert_eq!(OrderedField::to_f64(&q), x);
    }
}
