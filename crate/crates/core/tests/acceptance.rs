//! Acceptance suite: one PASS/FAIL line per criterion, nonzero exit on any
//! failure. Run with `cargo test -p mpf-core --test acceptance`.

use mpf_core::conditions::{
    ab_terms, alpha_beta_at, alpha_profile, check_mpf, constant_term_c, fit_alpha_asymptotics, gradient_terms_eg,
    rho_terms_of, AlphaClass, CheckConfig, Verdict,
};
use mpf_core::expressions::CurvatureFunction;
use mpf_core::nonexistence::poly::{dense_scan_max, rational};
use mpf_core::nonexistence::{
    certify_negative, errata_ids, feasibility, find_sigma_delta, limit_sweep, phi_tilde_integer, summarize, PhiFamily,
    DELTA_TOL,
};
use mpf_core::sampling::{log_uniform, random_pairs};
use mpf_core::vanishing::{rho_star, roots_mean, roots_norm, sigma_star, sigma_star_bisection};
use mpf_core::velocities::{
    catalog, lookup, make_velocity, CatalogEntry, CatalogFamily, ExpectedVerdict, VelocityFamily, VelocityFamilySpec,
};
use std::time::Instant;

struct Outcome {
    pass: bool,
    detail: String,
}

fn outcome(pass: bool, detail: impl Into<String>) -> Outcome {
    Outcome {
        pass,
        detail: detail.into(),
    }
}

/// Every (entry, σ, w, F) with a fixed family.
fn catalog_pairs() -> Vec<(
    &'static CatalogEntry,
    f64,
    CurvatureFunction,
    CurvatureFunction,
    VelocityFamilySpec,
)> {
    let mut out = Vec::new();
    for e in catalog() {
        if e.family == CatalogFamily::Any {
            continue;
        }
        for &s in e.sample_sigmas {
            let (w, f, spec) = e.instantiate(s).expect("catalog entries instantiate");
            out.push((e, s, w, f, spec));
        }
    }
    out
}

fn criterion_1() -> Outcome {
    let generic = lookup("generic-vanishing").unwrap();
    let grid = log_uniform(1e-6, 1.0 - 1e-6, 2048);
    let mut worst: f64 = 0.0;
    let mut n = 0;
    for xi in [0.0, 1.0, 2.0] {
        for sigma in [-2.0, -1.0, 1.5, 2.0, 3.0, 7.0] {
            let spec = VelocityFamilySpec::new(xi, sigma).unwrap();
            let f = make_velocity(&spec).unwrap();
            let v = generic.candidate_for(&spec).unwrap();
            for &rho in &grid {
                let c = constant_term_c(&v, &f, rho, 1.0).unwrap();
                worst = worst.max(c.value.abs() / c.scale);
                n += 1;
            }
        }
    }
    outcome(worst <= 1e-10, format!("max |C_v|/scale = {worst:.2e} over {n} points"))
}

fn criterion_2(
    pairs: &[(
        &'static CatalogEntry,
        f64,
        CurvatureFunction,
        CurvatureFunction,
        VelocityFamilySpec,
    )],
) -> Outcome {
    let cfg = CheckConfig::default();
    let mut bad = Vec::new();
    let (mut n_mpf, mut n_fail) = (0, 0);
    for (e, s, w, f, spec) in pairs {
        let rep = check_mpf(w, f, spec, &cfg);
        match e.expected_verdict {
            ExpectedVerdict::Mpf => {
                n_mpf += 1;
                if rep.overall != Verdict::Pass {
                    let why = rep
                        .conditions()
                        .iter()
                        .filter(|(_, c)| c.verdict != Verdict::Pass)
                        .map(|(n, c)| format!("{n}:{:?}", c.verdict))
                        .collect::<Vec<_>>()
                        .join(",");
                    bad.push(format!("{} σ={s} [{why}]", e.name));
                }
            }
            ExpectedVerdict::NonMpf => {
                n_fail += 1;
                let ok = rep.overall == Verdict::Fail && rep.first_failure().is_some_and(|(_, c)| c.witness.is_some());
                if !ok {
                    bad.push(format!(
                        "{} σ={s} expected a failure with witness, got {:?}",
                        e.name, rep.overall
                    ));
                }
            }
            ExpectedVerdict::VanishingOnly => {}
        }
    }
    outcome(
        bad.is_empty(),
        format!("{n_mpf} MPF runs pass, {n_fail} non-MPF runs fail with witness; problems: {bad:?}"),
    )
}

fn criterion_3(
    pairs: &[(
        &'static CatalogEntry,
        f64,
        CurvatureFunction,
        CurvatureFunction,
        VelocityFamilySpec,
    )],
) -> Outcome {
    let pts = random_pairs(0.05, 20.0, 200, 3);
    let mut worst: f64 = 0.0;
    for (_, _, w, f, _) in pairs {
        for &(a, b) in &pts {
            if (a - b).abs() < 1e-3 * a.max(b) {
                continue;
            }
            let (_, g) = gradient_terms_eg(w, f, a, b).unwrap();
            let (e, _) = gradient_terms_eg(w, f, b, a).unwrap();
            worst = worst.max((g.value - e.value).abs() / g.scale.max(e.scale));
        }
    }
    outcome(worst <= 1e-9, format!("max |G(a,b) − E(b,a)|/scale = {worst:.2e}"))
}

fn criterion_4(
    pairs: &[(
        &'static CatalogEntry,
        f64,
        CurvatureFunction,
        CurvatureFunction,
        VelocityFamilySpec,
    )],
) -> Outcome {
    let rhos = mpf_core::sampling::uniform(0.01, 0.99, 50, 4);
    let mut worst: f64 = 0.0;
    for (_, s, w, f, _) in pairs {
        for &rho in &rhos {
            let ab = ab_terms(w, f, rho, 1.0).unwrap();
            let rf = rho_terms_of(w, f, *s, rho).unwrap();
            let p = alpha_beta_at(w, f, rho).unwrap();
            let k = 1.0 / (p.w_b * p.f_b);
            let kr = (p.beta * rho + 1.0) * (1.0 - rho) * k;
            let conv = [
                (ab.c.value * s.abs() * k, ab.c.scale * (s.abs() * k).abs(), rf.c),
                (ab.e.value * kr, ab.e.scale * kr.abs(), rf.e),
                (
                    ab.g.value * p.alpha * p.alpha * kr,
                    ab.g.scale * (p.alpha * p.alpha * kr).abs(),
                    rf.g,
                ),
            ];
            for (v, sc, t) in conv {
                worst = worst.max((v - t.value).abs() / sc.max(t.scale));
            }
        }
    }
    outcome(worst <= 1e-9, format!("max relative deviation {worst:.2e}"))
}

fn criterion_5() -> Outcome {
    let m: Vec<f64> = roots_mean(6.0).unwrap().iter().map(|r| r.root).collect();
    let n: Vec<f64> = roots_norm(10.0).unwrap().iter().map(|r| r.root).collect();
    let ok_m = m.len() == 2 && (m[0] - 1.0 / 3.0).abs() <= 1e-10 && (m[1] - 0.5).abs() <= 1e-10;
    let ok_n = n.len() == 2 && (n[0] - 0.5).abs() <= 1e-10 && (n[1] - (1.0 + 6f64.sqrt()) / 5.0).abs() <= 1e-10;
    let (s, sb) = (sigma_star(), sigma_star_bisection());
    let ok_s = (s - 9.444).abs() < 5e-4 && (s - sb).abs() <= 1e-6;
    let ok_r = (rho_star() - 0.596).abs() <= 1e-3;
    outcome(
        ok_m && ok_n && ok_s && ok_r,
        format!(
            "mean(6) = {m:?}, norm(10) = {n:?}, σ⋆ = {s:.12} (bisection {sb:.12}), ρ⋆ = {:.6}",
            rho_star()
        ),
    )
}

fn criterion_6() -> Outcome {
    let m = find_sigma_delta(PhiFamily::Mean, PhiFamily::Mean.root_onset(), DELTA_TOL).unwrap();
    let n = find_sigma_delta(PhiFamily::Norm, PhiFamily::Norm.root_onset(), DELTA_TOL).unwrap();
    let fm = feasibility(PhiFamily::Mean, 6.0, 1.0).unwrap();
    let fno = feasibility(PhiFamily::Norm, 10.0, 1.0).unwrap();
    let ok = (5.97..=5.99).contains(&m.sigma_delta)
        && (9.89..=9.91).contains(&n.sigma_delta)
        && fm.negative
        && fm.sigma_delta == 7.0
        && fno.negative
        && fno.sigma_delta == 11.0;
    outcome(
        ok,
        format!(
            "mean δ = {:.4}, σ_δ = {:.4}; norm δ = {:.4}, σ_δ = {:.4}; hand bounds {} ({}), {} ({})",
            m.delta, m.sigma_delta, n.delta, n.sigma_delta, fm.sigma_delta, fm.negative, fno.sigma_delta, fno.negative
        ),
    )
}

fn criterion_7() -> Outcome {
    let cases = [
        (PhiFamily::Mean, 6, rational(1, 3), 1.0 / 3.0),
        (PhiFamily::Norm, 10, rational(1, 2), 0.5),
    ];
    let mut ok = true;
    let mut detail = Vec::new();
    for (fam, s0, r, rf) in cases {
        let p = phi_tilde_integer(fam, s0, 1);
        let c = certify_negative(&p, &r).unwrap();
        let scan = dense_scan_max(&p.to_f64_coeffs(), rf, 100_000);
        ok &= c.negative && scan < 0.0;
        detail.push(format!(
            "{fam}: Sturm roots {} on (0, {}], negative = {}, dense scan max {scan:.3e}",
            c.roots_in_interval, c.interval_end, c.negative
        ));
    }
    outcome(ok, detail.join("; "))
}

fn criterion_8() -> Outcome {
    let recs = limit_sweep();
    let s = summarize(&recs);
    let mut expected = errata_ids();
    expected.sort();
    let ok = s.mismatches.is_empty() && s.flagged == expected;
    outcome(
        ok,
        format!(
            "{} records, {} mismatches {:?}, flagged {:?}",
            s.records,
            s.mismatches.len(),
            s.mismatches.iter().take(5).collect::<Vec<_>>(),
            s.flagged
        ),
    )
}

fn criterion_9(
    pairs: &[(
        &'static CatalogEntry,
        f64,
        CurvatureFunction,
        CurvatureFunction,
        VelocityFamilySpec,
    )],
) -> Outcome {
    let grid = log_uniform(1e-6, 1.0 - 1e-6, 512);
    let mut worst_c: f64 = 0.0;
    let mut bad = Vec::new();
    for (e, s, w, _, spec) in pairs {
        if e.expected_verdict != ExpectedVerdict::Mpf {
            continue;
        }
        if spec.is_contracting() && spec.xi > 0.0 {
            let a = fit_alpha_asymptotics(w).unwrap();
            let dev = (a.c - 1.0 / s).abs();
            worst_c = worst_c.max(dev);
            if a.class != AlphaClass::Alpha2 || dev > 1e-4 {
                bad.push(format!("{} σ={s}: {:?} c={}", e.name, a.class, a.c));
            }
        }
        let prof = alpha_profile(w, &grid).unwrap();
        let min = prof.min_alpha().unwrap();
        if min.alpha <= 0.0 {
            bad.push(format!("{} σ={s}: α = {} at ρ = {}", e.name, min.alpha, min.rho));
        }
    }
    outcome(
        bad.is_empty(),
        format!("max |c − 1/σ| = {worst_c:.2e}; problems: {bad:?}"),
    )
}

fn criterion_10() -> Outcome {
    let cfg = CheckConfig::default();
    let w = mpf_core::parse_expression("(a-b)^2", 0.0).unwrap();
    let mut bad = Vec::new();
    let mut n = 0;
    let cases = [
        (VelocityFamily::Mean, 1.0),
        (VelocityFamily::Gauss, 1.0),
        (VelocityFamily::Gauss, 0.5),
        (VelocityFamily::Gauss, 0.25),
        (VelocityFamily::Norm, 0.5),
    ];
    for (fam, s) in cases {
        let spec = fam.spec(s).unwrap();
        let f = make_velocity(&spec).unwrap();
        let rep = check_mpf(&w, &f, &spec, &cfg);
        n += 1;
        let ok = rep.overall == Verdict::Fail && rep.first_failure().is_some_and(|(_, c)| c.witness.is_some());
        if !ok {
            bad.push(format!("{} σ={s}: {:?}", fam.name(), rep.overall));
        }
    }
    outcome(
        bad.is_empty(),
        format!("{n} velocities with 0 < σ ≤ 1 reject (a−b)²; problems: {bad:?}"),
    )
}

fn criterion_11(
    pairs: &[(
        &'static CatalogEntry,
        f64,
        CurvatureFunction,
        CurvatureFunction,
        VelocityFamilySpec,
    )],
) -> Outcome {
    let pts = random_pairs(0.2, 3.0, 20, 11);
    let mut worst: f64 = 0.0;
    for (_, _, w, f, _) in pairs {
        for func in [w, f] {
            for &(a, b) in &pts {
                let j = func.eval_jet2(a, b).unwrap();
                let h = 1e-5 * a.max(b);
                let (pa, ma) = (func.eval_jet2(a + h, b).unwrap(), func.eval_jet2(a - h, b).unwrap());
                let (pb, mb) = (func.eval_jet2(a, b + h).unwrap(), func.eval_jet2(a, b - h).unwrap());
                let d = |p: f64, m: f64| (p - m) / (2.0 * h);
                let m = a.max(b);
                let s1 = j.da.abs() + j.db.abs() + j.value.abs() / m;
                let s2 = j.daa.abs() + j.dab.abs() + j.dbb.abs() + (j.da.abs() + j.db.abs()) / m;
                let errs = [
                    (d(pa.value, ma.value) - j.da).abs() / s1,
                    (d(pb.value, mb.value) - j.db).abs() / s1,
                    (d(pa.da, ma.da) - j.daa).abs() / s2,
                    (d(pb.da, mb.da) - j.dab).abs() / s2,
                    (d(pb.db, mb.db) - j.dbb).abs() / s2,
                ];
                worst = errs.iter().fold(worst, |acc, e| acc.max(*e));
            }
        }
    }
    outcome(
        worst <= 1e-6,
        format!("max relative deviation {worst:.2e} over {} catalog pairs", pairs.len()),
    )
}

type Criterion<'a> = (&'static str, Box<dyn Fn() -> Outcome + 'a>);

fn main() {
    let pairs = catalog_pairs();
    let criteria: Vec<Criterion> = vec![
        ("vanishing identity", Box::new(criterion_1)),
        ("catalog verification", Box::new(|| criterion_2(&pairs))),
        ("symmetry identity", Box::new(|| criterion_3(&pairs))),
        ("ρ-form consistency", Box::new(|| criterion_4(&pairs))),
        ("roots", Box::new(criterion_5)),
        ("thresholds", Box::new(criterion_6)),
        ("exact certification", Box::new(criterion_7)),
        ("limit table", Box::new(criterion_8)),
        ("α-asymptotics", Box::new(|| criterion_9(&pairs))),
        ("degree obstructions", Box::new(criterion_10)),
        ("derivative correctness", Box::new(|| criterion_11(&pairs))),
    ];
    let mut failed = 0;
    for (i, (name, run)) in criteria.iter().enumerate() {
        let t = Instant::now();
        let o = run();
        let tag = if o.pass { "PASS" } else { "FAIL" };
        failed += usize::from(!o.pass);
        println!(
            "[{tag}] {:>2} {name}: {} ({:.2} s)",
            i + 1,
            o.detail,
            t.elapsed().as_secs_f64()
        );
    }
    println!("{} of {} criteria passed", criteria.len() - failed, criteria.len());
    if failed > 0 {
        std::process::exit(1);
    }
}
