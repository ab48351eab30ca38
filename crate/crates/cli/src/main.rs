//! `mpf`: classification tables, candidate verification, Φ thresholds,
//! vanishing-α roots, limit records and exact sign certificates.
//!
//! Exit codes: 0 pass, 1 fail, 3 inconclusive, 2 invalid input.

mod output;

use anyhow::{anyhow, bail, Context, Result};
use clap::{Parser, Subcommand, ValueEnum};
use mpf_core::conditions::alpha::{alpha_at, AlphaClass};
use mpf_core::conditions::check::{
    check_mpf_sigma, CheckConfig, ConditionReport, Precision, Verdict as CheckVerdict, Witness,
};
use mpf_core::nonexistence::classify::display_range;
use mpf_core::nonexistence::poly::parse_rational;
use mpf_core::nonexistence::{
    certify_negative, classification_table, classify, feasibility, find_sigma_delta, limit_sweep, limit_table,
    summarize, LimitRecord, NegativityCertificate, Outcome, PhiFamily, Poly, DELTA_TOL,
};
use mpf_core::sampling::log_uniform;
use mpf_core::vanishing::{alpha_vanishing_beta, family_beta, roots_mean, roots_norm};
use mpf_core::velocities::{catalog, CatalogEntry, CatalogFamily, ExpectedVerdict};
use mpf_core::{make_velocity, parse_expression, CurvatureFunction, VelocityFamily, VelocityFamilySpec};
use num_rational::BigRational;
use output::{json, num};
use serde_json::json;
use std::fmt::Write as _;
use std::path::PathBuf;
use std::process::ExitCode;

const EXIT_FAIL: u8 = 1;
const EXIT_USAGE: u8 = 2;
const EXIT_INCONCLUSIVE: u8 = 3;

#[derive(Parser)]
#[command(
    name = "mpf",
    version,
    about = "Maximum-principle functions for curvature-flow velocities"
)]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Clone, Copy, ValueEnum)]
enum Family {
    Gauss,
    Mean,
    Norm,
    Trace,
}

impl From<Family> for VelocityFamily {
    fn from(f: Family) -> Self {
        match f {
            Family::Gauss => VelocityFamily::Gauss,
            Family::Mean => VelocityFamily::Mean,
            Family::Norm => VelocityFamily::Norm,
            Family::Trace => VelocityFamily::Trace,
        }
    }
}

#[derive(Clone, Copy, ValueEnum)]
enum PhiFam {
    Mean,
    Norm,
}

impl From<PhiFam> for PhiFamily {
    fn from(f: PhiFam) -> Self {
        match f {
            PhiFam::Mean => PhiFamily::Mean,
            PhiFam::Norm => PhiFamily::Norm,
        }
    }
}

#[derive(Clone, Copy, ValueEnum)]
enum ClassArg {
    Alpha1,
    Alpha2,
    Alpha3,
}

impl From<ClassArg> for AlphaClass {
    fn from(c: ClassArg) -> Self {
        match c {
            ClassArg::Alpha1 => AlphaClass::Alpha1,
            ClassArg::Alpha2 => AlphaClass::Alpha2,
            ClassArg::Alpha3 => AlphaClass::Alpha3,
        }
    }
}

#[derive(Clone, Copy, PartialEq, Eq, ValueEnum)]
enum Format {
    Md,
    Json,
    Csv,
}

#[derive(Subcommand)]
enum Command {
    /// Existence verdict for a velocity family at σ, or its full table.
    Classify {
        family: Family,
        #[arg(
            long,
            allow_hyphen_values = true,
            required_unless_present = "all",
            conflicts_with = "all"
        )]
        sigma: Option<f64>,
        /// Print the whole classification table.
        #[arg(long)]
        all: bool,
        #[arg(long, value_enum, default_value = "md")]
        format: Format,
    },
    /// Check conditions (I)-(V) for a candidate w against a velocity.
    Verify {
        /// Candidate w(a, b); `s` is the parameter, `F` the velocity.
        w: String,
        #[arg(long, value_enum, conflicts_with_all = ["xi", "f"])]
        family: Option<Family>,
        /// ξ of F^σ_ξ.
        #[arg(long, allow_hyphen_values = true, conflicts_with = "f")]
        xi: Option<f64>,
        /// Degree σ of the velocity.
        #[arg(long, allow_hyphen_values = true)]
        sigma: f64,
        /// Explicit velocity expression instead of a family.
        #[arg(long)]
        f: Option<String>,
        /// Value of the parameter `s` (default: σ).
        #[arg(long, allow_hyphen_values = true)]
        s: Option<f64>,
        /// Number of log-uniform ρ points.
        #[arg(long, default_value_t = 2048)]
        grid: usize,
        /// Number of additional random ρ points.
        #[arg(long, default_value_t = 512)]
        random: usize,
        /// Non-positivity tolerance relative to the term scale.
        #[arg(long, default_value_t = 1e-9)]
        tol: f64,
        #[arg(long, default_value_t = 0)]
        seed: u64,
        /// Evaluate in double-double arithmetic.
        #[arg(long)]
        compensated: bool,
        #[arg(long, value_enum, default_value = "md")]
        format: Format,
    },
    /// Smallest δ with δΦ₁ + Φ₂ < 0, or feasibility of a given δ.
    SigmaDelta {
        family: PhiFam,
        /// Default: onset of roots of the vanishing α.
        #[arg(long)]
        sigma0: Option<f64>,
        /// Check this δ instead of searching.
        #[arg(long)]
        delta: Option<f64>,
        #[arg(long, default_value_t = DELTA_TOL)]
        tol: f64,
        #[arg(long, value_enum, default_value = "md")]
        format: Format,
    },
    /// CSV of ρ·α curves: vanishing functions, or catalog MPFs with `--catalog`.
    PlotData {
        family: Family,
        #[arg(long, value_delimiter = ',', required = true, allow_hyphen_values = true)]
        sigmas: Vec<f64>,
        /// Number of log-uniform ρ points.
        #[arg(long, default_value_t = 200)]
        grid: usize,
        #[arg(long, default_value_t = 1e-4)]
        rho_min: f64,
        #[arg(long)]
        catalog: bool,
    },
    /// Roots in (0, 1) of the vanishing α for mean or norm velocities.
    Roots {
        family: PhiFam,
        #[arg(long, allow_hyphen_values = true)]
        sigma: f64,
        #[arg(long, value_enum, default_value = "md")]
        format: Format,
    },
    /// Limit records of C, E, G as ρ → 0, checked by extrapolation.
    Limits {
        /// Evaluate one class at (ξ, σ, c, d) instead of the full sweep.
        #[arg(long, value_enum, requires_all = ["xi", "sigma", "c"])]
        class: Option<ClassArg>,
        /// Exponent of β = ρ^ξ.
        #[arg(long, allow_hyphen_values = true)]
        xi: Option<f64>,
        #[arg(long, allow_hyphen_values = true)]
        sigma: Option<f64>,
        #[arg(long)]
        c: Option<f64>,
        #[arg(long, allow_hyphen_values = true, default_value_t = 0.0)]
        d: f64,
        #[arg(long, value_enum, default_value = "csv")]
        format: Format,
    },
    /// Exact proof of p < 0 on (0, r] for a polynomial with rational coefficients.
    Certify {
        /// File of coefficients in ascending order (integers, p/q or decimals).
        file: PathBuf,
        #[arg(long)]
        r: String,
        #[arg(long, value_enum, default_value = "md")]
        format: Format,
    },
    /// List the candidate catalog, optionally verifying every entry.
    Catalog {
        #[arg(long)]
        verify: bool,
        #[arg(long, default_value_t = 0)]
        seed: u64,
        #[arg(long, value_enum, default_value = "md")]
        format: Format,
    },
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    match run(cli.command) {
        Ok(code) => ExitCode::from(code),
        Err(e) => {
            eprintln!("error: {e:#}");
            ExitCode::from(EXIT_USAGE)
        }
    }
}

fn run(cmd: Command) -> Result<u8> {
    match cmd {
        Command::Classify {
            family,
            sigma,
            all,
            format,
        } => cmd_classify(family.into(), sigma, all, format),
        Command::Verify {
            w,
            family,
            xi,
            sigma,
            f,
            s,
            grid,
            random,
            tol,
            seed,
            compensated,
            format,
        } => {
            let cfg = CheckConfig {
                n_log: grid,
                n_random: random,
                seed,
                eta: tol,
                precision: if compensated {
                    Precision::Compensated
                } else {
                    Precision::Double
                },
                ..CheckConfig::default()
            };
            cmd_verify(&w, family, xi, sigma, f.as_deref(), s, &cfg, format)
        }
        Command::SigmaDelta {
            family,
            sigma0,
            delta,
            tol,
            format,
        } => cmd_sigma_delta(family.into(), sigma0, delta, tol, format),
        Command::PlotData {
            family,
            sigmas,
            grid,
            rho_min,
            catalog,
        } => cmd_plot_data(family.into(), &sigmas, grid, rho_min, catalog),
        Command::Roots { family, sigma, format } => cmd_roots(family.into(), sigma, format),
        Command::Limits {
            class,
            xi,
            sigma,
            c,
            d,
            format,
        } => cmd_limits(class.map(Into::into), xi, sigma, c, d, format),
        Command::Certify { file, r, format } => cmd_certify(&file, &r, format),
        Command::Catalog { verify, seed, format } => cmd_catalog(verify, seed, format),
    }
}

fn unsupported(format: Format, cmd: &str) -> anyhow::Error {
    let name = match format {
        Format::Md => "md",
        Format::Json => "json",
        Format::Csv => "csv",
    };
    anyhow!("`{cmd}` does not support --format {name}")
}

fn csv_field(s: &str) -> String {
    if s.contains([',', '"', '\n']) {
        format!("\"{}\"", s.replace('"', "\"\""))
    } else {
        s.to_string()
    }
}

fn csv_line(fields: &[String]) -> String {
    let mut line = fields.iter().map(|f| csv_field(f)).collect::<Vec<_>>().join(",");
    line.push('\n');
    line
}

fn outcome_parts(o: &Outcome) -> (String, String, String) {
    match o {
        Outcome::Exists { witness, expression } => ("exists".into(), witness.clone(), expression.clone()),
        other => (other.label(), String::new(), String::new()),
    }
}

fn cmd_classify(family: VelocityFamily, sigma: Option<f64>, all: bool, format: Format) -> Result<u8> {
    if all {
        let table = classification_table(family);
        let out = match format {
            Format::Md => table.to_markdown(),
            Format::Json => json(table.to_json()),
            Format::Csv => {
                let mut s = csv_line(&[
                    "sigma".into(),
                    "outcome".into(),
                    "witness".into(),
                    "expression".into(),
                    "source".into(),
                ]);
                for row in &table.rows {
                    let (o, w, e) = outcome_parts(&row.outcome);
                    s += &csv_line(&[display_range(&row.range), o, w, e, row.source.clone()]);
                }
                s
            }
        };
        print!("{out}");
        return Ok(0);
    }
    let sigma = sigma.ok_or_else(|| anyhow!("--sigma or --all is required"))?;
    let v = classify(family, sigma).with_context(|| format!("cannot classify {family} at σ = {sigma}"))?;
    let (o, w, e) = outcome_parts(&v.outcome);
    let out = match format {
        Format::Md => {
            let mut s = String::new();
            let _ = writeln!(
                s,
                "family: {family} ({}), ξ = {}, σ = {}",
                family.symbol(),
                num(v.family.xi),
                num(sigma)
            );
            let _ = writeln!(s, "verdict: {}", v.outcome.label());
            if !e.is_empty() {
                let _ = writeln!(s, "witness: {w} = {e}");
            }
            let _ = writeln!(s, "source: {}", v.source);
            s
        }
        Format::Json => json(serde_json::to_value(&v)?),
        Format::Csv => {
            csv_line(&[
                "family".into(),
                "sigma".into(),
                "outcome".into(),
                "witness".into(),
                "expression".into(),
                "source".into(),
            ]) + &csv_line(&[family.to_string(), num(sigma), o, w, e, v.source.clone()])
        }
    };
    print!("{out}");
    Ok(0)
}

/// Replace the letter `F` in a candidate by the velocity expression.
fn substitute_velocity(w: &str, f: &CurvatureFunction) -> String {
    w.replace('F', &format!("({})", f.text()))
}

fn verdict_name(v: CheckVerdict) -> &'static str {
    match v {
        CheckVerdict::Pass => "pass",
        CheckVerdict::Fail => "fail",
        CheckVerdict::Inconclusive => "inconclusive",
    }
}

fn witness_text(w: Option<Witness>) -> String {
    match w {
        Some(Witness::Rho { rho }) => format!("ρ = {}", num(rho)),
        Some(Witness::Point { a, b }) => format!("(a, b) = ({}, {})", num(a), num(b)),
        None => String::new(),
    }
}

fn render_report(w: &CurvatureFunction, f: &CurvatureFunction, rep: &ConditionReport) -> String {
    let mut s = String::new();
    let _ = writeln!(s, "w = {}", w.text());
    let _ = writeln!(s, "F = {} (σ = {})", f.text(), num(rep.sigma));
    if let Some(chi) = rep.chi {
        let _ = writeln!(s, "degree of w: {}", num(chi));
    }
    if let Some(a) = &rep.alpha {
        let _ = writeln!(s, "α class: {}, c = {}, d = {}", a.class.name(), num(a.c), num(a.d));
    }
    let _ = writeln!(s);
    let _ = writeln!(s, "| condition | verdict | margin | witness | detail |");
    let _ = writeln!(s, "|---|---|---|---|---|");
    for (name, c) in rep.conditions() {
        let _ = writeln!(
            s,
            "| {name} | {} | {} | {} | {} |",
            verdict_name(c.verdict),
            num(c.margin),
            witness_text(c.witness),
            c.detail
        );
    }
    let _ = writeln!(s);
    let _ = writeln!(s, "overall: {}", verdict_name(rep.overall));
    s
}

#[allow(clippy::too_many_arguments)]
fn cmd_verify(
    w_text: &str,
    family: Option<Family>,
    xi: Option<f64>,
    sigma: f64,
    f_text: Option<&str>,
    s: Option<f64>,
    cfg: &CheckConfig,
    format: Format,
) -> Result<u8> {
    if sigma == 0.0 || !sigma.is_finite() {
        bail!("σ must be a nonzero finite number, got {sigma}");
    }
    let s = s.unwrap_or(sigma);
    let f = match (family, xi, f_text) {
        (Some(fam), _, _) => make_velocity(&VelocityFamily::from(fam).spec(sigma)?)?,
        (None, Some(xi), _) => make_velocity(&VelocityFamilySpec::new(xi, sigma)?)?,
        (None, None, Some(t)) => parse_expression(t, s).with_context(|| format!("cannot parse F = `{t}`"))?,
        (None, None, None) => bail!("one of --family, --xi or --f is required"),
    };
    let w_full = substitute_velocity(w_text, &f);
    let w = parse_expression(&w_full, s).with_context(|| format!("cannot parse w = `{w_text}`"))?;
    let rep = check_mpf_sigma(&w, &f, sigma, cfg);
    let out = match format {
        Format::Md => render_report(&w, &f, &rep),
        Format::Json => {
            let mut v = rep.to_json();
            v["w"] = json!(w.text());
            v["F"] = json!(f.text());
            json(v)
        }
        Format::Csv => {
            let mut out = csv_line(&[
                "condition".into(),
                "verdict".into(),
                "margin".into(),
                "witness".into(),
                "detail".into(),
            ]);
            for (name, c) in rep.conditions() {
                out += &csv_line(&[
                    name.into(),
                    verdict_name(c.verdict).into(),
                    num(c.margin),
                    witness_text(c.witness),
                    c.detail.clone(),
                ]);
            }
            out
        }
    };
    print!("{out}");
    Ok(match rep.overall {
        CheckVerdict::Pass => 0,
        CheckVerdict::Fail => EXIT_FAIL,
        CheckVerdict::Inconclusive => EXIT_INCONCLUSIVE,
    })
}

fn certificate_lines(s: &mut String, c: &NegativityCertificate) {
    let _ = writeln!(s, "exact certificate over {}:", c.field);
    let _ = writeln!(s, "  interval: (0, {}]", c.interval_end);
    let _ = writeln!(s, "  stripped factor: ρ^{}", c.stripped_power);
    let _ = writeln!(s, "  Sturm sequence length: {}", c.sturm_length);
    let _ = writeln!(s, "  roots in interval: {}", c.roots_in_interval);
    let _ = writeln!(s, "  sign at r/2: {}, sign at r: {}", c.sign_at_midpoint, c.sign_at_end);
    let _ = writeln!(s, "  negative: {}", c.negative);
}

fn cmd_sigma_delta(family: PhiFamily, sigma0: Option<f64>, delta: Option<f64>, tol: f64, format: Format) -> Result<u8> {
    if format == Format::Csv {
        return Err(unsupported(format, "sigma-delta"));
    }
    let sigma0 = sigma0.unwrap_or_else(|| family.root_onset());
    if let Some(delta) = delta {
        let f = feasibility(family, sigma0, delta)?;
        let out = match format {
            Format::Json => json(serde_json::to_value(&f)?),
            _ => {
                let mut s = String::new();
                let _ = writeln!(s, "family: {family}");
                let _ = writeln!(
                    s,
                    "σ₀ = {}, δ = {}, σ₀ + δ = {}",
                    num(f.sigma0),
                    num(f.delta),
                    num(f.sigma_delta)
                );
                let _ = writeln!(s, "ρ₀ = {}", num(f.rho0));
                let _ = writeln!(s, "δΦ₁ + Φ₂ < 0 on (0, ρ₀]: {}", f.negative);
                if let Some(c) = &f.exact {
                    certificate_lines(&mut s, c);
                }
                s
            }
        };
        print!("{out}");
        return Ok(if f.negative { 0 } else { EXIT_FAIL });
    }
    if tol.is_nan() || tol <= 0.0 {
        bail!("--tol must be positive, got {tol}");
    }
    let sd = find_sigma_delta(family, sigma0, tol)?;
    let out = match format {
        Format::Json => json(serde_json::to_value(&sd)?),
        _ => {
            let mut s = String::new();
            let _ = writeln!(s, "family: {family}");
            let _ = writeln!(s, "σ₀ = {}", num(sd.sigma0));
            let _ = writeln!(s, "ρ₀ = {}", num(sd.rho0));
            let _ = writeln!(
                s,
                "δ_min = {} (not certified below {})",
                num(sd.delta),
                num(sd.delta_lower)
            );
            let _ = writeln!(s, "σ_δ = {}", num(sd.sigma_delta));
            let _ = writeln!(s, "tolerance: {}", num(sd.tolerance));
            let _ = writeln!(s, "method: {}", sd.method);
            if let Some(c) = &sd.exact {
                certificate_lines(&mut s, c);
            }
            s
        }
    };
    print!("{out}");
    Ok(0)
}

/// First catalog MPF for `family` whose σ-range contains σ, table witnesses first.
fn catalog_mpf(family: VelocityFamily, sigma: f64) -> Option<&'static CatalogEntry> {
    let fits = |e: &&CatalogEntry| {
        e.family == CatalogFamily::Family(family)
            && e.expected_verdict == ExpectedVerdict::Mpf
            && e.sigma_range.contains(sigma)
    };
    catalog()
        .iter()
        .filter(fits)
        .find(|e| e.table_witness)
        .or_else(|| catalog().iter().find(fits))
}

fn cmd_plot_data(family: VelocityFamily, sigmas: &[f64], grid: usize, rho_min: f64, use_catalog: bool) -> Result<u8> {
    if sigmas.is_empty() {
        bail!("--sigmas must not be empty");
    }
    if let Some(&s) = sigmas.iter().find(|s| **s == 0.0 || !s.is_finite()) {
        bail!("σ must be a nonzero finite number, got {s}");
    }
    if grid < 2 || !(rho_min > 0.0 && rho_min < 0.5) {
        bail!("need --grid ≥ 2 and 0 < --rho-min < 0.5");
    }
    let rhos = log_uniform(rho_min, 1.0 - rho_min, grid);
    let mut header = vec!["rho".to_string()];
    let mut columns: Vec<Vec<f64>> = Vec::new();
    for &sigma in sigmas {
        if use_catalog {
            let Some(entry) = catalog_mpf(family, sigma) else {
                eprintln!("note: no catalog MPF for {family} at σ = {sigma}; column skipped");
                continue;
            };
            let (w, _, _) = entry.instantiate(sigma)?;
            let col = rhos
                .iter()
                .map(|&r| alpha_at(&w, r).map_or(f64::NAN, |a| r * a.alpha))
                .collect();
            header.push(format!("{}_sigma={}", entry.name, num(sigma)));
            columns.push(col);
        } else {
            let beta = family_beta(family.xi(sigma));
            let col = rhos.iter().map(|&r| r * alpha_vanishing_beta(beta, sigma, r)).collect();
            header.push(format!("vanishing_sigma={}", num(sigma)));
            columns.push(col);
        }
    }
    let mut out = csv_line(&header);
    for (i, &r) in rhos.iter().enumerate() {
        let mut row = vec![num(r)];
        row.extend(columns.iter().map(|c| num(c[i])));
        out += &csv_line(&row);
    }
    print!("{out}");
    Ok(0)
}

fn cmd_roots(family: PhiFamily, sigma: f64, format: Format) -> Result<u8> {
    let roots = match family {
        PhiFamily::Mean => roots_mean(sigma),
        PhiFamily::Norm => roots_norm(sigma),
    }?;
    let out = match format {
        Format::Json => json(json!({ "family": family, "sigma": sigma, "roots": roots })),
        Format::Md => {
            let mut s = format!("roots of the vanishing α, {family}, σ = {}\n", num(sigma));
            if roots.is_empty() {
                s += "no roots\n";
            }
            for r in &roots {
                let _ = writeln!(
                    s,
                    "ρ = {}  bracket [{}, {}]  residual {}  ({:?})",
                    num(r.root),
                    r.bracket.0,
                    r.bracket.1,
                    num(r.residual),
                    r.method
                );
            }
            s
        }
        Format::Csv => {
            let mut s = csv_line(&[
                "root".into(),
                "lo".into(),
                "hi".into(),
                "residual".into(),
                "method".into(),
            ]);
            for r in &roots {
                s += &csv_line(&[
                    num(r.root),
                    num(r.bracket.0),
                    num(r.bracket.1),
                    num(r.residual),
                    format!("{:?}", r.method),
                ]);
            }
            s
        }
    };
    print!("{out}");
    Ok(0)
}

fn limit_row(r: &LimitRecord) -> Vec<String> {
    vec![
        r.id.clone(),
        r.quantity.to_string(),
        r.alpha_class.name().into(),
        r.xi_regime.clone(),
        num(r.args.xi),
        num(r.args.sigma),
        num(r.args.c),
        num(r.args.d),
        num(r.scaling_exponent),
        num(r.limit_value),
        r.expression.into(),
        num(r.numeric),
        r.matches.to_string(),
        r.flagged.to_string(),
    ]
}

const LIMIT_HEADER: [&str; 14] = [
    "id",
    "quantity",
    "class",
    "regime",
    "xi",
    "sigma",
    "c",
    "d",
    "scaling",
    "limit",
    "expression",
    "numeric",
    "matches",
    "flagged",
];

fn cmd_limits(
    class: Option<AlphaClass>,
    xi: Option<f64>,
    sigma: Option<f64>,
    c: Option<f64>,
    d: f64,
    format: Format,
) -> Result<u8> {
    let records = match class {
        Some(class) => {
            let (xi, sigma, c) = (xi.unwrap_or_default(), sigma.unwrap_or_default(), c.unwrap_or_default());
            limit_table(class, xi, sigma, c, d)?
        }
        None => limit_sweep(),
    };
    let summary = summarize(&records);
    let out = match format {
        Format::Json => json(json!({ "records": records, "summary": summary })),
        Format::Csv => {
            let mut s = csv_line(&LIMIT_HEADER.map(String::from));
            for r in &records {
                s += &csv_line(&limit_row(r));
            }
            s
        }
        Format::Md => {
            let mut s = format!("| {} |\n", LIMIT_HEADER.join(" | "));
            let _ = writeln!(s, "|{}", "---|".repeat(LIMIT_HEADER.len()));
            for r in &records {
                let _ = writeln!(s, "| {} |", limit_row(r).join(" | "));
            }
            let _ = writeln!(s);
            let _ = writeln!(
                s,
                "{} records, {} mismatches, flagged: {}",
                summary.records,
                summary.mismatches.len(),
                summary.flagged.join(", ")
            );
            s
        }
    };
    print!("{out}");
    Ok(if summary.mismatches.is_empty() { 0 } else { EXIT_FAIL })
}

fn read_coefficients(path: &PathBuf) -> Result<Vec<BigRational>> {
    let text = std::fs::read_to_string(path).with_context(|| format!("cannot read {}", path.display()))?;
    let mut coeffs = Vec::new();
    for line in text.lines() {
        let line = line.split('#').next().unwrap_or("");
        for tok in line
            .split(|c: char| c.is_whitespace() || c == ',')
            .filter(|t| !t.is_empty())
        {
            coeffs.push(parse_rational(tok).ok_or_else(|| anyhow!("bad coefficient `{tok}`"))?);
        }
    }
    if coeffs.is_empty() {
        bail!("{} contains no coefficients", path.display());
    }
    Ok(coeffs)
}

fn cmd_certify(path: &PathBuf, r: &str, format: Format) -> Result<u8> {
    let coeffs = read_coefficients(path)?;
    let r = parse_rational(r).ok_or_else(|| anyhow!("bad interval end `{r}`"))?;
    let p = Poly::new(coeffs);
    let cert = certify_negative(&p, &r)?;
    let out = match format {
        Format::Json => json(json!({ "polynomial": p.to_string(), "certificate": cert })),
        Format::Md => {
            let mut s = format!("p(ρ) = {p}\n");
            certificate_lines(&mut s, &cert);
            s
        }
        Format::Csv => return Err(unsupported(format, "certify")),
    };
    print!("{out}");
    Ok(if cert.negative { 0 } else { EXIT_FAIL })
}

fn expected_name(e: ExpectedVerdict) -> &'static str {
    match e {
        ExpectedVerdict::Mpf => "mpf",
        ExpectedVerdict::VanishingOnly => "vanishing-only",
        ExpectedVerdict::NonMpf => "non-mpf",
    }
}

fn family_name(f: CatalogFamily) -> String {
    match f {
        CatalogFamily::Family(v) => v.to_string(),
        CatalogFamily::Any => "any".into(),
    }
}

struct CatalogRun {
    entry: &'static CatalogEntry,
    sigma: f64,
    overall: CheckVerdict,
    first_failure: String,
    as_expected: bool,
}

fn cmd_catalog(verify: bool, seed: u64, format: Format) -> Result<u8> {
    if !verify {
        let out = match format {
            Format::Json => json(mpf_core::velocities::catalog_json()),
            Format::Csv => {
                let mut s =
                    csv_line(&["name", "family", "sigma", "expected", "expression", "provenance"].map(String::from));
                for e in catalog() {
                    s += &csv_line(&[
                        e.name.into(),
                        family_name(e.family),
                        display_range(&e.sigma_range),
                        expected_name(e.expected_verdict).into(),
                        e.expression.into(),
                        e.provenance.into(),
                    ]);
                }
                s
            }
            Format::Md => {
                let mut s =
                    "| name | family | σ | expected | w | provenance |\n|---|---|---|---|---|---|\n".to_string();
                for e in catalog() {
                    let _ = writeln!(
                        s,
                        "| {} | {} | {} | {} | `{}` | {} |",
                        e.name,
                        family_name(e.family),
                        display_range(&e.sigma_range),
                        expected_name(e.expected_verdict),
                        e.expression,
                        e.provenance
                    );
                }
                s
            }
        };
        print!("{out}");
        return Ok(0);
    }
    let cfg = CheckConfig {
        seed,
        ..CheckConfig::default()
    };
    let mut runs = Vec::new();
    for e in catalog().iter().filter(|e| e.family != CatalogFamily::Any) {
        for &sigma in e.sample_sigmas {
            let (w, f, _) = e.instantiate(sigma)?;
            let rep = check_mpf_sigma(&w, &f, sigma, &cfg);
            let first_failure = rep
                .first_failure()
                .map(|(n, c)| format!("{n} at {}", witness_text(c.witness)))
                .unwrap_or_default();
            let as_expected = match e.expected_verdict {
                ExpectedVerdict::Mpf => rep.overall == CheckVerdict::Pass,
                ExpectedVerdict::NonMpf => rep.overall == CheckVerdict::Fail,
                ExpectedVerdict::VanishingOnly => true,
            };
            runs.push(CatalogRun {
                entry: e,
                sigma,
                overall: rep.overall,
                first_failure,
                as_expected,
            });
        }
    }
    let out = match format {
        Format::Json => json(serde_json::Value::Array(
            runs.iter()
                .map(|r| {
                    json!({
                        "name": r.entry.name,
                        "sigma": r.sigma,
                        "expected": expected_name(r.entry.expected_verdict),
                        "verdict": verdict_name(r.overall),
                        "first_failure": r.first_failure,
                        "as_expected": r.as_expected,
                    })
                })
                .collect(),
        )),
        Format::Csv => {
            let mut s =
                csv_line(&["name", "sigma", "expected", "verdict", "first_failure", "as_expected"].map(String::from));
            for r in &runs {
                s += &csv_line(&[
                    r.entry.name.into(),
                    num(r.sigma),
                    expected_name(r.entry.expected_verdict).into(),
                    verdict_name(r.overall).into(),
                    r.first_failure.clone(),
                    r.as_expected.to_string(),
                ]);
            }
            s
        }
        Format::Md => {
            let mut s = "| name | σ | expected | verdict | first failure | as expected |\n|---|---|---|---|---|---|\n"
                .to_string();
            for r in &runs {
                let _ = writeln!(
                    s,
                    "| {} | {} | {} | {} | {} | {} |",
                    r.entry.name,
                    num(r.sigma),
                    expected_name(r.entry.expected_verdict),
                    verdict_name(r.overall),
                    r.first_failure,
                    r.as_expected
                );
            }
            s
        }
    };
    print!("{out}");
    Ok(if runs.iter().all(|r| r.as_expected) {
        0
    } else {
        EXIT_FAIL
    })
}
