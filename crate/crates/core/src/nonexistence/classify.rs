//! Existence verdicts for `F^σ_ξ` and the per-family classification tables.

use super::phi::{find_sigma_delta, PhiFamily, DELTA_TOL};
use super::NonexistenceError;
use crate::velocities::{
    catalog, CatalogEntry, CatalogFamily, Endpoint, ExpectedVerdict, SigmaRange, VelocityFamily, VelocityFamilySpec,
};
use serde::Serialize;
use std::fmt::Write as _;
use std::sync::OnceLock;

/// What a necessary condition pins down.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
#[serde(tag = "type", rename_all = "kebab-case")]
pub enum Constraint {
    /// ρα → c with c = 1/σ.
    AlphaLimit {
        c: f64,
    },
    SigmaInterval {
        range: SigmaRange,
    },
}

#[derive(Debug, Clone, PartialEq, Serialize)]
#[serde(tag = "kind", rename_all = "kebab-case")]
pub enum Outcome {
    NonExistent,
    Exists { witness: String, expression: String },
    Constraint { constraint: Constraint },
    Open,
    NoConclusion,
}

impl Outcome {
    pub fn label(&self) -> String {
        match self {
            Outcome::NonExistent => "non-existent".into(),
            Outcome::Exists { witness, .. } => format!("exists ({witness})"),
            Outcome::Constraint { constraint } => match constraint {
                Constraint::AlphaLimit { c } => format!("constraint c = 1/σ = {c}"),
                Constraint::SigmaInterval { range } => format!("constraint {range}"),
            },
            Outcome::Open => "open".into(),
            Outcome::NoConclusion => "no conclusion".into(),
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct Verdict {
    pub family: VelocityFamilySpec,
    pub outcome: Outcome,
    pub source: String,
}

fn verdict(family: VelocityFamilySpec, outcome: Outcome, source: impl Into<String>) -> Verdict {
    Verdict {
        family,
        outcome,
        source: source.into(),
    }
}

fn spec_of(xi: f64, sigma: f64) -> Result<VelocityFamilySpec, NonexistenceError> {
    VelocityFamilySpec::new(xi, sigma).map_err(|_| NonexistenceError::ZeroSigma)
}

/// Necessary conditions from the ρ → 0 limits of C, E, G (family ξ).
pub fn necessary_conditions(xi: f64, sigma: f64) -> Result<Verdict, NonexistenceError> {
    if sigma == 0.0 {
        return Err(NonexistenceError::ZeroSigma);
    }
    if sigma > 0.0 && sigma <= 1.0 {
        return Err(NonexistenceError::ContractingBelowOne(sigma));
    }
    let spec = spec_of(xi, sigma)?;
    let xi = spec.xi;
    let interval = |range: SigmaRange, src: &str| {
        if range.contains(sigma) {
            verdict(
                spec,
                Outcome::Constraint {
                    constraint: Constraint::SigmaInterval { range },
                },
                src,
            )
        } else {
            verdict(spec, Outcome::NonExistent, src)
        }
    };
    Ok(if sigma > 1.0 {
        if xi > 0.0 {
            verdict(
                spec,
                Outcome::Constraint {
                    constraint: Constraint::AlphaLimit { c: 1.0 / sigma },
                },
                "necessary conditions, contracting, ξ > 0",
            )
        } else if xi == 0.0 {
            interval(
                SigmaRange::new(Endpoint::Open(1.0), Endpoint::Closed(2.0)),
                "necessary conditions, contracting, ξ = 0",
            )
        } else {
            verdict(spec, Outcome::NonExistent, "necessary conditions, contracting, ξ < 0")
        }
    } else if xi > 0.0 {
        interval(
            SigmaRange::new(Endpoint::Closed(-1.0), Endpoint::Open(0.0)),
            "necessary conditions, expanding, ξ > 0",
        )
    } else if xi == 0.0 {
        interval(
            SigmaRange::new(Endpoint::Closed(-2.0), Endpoint::Open(0.0)),
            "necessary conditions, expanding, ξ = 0",
        )
    } else {
        verdict(spec, Outcome::Open, "necessary conditions, expanding, ξ < 0")
    })
}

/// Contracting velocities of degree σ ∈ (0, 1] admit no MPF.
pub fn degree_obstruction(sigma: f64) -> Result<Outcome, NonexistenceError> {
    if sigma <= 0.0 {
        return Err(NonexistenceError::NotContracting(sigma));
    }
    Ok(if sigma <= 1.0 {
        Outcome::NonExistent
    } else {
        Outcome::NoConclusion
    })
}

/// σ_δ from the δ-search at the root onset, computed once per family.
pub fn sigma_delta(family: PhiFamily) -> f64 {
    static MEAN: OnceLock<f64> = OnceLock::new();
    static NORM: OnceLock<f64> = OnceLock::new();
    let cell = match family {
        PhiFamily::Mean => &MEAN,
        PhiFamily::Norm => &NORM,
    };
    *cell.get_or_init(|| {
        find_sigma_delta(family, family.root_onset(), DELTA_TOL)
            .expect("the δ-search succeeds at the root onset")
            .sigma_delta
    })
}

fn table_witness(family: VelocityFamily, sigma: f64) -> Option<&'static CatalogEntry> {
    catalog().iter().find(|e| {
        e.table_witness
            && e.expected_verdict == ExpectedVerdict::Mpf
            && e.family == CatalogFamily::Family(family)
            && e.sigma_range.contains(sigma)
    })
}

/// Verdict for `family` at σ, combining the degree obstruction, the
/// necessary conditions, the Φ thresholds and catalog witnesses.
pub fn classify(family: VelocityFamily, sigma: f64) -> Result<Verdict, NonexistenceError> {
    if sigma == 0.0 {
        return Err(NonexistenceError::ZeroSigma);
    }
    let spec = family.spec(sigma).map_err(|_| NonexistenceError::ZeroSigma)?;
    if sigma > 0.0 && degree_obstruction(sigma)? == Outcome::NonExistent {
        let src = if sigma == 1.0 {
            "no MPF for contracting velocities of degree one"
        } else {
            "no MPF for contracting velocities of degree in (0, 1)"
        };
        return Ok(verdict(spec, Outcome::NonExistent, src));
    }
    let nc = necessary_conditions(spec.xi, sigma)?;
    if nc.outcome == Outcome::NonExistent {
        return Ok(nc);
    }
    if let Ok(pf) = PhiFamily::try_from(family) {
        let sd = sigma_delta(pf);
        if sigma >= sd {
            return Ok(verdict(
                spec,
                Outcome::NonExistent,
                format!("Φ inequality, σ ≥ σ_δ = {sd:.4}"),
            ));
        }
    }
    if let Some(w) = table_witness(family, sigma) {
        return Ok(verdict(
            spec,
            Outcome::Exists {
                witness: w.name.to_string(),
                expression: w.expression.to_string(),
            },
            w.provenance,
        ));
    }
    let src = match nc.outcome {
        Outcome::Open => nc.source,
        _ => format!("{}; no witness and no obstruction", nc.source),
    };
    Ok(verdict(spec, Outcome::Open, src))
}

/// One row of a classification table.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct TableRow {
    pub range: SigmaRange,
    pub outcome: Outcome,
    pub source: String,
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct ClassificationTable {
    pub family: VelocityFamily,
    /// Ordered by decreasing σ.
    pub rows: Vec<TableRow>,
}

fn range_endpoints(r: &SigmaRange) -> Vec<f64> {
    [r.lo, r.hi]
        .into_iter()
        .filter_map(|e| match e {
            Endpoint::Open(x) | Endpoint::Closed(x) => Some(x),
            Endpoint::Unbounded => None,
        })
        .collect()
}

/// Breakpoints in σ where the verdict for `family` can change.
fn breakpoints(family: VelocityFamily) -> Vec<f64> {
    let mut b = vec![0.0, 1.0];
    match family {
        VelocityFamily::Gauss => b.extend([-2.0, 2.0]),
        VelocityFamily::Mean | VelocityFamily::Norm => b.push(-1.0),
        VelocityFamily::Trace => {}
    }
    if let Ok(pf) = PhiFamily::try_from(family) {
        b.push(sigma_delta(pf));
    }
    for e in catalog() {
        if e.table_witness && e.family == CatalogFamily::Family(family) {
            b.extend(range_endpoints(&e.sigma_range));
        }
    }
    b.sort_by(f64::total_cmp);
    b.dedup();
    b
}

fn same_row(a: &Verdict, b: &Verdict) -> bool {
    a.outcome == b.outcome
}

/// The classification table of `family`, built by classifying at every
/// breakpoint and between consecutive breakpoints and merging equal rows.
pub fn classification_table(family: VelocityFamily) -> ClassificationTable {
    let bps = breakpoints(family);
    // (σ, is breakpoint)
    let mut pts: Vec<(f64, bool)> = vec![(bps[0] - 1.0, false)];
    for (i, &x) in bps.iter().enumerate() {
        pts.push((x, true));
        let next = bps.get(i + 1).copied().unwrap_or(x + 2.0);
        pts.push((0.5 * (x + next), false));
    }

    struct Pending {
        lo: Endpoint,
        v: Verdict,
        last: (f64, bool),
        idx: usize,
    }
    let mut rows = Vec::new();
    let mut cur: Option<Pending> = None;
    let close = |o: Pending, next: Option<usize>, rows: &mut Vec<TableRow>| {
        let hi = if next.is_none() && !o.last.1 && o.idx == pts.len() - 1 {
            Endpoint::Unbounded
        } else if o.last.1 {
            Endpoint::Closed(o.last.0)
        } else {
            Endpoint::Open(bps.iter().copied().find(|&b| b > o.last.0).unwrap())
        };
        rows.push(TableRow {
            range: SigmaRange::new(o.lo, hi),
            outcome: o.v.outcome,
            source: o.v.source,
        });
    };
    for (i, &(s, is_bp)) in pts.iter().enumerate() {
        let v = match classify(family, s) {
            Ok(v) => v,
            Err(_) => {
                if let Some(o) = cur.take() {
                    close(o, Some(i), &mut rows);
                }
                continue;
            }
        };
        if let Some(o) = cur.as_mut() {
            if same_row(&o.v, &v) {
                o.last = (s, is_bp);
                o.idx = i;
                continue;
            }
            let o = cur.take().unwrap();
            close(o, Some(i), &mut rows);
        }
        let lo = if i == 0 {
            Endpoint::Unbounded
        } else if is_bp {
            Endpoint::Closed(s)
        } else {
            Endpoint::Open(bps.iter().copied().rev().find(|&b| b < s).unwrap())
        };
        cur = Some(Pending {
            lo,
            v,
            last: (s, is_bp),
            idx: i,
        });
    }
    if let Some(o) = cur.take() {
        close(o, None, &mut rows);
    }
    rows.reverse();
    ClassificationTable { family, rows }
}

/// Truncate toward zero at two decimals, the display precision of the tables.
pub fn truncate2(x: f64) -> f64 {
    (x * 100.0).trunc() / 100.0
}

fn fmt_endpoint_value(x: f64) -> String {
    let t = truncate2(x);
    if t == t.trunc() {
        format!("{t}")
    } else {
        format!("{t:.2}")
    }
}

/// The range with thresholds shown at table precision.
pub fn display_range(r: &SigmaRange) -> String {
    let map = |e: Endpoint| match e {
        Endpoint::Open(x) => Endpoint::Open(fmt_endpoint_value(x).parse().unwrap()),
        Endpoint::Closed(x) => Endpoint::Closed(fmt_endpoint_value(x).parse().unwrap()),
        Endpoint::Unbounded => Endpoint::Unbounded,
    };
    SigmaRange::new(map(r.lo), map(r.hi)).to_string()
}

impl ClassificationTable {
    pub fn to_markdown(&self) -> String {
        let mut s = String::new();
        let _ = writeln!(s, "| σ | MPF | witness | source |");
        let _ = writeln!(s, "|---|---|---|---|");
        for r in &self.rows {
            let (mpf, witness) = match &r.outcome {
                Outcome::Exists { witness, expression } => (format!("`{expression}`"), witness.clone()),
                o => (o.label(), String::new()),
            };
            let _ = writeln!(
                s,
                "| {} | {} | {} | {} |",
                display_range(&r.range),
                mpf,
                witness,
                r.source
            );
        }
        s
    }

    pub fn to_json(&self) -> serde_json::Value {
        serde_json::to_value(self).expect("table serializes")
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn is(v: &Verdict, o: &Outcome) -> bool {
        std::mem::discriminant(&v.outcome) == std::mem::discriminant(o)
    }

    #[test]
    fn necessary_condition_examples() {
        assert_eq!(necessary_conditions(0.0, 3.0).unwrap().outcome, Outcome::NonExistent);
        assert_eq!(necessary_conditions(1.0, -1.5).unwrap().outcome, Outcome::NonExistent);
        assert_eq!(necessary_conditions(-1.0, -3.0).unwrap().outcome, Outcome::Open);
        let v = necessary_conditions(1.0, 4.0).unwrap();
        assert_eq!(
            v.outcome,
            Outcome::Constraint {
                constraint: Constraint::AlphaLimit { c: 0.25 }
            }
        );
        assert!(matches!(
            necessary_conditions(1.0, 0.0),
            Err(NonexistenceError::ZeroSigma)
        ));
    }

    #[test]
    fn degree_examples() {
        assert_eq!(degree_obstruction(1.0).unwrap(), Outcome::NonExistent);
        assert_eq!(degree_obstruction(0.5).unwrap(), Outcome::NonExistent);
        assert_eq!(degree_obstruction(1.01).unwrap(), Outcome::NoConclusion);
    }

    #[test]
    fn classify_examples() {
        let v = classify(VelocityFamily::Gauss, -1.0).unwrap();
        assert!(matches!(&v.outcome, Outcome::Exists { witness, .. } if witness == "li-gauss"));
        assert_eq!(classify(VelocityFamily::Mean, 5.5).unwrap().outcome, Outcome::Open);
        assert_eq!(
            classify(VelocityFamily::Norm, 12.0).unwrap().outcome,
            Outcome::NonExistent
        );
        assert_eq!(classify(VelocityFamily::Trace, -0.5).unwrap().outcome, Outcome::Open);
        assert!(is(
            &classify(VelocityFamily::Mean, 3.0).unwrap(),
            &Outcome::Exists {
                witness: String::new(),
                expression: String::new()
            }
        ));
    }

    #[test]
    fn table_row_counts() {
        let counts: Vec<usize> = VelocityFamily::ALL
            .iter()
            .map(|f| classification_table(*f).rows.len())
            .collect();
        assert_eq!(counts, vec![7, 7, 6, 5]);
    }
}
