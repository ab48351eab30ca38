//! The velocity family `F^σ_ξ`, the quantity β, and the catalog of named
//! candidate functions.

use crate::expressions::{parse_expression, CurvatureFunction, EvalError, Expr, ParseError};
use serde::{Deserialize, Serialize};
use std::fmt;
use std::str::FromStr;
use thiserror::Error;

#[derive(Debug, Clone, PartialEq, Error)]
pub enum VelocityError {
    #[error("σ must be a nonzero finite number, got {0}")]
    ZeroSigma(f64),
    #[error("ξ must be finite, got {0}")]
    BadXi(f64),
    #[error("F_b vanishes at (a, b) = ({a}, {b})")]
    VanishingDenominator { a: f64, b: f64 },
    #[error(transparent)]
    Eval(#[from] EvalError),
    #[error(transparent)]
    Parse(#[from] ParseError),
    #[error("catalog entry `{0}` has no fixed velocity family")]
    NoFamily(String),
}

/// Below this magnitude ξ is treated as the Gauss branch ξ = 0.
pub const XI_ZERO_TOL: f64 = 1e-12;

/// The pair (ξ, σ) of `F^σ_ξ`.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct VelocityFamilySpec {
    pub xi: f64,
    pub sigma: f64,
}

impl VelocityFamilySpec {
    pub fn new(xi: f64, sigma: f64) -> Result<Self, VelocityError> {
        if sigma == 0.0 || !sigma.is_finite() {
            return Err(VelocityError::ZeroSigma(sigma));
        }
        if !xi.is_finite() {
            return Err(VelocityError::BadXi(xi));
        }
        let xi = if xi != 0.0 && xi.abs() < XI_ZERO_TOL {
            log::warn!("|ξ| = {} < {XI_ZERO_TOL:e}; using the ξ = 0 branch", xi.abs());
            0.0
        } else {
            xi
        };
        Ok(VelocityFamilySpec { xi, sigma })
    }

    pub fn is_contracting(&self) -> bool {
        self.sigma > 0.0
    }

    /// β = F_a/F_b at (ρ, 1).
    pub fn beta(&self, rho: f64) -> f64 {
        beta_of_family(self, rho)
    }
}

impl fmt::Display for VelocityFamilySpec {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "F^{}_{}", self.sigma, self.xi)
    }
}

/// The four named subfamilies of `F^σ_ξ`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum VelocityFamily {
    /// ξ = 0: powers of the Gauss curvature.
    Gauss,
    /// ξ = 1: powers of the mean curvature.
    Mean,
    /// ξ = 2: powers of the norm of the second fundamental form.
    Norm,
    /// ξ = σ: trace of powers of the second fundamental form.
    Trace,
}

impl VelocityFamily {
    pub const ALL: [VelocityFamily; 4] = [
        VelocityFamily::Gauss,
        VelocityFamily::Mean,
        VelocityFamily::Norm,
        VelocityFamily::Trace,
    ];

    pub fn xi(self, sigma: f64) -> f64 {
        match self {
            VelocityFamily::Gauss => 0.0,
            VelocityFamily::Mean => 1.0,
            VelocityFamily::Norm => 2.0,
            VelocityFamily::Trace => sigma,
        }
    }

    pub fn spec(self, sigma: f64) -> Result<VelocityFamilySpec, VelocityError> {
        VelocityFamilySpec::new(self.xi(sigma), sigma)
    }

    pub fn name(self) -> &'static str {
        match self {
            VelocityFamily::Gauss => "gauss",
            VelocityFamily::Mean => "mean",
            VelocityFamily::Norm => "norm",
            VelocityFamily::Trace => "trace",
        }
    }

    /// Conventional symbol of `F^σ_ξ` for this family.
    pub fn symbol(self) -> &'static str {
        match self {
            VelocityFamily::Gauss => "K^{σ/2}",
            VelocityFamily::Mean => "H^σ",
            VelocityFamily::Norm => "|A|^σ",
            VelocityFamily::Trace => "tr A^σ",
        }
    }
}

impl fmt::Display for VelocityFamily {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

impl FromStr for VelocityFamily {
    type Err = String;
    fn from_str(s: &str) -> Result<Self, String> {
        match s.to_ascii_lowercase().as_str() {
            "gauss" | "k" => Ok(VelocityFamily::Gauss),
            "mean" | "h" => Ok(VelocityFamily::Mean),
            "norm" | "a" | "|a|" => Ok(VelocityFamily::Norm),
            "trace" | "tr" => Ok(VelocityFamily::Trace),
            _ => Err(format!("unknown family `{s}` (expected gauss, mean, norm or trace)")),
        }
    }
}

fn pow(e: Expr, p: f64) -> Expr {
    if p == 1.0 {
        e
    } else {
        Expr::Pow(Box::new(e), p)
    }
}

/// `sgn(σ)(a^ξ + b^ξ)^{σ/ξ}`, or `sgn(σ)(ab)^{σ/2}` on the ξ = 0 branch.
pub fn make_velocity(spec: &VelocityFamilySpec) -> Result<CurvatureFunction, VelocityError> {
    let spec = VelocityFamilySpec::new(spec.xi, spec.sigma)?;
    let (xi, sigma) = (spec.xi, spec.sigma);
    let body = if xi == 0.0 {
        pow(Expr::Mul(Box::new(Expr::A), Box::new(Expr::B)), sigma / 2.0)
    } else {
        let sum = Expr::Add(Box::new(pow(Expr::A, xi)), Box::new(pow(Expr::B, xi)));
        pow(sum, sigma / xi)
    };
    let e = if sigma < 0.0 { Expr::Neg(Box::new(body)) } else { body };
    Ok(CurvatureFunction::from_expr(e).with_degree_hint(Some(sigma)))
}

/// β of `F^σ_ξ` at (ρ, 1): `ρ^{ξ−1}`, independent of σ.
pub fn beta_of_family(spec: &VelocityFamilySpec, rho: f64) -> f64 {
    rho.powf(spec.xi - 1.0)
}

/// β = F_a/F_b at (a, b).
pub fn beta_general(f: &CurvatureFunction, a: f64, b: f64) -> Result<f64, VelocityError> {
    let j = f.eval_jet2(a, b)?;
    if j.db == 0.0 {
        return Err(VelocityError::VanishingDenominator { a, b });
    }
    Ok(j.da / j.db)
}

/// One end of a σ-interval.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
#[serde(tag = "kind", content = "value", rename_all = "lowercase")]
pub enum Endpoint {
    Unbounded,
    Open(f64),
    Closed(f64),
}

/// A σ-interval with the endpoints exactly as printed in the tables.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct SigmaRange {
    pub lo: Endpoint,
    pub hi: Endpoint,
}

impl SigmaRange {
    pub const fn point(x: f64) -> Self {
        SigmaRange {
            lo: Endpoint::Closed(x),
            hi: Endpoint::Closed(x),
        }
    }
    pub const fn open(lo: f64, hi: f64) -> Self {
        SigmaRange {
            lo: Endpoint::Open(lo),
            hi: Endpoint::Open(hi),
        }
    }
    pub const fn new(lo: Endpoint, hi: Endpoint) -> Self {
        SigmaRange { lo, hi }
    }

    pub fn contains(&self, s: f64) -> bool {
        let lo_ok = match self.lo {
            Endpoint::Unbounded => true,
            Endpoint::Open(x) => s > x,
            Endpoint::Closed(x) => s >= x,
        };
        let hi_ok = match self.hi {
            Endpoint::Unbounded => true,
            Endpoint::Open(x) => s < x,
            Endpoint::Closed(x) => s <= x,
        };
        lo_ok && hi_ok
    }

    pub fn as_point(&self) -> Option<f64> {
        match (self.lo, self.hi) {
            (Endpoint::Closed(x), Endpoint::Closed(y)) if x == y => Some(x),
            _ => None,
        }
    }
}

impl fmt::Display for SigmaRange {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if let Some(x) = self.as_point() {
            return write!(f, "σ = {x}");
        }
        match (self.lo, self.hi) {
            (Endpoint::Unbounded, Endpoint::Unbounded) => write!(f, "σ ≠ 0"),
            (Endpoint::Unbounded, Endpoint::Open(x)) => write!(f, "σ < {x}"),
            (Endpoint::Unbounded, Endpoint::Closed(x)) => write!(f, "σ ≤ {x}"),
            (Endpoint::Open(x), Endpoint::Unbounded) => write!(f, "σ > {x}"),
            (Endpoint::Closed(x), Endpoint::Unbounded) => write!(f, "σ ≥ {x}"),
            (lo, hi) => {
                let l = match lo {
                    Endpoint::Open(x) => format!("({x}"),
                    Endpoint::Closed(x) => format!("[{x}"),
                    Endpoint::Unbounded => unreachable!(),
                };
                let h = match hi {
                    Endpoint::Open(x) => format!("{x})"),
                    Endpoint::Closed(x) => format!("{x}]"),
                    Endpoint::Unbounded => unreachable!(),
                };
                write!(f, "σ ∈ {l}, {h}")
            }
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(rename_all = "kebab-case")]
pub enum ExpectedVerdict {
    Mpf,
    VanishingOnly,
    NonMpf,
}

/// Velocity attached to a catalog entry.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(rename_all = "lowercase")]
pub enum CatalogFamily {
    Family(VelocityFamily),
    /// The generic vanishing function works for any velocity.
    Any,
}

/// A named candidate `w` with the velocity it is claimed (or known not) to
/// be an MPF for.
#[derive(Debug, Clone, Serialize)]
pub struct CatalogEntry {
    pub name: &'static str,
    pub family: CatalogFamily,
    /// Expression in `a`, `b`, `s`; the letter `F` stands for the velocity.
    pub expression: &'static str,
    pub sigma_range: SigmaRange,
    pub provenance: &'static str,
    pub expected_verdict: ExpectedVerdict,
    /// `w` coincides with the vanishing function `(a−b)²F²/(ab)²`.
    pub vanishing: bool,
    /// Entry is the witness printed in a classification table row.
    pub table_witness: bool,
    /// σ values inside `sigma_range` used for verification.
    #[serde(skip)]
    pub sample_sigmas: &'static [f64],
}

impl CatalogEntry {
    /// The candidate for the given velocity, with `s = σ`.
    pub fn candidate_for(&self, spec: &VelocityFamilySpec) -> Result<CurvatureFunction, VelocityError> {
        if self.expression.contains('F') {
            let f = make_velocity(spec)?;
            let text = self.expression.replace('F', &format!("({})", f.text()));
            Ok(parse_expression(&text, spec.sigma)?)
        } else {
            Ok(parse_expression(self.expression, spec.sigma)?)
        }
    }

    /// The entry's own velocity at σ.
    pub fn spec(&self, sigma: f64) -> Result<VelocityFamilySpec, VelocityError> {
        match self.family {
            CatalogFamily::Family(fam) => fam.spec(sigma),
            CatalogFamily::Any => Err(VelocityError::NoFamily(self.name.to_string())),
        }
    }

    /// Candidate and velocity at σ for entries with a fixed family.
    pub fn instantiate(
        &self,
        sigma: f64,
    ) -> Result<(CurvatureFunction, CurvatureFunction, VelocityFamilySpec), VelocityError> {
        let spec = self.spec(sigma)?;
        Ok((self.candidate_for(&spec)?, make_velocity(&spec)?, spec))
    }
}

use Endpoint::{Closed, Open, Unbounded};
use ExpectedVerdict::{Mpf, NonMpf, VanishingOnly};
use VelocityFamily::{Gauss, Mean, Norm, Trace};

const fn fam(f: VelocityFamily) -> CatalogFamily {
    CatalogFamily::Family(f)
}

static CATALOG: [CatalogEntry; 21] = [
    CatalogEntry {
        name: "andrews-gauss",
        family: fam(Gauss),
        expression: "(a-b)^2",
        sigma_range: SigmaRange::point(2.0),
        provenance: "B. Andrews, Gauss curvature flow",
        expected_verdict: Mpf,
        vanishing: true,
        table_witness: true,
        sample_sigmas: &[2.0],
    },
    CatalogEntry {
        name: "andrews-chen-gauss",
        family: fam(Gauss),
        expression: "(a-b)^2*(a*b)^s/(a*b)^2",
        sigma_range: SigmaRange::open(1.0, 2.0),
        provenance: "B. Andrews, X. Chen",
        expected_verdict: Mpf,
        vanishing: true,
        table_witness: true,
        sample_sigmas: &[1.25, 1.5, 1.9],
    },
    CatalogEntry {
        name: "li-gauss",
        family: fam(Gauss),
        expression: "(a-b)^2*(a*b)^(s/2)/(a*b)",
        sigma_range: SigmaRange::open(-2.0, 0.0),
        provenance: "Q. Li",
        expected_verdict: Mpf,
        vanishing: false,
        table_witness: true,
        sample_sigmas: &[-1.9, -1.5, -1.0, -0.5, -0.1],
    },
    CatalogEntry {
        name: "schnurer-gauss",
        family: fam(Gauss),
        expression: "(a-b)^2/(a*b)^2",
        sigma_range: SigmaRange::point(-2.0),
        provenance: "O. Schnürer",
        expected_verdict: Mpf,
        vanishing: false,
        table_witness: true,
        sample_sigmas: &[-2.0],
    },
    CatalogEntry {
        name: "schulze-mean",
        family: fam(Mean),
        expression: "(a-b)^2*(a+b)^(2*s)/(a*b)^2",
        sigma_range: SigmaRange::new(Open(1.0), Closed(5.17)),
        provenance: "F. Schulze, O. Schnürer",
        expected_verdict: Mpf,
        vanishing: true,
        table_witness: true,
        sample_sigmas: &[1.5, 2.0, 3.0, 4.0, 5.0, 5.15],
    },
    CatalogEntry {
        name: "mean-nonvanishing-2",
        family: fam(Mean),
        expression: "(a-b)^2*(a^2+4*a*b+b^2)/((a+b)*a*b)",
        sigma_range: SigmaRange::point(2.0),
        provenance: "non-vanishing MPF for H^2",
        expected_verdict: Mpf,
        vanishing: false,
        table_witness: false,
        sample_sigmas: &[2.0],
    },
    CatalogEntry {
        name: "mean-nonvanishing-3",
        family: fam(Mean),
        expression: "(a-b)^2*(a+b)^2*(a^2+a*b+b^2)/((a^2-a*b+b^2)*a*b)",
        sigma_range: SigmaRange::point(3.0),
        provenance: "O. Schnürer, non-vanishing MPF for H^3 (factor a^2+ab+b^2)",
        expected_verdict: Mpf,
        vanishing: false,
        table_witness: false,
        sample_sigmas: &[3.0],
    },
    CatalogEntry {
        name: "mean-nonvanishing-4",
        family: fam(Mean),
        expression: "(a-b)^2*(a+b)^6*(a^2+a*b+b^2)/(a*b)^2",
        sigma_range: SigmaRange::point(4.0),
        provenance: "O. Schnürer, non-vanishing MPF for H^4",
        expected_verdict: Mpf,
        vanishing: false,
        table_witness: false,
        sample_sigmas: &[4.0],
    },
    CatalogEntry {
        name: "mean-nonvanishing-5",
        family: fam(Mean),
        expression: "(a-b)^2*(a+b)^2*(16*(a+b)^8-(a*b)^4)/(a*b)^2",
        sigma_range: SigmaRange::point(5.0),
        provenance: "non-vanishing MPF for H^5",
        expected_verdict: Mpf,
        vanishing: false,
        table_witness: false,
        sample_sigmas: &[5.0],
    },
    CatalogEntry {
        name: "mean-nonvanishing-3-printed",
        family: fam(Mean),
        expression: "(a-b)^2*(a+b)^2*(a^2+2*a*b+b^2)/((a^2-a*b+b^2)*a*b)",
        sigma_range: SigmaRange::point(3.0),
        provenance: "H^3 candidate with factor a^2+2ab+b^2 as commonly printed; violates C <= 0",
        expected_verdict: NonMpf,
        vanishing: false,
        table_witness: false,
        sample_sigmas: &[3.0],
    },
    CatalogEntry {
        name: "mean-expanding",
        family: fam(Mean),
        expression: "(a-b)^2*(a^2+b^2)*(a*b)^s/((a+b)*(a*b)^2)",
        sigma_range: SigmaRange::open(-1.0, 0.0),
        provenance: "expanding H^σ witness",
        expected_verdict: Mpf,
        vanishing: false,
        table_witness: true,
        sample_sigmas: &[-0.9, -0.5, -0.1],
    },
    CatalogEntry {
        name: "schnurer-mean",
        family: fam(Mean),
        expression: "(a-b)^2/((a+b)*a*b)",
        sigma_range: SigmaRange::point(-1.0),
        provenance: "O. Schnürer",
        expected_verdict: Mpf,
        vanishing: false,
        table_witness: true,
        sample_sigmas: &[-1.0],
    },
    CatalogEntry {
        name: "andrews-chen-norm",
        family: fam(Norm),
        expression: "(a-b)^2*(a^2+b^2)^s/(a*b)^2",
        sigma_range: SigmaRange::new(Open(1.0), Closed(8.15)),
        provenance: "B. Andrews, X. Chen",
        expected_verdict: Mpf,
        vanishing: true,
        table_witness: true,
        sample_sigmas: &[1.5, 3.0, 5.0, 8.0],
    },
    CatalogEntry {
        name: "norm-expanding",
        family: fam(Norm),
        expression: "(a-b)^2*(a^3+b^3)*(a*b)^s/((a^2+b^2)^(1/2)*(a*b)^2)",
        sigma_range: SigmaRange::new(Closed(-1.0), Open(0.0)),
        provenance: "expanding |A|^σ witness",
        expected_verdict: Mpf,
        vanishing: false,
        table_witness: true,
        sample_sigmas: &[-1.0, -0.5, -0.1],
    },
    CatalogEntry {
        name: "andrews-chen-trace",
        family: fam(Trace),
        expression: "(a-b)^2*(a^(s)+b^(s))^2/(a*b)^2",
        sigma_range: SigmaRange::new(Open(1.0), Unbounded),
        provenance: "B. Andrews, X. Chen",
        expected_verdict: Mpf,
        vanishing: true,
        table_witness: true,
        sample_sigmas: &[1.5, 3.0, 7.0],
    },
    CatalogEntry {
        name: "schnurer-trace",
        family: fam(Trace),
        expression: "(a-b)^2/(a*b)^2",
        sigma_range: SigmaRange::point(-1.0),
        provenance: "O. Schnürer",
        expected_verdict: Mpf,
        vanishing: false,
        table_witness: true,
        sample_sigmas: &[-1.0],
    },
    CatalogEntry {
        name: "generic-vanishing",
        family: CatalogFamily::Any,
        expression: "(a-b)^2*F^2/(a*b)^2",
        sigma_range: SigmaRange::new(Unbounded, Unbounded),
        provenance: "F. Schulze, O. Schnürer; B. Andrews, X. Chen (vanishing function for any F)",
        expected_verdict: VanishingOnly,
        vanishing: true,
        table_witness: false,
        sample_sigmas: &[],
    },
    CatalogEntry {
        name: "andrews-vs-mean",
        family: fam(Mean),
        expression: "(a-b)^2",
        sigma_range: SigmaRange::point(1.0),
        provenance: "no MPF for contracting velocities homogeneous of degree one",
        expected_verdict: NonMpf,
        vanishing: false,
        table_witness: false,
        sample_sigmas: &[1.0],
    },
    CatalogEntry {
        name: "andrews-vs-gauss-low",
        family: fam(Gauss),
        expression: "(a-b)^2",
        sigma_range: SigmaRange::new(Open(0.0), Closed(1.0)),
        provenance: "no MPF for contracting velocities homogeneous of degree in (0, 1]",
        expected_verdict: NonMpf,
        vanishing: false,
        table_witness: false,
        sample_sigmas: &[0.5, 1.0],
    },
    CatalogEntry {
        name: "andrews-chen-gauss-beyond",
        family: fam(Gauss),
        expression: "(a-b)^2*(a*b)^s/(a*b)^2",
        sigma_range: SigmaRange::new(Open(2.0), Unbounded),
        provenance: "no MPF for K^{σ/2} with σ > 2",
        expected_verdict: NonMpf,
        vanishing: true,
        table_witness: false,
        sample_sigmas: &[3.0],
    },
    CatalogEntry {
        name: "schulze-mean-beyond",
        family: fam(Mean),
        expression: "(a-b)^2*(a+b)^(2*s)/(a*b)^2",
        sigma_range: SigmaRange::new(Closed(6.0), Unbounded),
        provenance: "no MPF for H^σ beyond the δ-threshold",
        expected_verdict: NonMpf,
        vanishing: true,
        table_witness: false,
        sample_sigmas: &[7.0],
    },
];

/// All catalog entries, in table order.
pub fn catalog() -> &'static [CatalogEntry] {
    &CATALOG
}

pub fn lookup(name: &str) -> Option<&'static CatalogEntry> {
    CATALOG.iter().find(|e| e.name == name)
}

/// Versioned JSON document of the catalog.
pub fn catalog_json() -> serde_json::Value {
    let entries: Vec<_> = CATALOG
        .iter()
        .map(|e| {
            serde_json::json!({
                "name": e.name,
                "family": match e.family {
                    CatalogFamily::Family(f) => f.name(),
                    CatalogFamily::Any => "any",
                },
                "expression": e.expression,
                "sigma_range": e.sigma_range.to_string(),
                "sigma_bounds": e.sigma_range,
                "provenance": e.provenance,
                "expected_verdict": e.expected_verdict,
                "vanishing": e.vanishing,
                "table_witness": e.table_witness,
            })
        })
        .collect();
    serde_json::json!({ "version": 1, "entries": entries })
}

#[cfg(test)]
mod tests {
    use super::*;

    fn spec(xi: f64, sigma: f64) -> VelocityFamilySpec {
        VelocityFamilySpec::new(xi, sigma).unwrap()
    }

    #[test]
    fn velocity_examples() {
        let f = make_velocity(&spec(0.0, 2.0)).unwrap();
        assert!((f.eval(2.0, 3.0).unwrap() - 6.0).abs() < 1e-14);
        let f = make_velocity(&spec(1.0, 3.0)).unwrap();
        assert_eq!(f.eval(1.0, 1.0).unwrap(), 8.0);
        let f = make_velocity(&spec(2.0, 1.0)).unwrap();
        assert!((f.eval(3.0, 4.0).unwrap() - 5.0).abs() < 1e-14);
        assert!(matches!(
            VelocityFamilySpec::new(1.0, 0.0),
            Err(VelocityError::ZeroSigma(_))
        ));
    }

    #[test]
    fn tiny_xi_snaps_to_gauss_branch() {
        let s = spec(1e-13, 2.0);
        assert_eq!(s.xi, 0.0);
        let f = make_velocity(&s).unwrap();
        assert!((f.eval(2.0, 3.0).unwrap() - 6.0).abs() < 1e-14);
    }

    #[test]
    fn beta_examples() {
        assert_eq!(beta_of_family(&spec(0.0, 1.0), 0.5), 2.0);
        assert_eq!(beta_of_family(&spec(1.0, 4.0), 0.3), 1.0);
        assert_eq!(beta_of_family(&spec(2.0, -1.0), 0.25), 0.25);
        let k = parse_expression("a*b", 0.0).unwrap();
        assert!((beta_general(&k, 0.2, 1.0).unwrap() - 5.0).abs() < 1e-14);
        let h5 = parse_expression("(a+b)^5", 0.0).unwrap();
        assert!((beta_general(&h5, 0.7, 2.0).unwrap() - 1.0).abs() < 1e-14);
        let tr = make_velocity(&spec(3.0, 3.0)).unwrap();
        assert!((beta_general(&tr, 0.4, 1.0).unwrap() - 0.16).abs() < 1e-14);
    }

    #[test]
    fn catalog_lookup_examples() {
        assert!(catalog().len() >= 14);
        let e = lookup("andrews-gauss").unwrap();
        assert_eq!(e.expression, "(a-b)^2");
        assert_eq!(e.spec(2.0).unwrap(), spec(0.0, 2.0));
        assert_eq!(e.expected_verdict, ExpectedVerdict::Mpf);
        let e = lookup("schulze-mean").unwrap();
        assert!(e.sigma_range.contains(5.0) && e.sigma_range.contains(5.17));
        assert!(!e.sigma_range.contains(1.0));
        let g = lookup("generic-vanishing").unwrap();
        assert_eq!(g.expected_verdict, ExpectedVerdict::VanishingOnly);
        let w = g.candidate_for(&spec(1.0, 7.0)).unwrap();
        let want = parse_expression("(a-b)^2*(a+b)^14/(a*b)^2", 0.0).unwrap();
        let (u, v) = (w.eval(0.3, 1.0).unwrap(), want.eval(0.3, 1.0).unwrap());
        assert!((u - v).abs() < 1e-12 * v.abs());
    }

    #[test]
    fn sample_sigmas_lie_in_ranges() {
        for e in catalog() {
            for &s in e.sample_sigmas {
                assert!(e.sigma_range.contains(s), "{} at {s}", e.name);
            }
        }
    }

    #[test]
    fn range_display() {
        assert_eq!(SigmaRange::new(Open(1.0), Closed(5.17)).to_string(), "σ ∈ (1, 5.17]");
        assert_eq!(SigmaRange::point(-2.0).to_string(), "σ = -2");
        assert_eq!(SigmaRange::new(Open(1.0), Unbounded).to_string(), "σ > 1");
    }

    #[test]
    fn catalog_json_is_versioned() {
        let v = catalog_json();
        assert_eq!(v["version"], 1);
        assert_eq!(v["entries"].as_array().unwrap().len(), catalog().len());
        assert_eq!(v["entries"][4]["sigma_range"], "σ ∈ (1, 5.17]");
    }
}
