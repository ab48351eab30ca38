//! Nonexistence results: the ρ → 0 limit table, the Φ polynomials with the
//! σ_δ search, exact sign certificates, and the classification tables.

pub mod classify;
pub mod limits;
pub mod phi;
pub mod poly;

use thiserror::Error;

pub use classify::{
    classification_table, classify, degree_obstruction, necessary_conditions, sigma_delta, ClassificationTable,
    Constraint, Outcome, TableRow, Verdict,
};
pub use limits::{
    errata_ids, limit_specs, limit_sweep, limit_table, summarize, LimitArgs, LimitError, LimitRecord, Quantity, Regime,
    SweepSummary,
};
pub use phi::{
    feasibility, find_sigma_delta, negative_on, phi, phi_assembled, phi_tilde_integer, Feasibility, PhiDecomposition,
    PhiFamily, SigmaDelta, DELTA_TOL,
};
pub use poly::{certify_negative, CertifyError, NegativityCertificate, Poly, QSqrt2};

#[derive(Debug, Clone, PartialEq, Error)]
pub enum NonexistenceError {
    #[error("σ must be nonzero")]
    ZeroSigma,
    #[error("σ = {0} is in (0, 1]; the degree obstruction applies")]
    ContractingBelowOne(f64),
    #[error("σ = {0} is not a contracting power")]
    NotContracting(f64),
    #[error("no Φ polynomials for family `{0}` (expected mean or norm)")]
    NoPhiFamily(String),
    #[error("σ₀ = {sigma0} is below the root onset {onset}; the vanishing α has no root")]
    BelowOnset { sigma0: f64, onset: f64 },
    #[error("δΦ₁ + Φ₂ is not negative on (0, ρ₀] for δ up to {cap}")]
    NoDelta { cap: f64 },
}
