//! MPF conditions (I)–(V): the terms C, E, G in both forms, the α profile,
//! and the combined check.

pub mod alpha;
pub mod check;
pub mod terms;

pub use alpha::{
    alpha_at, alpha_bound, alpha_profile, fit_alpha_asymptotics, AlphaAsymptotics, AlphaBound, AlphaClass, AlphaError,
    AlphaProfile, AlphaSample, BoundDirection,
};
pub use check::{
    admissible_classes, check_mpf, check_mpf_sigma, CheckConfig, ConditionReport, ConditionResult, Precision, Verdict,
    Witness,
};
pub use terms::{
    ab_terms, alpha_beta_at, constant_term_c, constant_term_c_expanded, diagonal_limit_eg, gradient_terms_eg,
    rho_terms, rho_terms_of, AlphaBeta, Location, Term, TermError, TermForm, TermTriple,
};
