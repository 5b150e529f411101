//! Verification engine for the combinatorial skeleton of interpolation for
//! Brill-Noether curves: tuple arithmetic, reduction rules, the erasability
//! calculus, searches and re-checkable certificates.

pub mod certificate;
pub mod constants;
pub mod erasability;
pub mod error;
pub mod intfeas;
pub mod prover;
pub mod rational;
pub mod rules;
pub mod tuple;

pub use certificate::{
    verify_certificate, AxiomSet, AxiomTag, CertError, Certificate, Justification,
};
pub use constants::{ConstantTables, SPORADIC30, XEX};
pub use erasability::{is_erasable, ModCollection, ModType, RoleMode, Strength};
pub use error::{CalculusError, DomainError, ProveError, RuleError};
pub use prover::{
    enumerate_sporadic, run_sporadic_search, verify_thm14, Prover, SearchConfig, SporadicReport,
};
pub use rational::Rational;
pub use rules::{apply, enumerate_instances, RuleId, RuleInstance, RuleParams};
pub use tuple::{
    bn_interpolation, delta, is_good, max_points, reduced_residue, rho, Characteristic,
    GoodnessVerdict, Tuple,
};
