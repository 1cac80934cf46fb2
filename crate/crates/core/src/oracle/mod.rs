//! Brute-force ground truth on small formats.

mod brute;
mod hardware;
mod reference;
mod suite;
mod systems;

pub use brute::{brute_ulpmax, enumerate, OpTable, Oracle, Support, Universe, MAX_ENUMERATION};
pub use hardware::{hardware_check, HardwareReport};
pub use reference::reference_eval;
pub use suite::{run_property_suite, run_property_suite_with, PropertyReport, SuiteOptions, SuiteReport};
pub use systems::{
    check_system, enumerate_solutions, random_system, run_corpus, CorpusReport, SolutionSet, ENUMERATION_LIMIT,
};

#[derive(Debug, Clone, PartialEq, Eq, thiserror::Error)]
pub enum OracleError {
    #[error("format {0} is too large to enumerate")]
    TooLarge(String),
    #[error("the oracle needs a bounded format")]
    Unbounded,
    #[error("network format differs from the oracle format")]
    FormatMismatch,
}
