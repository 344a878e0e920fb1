//! Recovery of a hidden mask `s` from a black box promised to satisfy
//! `f(x & s) = f(x)` (or the dual `g(x | s) = g(x)`), by a Simon-style
//! quantum procedure and by classical searches, with exact formulas for
//! the expected number of queries of each.

pub mod algorithms;
pub mod analytics;
pub mod bitstring;
pub mod cli;
pub mod error;
pub mod harness;
pub mod oracle;
pub mod qsim;

pub use algorithms::{
    classical_binary_search_adapted, classical_binary_search_m1, classical_sequential_search,
    quantum_find_s, quantum_find_s_or, recover, RecoveryResult, Strategy, TranscriptEntry,
    TrialSource,
};
pub use analytics::{t_cb, t_cs, t_q, t_q_approx, t_q_series, Rational, TqTable};
pub use bitstring::BitString;
pub use error::{Error, Result};
pub use oracle::{
    verify_promise, Labeling, MaskVariant, MaskedOracle, OracleSpec, PromiseCheck, QueryStats,
};
pub use qsim::{run_trial_fast, run_trial_full, StateVector, TrialOutcome};
