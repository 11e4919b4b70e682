//! Exact-arithmetic analysis of integral nondeterministic discounted-sum
//! automata (NDAs): word evaluation, gap analysis, determinization via
//! gap-vector tracking, and a decision procedure for determinizability that
//! certifies either outcome.
//!
//! Everything is computed with arbitrary-precision integers and rationals;
//! there is no floating point in the core. All data is immutable after
//! construction and all operations are pure functions, so values can be
//! shared freely across threads. With the `parallel` feature (default),
//! bounded enumerations and the vector-graph search fan out over rayon while
//! producing bit-identical results to the sequential paths.
//!
//! ```
//! use dsa::{parse_automaton, eval, decide, DecisionOutcome};
//!
//! let a = parse_automaton(
//!     "lambda 2\n\
//!      alphabet a b\n\
//!      states q0 q1\n\
//!      initial q0\n\
//!      accepting q0 0\n\
//!      accepting q1 0\n\
//!      trans q0 a q0 1\n\
//!      trans q0 a q1 0\n\
//!      trans q0 b q0 0\n",
//! )?;
//!
//! // A*(aa) = min(1 + 1/2, 1 + 0) = 1
//! let w = a.word_from_compact("aa")?;
//! assert_eq!(eval(&a, &w)?.display(a.lambda()), "1");
//!
//! // every recoverable gap of this automaton is at most 4
//! match decide(&a, 10_000)? {
//!     DecisionOutcome::Determinizable { bound } => assert_eq!(bound, 4.into()),
//!     DecisionOutcome::NotDeterminizable { witness } => panic!("{witness:?}"),
//! }
//! # Ok::<(), dsa::Error>(())
//! ```

pub mod automaton;
pub mod constants;
pub mod decide;
pub mod determinize;
pub mod error;
pub mod format;
pub mod gaps;
pub mod nfa;
pub mod oracle;
pub mod semantics;
pub mod vectors;

#[cfg(test)]
pub(crate) mod testutil;

pub use automaton::{
    word_at, words_of_length, words_up_to, Automaton, StateId, StateSet, SymbolId, Transition, Word,
};
pub use constants::{
    compute_constants, compute_constants_with_cap, max_weight, ConstantSet, PowerAffine,
    DEFAULT_EXPONENT_CAP,
};
pub use decide::{
    check_separation, decide, decide_with_cutoff, validate_witness, DecisionOutcome,
    SeparationWitness,
};
pub use determinize::{auto_determinize, determinize, Dda};
pub use error::{Error, Result};
pub use format::{export_dot, parse_automaton, serialize_automaton};
pub use gaps::{enumerate_gaps, enumerate_gaps_seq, find_recovery_suffix, gap, GapRecord};
pub use nfa::{boolean_accepts, difference_witness};
pub use oracle::{
    enumerate_runs, enumerate_runs_capped, equivalent_up_to, equivalent_up_to_seq, RunRecord,
};
pub use semantics::{
    eval, min_value, normalized_diff, state_values, suffix_values, ExtendedInt, ExtendedValue,
    ScaledValue,
};
pub use vectors::{
    explore, explore_seq, initial_vector, vector_step, GapVector, VectorEdge, VectorEntry,
    VectorGraph,
};

/// Default node budget for vector-graph searches.
pub const DEFAULT_MAX_VECTORS: usize = 10_000_000;
