//! Gaps between runs and their recoverability.
//!
//! The gap of `(w, q_u, q_l)` is the normalized difference
//! `lambda^|w| * (A_[Q0->q_u](w) - A_[Q0->q_l](w))`; the normalization
//! removes the effect of the word length, so gaps of an integral automaton
//! are integers. A gap is *recoverable* with respect to a suffix `z` when
//! the lower state is at most the upper one after `w`, and continuing from
//! the upper state on `z` attains the global minimum on `wz`.
//!
//! `enumerate_gaps` is exponential by design: it is an oracle and testing
//! facility bounded by its word caps, not part of the decision procedure.

use num_bigint::BigInt;

use crate::automaton::{words_up_to, Automaton, StateId, Word};
use crate::error::{Error, Result};
use crate::semantics::{normalized_diff, state_values, suffix_values, ExtendedInt, ExtendedValue};

/// A recoverable gap together with its shortest recovery suffix.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct GapRecord {
    pub w: Word,
    pub q_u: StateId,
    pub q_l: StateId,
    pub gap: BigInt,
    pub z: Word,
}

/// The normalized gap `lambda^|w| * (A_[Q0->q_u](w) - A_[Q0->q_l](w))`.
///
/// `+infinity` when `q_u` is unreachable on `w` and `q_l` is reachable;
/// errors when both are unreachable (undefined) or when only `q_l` is
/// (negative-infinite, not a gap).
pub fn gap(a: &Automaton, w: &Word, q_u: StateId, q_l: StateId) -> Result<ExtendedInt> {
    let vals = state_values(a, w, &a.initial_set())?;
    normalized_diff(&vals[q_u], &vals[q_l], w.len(), a.lambda())
}

// Condition 2 of recoverability: continuing from `q_u` on `z` attains the
// global minimum of `wz`, and that minimum is finite. `vals` are the
// per-state values on `w`, `suffix` the per-state accepting continuations
// on `z`.
fn recovers(
    a: &Automaton,
    vals: &[ExtendedValue],
    suffix: &[ExtendedValue],
    w_len: usize,
    q_u: StateId,
) -> bool {
    let lambda = a.lambda();
    let lhs = vals[q_u].add_with(&suffix[q_u].shift_down(w_len as u32, lambda), lambda);
    if !lhs.is_finite() {
        return false;
    }
    let mut best = ExtendedValue::Infinite;
    for q in 0..a.state_count() {
        let cand = vals[q].add_with(&suffix[q].shift_down(w_len as u32, lambda), lambda);
        best = best.min_with(cand, lambda);
    }
    lhs == best
}

/// Shortest suffix `z` with `|z| <= max_len` making `(w, q_u, q_l)` a
/// recoverable gap, searching in length-then-lexicographic order; `None`
/// when no such suffix exists within the bound.
///
/// Errors when condition 1 fails, i.e. the run to `q_l` is not at most the
/// run to `q_u`.
pub fn find_recovery_suffix(
    a: &Automaton,
    w: &Word,
    q_u: StateId,
    q_l: StateId,
    max_len: usize,
) -> Result<Option<Word>> {
    let vals = state_values(a, w, &a.initial_set())?;
    if vals[q_l].cmp_with(&vals[q_u], a.lambda()) == std::cmp::Ordering::Greater {
        return Err(Error::GapOrder(format!(
            "run to `{}` is cheaper than run to `{}` on the given word",
            a.state_name(q_u),
            a.state_name(q_l)
        )));
    }
    if !vals[q_u].is_finite() {
        return Ok(None);
    }
    for z in words_up_to(a.alphabet_size(), max_len) {
        let suffix = suffix_values(a, &z)?;
        if recovers(a, &vals, &suffix, w.len(), q_u) {
            return Ok(Some(z));
        }
    }
    Ok(None)
}

fn gaps_for_word(
    a: &Automaton,
    w: &Word,
    suffix_tables: &[(Word, Vec<ExtendedValue>)],
) -> Vec<GapRecord> {
    let n = a.state_count();
    let vals = state_values(a, w, &a.initial_set()).unwrap();
    // Condition 2 depends only on q_u, so resolve the shortest suffix once
    // per upper state.
    let shortest: Vec<Option<&Word>> = (0..n)
        .map(|q_u| {
            if !vals[q_u].is_finite() {
                return None;
            }
            suffix_tables
                .iter()
                .find(|(_, suffix)| recovers(a, &vals, suffix, w.len(), q_u))
                .map(|(z, _)| z)
        })
        .collect();
    let mut records = Vec::new();
    for q_u in 0..n {
        let Some(z) = shortest[q_u] else { continue };
        for q_l in 0..n {
            if vals[q_l].cmp_with(&vals[q_u], a.lambda()) == std::cmp::Ordering::Greater {
                continue;
            }
            let g = normalized_diff(&vals[q_u], &vals[q_l], w.len(), a.lambda()).unwrap();
            let ExtendedInt::Finite(gap) = g else {
                unreachable!("upper state is reachable")
            };
            records.push(GapRecord {
                w: w.clone(),
                q_u,
                q_l,
                gap,
                z: z.clone(),
            });
        }
    }
    records
}

/// All recoverable gaps `(w, q_u, q_l)` with `|w| <= max_w` that some suffix
/// of length at most `max_z` recovers, each with its shortest such suffix.
///
/// Output order is deterministic: words in length-then-lexicographic order,
/// then `(q_u, q_l)` in state order.
pub fn enumerate_gaps(a: &Automaton, max_w: usize, max_z: usize) -> Vec<GapRecord> {
    let suffix_tables = suffix_tables(a, max_z);
    let words: Vec<Word> = words_up_to(a.alphabet_size(), max_w).collect();
    let per_word = map_words(a, &words, &suffix_tables);
    per_word.into_iter().flatten().collect()
}

/// Sequential reference path for [`enumerate_gaps`].
pub fn enumerate_gaps_seq(a: &Automaton, max_w: usize, max_z: usize) -> Vec<GapRecord> {
    let suffix_tables = suffix_tables(a, max_z);
    words_up_to(a.alphabet_size(), max_w)
        .flat_map(|w| gaps_for_word(a, &w, &suffix_tables))
        .collect()
}

fn suffix_tables(a: &Automaton, max_z: usize) -> Vec<(Word, Vec<ExtendedValue>)> {
    words_up_to(a.alphabet_size(), max_z)
        .map(|z| {
            let suffix = suffix_values(a, &z).unwrap();
            (z, suffix)
        })
        .collect()
}

#[cfg(feature = "parallel")]
fn map_words(
    a: &Automaton,
    words: &[Word],
    suffix_tables: &[(Word, Vec<ExtendedValue>)],
) -> Vec<Vec<GapRecord>> {
    use rayon::prelude::*;
    if words.len() < 64 {
        return words
            .iter()
            .map(|w| gaps_for_word(a, w, suffix_tables))
            .collect();
    }
    words
        .par_iter()
        .map(|w| gaps_for_word(a, w, suffix_tables))
        .collect()
}

#[cfg(not(feature = "parallel"))]
fn map_words(
    a: &Automaton,
    words: &[Word],
    suffix_tables: &[(Word, Vec<ExtendedValue>)],
) -> Vec<Vec<GapRecord>> {
    words
        .iter()
        .map(|w| gaps_for_word(a, w, suffix_tables))
        .collect()
}
