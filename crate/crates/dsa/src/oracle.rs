//! Brute-force reference implementations used by tests and validation.
//!
//! Run enumeration is intentionally naive (explicit path expansion) and kept
//! apart from the dynamic-programming evaluator so the two cannot share bugs.

use num_bigint::BigInt;
use num_traits::Zero;

use crate::automaton::{words_of_length, Automaton, StateId, Word};
use crate::error::{Error, Result};
use crate::semantics::{eval, ExtendedValue, ScaledValue};

/// Cap on `|w|` for run enumeration; beyond this the blowup is intractable.
pub const DEFAULT_RUN_CAP: usize = 12;

/// One explicit run: its state sequence, exact weight, and the weight with
/// the discounted final weight added (infinite for non-accepting runs).
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct RunRecord {
    pub states: Vec<StateId>,
    pub weight: ScaledValue,
    pub accepting: bool,
    pub weight_with_final: ExtendedValue,
}

/// All runs of `a` on `w` from the initial states, in lexicographic order by
/// state sequence. Errors when `|w|` exceeds [`DEFAULT_RUN_CAP`].
pub fn enumerate_runs(a: &Automaton, w: &Word) -> Result<Vec<RunRecord>> {
    enumerate_runs_capped(a, w, DEFAULT_RUN_CAP)
}

/// As [`enumerate_runs`] with an explicit length cap.
pub fn enumerate_runs_capped(a: &Automaton, w: &Word, cap: usize) -> Result<Vec<RunRecord>> {
    a.check_word(w)?;
    if w.len() > cap {
        return Err(Error::RunCap { len: w.len(), cap });
    }
    let lambda = a.lambda();
    let mut out = Vec::new();
    // Depth-first extension in ascending successor order yields lexicographic
    // order of the complete state sequences.
    let mut stack: Vec<(Vec<StateId>, BigInt)> = a
        .initial()
        .iter()
        .rev()
        .map(|&q| (vec![q], BigInt::zero()))
        .collect();
    while let Some((states, scaled)) = stack.pop() {
        let depth = states.len() - 1;
        if depth == w.len() {
            let last = *states.last().unwrap();
            let weight = if w.is_empty() {
                ScaledValue::zero()
            } else {
                ScaledValue::new(scaled.clone(), (w.len() - 1) as u32, lambda)
            };
            let accepting = a.is_accepting(last);
            let weight_with_final = match a.final_weight(last) {
                Some(f) => {
                    let num = if w.is_empty() {
                        f.clone()
                    } else {
                        &scaled * lambda + f
                    };
                    ExtendedValue::Finite(ScaledValue::new(num, w.len() as u32, lambda))
                }
                None => ExtendedValue::Infinite,
            };
            out.push(RunRecord {
                states,
                weight,
                accepting,
                weight_with_final,
            });
            continue;
        }
        let sym = w.symbols()[depth];
        let cur = *states.last().unwrap();
        let mut succs: Vec<(StateId, &BigInt)> = a
            .transitions_on(sym)
            .filter(|t| t.src == cur)
            .map(|t| (t.dst, &t.weight))
            .collect();
        succs.sort_by_key(|&(dst, _)| dst);
        for (dst, weight) in succs.into_iter().rev() {
            let mut states = states.clone();
            states.push(dst);
            stack.push((states, &scaled * lambda + weight));
        }
    }
    Ok(out)
}

fn mismatch(a: &Automaton, d: &Automaton, w: &Word) -> bool {
    // compare as rationals: canonical (num, exp) forms only line up between
    // automata when they share a discounting factor
    match (eval(a, w).unwrap(), eval(d, w).unwrap()) {
        (ExtendedValue::Infinite, ExtendedValue::Infinite) => false,
        (ExtendedValue::Finite(x), ExtendedValue::Finite(y)) => {
            x.to_rational(a.lambda()) != y.to_rational(d.lambda())
        }
        _ => true,
    }
}

/// Shortest (length, then lexicographic) word on which the two automata
/// disagree, infinity counting as a value; `None` when all words up to
/// `max_len` agree. The automata must share an alphabet.
pub fn equivalent_up_to(a: &Automaton, d: &Automaton, max_len: usize) -> Result<Option<Word>> {
    if a.alphabet() != d.alphabet() {
        return Err(Error::AlphabetMismatch);
    }
    for len in 0..=max_len {
        let found = find_mismatch_at_len(a, d, len);
        if found.is_some() {
            return Ok(found);
        }
    }
    Ok(None)
}

/// Sequential reference path for [`equivalent_up_to`].
pub fn equivalent_up_to_seq(a: &Automaton, d: &Automaton, max_len: usize) -> Result<Option<Word>> {
    if a.alphabet() != d.alphabet() {
        return Err(Error::AlphabetMismatch);
    }
    for len in 0..=max_len {
        if let Some(w) = words_of_length(a.alphabet_size(), len).find(|w| mismatch(a, d, w)) {
            return Ok(Some(w));
        }
    }
    Ok(None)
}

#[cfg(feature = "parallel")]
fn find_mismatch_at_len(a: &Automaton, d: &Automaton, len: usize) -> Option<Word> {
    use rayon::prelude::*;
    let alpha = a.alphabet_size();
    // indexed parallel scan when the word count is representable and large
    // enough to amortize the fan-out; lazy sequential scan otherwise
    match alpha.checked_pow(len as u32) {
        Some(count) if count >= 512 => {
            // find_first keeps the result deterministic: lowest index wins,
            // which is the lexicographically least mismatch of this length.
            (0..count)
                .into_par_iter()
                .map(|i| crate::automaton::word_at(alpha, len, i))
                .find_first(|w| mismatch(a, d, w))
        }
        _ => words_of_length(alpha, len).find(|w| mismatch(a, d, w)),
    }
}

#[cfg(not(feature = "parallel"))]
fn find_mismatch_at_len(a: &Automaton, d: &Automaton, len: usize) -> Option<Word> {
    words_of_length(a.alphabet_size(), len).find(|w| mismatch(a, d, w))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::format::parse_automaton;
    use crate::testutil::{drift, hedge};

    #[test]
    fn runs_on_fixture_b() {
        let a = drift();
        let w = a.word_from_compact("aa").unwrap();
        let runs = enumerate_runs(&a, &w).unwrap();
        // q0q0q0 (weight 3/2) and q0q0q1 (weight 1); the q0q1 prefix dies.
        assert_eq!(runs.len(), 2);
        assert_eq!(runs[0].states, vec![0, 0, 0]);
        assert_eq!(runs[0].weight.display(a.lambda()), "3/2^1");
        assert_eq!(runs[1].states, vec![0, 0, 1]);
        assert_eq!(runs[1].weight.display(a.lambda()), "1");
    }

    #[test]
    fn runs_on_fixture_a_single_letter() {
        let a = hedge(2);
        let w = a.word_from_compact("a").unwrap();
        let runs = enumerate_runs(&a, &w).unwrap();
        assert_eq!(runs.len(), 2);
        assert_eq!(runs[0].states, vec![0, 0]);
        assert_eq!(runs[0].weight.display(a.lambda()), "2");
        assert_eq!(runs[1].states, vec![0, 2]);
        assert_eq!(runs[1].weight.display(a.lambda()), "3");
    }

    #[test]
    fn empty_word_runs() {
        let a = hedge(2);
        let runs = enumerate_runs(&a, &Word::empty()).unwrap();
        assert_eq!(runs.len(), 1);
        assert_eq!(runs[0].states, vec![0]);
        assert!(runs[0].weight.is_zero());
    }

    #[test]
    fn cap_is_enforced() {
        let a = drift();
        let w = Word::from_symbols(vec![0; 13]);
        assert!(matches!(
            enumerate_runs(&a, &w),
            Err(Error::RunCap { len: 13, cap: 12 })
        ));
    }

    #[test]
    fn reflexive_equivalence() {
        let a = hedge(3);
        assert_eq!(equivalent_up_to(&a, &a, 5).unwrap(), None);
    }

    #[test]
    fn pruned_dda_counterexample() {
        // The two-state machine that drops the hedge transition disagrees
        // with the nondeterministic original first on "aaa" when lambda = 2.
        let a = hedge(2);
        let d = parse_automaton(
            "lambda 2\nalphabet a b\nstates s0 s1\ninitial s0\naccepting s0 0\naccepting s1 0\ntrans s0 a s0 2\ntrans s0 b s1 0\n",
        )
        .unwrap();
        let w = equivalent_up_to(&a, &d, 12).unwrap().expect("must differ");
        assert_eq!(a.format_word(&w), "aaa");
        assert_eq!(equivalent_up_to_seq(&a, &d, 12).unwrap().unwrap(), w);
    }

    #[test]
    fn eval_is_min_over_accepting_runs() {
        let a = drift();
        let lambda = a.lambda();
        for len in 0..=6 {
            for i in 0..2usize.pow(len) {
                let w = Word::from_symbols((0..len).rev().map(|b| (i >> b) & 1).collect());
                let runs = enumerate_runs(&a, &w).unwrap();
                let best = runs
                    .iter()
                    .map(|r| r.weight_with_final.clone())
                    .fold(ExtendedValue::Infinite, |acc, v| acc.min_with(v, lambda));
                assert_eq!(eval(&a, &w).unwrap(), best, "word {}", a.format_word(&w));
            }
        }
    }
}
