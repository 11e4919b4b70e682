//! Boolean-language operations on the automaton's underlying NFA, with all
//! weights ignored: acceptance from a state set, and shortest words in the
//! difference of the languages of two start sets.

use std::collections::{HashMap, VecDeque};

use crate::automaton::{Automaton, StateSet, SymbolId, Word};
use crate::error::Result;

/// One NFA step: successors of `set` under `sym`.
pub(crate) fn subset_step(a: &Automaton, set: &StateSet, sym: SymbolId) -> StateSet {
    let mut next = StateSet::empty(a.state_count());
    for t in a.transitions_on(sym) {
        if set.contains(t.src) {
            next.insert(t.dst);
        }
    }
    next
}

/// True iff some run on `z` from a state in `from` ends in an accepting
/// state, ignoring weights.
pub fn boolean_accepts(a: &Automaton, from: &StateSet, z: &Word) -> Result<bool> {
    a.check_word(z)?;
    let mut cur = from.clone();
    for &sym in z.symbols() {
        cur = subset_step(a, &cur, sym);
        if cur.is_empty() {
            return Ok(false);
        }
    }
    Ok(cur.intersects(&a.accepting_set()))
}

/// Shortest word accepted from `u_set` but from no state of `l_set`; ties
/// are broken lexicographically by alphabet order. `None` when the language
/// difference is empty.
///
/// Runs a breadth-first search over pairs of subset constructions, so at most
/// `2^(2|Q|)` pair states are visited and any returned witness has length at
/// most `2^(2|Q|)`.
pub fn difference_witness(a: &Automaton, u_set: &StateSet, l_set: &StateSet) -> Option<Word> {
    let alpha = a.accepting_set();
    let is_goal = |u: &StateSet, l: &StateSet| u.intersects(&alpha) && !l.intersects(&alpha);

    type Pair = (StateSet, StateSet);
    let start: Pair = (u_set.clone(), l_set.clone());
    if is_goal(&start.0, &start.1) {
        return Some(Word::empty());
    }
    // parent pointers reconstruct the lexicographically least shortest word
    let mut parents: HashMap<Pair, Option<(Pair, SymbolId)>> = HashMap::new();
    parents.insert(start.clone(), None);
    let mut queue = VecDeque::new();
    queue.push_back(start);
    while let Some(pair) = queue.pop_front() {
        for sym in 0..a.alphabet_size() {
            let next = (subset_step(a, &pair.0, sym), subset_step(a, &pair.1, sym));
            if parents.contains_key(&next) {
                continue;
            }
            parents.insert(next.clone(), Some((pair.clone(), sym)));
            if is_goal(&next.0, &next.1) {
                let mut rev = Vec::new();
                let mut cur = &next;
                while let Some((prev, s)) = parents.get(cur).unwrap() {
                    rev.push(*s);
                    cur = prev;
                }
                rev.reverse();
                return Some(Word::from_symbols(rev));
            }
            queue.push_back(next);
        }
    }
    None
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::testutil::hedge;

    #[test]
    fn accepts_examples() {
        let a = hedge(2);
        let b = a.word_from_compact("b").unwrap();
        assert!(!boolean_accepts(&a, &StateSet::from_ids(3, [2]), &b).unwrap());
        assert!(boolean_accepts(&a, &StateSet::from_ids(3, [0]), &b).unwrap());
        assert!(!boolean_accepts(&a, &StateSet::empty(3), &b).unwrap());
    }

    #[test]
    fn witness_found() {
        // From {q0,q1} the word "b" is accepted; from {q2} it is dead.
        // The empty word does not witness since q2 accepts it.
        let a = hedge(2);
        let u = StateSet::from_ids(3, [0, 1]);
        let l = StateSet::from_ids(3, [2]);
        let z = difference_witness(&a, &u, &l).expect("difference is non-empty");
        assert_eq!(a.format_word(&z), "b");
    }

    #[test]
    fn witness_none_on_language_inclusion() {
        // L(from q2) = a* is contained in L(from q0).
        let a = hedge(2);
        let u = StateSet::from_ids(3, [2]);
        let l = StateSet::from_ids(3, [0]);
        assert_eq!(difference_witness(&a, &u, &l), None);
    }

    #[test]
    fn witness_none_on_empty_upper() {
        let a = hedge(2);
        let u = StateSet::empty(3);
        let l = StateSet::from_ids(3, [0]);
        assert_eq!(difference_witness(&a, &u, &l), None);
    }

    #[test]
    fn empty_witness_when_start_already_separates() {
        let a = hedge(2);
        let u = StateSet::from_ids(3, [0]);
        let l = StateSet::empty(3);
        assert_eq!(difference_witness(&a, &u, &l), Some(Word::empty()));
    }
}
