//! The determinizability decision procedure.
//!
//! The search explores the gap-vector graph under the cutoff `C` and looks,
//! node by node in BFS order, for a split of the states into a lower and an
//! upper group separated by more than the threshold `N`, such that some word
//! is accepted from the reachable upper states but from no lower state. Such
//! a split certifies unboundedly growing recoverable gaps, hence
//! non-determinizability; exhausting the finite graph certifies the floor of
//! `N` as a bound on all recoverable gaps, hence determinizability.
//!
//! Every emitted witness is re-validated against the exact semantics,
//! independently of the vector machinery: an infinite entry can in principle
//! be a tracking loss rather than a true overflow, in which case the search
//! simply moves on. Outcomes are therefore certified, not trusted.

use num_bigint::BigInt;
use num_rational::BigRational;

use crate::automaton::{Automaton, StateId, StateSet, Word};
use crate::constants::compute_constants;
use crate::error::Result;
use crate::nfa::difference_witness;
use crate::semantics::{
    eval, normalized_diff, state_values, suffix_values, ExtendedInt, ExtendedValue,
};
use crate::vectors::{Exploration, GapVector, VectorEntry};

/// A word that separates the states into groups `U` (upper) and `L` (lower)
/// with all cross gaps above the threshold, recovered through `q_u` by `z`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct SeparationWitness {
    pub w: Word,
    pub u_set: StateSet,
    pub l_set: StateSet,
    pub q_u: StateId,
    pub z: Word,
}

/// The certified outcome of [`decide`].
#[derive(Debug, Clone, PartialEq, Eq)]
pub enum DecisionOutcome {
    /// Every recoverable gap is at most `bound` (the floor of the threshold).
    Determinizable { bound: BigInt },
    /// A validated separation witness.
    NotDeterminizable { witness: SeparationWitness },
}

fn exceeds(diff: &BigInt, threshold: &BigRational) -> bool {
    // diff > threshold, exactly
    diff * threshold.denom() > *threshold.numer()
}

/// Looks for a boundary split of `v` whose groups are separated by more than
/// `threshold`, with a Boolean difference witness for the split.
///
/// States are sorted by entry (finite ascending, infinite last, reachable
/// infinities before unreachable ones, ties by state order); each of the
/// `|Q|-1` boundary splits is tried from the lowest boundary up. A split
/// fires when the entry jump across the boundary exceeds the threshold (an
/// infinite entry above a finite one always fires) and the upper group
/// contains a reachable state; the first firing split with a difference
/// witness wins.
pub fn check_separation(
    a: &Automaton,
    v: &GapVector,
    threshold: &BigRational,
) -> Option<(StateSet, StateSet, Word)> {
    let n = a.state_count();
    let mut order: Vec<StateId> = (0..n).collect();
    order.sort_by(|&p, &q| {
        let class = |s: StateId| match v.entry(s) {
            VectorEntry::Finite(_) => 0,
            VectorEntry::Infinite if v.reach().contains(s) => 1,
            VectorEntry::Infinite => 2,
        };
        class(p)
            .cmp(&class(q))
            .then_with(|| match (v.entry(p), v.entry(q)) {
                (VectorEntry::Finite(x), VectorEntry::Finite(y)) => x.cmp(y),
                _ => std::cmp::Ordering::Equal,
            })
            .then(p.cmp(&q))
    });
    for boundary in 1..n {
        let low = v.entry(order[boundary - 1]);
        let high = v.entry(order[boundary]);
        let fires = match (low, high) {
            (VectorEntry::Finite(x), VectorEntry::Finite(y)) => exceeds(&(y - x), threshold),
            (VectorEntry::Finite(_), VectorEntry::Infinite) => true,
            (VectorEntry::Infinite, _) => false,
        };
        if !fires {
            continue;
        }
        let u_set = StateSet::from_ids(n, order[boundary..].iter().copied());
        let l_set = StateSet::from_ids(n, order[..boundary].iter().copied());
        let u_reach = u_set.intersection(v.reach());
        if u_reach.is_empty() {
            continue;
        }
        if let Some(z) = difference_witness(a, &u_reach, &l_set) {
            return Some((u_set, l_set, z));
        }
    }
    None
}

/// Re-checks a witness against the exact semantics, independent of the
/// vector machinery.
///
/// True iff `U` and `L` partition the states into non-empty groups with
/// every normalized cross difference above the threshold (infinite upper
/// values over finite lower ones pass), and continuing from `q_u` on `z`
/// attains the finite global minimum of `wz`.
pub fn validate_witness(a: &Automaton, wit: &SeparationWitness, threshold: &BigRational) -> bool {
    let n = a.state_count();
    if wit.u_set.capacity() != n || wit.l_set.capacity() != n {
        return false;
    }
    if wit.u_set.is_empty() || wit.l_set.is_empty() {
        return false;
    }
    if !wit.u_set.is_disjoint(&wit.l_set) || wit.u_set.union(&wit.l_set).len() != n {
        return false;
    }
    if !wit.u_set.contains(wit.q_u) {
        return false;
    }
    if a.check_word(&wit.w).is_err() || a.check_word(&wit.z).is_err() {
        return false;
    }

    let vals = state_values(a, &wit.w, &a.initial_set()).expect("checked word");
    for qu in wit.u_set.iter() {
        for ql in wit.l_set.iter() {
            match normalized_diff(&vals[qu], &vals[ql], wit.w.len(), a.lambda()) {
                Ok(ExtendedInt::Infinite) => {}
                Ok(ExtendedInt::Finite(d)) if exceeds(&d, threshold) => {}
                _ => return false,
            }
        }
    }

    let suffix = suffix_values(a, &wit.z).expect("checked word");
    let lambda = a.lambda();
    let lhs = vals[wit.q_u].add_with(
        &suffix[wit.q_u].shift_down(wit.w.len() as u32, lambda),
        lambda,
    );
    if !lhs.is_finite() {
        return false;
    }
    let rhs = eval(a, &wit.w.concat(&wit.z)).expect("checked word");
    lhs == rhs
}

// The recovering state: the reachable upper state minimizing the value of
// "run to q on w, then best accepting continuation on z"; ties go to the
// lowest state id. None when no upper state continues on z.
fn pick_recovering_state(
    a: &Automaton,
    vals: &[ExtendedValue],
    u_set: &StateSet,
    z: &Word,
    w_len: usize,
) -> Option<StateId> {
    let suffix = suffix_values(a, z).ok()?;
    let lambda = a.lambda();
    let mut best: Option<(ExtendedValue, StateId)> = None;
    for q in u_set.iter() {
        let cand = vals[q].add_with(&suffix[q].shift_down(w_len as u32, lambda), lambda);
        if !cand.is_finite() {
            continue;
        }
        match &best {
            Some((b, _)) if b.cmp_with(&cand, lambda) != std::cmp::Ordering::Greater => {}
            _ => best = Some((cand, q)),
        }
    }
    best.map(|(_, q)| q)
}

fn floor_int(x: &BigRational) -> BigInt {
    x.floor().to_integer()
}

/// Decides determinizability with the default thresholds.
///
/// Explores the vector graph bounded by `C`, checking each node in BFS order
/// for an `N`-separation; the first witness that passes exact validation
/// certifies non-determinizability, exhaustion certifies determinizability
/// with bound `floor(N)`. Exceeding `max_nodes` is an error, never a
/// decision.
pub fn decide(a: &Automaton, max_nodes: usize) -> Result<DecisionOutcome> {
    decide_inner(a, max_nodes, None)
}

/// [`decide`] with the exploration cutoff overridden. Smaller cutoffs than
/// `C` are *unsound* (the exploration may miss separations); this entry
/// point exists for experimentation only. The separation threshold stays `N`.
pub fn decide_with_cutoff(
    a: &Automaton,
    max_nodes: usize,
    cutoff: &BigRational,
) -> Result<DecisionOutcome> {
    decide_inner(a, max_nodes, Some(cutoff))
}

fn decide_inner(
    a: &Automaton,
    max_nodes: usize,
    cutoff: Option<&BigRational>,
) -> Result<DecisionOutcome> {
    let consts = compute_constants(a)?;
    let threshold = &consts.big_n;
    // C < 0 happens only for single-state automata, where no split exists
    // and every recoverable gap is 0; exploring with cutoff 0 is exact there.
    let bound = cutoff
        .unwrap_or(&consts.big_c)
        .clone()
        .max(BigRational::from(BigInt::from(0)));
    let mut exploration = Exploration::new(a, bound, max_nodes, cfg!(feature = "parallel"));
    while let Some(id) = exploration.next_node()? {
        let v = &exploration.graph().nodes()[id];
        let Some((u_set, l_set, z)) = check_separation(a, v, threshold) else {
            continue;
        };
        let w = exploration.graph().access_word(id);
        let vals = state_values(a, &w, &a.initial_set())?;
        let Some(q_u) = pick_recovering_state(a, &vals, &u_set, &z, w.len()) else {
            continue;
        };
        let witness = SeparationWitness {
            w,
            u_set,
            l_set,
            q_u,
            z,
        };
        if validate_witness(a, &witness, threshold) {
            return Ok(DecisionOutcome::NotDeterminizable { witness });
        }
        // A fired split can stem from a tracking loss (an entry marked
        // infinite whose true gap dipped back under the cutoff). The exact
        // re-check rejected it, so keep searching.
    }
    Ok(DecisionOutcome::Determinizable {
        bound: floor_int(threshold),
    })
}
