//! Determinization via bounded gap-vector tracking.
//!
//! The deterministic automaton's states are the explored gap vectors, its
//! transition weights the per-step offsets, its accepting states the vectors
//! with a finite entry on an accepting state, and its final weights
//! `min over accepting q of (entry_q + fval(q))`. The result is equivalent
//! to the input whenever the bound dominates every recoverable gap; the
//! construction itself never fails on that account.
//!
//! Only the reachable fragment of the vector space is ever materialized.

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{Signed, Zero};

use crate::automaton::{Automaton, StateId};
use crate::decide::{decide, DecisionOutcome};
use crate::error::Result;
use crate::format::{export_dot_labelled, serialize_automaton};
use crate::vectors::{explore, GapVector, VectorGraph};

/// A deterministic discounted-sum automaton labelled with the gap vectors it
/// was built from.
#[derive(Debug, Clone)]
pub struct Dda {
    automaton: Automaton,
    labels: Vec<GapVector>,
}

impl Dda {
    pub fn automaton(&self) -> &Automaton {
        &self.automaton
    }

    /// The gap vector behind each DDA state, indexed like the states.
    pub fn labels(&self) -> &[GapVector] {
        &self.labels
    }

    pub fn label_of(&self, q: StateId) -> &GapVector {
        &self.labels[q]
    }

    /// DOT export with vector labels on the nodes.
    pub fn export_dot(&self) -> String {
        export_dot_labelled(&self.automaton, |q| self.labels[q].label())
    }

    /// The text format of the underlying automaton, with a `# vector:`
    /// comment per state.
    pub fn to_text(&self) -> String {
        let base = serialize_automaton(&self.automaton);
        let mut out = String::new();
        for line in base.lines() {
            out.push_str(line);
            out.push('\n');
            if line.starts_with("states ") {
                for (q, v) in self.labels.iter().enumerate() {
                    out.push_str(&format!(
                        "# vector: {} = {}\n",
                        self.automaton.state_name(q),
                        v.label()
                    ));
                }
            }
        }
        out
    }
}

// Canonical, format-safe state name for a vector: entries joined by `_`
// (`inf` for infinity), plus the reachable-but-overflowed states when they
// add information beyond the finite entries.
fn state_name(a: &Automaton, v: &GapVector) -> String {
    let mut name = String::from("v");
    for e in v.entries() {
        name.push('_');
        name.push_str(&e.to_string());
    }
    let extra: Vec<&str> = v
        .reach()
        .iter()
        .filter(|&q| !v.entry(q).is_finite())
        .map(|q| a.state_name(q))
        .collect();
    if !extra.is_empty() {
        name.push_str("_r");
        for s in extra {
            name.push('_');
            name.push_str(s);
        }
    }
    name
}

fn dda_from_graph(a: &Automaton, graph: &VectorGraph) -> Result<Dda> {
    let names: Vec<String> = graph.nodes().iter().map(|v| state_name(a, v)).collect();
    let mut accepting = Vec::new();
    for (id, v) in graph.nodes().iter().enumerate() {
        let mut fval: Option<BigInt> = None;
        for q in 0..a.state_count() {
            let (Some(f), Some(e)) = (a.final_weight(q), v.entry(q).as_finite()) else {
                continue;
            };
            let cand = e + f;
            if fval.as_ref().is_none_or(|best| cand < *best) {
                fval = Some(cand);
            }
        }
        if let Some(f) = fval {
            accepting.push((names[id].clone(), f));
        }
    }
    let transitions = graph
        .edges()
        .iter()
        .map(|e| {
            (
                names[e.src].clone(),
                a.symbol_name(e.symbol).to_string(),
                names[e.dst].clone(),
                e.weight.clone(),
            )
        })
        .collect();
    let automaton = Automaton::new(
        a.lambda().clone(),
        a.alphabet().to_vec(),
        names.clone(),
        vec![names[graph.root()].clone()],
        accepting,
        transitions,
    )?;
    debug_assert!(automaton.is_deterministic());
    Ok(Dda {
        automaton,
        labels: graph.nodes().to_vec(),
    })
}

/// Builds the deterministic equivalent-candidate with gap cutoff `bound`.
///
/// Equivalence to `a` is guaranteed when `bound` is at least every
/// recoverable gap of `a`; resource limits from the exploration are the only
/// failure mode.
pub fn determinize(a: &Automaton, bound: &BigInt, max_nodes: usize) -> Result<Dda> {
    assert!(!bound.is_negative(), "determinization bound must be >= 0");
    let graph = explore(a, &BigRational::from(bound.clone()), max_nodes)?;
    dda_from_graph(a, &graph)
}

/// Decides determinizability first; on the positive outcome returns the DDA
/// built with the decision bound (gaps are integers, so the floor of the
/// threshold dominates them all), on the negative outcome returns `None`.
pub fn auto_determinize(a: &Automaton, max_nodes: usize) -> Result<Option<Dda>> {
    match decide(a, max_nodes)? {
        DecisionOutcome::Determinizable { bound } => {
            // the bound can only be negative for single-state automata,
            // where every recoverable gap is 0 anyway
            let bound = if bound.is_negative() {
                BigInt::zero()
            } else {
                bound
            };
            Ok(Some(determinize(a, &bound, max_nodes)?))
        }
        DecisionOutcome::NotDeterminizable { .. } => Ok(None),
    }
}
