//! Gap-vector tracking with a cutoff bound.
//!
//! A gap vector assigns to every state the normalized gap between the
//! minimal run ending there and the minimal run overall, capped at a bound
//! with overflow marked infinite, plus a Boolean reachability bit per state.
//! Stepping a vector on a symbol is the transition function of the
//! determinized automaton; exploring the step relation breadth-first yields
//! the reachable fragment of that automaton, which is also the search space
//! of the decision procedure.
//!
//! Vector identity includes the reachability set, not just the entries: the
//! decision predicate must distinguish "reachable with a gap above the
//! cutoff" from "unreachable", which a bare infinity entry conflates.

use std::collections::{HashMap, VecDeque};

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::Signed;

use crate::automaton::{Automaton, StateId, StateSet, SymbolId, Word};
use crate::error::{Error, Result};
use crate::nfa::subset_step;

/// One tracked gap: finite and within the bound, or infinite.
#[derive(Debug, Clone, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum VectorEntry {
    Finite(BigInt),
    Infinite,
}

impl VectorEntry {
    pub fn is_finite(&self) -> bool {
        matches!(self, VectorEntry::Finite(_))
    }

    pub fn as_finite(&self) -> Option<&BigInt> {
        match self {
            VectorEntry::Finite(x) => Some(x),
            VectorEntry::Infinite => None,
        }
    }
}

impl std::fmt::Display for VectorEntry {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        match self {
            VectorEntry::Finite(x) => write!(f, "{x}"),
            VectorEntry::Infinite => write!(f, "inf"),
        }
    }
}

/// Per-state normalized gaps plus the reachable state set.
///
/// Invariants: some finite entry is 0 unless all entries are infinite;
/// finite entries only occur on reachable states; after at least one step
/// every finite entry is divisible by the discounting factor.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct GapVector {
    entries: Vec<VectorEntry>,
    reach: StateSet,
}

impl GapVector {
    pub fn entries(&self) -> &[VectorEntry] {
        &self.entries
    }

    pub fn entry(&self, q: StateId) -> &VectorEntry {
        &self.entries[q]
    }

    pub fn reach(&self) -> &StateSet {
        &self.reach
    }

    /// `(0,inf)`-style rendering in state order.
    pub fn label(&self) -> String {
        let parts: Vec<String> = self.entries.iter().map(|e| e.to_string()).collect();
        format!("({})", parts.join(","))
    }
}

fn within_bound(x: &BigInt, bound: &BigRational) -> bool {
    // x <= bound, both exact; denominators are positive after reduction
    x * bound.denom() <= *bound.numer()
}

/// The vector for the empty word: entry 0 on initial states, infinity
/// elsewhere; reach is the initial set.
pub fn initial_vector(a: &Automaton, _bound: &BigRational) -> GapVector {
    let init = a.initial_set();
    let entries = (0..a.state_count())
        .map(|q| {
            if init.contains(q) {
                VectorEntry::Finite(BigInt::from(0))
            } else {
                VectorEntry::Infinite
            }
        })
        .collect();
    GapVector {
        entries,
        reach: init,
    }
}

/// One step of the vector automaton on `sym`.
///
/// Returns `None` when no state with a finite entry has a `sym`-transition
/// (the vector is dead on `sym`). Otherwise the intermediate entries are
/// `u'_q = min over q' of (v_q' + weight(q', sym, q))`, the returned offset
/// `r` is the minimal finite `u'`, the new entries are `lambda * (u'_q - r)`
/// capped at `bound`, and reach advances by one NFA step.
pub fn vector_step(
    a: &Automaton,
    v: &GapVector,
    sym: SymbolId,
    bound: &BigRational,
) -> Option<(GapVector, BigInt)> {
    let n = a.state_count();
    let lambda = a.lambda();
    let mut intermediate: Vec<Option<BigInt>> = vec![None; n];
    for t in a.transitions_on(sym) {
        if let VectorEntry::Finite(x) = &v.entries[t.src] {
            let cand = x + &t.weight;
            match &intermediate[t.dst] {
                Some(best) if *best <= cand => {}
                _ => intermediate[t.dst] = Some(cand),
            }
        }
    }
    let offset = intermediate.iter().flatten().min()?.clone();
    let entries = intermediate
        .iter()
        .map(|u| match u {
            Some(x) => {
                let scaled = lambda * (x - &offset);
                assert!(
                    !scaled.is_negative(),
                    "intermediate entry below the offset minimum"
                );
                if within_bound(&scaled, bound) {
                    VectorEntry::Finite(scaled)
                } else {
                    VectorEntry::Infinite
                }
            }
            None => VectorEntry::Infinite,
        })
        .collect();
    let reach = subset_step(a, &v.reach, sym);
    Some((GapVector { entries, reach }, offset))
}

/// A deterministic edge of the explored vector graph.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct VectorEdge {
    pub src: usize,
    pub symbol: SymbolId,
    pub weight: BigInt,
    pub dst: usize,
}

/// The reachable fragment of the vector automaton under a bound.
///
/// Nodes are indexed in BFS discovery order (by access-word length, ties
/// broken lexicographically by alphabet order), so index 0 is the root and
/// `access_word` reproduces each node by replaying `vector_step`.
#[derive(Debug, Clone)]
pub struct VectorGraph {
    bound: BigRational,
    nodes: Vec<GapVector>,
    edges: Vec<VectorEdge>,
    parent: Vec<Option<(usize, SymbolId)>>,
    index: HashMap<GapVector, usize>,
}

impl VectorGraph {
    pub fn bound(&self) -> &BigRational {
        &self.bound
    }

    pub fn root(&self) -> usize {
        0
    }

    pub fn nodes(&self) -> &[GapVector] {
        &self.nodes
    }

    pub fn node_count(&self) -> usize {
        self.nodes.len()
    }

    pub fn edges(&self) -> &[VectorEdge] {
        &self.edges
    }

    pub fn node_id(&self, v: &GapVector) -> Option<usize> {
        self.index.get(v).copied()
    }

    /// Shortest access word of `node` (length-lex minimal by construction).
    pub fn access_word(&self, node: usize) -> Word {
        let mut rev = Vec::new();
        let mut cur = node;
        while let Some((prev, sym)) = self.parent[cur] {
            rev.push(sym);
            cur = prev;
        }
        rev.reverse();
        Word::from_symbols(rev)
    }

    /// The unique `sym`-successor of `node`, if the node is live on `sym`.
    pub fn successor(&self, node: usize, sym: SymbolId) -> Option<(usize, &BigInt)> {
        self.edges
            .iter()
            .find(|e| e.src == node && e.symbol == sym)
            .map(|e| (e.dst, &e.weight))
    }
}

/// Level-synchronized BFS over the vector automaton. `next_node` yields node
/// ids in discovery order, so a caller can interleave its own per-node work
/// (and stop early) while the graph is being built.
pub(crate) struct Exploration<'a> {
    a: &'a Automaton,
    max_nodes: usize,
    #[cfg_attr(not(feature = "parallel"), allow(dead_code))]
    parallel: bool,
    graph: VectorGraph,
    frontier: Vec<usize>,
    pending: VecDeque<usize>,
}

impl<'a> Exploration<'a> {
    pub fn new(a: &'a Automaton, bound: BigRational, max_nodes: usize, parallel: bool) -> Self {
        assert!(max_nodes >= 1, "node budget must be at least 1");
        assert!(!bound.is_negative(), "vector bound must be non-negative");
        let root = initial_vector(a, &bound);
        let mut index = HashMap::new();
        index.insert(root.clone(), 0);
        Exploration {
            a,
            max_nodes,
            parallel,
            graph: VectorGraph {
                bound,
                nodes: vec![root],
                edges: Vec::new(),
                parent: vec![None],
                index,
            },
            frontier: vec![0],
            pending: VecDeque::from([0]),
        }
    }

    pub fn graph(&self) -> &VectorGraph {
        &self.graph
    }

    fn expand_level(&mut self) -> Result<()> {
        let frontier = std::mem::take(&mut self.frontier);
        let pairs: Vec<(usize, SymbolId)> = frontier
            .iter()
            .flat_map(|&id| (0..self.a.alphabet_size()).map(move |s| (id, s)))
            .collect();
        let steps = self.run_steps(&pairs);
        for ((src, sym), step) in pairs.into_iter().zip(steps) {
            let Some((vector, weight)) = step else {
                continue;
            };
            let dst = match self.graph.index.get(&vector) {
                Some(&d) => d,
                None => {
                    if self.graph.nodes.len() >= self.max_nodes {
                        return Err(Error::ResourceLimit(format!(
                            "vector graph exceeds {} nodes",
                            self.max_nodes
                        )));
                    }
                    let d = self.graph.nodes.len();
                    self.graph.index.insert(vector.clone(), d);
                    self.graph.nodes.push(vector);
                    self.graph.parent.push(Some((src, sym)));
                    self.frontier.push(d);
                    self.pending.push_back(d);
                    d
                }
            };
            self.graph.edges.push(VectorEdge {
                src,
                symbol: sym,
                weight,
                dst,
            });
        }
        Ok(())
    }

    #[cfg(feature = "parallel")]
    fn run_steps(&self, pairs: &[(usize, SymbolId)]) -> Vec<Option<(GapVector, BigInt)>> {
        use rayon::prelude::*;
        // narrow frontiers (chains) are cheaper without the fan-out
        if self.parallel && pairs.len() >= 8 {
            pairs
                .par_iter()
                .map(|&(id, sym)| {
                    vector_step(self.a, &self.graph.nodes[id], sym, &self.graph.bound)
                })
                .collect()
        } else {
            self.run_steps_seq(pairs)
        }
    }

    #[cfg(not(feature = "parallel"))]
    fn run_steps(&self, pairs: &[(usize, SymbolId)]) -> Vec<Option<(GapVector, BigInt)>> {
        self.run_steps_seq(pairs)
    }

    fn run_steps_seq(&self, pairs: &[(usize, SymbolId)]) -> Vec<Option<(GapVector, BigInt)>> {
        pairs
            .iter()
            .map(|&(id, sym)| vector_step(self.a, &self.graph.nodes[id], sym, &self.graph.bound))
            .collect()
    }

    /// Next node in BFS discovery order, or `None` when the graph is closed.
    pub fn next_node(&mut self) -> Result<Option<usize>> {
        loop {
            if let Some(id) = self.pending.pop_front() {
                return Ok(Some(id));
            }
            if self.frontier.is_empty() {
                return Ok(None);
            }
            self.expand_level()?;
        }
    }

    pub fn into_graph(mut self) -> Result<VectorGraph> {
        while self.next_node()?.is_some() {}
        Ok(self.graph)
    }
}

fn parallel_default() -> bool {
    cfg!(feature = "parallel")
}

/// Breadth-first closure of [`vector_step`] from [`initial_vector`],
/// memoizing visited vectors. Terminates because the bounded vector space is
/// finite; errors when more than `max_nodes` distinct vectors appear.
pub fn explore(a: &Automaton, bound: &BigRational, max_nodes: usize) -> Result<VectorGraph> {
    Exploration::new(a, bound.clone(), max_nodes, parallel_default()).into_graph()
}

/// Sequential reference path for [`explore`].
pub fn explore_seq(a: &Automaton, bound: &BigRational, max_nodes: usize) -> Result<VectorGraph> {
    Exploration::new(a, bound.clone(), max_nodes, false).into_graph()
}
