//! The automaton data model: states, ordered alphabet, weighted transition
//! relation, initial and accepting sets, and the integer discounting factor.
//!
//! All values are immutable after construction and every operation on them is
//! a pure function, so sharing across threads is safe.

use num_bigint::BigInt;
use num_traits::{Signed, Zero};

use crate::error::{Error, Result};

/// Index into [`Automaton::states`].
pub type StateId = usize;
/// Index into [`Automaton::alphabet`].
pub type SymbolId = usize;

/// A single weighted transition `src --symbol,weight--> dst`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Transition {
    pub src: StateId,
    pub symbol: SymbolId,
    pub dst: StateId,
    pub weight: BigInt,
}

/// A set of states, dense over the automaton's state indices.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct StateSet {
    bits: Vec<bool>,
}

impl StateSet {
    pub fn empty(n: usize) -> Self {
        StateSet {
            bits: vec![false; n],
        }
    }

    pub fn full(n: usize) -> Self {
        StateSet {
            bits: vec![true; n],
        }
    }

    pub fn from_ids<I: IntoIterator<Item = StateId>>(n: usize, ids: I) -> Self {
        let mut s = Self::empty(n);
        for q in ids {
            s.insert(q);
        }
        s
    }

    pub fn capacity(&self) -> usize {
        self.bits.len()
    }

    pub fn contains(&self, q: StateId) -> bool {
        self.bits.get(q).copied().unwrap_or(false)
    }

    pub fn insert(&mut self, q: StateId) {
        self.bits[q] = true;
    }

    pub fn is_empty(&self) -> bool {
        !self.bits.iter().any(|&b| b)
    }

    pub fn len(&self) -> usize {
        self.bits.iter().filter(|&&b| b).count()
    }

    pub fn iter(&self) -> impl Iterator<Item = StateId> + '_ {
        self.bits
            .iter()
            .enumerate()
            .filter_map(|(i, &b)| b.then_some(i))
    }

    pub fn intersects(&self, other: &StateSet) -> bool {
        self.bits.iter().zip(&other.bits).any(|(&a, &b)| a && b)
    }

    pub fn intersection(&self, other: &StateSet) -> StateSet {
        StateSet {
            bits: self
                .bits
                .iter()
                .zip(&other.bits)
                .map(|(&a, &b)| a && b)
                .collect(),
        }
    }

    pub fn union(&self, other: &StateSet) -> StateSet {
        StateSet {
            bits: self
                .bits
                .iter()
                .zip(&other.bits)
                .map(|(&a, &b)| a || b)
                .collect(),
        }
    }

    pub fn is_disjoint(&self, other: &StateSet) -> bool {
        !self.intersects(other)
    }
}

/// A finite word over an automaton's alphabet, stored as symbol indices.
#[derive(Debug, Clone, Default, PartialEq, Eq, Hash)]
pub struct Word {
    symbols: Vec<SymbolId>,
}

impl Word {
    pub fn empty() -> Self {
        Word {
            symbols: Vec::new(),
        }
    }

    pub fn from_symbols(symbols: Vec<SymbolId>) -> Self {
        Word { symbols }
    }

    pub fn symbols(&self) -> &[SymbolId] {
        &self.symbols
    }

    pub fn len(&self) -> usize {
        self.symbols.len()
    }

    pub fn is_empty(&self) -> bool {
        self.symbols.is_empty()
    }

    pub fn push(&mut self, s: SymbolId) {
        self.symbols.push(s);
    }

    pub fn concat(&self, other: &Word) -> Word {
        let mut symbols = self.symbols.clone();
        symbols.extend_from_slice(&other.symbols);
        Word { symbols }
    }
}

/// The `index`-th word (lexicographically by symbol id) of length `len`
/// over `alphabet_size` symbols.
pub fn word_at(alphabet_size: usize, len: usize, mut index: usize) -> Word {
    let mut symbols = vec![0; len];
    for slot in symbols.iter_mut().rev() {
        *slot = index % alphabet_size;
        index /= alphabet_size;
    }
    Word::from_symbols(symbols)
}

/// All words of exactly `len` symbols, in lexicographic order by symbol id.
///
/// Generated lazily (odometer-style), so the word count never needs to fit
/// an integer type; exhausting a large space is the caller's budget call.
pub fn words_of_length(alphabet_size: usize, len: usize) -> impl Iterator<Item = Word> {
    let mut cur = if alphabet_size == 0 && len > 0 {
        None
    } else {
        Some(vec![0; len])
    };
    std::iter::from_fn(move || {
        let symbols = cur.take()?;
        let mut next = symbols.clone();
        for i in (0..len).rev() {
            if next[i] + 1 < alphabet_size {
                next[i] += 1;
                next[i + 1..].fill(0);
                cur = Some(next);
                break;
            }
        }
        Some(Word::from_symbols(symbols))
    })
}

/// All words of length at most `max_len`, in length-then-lexicographic order.
pub fn words_up_to(alphabet_size: usize, max_len: usize) -> impl Iterator<Item = Word> {
    (0..=max_len).flat_map(move |len| words_of_length(alphabet_size, len))
}

/// A nondeterministic discounted-sum automaton with an integer discounting
/// factor `lambda >= 2` and integer transition/final weights.
///
/// The value of a word is the minimum over accepting runs of the discounted
/// weight sum, where the weight of the `i`-th transition is divided by
/// `lambda^i` and the final weight of the last state by `lambda^{|w|}`.
#[derive(Debug, Clone)]
pub struct Automaton {
    lambda: BigInt,
    alphabet: Vec<String>,
    states: Vec<String>,
    initial: Vec<StateId>,
    accepting: Vec<Option<BigInt>>,
    transitions: Vec<Transition>,
    // transition indices grouped per symbol, in insertion order
    by_symbol: Vec<Vec<usize>>,
}

impl PartialEq for Automaton {
    fn eq(&self, other: &Self) -> bool {
        self.lambda == other.lambda
            && self.alphabet == other.alphabet
            && self.states == other.states
            && self.initial == other.initial
            && self.accepting == other.accepting
            && self.transitions == other.transitions
    }
}

impl Eq for Automaton {}

fn valid_token(t: &str) -> bool {
    !t.is_empty() && t.chars().all(|c| c.is_ascii_alphanumeric() || c == '_')
}

impl Automaton {
    /// Builds and validates an automaton from name-based components.
    ///
    /// Rejects `lambda < 2`, duplicate or malformed state/symbol tokens,
    /// references to unknown states or symbols, duplicate `(src, symbol, dst)`
    /// triples, and duplicate accepting declarations.
    pub fn new(
        lambda: BigInt,
        alphabet: Vec<String>,
        states: Vec<String>,
        initial: Vec<String>,
        accepting: Vec<(String, BigInt)>,
        transitions: Vec<(String, String, String, BigInt)>,
    ) -> Result<Self> {
        if lambda < BigInt::from(2) {
            return Err(Error::Invalid(format!(
                "lambda must be an integer >= 2, got {lambda}"
            )));
        }
        if alphabet.is_empty() {
            return Err(Error::Invalid("alphabet is empty".into()));
        }
        if states.is_empty() {
            return Err(Error::Invalid("state set is empty".into()));
        }
        for s in &alphabet {
            if !valid_token(s) {
                return Err(Error::Invalid(format!("malformed symbol token `{s}`")));
            }
        }
        for s in &states {
            if !valid_token(s) {
                return Err(Error::Invalid(format!("malformed state token `{s}`")));
            }
        }
        let mut seen = std::collections::HashSet::new();
        for s in &alphabet {
            if !seen.insert(s.clone()) {
                return Err(Error::Invalid(format!("duplicate symbol `{s}`")));
            }
        }
        seen.clear();
        for s in &states {
            if !seen.insert(s.clone()) {
                return Err(Error::Invalid(format!("duplicate state `{s}`")));
            }
        }

        let state_id = |name: &str| -> Result<StateId> {
            states
                .iter()
                .position(|s| s == name)
                .ok_or_else(|| Error::UnknownState(name.to_string()))
        };
        let symbol_id = |name: &str| -> Result<SymbolId> {
            alphabet
                .iter()
                .position(|s| s == name)
                .ok_or_else(|| Error::UnknownSymbol(name.to_string()))
        };

        let mut initial_ids: Vec<StateId> = Vec::new();
        for name in &initial {
            let q = state_id(name)?;
            if !initial_ids.contains(&q) {
                initial_ids.push(q);
            }
        }
        initial_ids.sort_unstable();

        let mut accepting_map: Vec<Option<BigInt>> = vec![None; states.len()];
        for (name, weight) in accepting {
            let q = state_id(&name)?;
            if accepting_map[q].is_some() {
                return Err(Error::Invalid(format!(
                    "duplicate accepting declaration for state `{name}`"
                )));
            }
            accepting_map[q] = Some(weight);
        }

        let mut trans: Vec<Transition> = Vec::with_capacity(transitions.len());
        for (src, sym, dst, weight) in transitions {
            let t = Transition {
                src: state_id(&src)?,
                symbol: symbol_id(&sym)?,
                dst: state_id(&dst)?,
                weight,
            };
            if trans
                .iter()
                .any(|u| u.src == t.src && u.symbol == t.symbol && u.dst == t.dst)
            {
                return Err(Error::Invalid(format!(
                    "duplicate transition ({src}, {sym}, {dst})"
                )));
            }
            trans.push(t);
        }

        let mut by_symbol = vec![Vec::new(); alphabet.len()];
        for (i, t) in trans.iter().enumerate() {
            by_symbol[t.symbol].push(i);
        }

        Ok(Automaton {
            lambda,
            alphabet,
            states,
            initial: initial_ids,
            accepting: accepting_map,
            transitions: trans,
            by_symbol,
        })
    }

    pub fn lambda(&self) -> &BigInt {
        &self.lambda
    }

    pub fn alphabet(&self) -> &[String] {
        &self.alphabet
    }

    pub fn states(&self) -> &[String] {
        &self.states
    }

    pub fn state_count(&self) -> usize {
        self.states.len()
    }

    pub fn alphabet_size(&self) -> usize {
        self.alphabet.len()
    }

    pub fn state_name(&self, q: StateId) -> &str {
        &self.states[q]
    }

    pub fn symbol_name(&self, s: SymbolId) -> &str {
        &self.alphabet[s]
    }

    pub fn state_id(&self, name: &str) -> Option<StateId> {
        self.states.iter().position(|s| s == name)
    }

    pub fn symbol_id(&self, name: &str) -> Option<SymbolId> {
        self.alphabet.iter().position(|s| s == name)
    }

    /// Initial state ids, ascending.
    pub fn initial(&self) -> &[StateId] {
        &self.initial
    }

    pub fn initial_set(&self) -> StateSet {
        StateSet::from_ids(self.state_count(), self.initial.iter().copied())
    }

    /// Final weight of `q`, or `None` when `q` is not accepting.
    pub fn final_weight(&self, q: StateId) -> Option<&BigInt> {
        self.accepting[q].as_ref()
    }

    pub fn is_accepting(&self, q: StateId) -> bool {
        self.accepting[q].is_some()
    }

    pub fn accepting_set(&self) -> StateSet {
        StateSet::from_ids(
            self.state_count(),
            (0..self.state_count()).filter(|&q| self.is_accepting(q)),
        )
    }

    pub fn transitions(&self) -> &[Transition] {
        &self.transitions
    }

    /// Transitions labelled with `sym`, in insertion order.
    pub fn transitions_on(&self, sym: SymbolId) -> impl Iterator<Item = &Transition> + '_ {
        self.by_symbol[sym].iter().map(|&i| &self.transitions[i])
    }

    /// True when there is a single initial state and at most one transition
    /// per `(state, symbol)` pair.
    pub fn is_deterministic(&self) -> bool {
        if self.initial.len() != 1 {
            return false;
        }
        let mut seen = std::collections::HashSet::new();
        self.transitions
            .iter()
            .all(|t| seen.insert((t.src, t.symbol)))
    }

    /// True when the transition function is total and every state is
    /// accepting with final weight 0.
    pub fn is_complete(&self) -> bool {
        let total = (0..self.state_count())
            .all(|q| (0..self.alphabet_size()).all(|s| self.transitions_on(s).any(|t| t.src == q)));
        total
            && self
                .accepting
                .iter()
                .all(|f| f.as_ref().is_some_and(|w| w.is_zero()))
    }

    /// Maximal absolute value over all transition weights and final weights;
    /// 0 when there are none.
    pub fn max_abs_weight(&self) -> BigInt {
        let mut m = BigInt::from(0);
        for t in &self.transitions {
            let a = t.weight.abs();
            if a > m {
                m = a;
            }
        }
        for f in self.accepting.iter().flatten() {
            let a = f.abs();
            if a > m {
                m = a;
            }
        }
        m
    }

    /// Parses a word given as one token per symbol.
    pub fn word_from_tokens<'a, I: IntoIterator<Item = &'a str>>(&self, tokens: I) -> Result<Word> {
        let mut w = Word::empty();
        for t in tokens {
            w.push(
                self.symbol_id(t)
                    .ok_or_else(|| Error::UnknownSymbol(t.to_string()))?,
            );
        }
        Ok(w)
    }

    /// Parses a word given as a contiguous string of single-character symbols.
    pub fn word_from_compact(&self, text: &str) -> Result<Word> {
        let mut w = Word::empty();
        for c in text.chars() {
            let tok = c.to_string();
            w.push(self.symbol_id(&tok).ok_or(Error::UnknownSymbol(tok))?);
        }
        Ok(w)
    }

    /// Renders a word using symbol names; symbols are concatenated when the
    /// whole alphabet is single-character, otherwise joined with spaces.
    pub fn format_word(&self, w: &Word) -> String {
        let compact = self.alphabet.iter().all(|s| s.chars().count() == 1);
        let sep = if compact { "" } else { " " };
        w.symbols()
            .iter()
            .map(|&s| self.alphabet[s].as_str())
            .collect::<Vec<_>>()
            .join(sep)
    }

    /// Errors unless every symbol index in `w` is valid for this automaton.
    pub fn check_word(&self, w: &Word) -> Result<()> {
        for &s in w.symbols() {
            if s >= self.alphabet.len() {
                return Err(Error::UnknownSymbol(format!("#{s}")));
            }
        }
        Ok(())
    }
}
