//! Shared fixtures and generators for the integration suites.
#![allow(dead_code)] // each test target uses a different subset

use num_bigint::BigInt;
use num_traits::Zero;
use rand::Rng;

use dsa::{Automaton, StateId, Word};

pub const HEDGE2: &str = "\
lambda 2
alphabet a b
states q0 q1 q2
initial q0
accepting q0 0
accepting q1 0
accepting q2 0
trans q0 a q0 2
trans q0 a q2 3
trans q0 b q1 0
trans q2 a q2 0
";

pub const DRIFT: &str = "\
lambda 2
alphabet a b
states q0 q1
initial q0
accepting q0 0
accepting q1 0
trans q0 a q0 1
trans q0 a q1 0
trans q0 b q0 0
";

pub fn hedge(lambda: u32) -> Automaton {
    let text = HEDGE2.replacen("lambda 2", &format!("lambda {lambda}"), 1);
    dsa::parse_automaton(&text).unwrap()
}

pub fn drift() -> Automaton {
    dsa::parse_automaton(DRIFT).unwrap()
}

/// Random automaton over {a, b} with up to `max_states` states, weights in
/// `0..=max_weight`, and a discounting factor drawn from `lambdas`.
pub fn random_automaton(
    rng: &mut impl Rng,
    max_states: usize,
    max_weight: i64,
    lambdas: &[u32],
) -> Automaton {
    let n = rng.gen_range(1..=max_states);
    let lambda = lambdas[rng.gen_range(0..lambdas.len())];
    let states: Vec<String> = (0..n).map(|i| format!("q{i}")).collect();
    let alphabet = vec!["a".to_string(), "b".to_string()];
    let mut initial = Vec::new();
    for s in &states {
        if rng.gen_bool(0.7) {
            initial.push(s.clone());
        }
    }
    if initial.is_empty() {
        initial.push(states[rng.gen_range(0..n)].clone());
    }
    let mut accepting = Vec::new();
    for s in &states {
        if rng.gen_bool(0.6) {
            accepting.push((s.clone(), BigInt::from(rng.gen_range(0..=max_weight))));
        }
    }
    let mut transitions = Vec::new();
    for src in &states {
        for sym in ["a", "b"] {
            for dst in &states {
                if rng.gen_bool(0.5) {
                    transitions.push((
                        src.clone(),
                        sym.to_string(),
                        dst.clone(),
                        BigInt::from(rng.gen_range(0..=max_weight)),
                    ));
                }
            }
        }
    }
    Automaton::new(
        BigInt::from(lambda),
        alphabet,
        states,
        initial,
        accepting,
        transitions,
    )
    .unwrap()
}

/// Random word of the given length over the automaton's alphabet.
pub fn random_word(rng: &mut impl Rng, a: &Automaton, len: usize) -> Word {
    Word::from_symbols(
        (0..len)
            .map(|_| rng.gen_range(0..a.alphabet_size()))
            .collect(),
    )
}

/// The normalized prefix values `Gamma_0 .. Gamma_n` of the run along
/// `states` on `w`: `Gamma_{i+1} = lambda * (Gamma_i + weight_i)`.
pub fn gamma_prefixes(a: &Automaton, w: &Word, states: &[StateId]) -> Vec<BigInt> {
    let mut out = vec![BigInt::zero()];
    let mut g = BigInt::zero();
    for (i, &sym) in w.symbols().iter().enumerate() {
        let t = a
            .transitions_on(sym)
            .find(|t| t.src == states[i] && t.dst == states[i + 1])
            .expect("run follows transitions");
        g = a.lambda() * (&g + &t.weight);
        out.push(g.clone());
    }
    out
}
