//! Shared fixtures for unit tests.

use crate::automaton::Automaton;
use crate::format::parse_automaton;

/// Three-state automaton that hedges between an expensive self-loop and a
/// cheap escape state; its behaviour flips with the discounting factor.
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

/// Two-state automaton whose gap stabilizes at 2; its vector construction
/// has exactly two reachable states.
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
    parse_automaton(&text).unwrap()
}

pub fn drift() -> Automaton {
    parse_automaton(DRIFT).unwrap()
}
