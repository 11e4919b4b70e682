//! Line-based text format for automata, plus DOT export.
//!
//! ```text
//! lambda <int>
//! alphabet <sym> <sym> ...
//! states <name> <name> ...
//! initial <name> ...
//! accepting <name> <int-final-weight>      # one line per accepting state
//! trans <src> <sym> <dst> <int-weight>     # one line per transition
//! ```
//!
//! `#` starts a comment, blank lines are ignored, tokens are whitespace
//! separated. State and symbol tokens are non-empty strings over
//! `[A-Za-z0-9_]`. A line whose token count does not match its directive is
//! rejected, never repaired. Parsing then serializing then parsing is
//! idempotent; serialization emits the canonical order (`lambda`, `alphabet`,
//! `states`, `initial`, `accepting` in state order, `trans` in insertion
//! order) and omits the `initial` line when the initial set is empty.

use std::fmt::Write as _;

use num_bigint::BigInt;

use crate::automaton::Automaton;
use crate::error::{Error, Result};

struct Token<'a> {
    text: &'a str,
    column: usize, // 1-based character column
}

fn tokenize(line: &str) -> Vec<Token<'_>> {
    let line = match line.find('#') {
        Some(i) => &line[..i],
        None => line,
    };
    let mut tokens = Vec::new();
    let mut start: Option<usize> = None;
    let mut col = 0;
    let mut start_col = 0;
    let mut byte = 0;
    for (i, c) in line.char_indices() {
        col += 1;
        if c.is_whitespace() {
            if let Some(s) = start.take() {
                tokens.push(Token {
                    text: &line[s..i],
                    column: start_col,
                });
            }
        } else if start.is_none() {
            start = Some(i);
            start_col = col;
        }
        byte = i + c.len_utf8();
    }
    if let Some(s) = start {
        tokens.push(Token {
            text: &line[s..byte],
            column: start_col,
        });
    }
    tokens
}

fn parse_int(tok: &Token<'_>, line_no: usize) -> Result<BigInt> {
    tok.text.parse::<BigInt>().map_err(|_| Error::Syntax {
        line: line_no,
        column: tok.column,
        message: format!("expected an integer, found `{}`", tok.text),
    })
}

/// Parses the text format into a validated [`Automaton`].
///
/// Syntax errors report the offending line and column; validity errors
/// (unknown state or symbol, `lambda < 2`, duplicate transitions) name the
/// offending token and line.
pub fn parse_automaton(text: &str) -> Result<Automaton> {
    let mut lambda: Option<(BigInt, usize)> = None;
    let mut alphabet: Option<Vec<String>> = None;
    let mut states: Option<Vec<String>> = None;
    let mut initial: Option<Vec<String>> = None;
    let mut accepting: Vec<(String, BigInt, usize)> = Vec::new();
    let mut transitions: Vec<(String, String, String, BigInt, usize)> = Vec::new();

    for (idx, raw) in text.lines().enumerate() {
        let line_no = idx + 1;
        let tokens = tokenize(raw);
        if tokens.is_empty() {
            continue;
        }
        let directive = &tokens[0];
        let expect_count = |n: usize| -> Result<()> {
            if tokens.len() != n {
                return Err(Error::Syntax {
                    line: line_no,
                    column: directive.column,
                    message: format!(
                        "`{}` takes {} token(s), found {}",
                        directive.text,
                        n - 1,
                        tokens.len() - 1
                    ),
                });
            }
            Ok(())
        };
        match directive.text {
            "lambda" => {
                expect_count(2)?;
                if lambda.is_some() {
                    return Err(Error::Syntax {
                        line: line_no,
                        column: directive.column,
                        message: "duplicate `lambda` line".into(),
                    });
                }
                lambda = Some((parse_int(&tokens[1], line_no)?, line_no));
            }
            "alphabet" => {
                if tokens.len() < 2 {
                    return Err(Error::Syntax {
                        line: line_no,
                        column: directive.column,
                        message: "`alphabet` needs at least one symbol".into(),
                    });
                }
                if alphabet.is_some() {
                    return Err(Error::Syntax {
                        line: line_no,
                        column: directive.column,
                        message: "duplicate `alphabet` line".into(),
                    });
                }
                alphabet = Some(tokens[1..].iter().map(|t| t.text.to_string()).collect());
            }
            "states" => {
                if tokens.len() < 2 {
                    return Err(Error::Syntax {
                        line: line_no,
                        column: directive.column,
                        message: "`states` needs at least one state".into(),
                    });
                }
                if states.is_some() {
                    return Err(Error::Syntax {
                        line: line_no,
                        column: directive.column,
                        message: "duplicate `states` line".into(),
                    });
                }
                states = Some(tokens[1..].iter().map(|t| t.text.to_string()).collect());
            }
            "initial" => {
                if tokens.len() < 2 {
                    return Err(Error::Syntax {
                        line: line_no,
                        column: directive.column,
                        message: "`initial` needs at least one state".into(),
                    });
                }
                if initial.is_some() {
                    return Err(Error::Syntax {
                        line: line_no,
                        column: directive.column,
                        message: "duplicate `initial` line".into(),
                    });
                }
                initial = Some(tokens[1..].iter().map(|t| t.text.to_string()).collect());
            }
            "accepting" => {
                expect_count(3)?;
                accepting.push((
                    tokens[1].text.to_string(),
                    parse_int(&tokens[2], line_no)?,
                    line_no,
                ));
            }
            "trans" => {
                expect_count(5)?;
                transitions.push((
                    tokens[1].text.to_string(),
                    tokens[2].text.to_string(),
                    tokens[3].text.to_string(),
                    parse_int(&tokens[4], line_no)?,
                    line_no,
                ));
            }
            other => {
                return Err(Error::Syntax {
                    line: line_no,
                    column: directive.column,
                    message: format!("unknown directive `{other}`"),
                });
            }
        }
    }

    let (lambda, lambda_line) =
        lambda.ok_or_else(|| Error::Invalid("missing `lambda` line".into()))?;
    let alphabet = alphabet.ok_or_else(|| Error::Invalid("missing `alphabet` line".into()))?;
    let states = states.ok_or_else(|| Error::Invalid("missing `states` line".into()))?;

    if lambda < BigInt::from(2) {
        return Err(Error::Invalid(format!(
            "line {lambda_line}: lambda must be an integer >= 2, got {lambda}"
        )));
    }

    // Check cross-references upfront so errors name the offending token and
    // line; Automaton::new re-validates structurally afterwards.
    let check_state = |name: &str, line: usize| -> Result<()> {
        if states.iter().any(|s| s == name) {
            Ok(())
        } else {
            Err(Error::Invalid(format!(
                "line {line}: unknown state `{name}`"
            )))
        }
    };
    let check_symbol = |name: &str, line: usize| -> Result<()> {
        if alphabet.iter().any(|s| s == name) {
            Ok(())
        } else {
            Err(Error::Invalid(format!(
                "line {line}: unknown symbol `{name}`"
            )))
        }
    };
    if let Some(init) = &initial {
        for name in init {
            check_state(name, 0)
                .map_err(|_| Error::Invalid(format!("unknown state `{name}` in `initial` line")))?;
        }
    }
    for (name, _, line) in &accepting {
        check_state(name, *line)?;
    }
    let mut seen_acc = std::collections::HashSet::new();
    for (name, _, line) in &accepting {
        if !seen_acc.insert(name.clone()) {
            return Err(Error::Invalid(format!(
                "line {line}: duplicate accepting declaration for state `{name}`"
            )));
        }
    }
    let mut seen_trans = std::collections::HashSet::new();
    for (src, sym, dst, _, line) in &transitions {
        check_state(src, *line)?;
        check_symbol(sym, *line)?;
        check_state(dst, *line)?;
        if !seen_trans.insert((src.clone(), sym.clone(), dst.clone())) {
            return Err(Error::Invalid(format!(
                "line {line}: duplicate transition ({src}, {sym}, {dst})"
            )));
        }
    }

    Automaton::new(
        lambda,
        alphabet,
        states,
        initial.unwrap_or_default(),
        accepting.into_iter().map(|(n, w, _)| (n, w)).collect(),
        transitions
            .into_iter()
            .map(|(s, y, d, w, _)| (s, y, d, w))
            .collect(),
    )
}

/// Serializes an automaton so that re-parsing yields a structurally identical
/// automaton: `initial` and `accepting` in state order, transitions in their
/// stored order.
pub fn serialize_automaton(a: &Automaton) -> String {
    let mut out = String::new();
    writeln!(out, "lambda {}", a.lambda()).unwrap();
    writeln!(out, "alphabet {}", a.alphabet().join(" ")).unwrap();
    writeln!(out, "states {}", a.states().join(" ")).unwrap();
    if !a.initial().is_empty() {
        let names: Vec<&str> = a.initial().iter().map(|&q| a.state_name(q)).collect();
        writeln!(out, "initial {}", names.join(" ")).unwrap();
    }
    for q in 0..a.state_count() {
        if let Some(w) = a.final_weight(q) {
            writeln!(out, "accepting {} {}", a.state_name(q), w).unwrap();
        }
    }
    for t in a.transitions() {
        writeln!(
            out,
            "trans {} {} {} {}",
            a.state_name(t.src),
            a.symbol_name(t.symbol),
            a.state_name(t.dst),
            t.weight
        )
        .unwrap();
    }
    out
}

/// Emits a DOT digraph: one node per state (accepting states are double
/// circles annotated with their final weight, initial states get an inbound
/// arrow from a point node), one labelled edge `symbol,weight` per transition.
pub fn export_dot(a: &Automaton) -> String {
    export_dot_labelled(a, |q| a.state_name(q).to_string())
}

pub(crate) fn export_dot_labelled<F: Fn(crate::automaton::StateId) -> String>(
    a: &Automaton,
    label: F,
) -> String {
    let mut out = String::new();
    writeln!(out, "digraph dsa {{").unwrap();
    writeln!(out, "  rankdir=LR;").unwrap();
    for (i, &q) in a.initial().iter().enumerate() {
        writeln!(out, "  __start{i} [shape=point];").unwrap();
        writeln!(out, "  __start{i} -> \"{}\";", a.state_name(q)).unwrap();
    }
    for q in 0..a.state_count() {
        match a.final_weight(q) {
            Some(w) => writeln!(
                out,
                "  \"{}\" [shape=doublecircle, label=\"{} / {}\"];",
                a.state_name(q),
                label(q),
                w
            )
            .unwrap(),
            None => writeln!(
                out,
                "  \"{}\" [shape=circle, label=\"{}\"];",
                a.state_name(q),
                label(q)
            )
            .unwrap(),
        }
    }
    for t in a.transitions() {
        writeln!(
            out,
            "  \"{}\" -> \"{}\" [label=\"{},{}\"];",
            a.state_name(t.src),
            a.state_name(t.dst),
            a.symbol_name(t.symbol),
            t.weight
        )
        .unwrap();
    }
    writeln!(out, "}}").unwrap();
    out
}
