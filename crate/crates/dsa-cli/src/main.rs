//! `dsa` — exact analysis of integral discounted-sum automata.
//!
//! Exit codes: 0 success / affirmative decision, 1 negative decision or
//! counterexample found, 2 usage, parse, or resource errors.

use std::io::Write;
use std::path::PathBuf;
use std::process::ExitCode;

use anyhow::{anyhow, bail, Context};
use clap::{ArgGroup, Parser, Subcommand};
use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::Signed;

use dsa::{
    auto_determinize, compute_constants_with_cap, decide, decide_with_cutoff, determinize,
    enumerate_gaps, equivalent_up_to, eval, export_dot, parse_automaton, Automaton,
    DecisionOutcome, ExtendedValue, StateSet, Word, DEFAULT_MAX_VECTORS,
};

#[derive(Parser)]
#[command(
    name = "dsa",
    about = "Exact evaluation, determinization, and determinizability decision for integral discounted-sum automata",
    version
)]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Evaluate a word: the minimal discounted weight of an accepting run
    Eval {
        file: PathBuf,
        /// The word; contiguous single-character symbols unless --sep is given
        word: String,
        /// Symbol separator enabling multi-character symbols
        #[arg(long)]
        sep: Option<char>,
        #[arg(long)]
        json: bool,
    },
    /// Print the thresholds m_A, M, N, C of an automaton
    Constants {
        file: PathBuf,
        /// Print huge values in full instead of the lambda^E * c + d form
        #[arg(long)]
        full: bool,
        /// Cap on the threshold exponent n^2 * 2^(n^2)
        #[arg(long, default_value_t = dsa::DEFAULT_EXPONENT_CAP)]
        exp_cap: u64,
    },
    /// Enumerate recoverable gaps up to the given word and suffix lengths
    Gaps {
        file: PathBuf,
        #[arg(long)]
        max_word: usize,
        #[arg(long)]
        max_suffix: usize,
        #[arg(long)]
        json: bool,
    },
    /// Build a deterministic automaton by bounded gap tracking
    #[command(group(ArgGroup::new("mode").required(true).args(["bound", "auto"])))]
    Determinize {
        file: PathBuf,
        /// Gap cutoff; the result is equivalent when this dominates all
        /// recoverable gaps
        #[arg(long)]
        bound: Option<BigInt>,
        /// Decide determinizability first and use the decision bound
        #[arg(long)]
        auto: bool,
        /// Write the result here instead of stdout
        #[arg(long)]
        out: Option<PathBuf>,
        #[arg(long)]
        max_vectors: Option<usize>,
    },
    /// Decide whether the automaton has a deterministic equivalent
    Decide {
        file: PathBuf,
        #[arg(long)]
        max_vectors: Option<usize>,
        #[arg(long)]
        json: bool,
        /// UNSOUND experimentation override of the exploration cutoff C
        /// (integer or p/q)
        #[arg(long)]
        cutoff: Option<String>,
    },
    /// Search for a shortest word on which two automata disagree
    Equiv {
        file1: PathBuf,
        file2: PathBuf,
        #[arg(long)]
        max_len: usize,
    },
    /// Emit the automaton as a DOT digraph
    ExportDot { file: PathBuf },
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    match run(cli.command) {
        Ok(code) => code,
        Err(e) => {
            eprintln!("error: {e:#}");
            ExitCode::from(2)
        }
    }
}

fn load(file: &PathBuf) -> anyhow::Result<Automaton> {
    let text =
        std::fs::read_to_string(file).with_context(|| format!("cannot read {}", file.display()))?;
    parse_automaton(&text).with_context(|| format!("cannot parse {}", file.display()))
}

fn parse_word(a: &Automaton, text: &str, sep: Option<char>) -> anyhow::Result<Word> {
    let w = match sep {
        Some(c) => a.word_from_tokens(text.split(c).filter(|t| !t.is_empty()))?,
        None => a.word_from_compact(text)?,
    };
    Ok(w)
}

fn max_vectors(flag: Option<usize>) -> anyhow::Result<usize> {
    let k = match flag {
        Some(k) => k,
        None => match std::env::var("DSA_MAX_VECTORS") {
            Ok(v) => v
                .parse::<usize>()
                .map_err(|_| anyhow!("DSA_MAX_VECTORS must be a positive integer, got `{v}`"))?,
            Err(_) => DEFAULT_MAX_VECTORS,
        },
    };
    if k == 0 {
        bail!("the vector budget must be at least 1");
    }
    Ok(k)
}

fn parse_rational(text: &str) -> anyhow::Result<BigRational> {
    let mk = |n: &str, d: &str| -> anyhow::Result<BigRational> {
        let numer: BigInt = n
            .trim()
            .parse()
            .map_err(|_| anyhow!("bad numerator `{n}`"))?;
        let denom: BigInt = d
            .trim()
            .parse()
            .map_err(|_| anyhow!("bad denominator `{d}`"))?;
        if denom == BigInt::from(0) {
            bail!("zero denominator in `{text}`");
        }
        Ok(BigRational::new(numer, denom))
    };
    match text.split_once('/') {
        Some((n, d)) => mk(n, d),
        None => mk(text, "1"),
    }
}

fn value_json(v: &ExtendedValue) -> serde_json::Value {
    match v {
        ExtendedValue::Finite(s) => serde_json::json!({
            "infinite": false,
            "num": s.num().to_string(),
            "lambda_exp": s.exp(),
        }),
        ExtendedValue::Infinite => serde_json::json!({
            "infinite": true,
            "num": serde_json::Value::Null,
            "lambda_exp": serde_json::Value::Null,
        }),
    }
}

fn state_names(a: &Automaton, s: &StateSet) -> Vec<String> {
    s.iter().map(|q| a.state_name(q).to_string()).collect()
}

fn show_word(a: &Automaton, w: &Word) -> String {
    let full = a.format_word(w);
    if full.chars().count() <= 64 {
        full
    } else {
        let head: String = full.chars().take(32).collect();
        format!("{head}... (length {})", w.len())
    }
}

fn run(command: Command) -> anyhow::Result<ExitCode> {
    match command {
        Command::Eval {
            file,
            word,
            sep,
            json,
        } => {
            let a = load(&file)?;
            let w = parse_word(&a, &word, sep)?;
            let v = eval(&a, &w)?;
            if json {
                println!("{}", value_json(&v));
            } else {
                println!("{}", v.display(a.lambda()));
            }
            Ok(ExitCode::SUCCESS)
        }
        Command::Constants {
            file,
            full,
            exp_cap,
        } => {
            let a = load(&file)?;
            let c = compute_constants_with_cap(&a, exp_cap)?;
            println!("m_A = {}", c.m_a);
            println!("M = {}", c.big_m);
            if full {
                println!("N = {}", c.big_n);
                println!("C = {}", c.big_c);
            } else {
                println!("N = {}", c.n_symbolic);
                println!("C = {}", c.c_symbolic);
            }
            Ok(ExitCode::SUCCESS)
        }
        Command::Gaps {
            file,
            max_word,
            max_suffix,
            json,
        } => {
            let a = load(&file)?;
            let records = enumerate_gaps(&a, max_word, max_suffix);
            if json {
                let arr: Vec<serde_json::Value> = records
                    .iter()
                    .map(|r| {
                        serde_json::json!({
                            "w": a.format_word(&r.w),
                            "q_u": a.state_name(r.q_u),
                            "q_l": a.state_name(r.q_l),
                            "gap": r.gap.to_string(),
                            "z": a.format_word(&r.z),
                        })
                    })
                    .collect();
                println!("{}", serde_json::Value::Array(arr));
            } else {
                for r in &records {
                    println!(
                        "w='{}' q_u={} q_l={} gap={} z='{}'",
                        a.format_word(&r.w),
                        a.state_name(r.q_u),
                        a.state_name(r.q_l),
                        r.gap,
                        a.format_word(&r.z)
                    );
                }
            }
            Ok(ExitCode::SUCCESS)
        }
        Command::Determinize {
            file,
            bound,
            auto,
            out,
            max_vectors: mv,
        } => {
            let a = load(&file)?;
            let limit = max_vectors(mv)?;
            let dda = if auto {
                match auto_determinize(&a, limit)? {
                    Some(d) => d,
                    None => {
                        eprintln!(
                            "not determinizable: no equivalent deterministic automaton exists"
                        );
                        return Ok(ExitCode::from(1));
                    }
                }
            } else {
                let b = bound.expect("clap group guarantees one mode");
                if b.is_negative() {
                    bail!("--bound must be non-negative, got {b}");
                }
                determinize(&a, &b, limit)?
            };
            let text = dda.to_text();
            match out {
                Some(path) => {
                    let mut f = std::fs::File::create(&path)
                        .with_context(|| format!("cannot create {}", path.display()))?;
                    f.write_all(text.as_bytes())?;
                    eprintln!(
                        "wrote {} states, {} transitions to {}",
                        dda.automaton().state_count(),
                        dda.automaton().transitions().len(),
                        path.display()
                    );
                }
                None => print!("{text}"),
            }
            Ok(ExitCode::SUCCESS)
        }
        Command::Decide {
            file,
            max_vectors: mv,
            json,
            cutoff,
        } => {
            let a = load(&file)?;
            let limit = max_vectors(mv)?;
            let outcome = match cutoff {
                Some(text) => {
                    let c = parse_rational(&text)?;
                    eprintln!(
                        "warning: --cutoff overrides the sound exploration bound; the outcome may be wrong"
                    );
                    decide_with_cutoff(&a, limit, &c)?
                }
                None => decide(&a, limit)?,
            };
            match outcome {
                DecisionOutcome::Determinizable { bound } => {
                    if json {
                        println!(
                            "{}",
                            serde_json::json!({
                                "determinizable": true,
                                "bound": bound.to_string(),
                                "witness": serde_json::Value::Null,
                            })
                        );
                    } else if bound.to_string().len() <= 40 {
                        println!("determinizable (bound {bound})");
                    } else {
                        let c = compute_constants_with_cap(&a, dsa::DEFAULT_EXPONENT_CAP)?;
                        println!("determinizable (bound floor(N), N = {})", c.n_symbolic);
                    }
                    Ok(ExitCode::SUCCESS)
                }
                DecisionOutcome::NotDeterminizable { witness } => {
                    if json {
                        println!(
                            "{}",
                            serde_json::json!({
                                "determinizable": false,
                                "bound": serde_json::Value::Null,
                                "witness": {
                                    "w": a.format_word(&witness.w),
                                    "U": state_names(&a, &witness.u_set),
                                    "L": state_names(&a, &witness.l_set),
                                    "q_u": a.state_name(witness.q_u),
                                    "z": a.format_word(&witness.z),
                                },
                            })
                        );
                    } else {
                        println!("not determinizable");
                        println!(
                            "witness: w='{}' U={{{}}} L={{{}}} q_u={} z='{}'",
                            show_word(&a, &witness.w),
                            state_names(&a, &witness.u_set).join(","),
                            state_names(&a, &witness.l_set).join(","),
                            a.state_name(witness.q_u),
                            a.format_word(&witness.z)
                        );
                    }
                    Ok(ExitCode::from(1))
                }
            }
        }
        Command::Equiv {
            file1,
            file2,
            max_len,
        } => {
            let a = load(&file1)?;
            let b = load(&file2)?;
            match equivalent_up_to(&a, &b, max_len)? {
                None => {
                    println!("equivalent on all words up to length {max_len}");
                    Ok(ExitCode::SUCCESS)
                }
                Some(w) => {
                    let va = eval(&a, &w)?;
                    let vb = eval(&b, &w)?;
                    println!(
                        "counterexample '{}': {} vs {}",
                        a.format_word(&w),
                        va.display(a.lambda()),
                        vb.display(b.lambda())
                    );
                    Ok(ExitCode::from(1))
                }
            }
        }
        Command::ExportDot { file } => {
            let a = load(&file)?;
            print!("{}", export_dot(&a));
            Ok(ExitCode::SUCCESS)
        }
    }
}
