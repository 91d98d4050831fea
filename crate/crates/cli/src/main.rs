//! `ftpda`: bounded context-free languages and finite-turn pushdown
//! automata from the command line.
//!
//! Pipeline commands write their artifact to `--out` (or standard output)
//! and a size report to standard error, or to standard output when the
//! artifact went to a file. Exit codes: 0 success, 1 verification failure,
//! 2 usage error, 3 inconclusive search.

mod input;

use std::io::Write;
use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Parser, Subcommand, ValueEnum};
use serde_json::{json, Value};

use ftpda::finite_turn::{cfg_to_finite_turn_pipeline, pda_to_cfg};
use ftpda::oracle::cyk::cyk_membership;
use ftpda::oracle::equiv::{box_equivalence, EnumerationBox, Exec, Subject, Verdict};
use ftpda::oracle::sim::{min_turns, pda_accepts, CapOverrides, SearchCaps, SearchResult, TurnsResult};
use ftpda::oracle::witness::{witness_ln, witness_lprime, witness_tilde_ln};
use ftpda::reduction::reduce_turns;
use ftpda::text::{fmt_word, parse_word};
use ftpda::transform::borders::compute_borders;
use ftpda::transform::bounded::{check_letter_bounded, check_word_bounded};
use ftpda::transform::normal::binarize;
use ftpda::transform::trees::{TreeOptions, TreeScope};
use ftpda::unary_turns::{kturn_unary_pda_to_nfa, one_turn_pda_to_nfa, DEFAULT_STATE_BUDGET};
use ftpda::word::{build_inverse_hom_grammar, pda_inverse_hom, symb_ratio, word_bounded_cfg_to_pda, Homomorphism};
use ftpda::{dot, measure_grammar, measure_nfa, measure_pda, normalize_pda, Error, LoosePda, SizeReport};

use input::{load, Loaded};

#[derive(Parser, Debug)]
#[command(name = "ftpda", version, about = "Bounded context-free languages and finite-turn pushdown automata")]
struct Cli {
    /// Alphabet order, e.g. `a1,a2,a3`.
    #[arg(long, global = true)]
    alphabet: Option<String>,
    /// Per-letter exponent bound of the enumeration box.
    #[arg(long = "box", global = true, default_value_t = 6)]
    bound: usize,
    /// Search cap overrides: `stack=..,steps=..,eps=..,turns=..`.
    #[arg(long, global = true)]
    caps: Option<String>,
    /// Homomorphism file with lines `a1 = ab`.
    #[arg(long, global = true)]
    hom: Option<PathBuf>,
    /// Reports as JSON.
    #[arg(long, global = true)]
    json: bool,
    /// Artifact output path.
    #[arg(long, global = true)]
    out: Option<PathBuf>,
    #[command(subcommand)]
    command: Command,
}

#[derive(Clone, Copy, Debug, ValueEnum)]
enum Trees {
    Simple,
    All,
}

#[derive(Subcommand, Debug)]
enum Command {
    /// Brings a pushdown automaton into normal form.
    Normalize { pda: PathBuf },
    /// Binary bodies via fresh variables.
    Binarize { grammar: PathBuf },
    /// Border of every variable along the alphabet order.
    Borders { grammar: PathBuf },
    /// Letter-boundedness (or word-boundedness with `--hom`).
    CheckBounded { grammar: PathBuf },
    /// Letter-bounded grammar to an (m-1)-turn pushdown automaton.
    ToPda {
        grammar: PathBuf,
        #[arg(long, value_enum, default_value = "simple")]
        trees: Trees,
    },
    /// Pushdown automaton to a grammar in Chomsky normal form.
    PdaToCfg { pda: PathBuf },
    /// Unary finite-turn pushdown automaton to a finite automaton.
    ToNfa {
        pda: PathBuf,
        /// Turn bound; defaults to the declared one.
        #[arg(long)]
        turns: Option<usize>,
    },
    /// k-turn automaton over a1* .. am* to an (m-1)-turn automaton.
    ReduceTurns {
        pda: PathBuf,
        #[arg(long)]
        turns: Option<usize>,
    },
    /// Letter-bounded preimage grammar under `--hom`.
    InvhomGrammar { grammar: PathBuf },
    /// Letter-bounded preimage automaton under `--hom`.
    InvhomPda { pda: PathBuf },
    /// Word-bounded grammar to a finite-turn automaton over its words.
    WordToPda { grammar: PathBuf },
    /// Membership of a word (`a1^2 a2`) in a grammar, automaton or NFA.
    Member { subject: PathBuf, word: String },
    /// Searches an accepting computation.
    Simulate {
        pda: PathBuf,
        word: String,
        #[arg(long)]
        trace: bool,
    },
    /// Fewest turns of an accepting computation.
    MinTurns { pda: PathBuf, word: String },
    /// Compares two subjects on every word of the box.
    Equiv {
        left: PathBuf,
        right: PathBuf,
        #[arg(long)]
        sequential: bool,
    },
    /// Witness families.
    Witness {
        #[command(subcommand)]
        family: Family,
    },
    /// Size report of a grammar, automaton or NFA (`-` reads stdin).
    Sizes { subject: PathBuf },
    /// Graphviz rendering.
    Dot { subject: PathBuf },
}

#[derive(Subcommand, Debug)]
enum Family {
    /// The grammar for `{a^(2^n)}`.
    Ln { n: usize },
    /// The grammar over `a1 .. am` with `n + 4m - 3` variables.
    Tilde { n: usize, m: usize },
    /// The one-turn unary automaton for multiples of `n(n+1)`.
    Lprime { n: usize },
}

/// A failed command with its exit code.
#[derive(Debug)]
struct Failure {
    code: u8,
    message: String,
}

impl Failure {
    fn usage(message: impl Into<String>) -> Self {
        Failure { code: 2, message: message.into() }
    }
}

impl From<Error> for Failure {
    fn from(e: Error) -> Self {
        let code = match e {
            Error::Inconclusive(_) => 3,
            Error::Budget { .. } => 1,
            _ => 2,
        };
        Failure { code, message: e.to_string() }
    }
}

impl From<std::io::Error> for Failure {
    fn from(e: std::io::Error) -> Self {
        Failure::usage(e.to_string())
    }
}

type Outcome = Result<u8, Failure>;

/// Prints to standard output, ignoring a closed pipe.
macro_rules! say {
    ($($arg:tt)*) => {{
        let _ = writeln!(std::io::stdout(), $($arg)*);
    }};
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    match run(&cli) {
        Ok(code) => ExitCode::from(code),
        Err(f) => {
            eprintln!("error: {}", f.message);
            ExitCode::from(f.code)
        }
    }
}

fn run(cli: &Cli) -> Outcome {
    match &cli.command {
        Command::Normalize { pda } => {
            let loose = LoosePda::parse(&input::read(pda)?)?;
            let m = normalize_pda(&loose);
            artifact(cli, &m.to_text(), &measure_pda(&m).with("input_states", loose.states.len()))
        }
        Command::Binarize { grammar } => {
            let g = input::grammar(grammar)?;
            let b = binarize(&g);
            let r = measure_grammar(&b)
                .with("input_var_count", g.variables().len())
                .with("input_symb_count", ftpda::measure::symb(&g));
            artifact(cli, &b.to_text(), &r)
        }
        Command::Borders { grammar } => {
            let g = input::grammar(grammar)?;
            let alphabet = alphabet(cli, &g.terminals().to_vec())?;
            let table = compute_borders(&g, &alphabet)?;
            if cli.json {
                let map: serde_json::Map<String, Value> = g
                    .variables()
                    .iter()
                    .zip(table.entries())
                    .map(|(v, b)| (v.clone(), b.map_or(Value::Null, |b| json!([b.l, b.r]))))
                    .collect();
                say!("{}", Value::Object(map));
            } else {
                let _ = write!(std::io::stdout(), "{table}");
            }
            Ok(0)
        }
        Command::CheckBounded { grammar } => {
            let g = input::grammar(grammar)?;
            let outside = match &cli.hom {
                Some(path) => {
                    let h = hom(path)?;
                    check_word_bounded(&g, h.words())?
                }
                None => check_letter_bounded(&g, &alphabet(cli, &g.terminals().to_vec())?),
            };
            if cli.json {
                say!("{}", json!({ "bounded": outside.is_none(), "witness": outside.as_deref().map(fmt_word) }));
            } else {
                match &outside {
                    None => say!("bounded"),
                    Some(w) => say!("not bounded: {} is generated", fmt_word(w)),
                }
            }
            Ok(u8::from(outside.is_some()))
        }
        Command::ToPda { grammar, trees } => {
            let g = input::grammar(grammar)?;
            let alphabet = alphabet(cli, &g.terminals().to_vec())?;
            let scope = match trees {
                Trees::Simple => TreeScope::Simple,
                Trees::All => TreeScope::All,
            };
            let p = cfg_to_finite_turn_pipeline(&g, &alphabet, TreeOptions { scope, ..TreeOptions::default() })?;
            let m = &p.result.machine;
            let r = measure_pda(m)
                .with("binarized_var_count", p.binarized.variables().len())
                .with("binarized_symb_count", ftpda::measure::symb(&p.binarized));
            artifact(cli, &m.to_text(), &r)
        }
        Command::PdaToCfg { pda } => {
            let g = pda_to_cfg(&input::pda(pda)?);
            artifact(cli, &g.to_text(), &measure_grammar(&g))
        }
        Command::ToNfa { pda, turns } => {
            let m = input::pda(pda)?;
            if m.input().len() != 1 {
                return Err(Failure::usage(format!("to-nfa needs a unary machine, got {} letters", m.input().len())));
            }
            let k = turns.or(m.turn_bound()).ok_or_else(|| Failure::usage("no turn bound: pass --turns"))?;
            let (nfa, longest) = if k <= 1 {
                (one_turn_pda_to_nfa(&m)?, 1)
            } else {
                let r = kturn_unary_pda_to_nfa(&m, k, DEFAULT_STATE_BUDGET)?;
                (r.nfa, r.max_sequence_len)
            };
            let trimmed = nfa.trim();
            let r = measure_nfa(&trimmed)
                .with("untrimmed_states", nfa.states().len())
                .with("max_sequence_len", longest)
                .with("pda_size", m.size());
            artifact(cli, &trimmed.to_text(), &r)
        }
        Command::ReduceTurns { pda, turns } => {
            let m = input::pda(pda)?;
            let k = turns.or(m.turn_bound()).ok_or_else(|| Failure::usage("no turn bound: pass --turns"))?;
            let alphabet = alphabet(cli, &m.input().to_vec())?;
            let (out, report) = reduce_turns(&m, k, &alphabet)?;
            let r = report
                .output
                .clone()
                .with("grammar_variables", report.grammar_variables)
                .with("one_state_states", report.loose_states)
                .with("one_state_stack", report.loose_stack)
                .with("input_pda_size", m.size());
            artifact(cli, &out.to_text(), &r)
        }
        Command::InvhomGrammar { grammar } => {
            let g = input::grammar(grammar)?;
            let h = hom(need_hom(cli)?)?;
            let inv = build_inverse_hom_grammar(&g, &h)?;
            let r = measure_grammar(&inv)
                .with("input_symb_count", ftpda::measure::symb(&g))
                .with("symb_ratio", format!("{:.4}", symb_ratio(&g, &inv)));
            artifact(cli, &inv.to_text(), &r)
        }
        Command::InvhomPda { pda } => {
            let m = input::pda(pda)?;
            let h = hom(need_hom(cli)?)?;
            let out = pda_inverse_hom(&m, &h)?;
            artifact(cli, &out.to_text(), &measure_pda(&out).with("input_pda_size", m.size()))
        }
        Command::WordToPda { grammar } => {
            let g = input::grammar(grammar)?;
            let h = hom(need_hom(cli)?)?;
            let m = word_bounded_cfg_to_pda(&g, &h)?;
            artifact(cli, &m.to_text(), &measure_pda(&m))
        }
        Command::Member { subject, word } => {
            let w = parse_word(word)?;
            let verdict = match load(subject)? {
                Loaded::Grammar(g) => {
                    if w.is_empty() {
                        Some(g.epsilon_stripped())
                    } else {
                        Some(cyk_membership(&g, &w)?)
                    }
                }
                Loaded::Pda(m) => pda_accepts(&m, &w, caps(cli, &m, w.len())?).verdict(),
                Loaded::Nfa(n) => Some(n.accepts_names(&w)),
            };
            verdict_line(cli, &w, verdict)
        }
        Command::Simulate { pda, word, trace } => {
            let m = input::pda(pda)?;
            let w = parse_word(word)?;
            let result = pda_accepts(&m, &w, caps(cli, &m, w.len())?);
            if let (SearchResult::Accepted(t), true) = (&result, *trace) {
                let mut out = String::new();
                for c in &t.configs {
                    let stack: Vec<&str> = c.stack.iter().map(|&z| m.stack()[z].as_str()).collect();
                    out.push_str(&format!("{} {} {}\n", m.states()[c.state], c.pos, stack.join(" ")));
                }
                if cli.json {
                    let configs: Vec<Value> = t
                        .configs
                        .iter()
                        .map(|c| json!({ "state": m.states()[c.state], "pos": c.pos, "stack": c.stack.iter().map(|&z| m.stack()[z].clone()).collect::<Vec<_>>() }))
                        .collect();
                    say!("{}", json!({ "accepted": true, "turns": t.turns(), "trace": configs }));
                    return Ok(0);
                }
                emit(cli, &out)?;
            }
            verdict_line(cli, &w, result.verdict())
        }
        Command::MinTurns { pda, word } => {
            let m = input::pda(pda)?;
            let w = parse_word(word)?;
            let (turns, code) = match min_turns(&m, &w, caps(cli, &m, w.len())?) {
                TurnsResult::Turns(k) => (json!(k), 0),
                TurnsResult::Rejected => (Value::Null, 1),
                TurnsResult::Inconclusive => (json!("inconclusive"), 3),
            };
            if cli.json {
                say!("{}", json!({ "word": fmt_word(&w), "min_turns": turns }));
            } else {
                match &turns {
                    Value::Null => say!("rejected"),
                    Value::String(s) => say!("{s}"),
                    k => say!("{k}"),
                }
            }
            Ok(code)
        }
        Command::Equiv { left, right, sequential } => {
            let (x, y) = (load(left)?, load(right)?);
            let alphabet = alphabet(cli, &x.alphabet())?;
            let overrides = overrides(cli)?;
            let exec = if *sequential { Exec::Sequential } else { Exec::Parallel };
            let verdict = box_equivalence(x.subject(), y.subject(), EnumerationBox { bound: cli.bound }, &alphabet, overrides, exec)?;
            match verdict {
                Verdict::Equal => {
                    if cli.json {
                        say!("{}", json!({ "equal": true, "box": cli.bound }));
                    } else {
                        say!("equal on box {}", cli.bound);
                    }
                    Ok(0)
                }
                Verdict::Difference { word, left, right } => {
                    if cli.json {
                        say!("{}", json!({ "equal": false, "word": fmt_word(&word), "left": left, "right": right }));
                    } else {
                        say!("differ on {}: left {left}, right {right}", fmt_word(&word));
                    }
                    Ok(1)
                }
            }
        }
        Command::Witness { family } => match family {
            Family::Ln { n } => {
                let g = witness_ln(*n)?;
                artifact(cli, &g.to_text(), &measure_grammar(&g))
            }
            Family::Tilde { n, m } => {
                let g = witness_tilde_ln(*n, *m)?;
                artifact(cli, &g.to_text(), &measure_grammar(&g))
            }
            Family::Lprime { n } => {
                let m = witness_lprime(*n)?;
                artifact(cli, &m.to_text(), &measure_pda(&m))
            }
        },
        Command::Sizes { subject } => {
            let r = match load(subject)? {
                Loaded::Grammar(g) => measure_grammar(&g),
                Loaded::Pda(m) => measure_pda(&m),
                Loaded::Nfa(n) => measure_nfa(&n),
            };
            print_report(cli, &r);
            Ok(0)
        }
        Command::Dot { subject } => {
            let text = match load(subject)? {
                Loaded::Grammar(g) => dot::grammar_dot(&g),
                Loaded::Pda(m) => dot::pda_dot(&m),
                Loaded::Nfa(n) => dot::nfa_dot(&n),
            };
            emit(cli, &text)?;
            Ok(0)
        }
    }
}

fn alphabet(cli: &Cli, fallback: &[String]) -> Result<Vec<String>, Failure> {
    match &cli.alphabet {
        Some(s) => Ok(ftpda::text::parse_alphabet(s)?),
        None if !fallback.is_empty() => Ok(fallback.to_vec()),
        None => Err(Failure::usage("pass --alphabet")),
    }
}

fn need_hom(cli: &Cli) -> Result<&PathBuf, Failure> {
    cli.hom.as_ref().ok_or_else(|| Failure::usage("pass --hom"))
}

fn hom(path: &PathBuf) -> Result<Homomorphism, Failure> {
    Ok(Homomorphism::parse(&input::read(path)?)?)
}

fn overrides(cli: &Cli) -> Result<CapOverrides, Failure> {
    let mut o = CapOverrides::default();
    let Some(spec) = &cli.caps else { return Ok(o) };
    for part in spec.split(',').filter(|p| !p.is_empty()) {
        let (key, value) = part
            .split_once('=')
            .ok_or_else(|| Failure::usage(format!("cap `{part}` is not key=value")))?;
        let v: usize = value
            .trim()
            .parse()
            .map_err(|_| Failure::usage(format!("cap `{part}` needs a number")))?;
        match key.trim() {
            "stack" => o.stack = Some(v),
            "steps" => o.steps = Some(v),
            "eps" => o.eps = Some(v),
            "turns" => o.turns = Some(v),
            other => return Err(Failure::usage(format!("unknown cap `{other}`"))),
        }
    }
    Ok(o)
}

fn caps(cli: &Cli, m: &ftpda::PdaMachine, len: usize) -> Result<SearchCaps, Failure> {
    Ok(SearchCaps::for_input(m, len).with_overrides(&overrides(cli)?))
}

fn verdict_line(cli: &Cli, w: &[String], verdict: Option<bool>) -> Outcome {
    let text = match verdict {
        Some(true) => "accepted",
        Some(false) => "rejected",
        None => "inconclusive",
    };
    if cli.json {
        say!("{}", json!({ "word": fmt_word(w), "verdict": text }));
    } else {
        say!("{text}");
    }
    Ok(match verdict {
        Some(true) => 0,
        Some(false) => 1,
        None => 3,
    })
}

/// Writes the artifact to `--out` or standard output.
fn emit(cli: &Cli, text: &str) -> Result<(), Failure> {
    match &cli.out {
        Some(path) => std::fs::write(path, text)?,
        None => match std::io::stdout().write_all(text.as_bytes()) {
            Err(e) if e.kind() != std::io::ErrorKind::BrokenPipe => return Err(e.into()),
            _ => {}
        },
    }
    Ok(())
}

fn print_report(cli: &Cli, r: &SizeReport) {
    if cli.json {
        say!("{}", r.to_json());
    } else {
        let _ = write!(std::io::stdout(), "{r}");
    }
}

fn artifact(cli: &Cli, text: &str, r: &SizeReport) -> Outcome {
    emit(cli, text)?;
    if cli.out.is_some() {
        print_report(cli, r);
    } else if cli.json {
        eprintln!("{}", r.to_json());
    } else {
        eprint!("{r}");
    }
    Ok(0)
}

impl Loaded {
    fn subject(&self) -> Subject<'_> {
        match self {
            Loaded::Grammar(g) => Subject::Grammar(g),
            Loaded::Pda(m) => Subject::Pda(m),
            Loaded::Nfa(n) => Subject::Nfa(n),
        }
    }

    fn alphabet(&self) -> Vec<String> {
        match self {
            Loaded::Grammar(g) => g.terminals().to_vec(),
            Loaded::Pda(m) => m.input().to_vec(),
            Loaded::Nfa(n) => n.alphabet().to_vec(),
        }
    }
}
