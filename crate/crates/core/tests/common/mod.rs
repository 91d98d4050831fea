#![allow(dead_code)]

use ftpda::oracle::sim::{pda_accepts, SearchCaps};
use ftpda::transform::borders::compute_borders;
use ftpda::transform::bounded::check_letter_bounded;
use ftpda::transform::useless::remove_useless;
use ftpda::{Action, Grammar, GrammarBuilder, LoosePda, NfaMachine, PdaMachine, PdaTransition, Symbol};
use ftpda::loose::{Acceptance, LooseAction, LooseTransition};
use rand::seq::SliceRandom;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

pub const EXAMPLE: &str = "start: S
S -> A1 E
E -> S A3 | S' A3
S' -> A B
A -> A1 F | A1 A2
F -> A A2
B -> A2 G | A2 A3
G -> B A3
A1 -> a1
A2 -> a2
A3 -> a3
";

pub fn rng(seed: u64) -> ChaCha8Rng {
    ChaCha8Rng::seed_from_u64(seed)
}

pub fn letters(m: usize) -> Vec<String> {
    (1..=m).map(|i| format!("a{i}")).collect()
}

/// Any grammar: bodies of length 1 to 4 over `vars` variables and `terms`
/// terminals. Every variable has at least one production.
pub fn random_grammar(rng: &mut ChaCha8Rng, vars: usize, terms: usize) -> Grammar {
    let mut b = GrammarBuilder::new();
    let v: Vec<usize> = (0..vars).map(|i| b.var(format!("V{i}"))).collect();
    let t: Vec<usize> = (0..terms).map(|i| b.term(format!("t{i}"))).collect();
    for &head in &v {
        for _ in 0..rng.gen_range(1..=3) {
            let len = rng.gen_range(1..=4);
            let body = (0..len)
                .map(|_| {
                    if rng.gen_bool(0.45) {
                        Symbol::Term(*t.choose(rng).unwrap())
                    } else {
                        Symbol::Var(*v.choose(rng).unwrap())
                    }
                })
                .collect();
            b.add(head, body);
        }
        // Keeps many variables productive.
        if rng.gen_bool(0.6) {
            b.add(head, vec![Symbol::Term(*t.choose(rng).unwrap())]);
        }
    }
    b.build(v[0]).unwrap()
}

/// A grammar in Chomsky normal form over `a1 .. a_terms`.
pub fn random_cnf(rng: &mut ChaCha8Rng, vars: usize, terms: usize) -> Grammar {
    let mut b = GrammarBuilder::new();
    let v: Vec<usize> = (0..vars).map(|i| b.var(format!("V{i}"))).collect();
    let t: Vec<usize> = (1..=terms).map(|i| b.term(format!("a{i}"))).collect();
    for &head in &v {
        for _ in 0..rng.gen_range(1..=3) {
            if rng.gen_bool(0.35) {
                b.add(head, vec![Symbol::Term(*t.choose(rng).unwrap())]);
            } else {
                b.add(head, vec![Symbol::Var(*v.choose(rng).unwrap()), Symbol::Var(*v.choose(rng).unwrap())]);
            }
        }
    }
    b.build(v[0]).unwrap()
}

/// A nonempty grammar over `a1 .. am` generating a subset of
/// `a1* .. am*` with well-defined borders, found by rejection sampling.
/// Each variable gets a letter interval and bodies list their symbols in
/// interval order, so most candidates are bounded.
pub fn random_letter_bounded(rng: &mut ChaCha8Rng, m: usize, vars: usize) -> Grammar {
    loop {
        let mut b = GrammarBuilder::new();
        let v: Vec<usize> = (0..vars).map(|i| b.var(format!("V{i}"))).collect();
        let t: Vec<usize> = (1..=m).map(|i| b.term(format!("a{i}"))).collect();
        let span: Vec<(usize, usize)> = (0..vars)
            .map(|i| {
                if i == 0 {
                    (0, m - 1)
                } else {
                    let lo = rng.gen_range(0..m);
                    (lo, rng.gen_range(lo..m))
                }
            })
            .collect();
        for (i, &head) in v.iter().enumerate() {
            let (lo, hi) = span[i];
            for _ in 0..rng.gen_range(1..=3) {
                let len = rng.gen_range(1..=3);
                let mut body: Vec<(usize, Symbol)> = (0..len)
                    .map(|_| {
                        let inside: Vec<usize> = (0..vars)
                            .filter(|&k| if k == i { rng.gen_bool(0.5) } else { span[k].0 >= lo && span[k].1 <= hi })
                            .collect();
                        if inside.is_empty() || rng.gen_bool(0.5) {
                            let a = rng.gen_range(lo..=hi);
                            (a, Symbol::Term(t[a]))
                        } else {
                            let k = *inside.choose(rng).unwrap();
                            (span[k].0, Symbol::Var(v[k]))
                        }
                    })
                    .collect();
                body.sort_by_key(|&(k, _)| k);
                b.add(head, body.into_iter().map(|(_, s)| s).collect());
            }
            let a = rng.gen_range(lo..=hi);
            b.add(head, vec![Symbol::Term(t[a])]);
        }
        let Ok(g) = b.build(v[0]) else { continue };
        let Ok(g) = remove_useless(&g) else { continue };
        let alphabet = letters(m);
        if check_letter_bounded(&g, &alphabet).is_some() || compute_borders(&g, &alphabet).is_err() {
            continue;
        }
        return g;
    }
}

/// A normal-form machine with `q` states, stack symbols `Z0` and `X1 ..`,
/// and input `a1 .. a_input`.
pub fn random_pda(rng: &mut ChaCha8Rng, q: usize, stack: usize, input: usize, transitions: usize) -> PdaMachine {
    let states: Vec<String> = (0..q).map(|i| format!("q{i}")).collect();
    let mut gamma = vec!["Z0".to_string()];
    gamma.extend((1..stack).map(|i| format!("X{i}")));
    let mut trans = Vec::new();
    for _ in 0..transitions {
        let from = rng.gen_range(0..q);
        let to = rng.gen_range(0..q);
        let t = match rng.gen_range(0..4) {
            0 => PdaTransition {
                from,
                read: Some(rng.gen_range(0..input)),
                top: if rng.gen_bool(0.5) { None } else { Some(rng.gen_range(0..stack)) },
                to,
                action: Action::Stay,
            },
            1 => PdaTransition {
                from,
                read: None,
                top: if rng.gen_bool(0.5) { None } else { Some(rng.gen_range(0..stack)) },
                to,
                action: Action::Push(rng.gen_range(1..stack)),
            },
            2 => PdaTransition {
                from,
                read: None,
                top: Some(rng.gen_range(1..stack)),
                to,
                action: Action::Pop,
            },
            _ => PdaTransition {
                from,
                read: None,
                top: None,
                to,
                action: Action::Stay,
            },
        };
        if !trans.contains(&t) {
            trans.push(t);
        }
    }
    let accepting = vec![rng.gen_range(0..q)];
    PdaMachine::new(states, letters(input), gamma, 0, 0, accepting, trans, None).unwrap()
}

/// A machine outside normal form: multi-symbol pushes, replaces, reads that
/// touch the stack, and either acceptance mode.
pub fn random_loose(rng: &mut ChaCha8Rng, q: usize, stack: usize, input: usize, transitions: usize) -> LoosePda {
    let mut trans = Vec::new();
    for _ in 0..transitions {
        let word = |rng: &mut ChaCha8Rng| (0..rng.gen_range(0..=2)).map(|_| rng.gen_range(1..stack)).collect::<Vec<_>>();
        let read = if rng.gen_bool(0.5) { Some(rng.gen_range(0..input)) } else { None };
        let (top, action) = match rng.gen_range(0..4) {
            0 => (None, LooseAction::Stay),
            1 => (None, LooseAction::Push(word(rng))),
            2 => (Some(rng.gen_range(1..stack)), LooseAction::Pop),
            _ => (Some(rng.gen_range(1..stack)), LooseAction::Replace(word(rng))),
        };
        trans.push(LooseTransition {
            from: rng.gen_range(0..q),
            read,
            top,
            to: rng.gen_range(0..q),
            action,
        });
    }
    let mut stack_names = vec!["Z0".to_string()];
    stack_names.extend((1..stack).map(|i| format!("X{i}")));
    LoosePda {
        states: (0..q).map(|i| format!("q{i}")).collect(),
        input: letters(input),
        stack: stack_names,
        bottom: 0,
        start: 0,
        accepting: vec![rng.gen_range(0..q)],
        transitions: trans,
        acceptance: if rng.gen_bool(0.5) { Acceptance::Bottom } else { Acceptance::Final },
        turn_bound: None,
    }
}

pub fn random_nfa(rng: &mut ChaCha8Rng, q: usize, input: usize, transitions: usize) -> NfaMachine {
    let trans = (0..transitions)
        .map(|_| {
            let read = if rng.gen_bool(0.8) { Some(rng.gen_range(0..input)) } else { None };
            (rng.gen_range(0..q), read, rng.gen_range(0..q))
        })
        .collect();
    NfaMachine::new(
        (0..q).map(|i| format!("s{i}")).collect(),
        letters(input),
        0,
        vec![rng.gen_range(0..q)],
        trans,
    )
    .unwrap()
}

/// Every word over `alphabet` of length at most `max_len`.
pub fn all_words(alphabet: &[String], max_len: usize) -> Vec<Vec<String>> {
    let mut out = vec![Vec::new()];
    let mut layer: Vec<Vec<String>> = vec![Vec::new()];
    for _ in 0..max_len {
        layer = layer
            .iter()
            .flat_map(|w| {
                alphabet.iter().map(move |a| {
                    let mut x = w.clone();
                    x.push(a.clone());
                    x
                })
            })
            .collect();
        out.extend(layer.iter().cloned());
    }
    out
}

pub fn accepts(m: &PdaMachine, w: &[String]) -> bool {
    pda_accepts(m, w, SearchCaps::for_input(m, w.len()))
        .verdict()
        .unwrap_or_else(|| panic!("search caps reached on {w:?}"))
}

/// True when some push lies on a cycle of moves that read nothing and do
/// not pop, so the stack can grow without reading.
pub fn grows_silently(m: &PdaMachine) -> bool {
    let n = m.states().len();
    let mut reach = vec![vec![false; n]; n];
    for t in m.transitions() {
        if t.read.is_none() && t.action != Action::Pop {
            reach[t.from][t.to] = true;
        }
    }
    for k in 0..n {
        for i in 0..n {
            for j in 0..n {
                reach[i][j] |= reach[i][k] && reach[k][j];
            }
        }
    }
    m.transitions().iter().any(|t| {
        t.read.is_none() && matches!(t.action, Action::Push(_)) && (t.from == t.to || reach[t.to][t.from])
    })
}
