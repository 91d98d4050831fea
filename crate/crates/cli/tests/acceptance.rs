//! Acceptance suite: one PASS/FAIL line per criterion with its runtime.

use std::collections::BTreeSet;
use std::path::{Path, PathBuf};
use std::process::Command;
use std::time::{Duration, Instant};

use rand::seq::SliceRandom;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use sha2::{Digest, Sha256};

use ftpda::finite_turn::pda_to_cfg;
use ftpda::measure::symb;
use ftpda::oracle::brute_force_contexts;
use ftpda::oracle::cyk::{cyk_membership, generate_upto, GrammarOracle};
use ftpda::oracle::equiv::{box_equivalence, box_words, EnumerationBox, Exec, Subject, Verdict};
use ftpda::oracle::sim::{min_turns, pda_accepts, CapOverrides, SearchCaps, TurnsResult};
use ftpda::oracle::unary::minimal_unary_dfa_size;
use ftpda::oracle::witness::{tilde_ln_contains, witness_ln, witness_lprime, witness_tilde_ln};
use ftpda::reduction::grammar_to_one_state_pda;
use ftpda::text::bounded_word;
use ftpda::transform::borders::{compute_borders, Border};
use ftpda::transform::normal::binarize;
use ftpda::unary_turns::{kturn_unary_pda_to_nfa, one_turn_pda_to_nfa, DEFAULT_STATE_BUDGET};
use ftpda::word::{build_inverse_hom_grammar, symb_ratio, Homomorphism};
use ftpda::{parse_grammar, Action, Grammar, GrammarBuilder, PdaBuilder, PdaMachine, PdaTransition, Symbol};

type Check = Result<String, String>;

fn data(name: &str) -> PathBuf {
    Path::new(env!("CARGO_MANIFEST_DIR")).join("tests/data").join(name)
}

fn scratch(name: &str) -> PathBuf {
    let dir = Path::new(env!("CARGO_TARGET_TMPDIR")).join("acceptance");
    std::fs::create_dir_all(&dir).unwrap();
    dir.join(name)
}

fn ftpda(args: &[&str]) -> Result<(), String> {
    let out = Command::new(env!("CARGO_BIN_EXE_ftpda"))
        .args(args)
        .output()
        .map_err(|e| e.to_string())?;
    if out.status.success() {
        Ok(())
    } else {
        Err(format!("ftpda {} exited with {}: {}", args.join(" "), out.status, String::from_utf8_lossy(&out.stderr)))
    }
}

fn letters(m: usize) -> Vec<String> {
    (1..=m).map(|i| format!("a{i}")).collect()
}

fn ensure(ok: bool, what: impl FnOnce() -> String) -> Result<(), String> {
    if ok {
        Ok(())
    } else {
        Err(what())
    }
}

fn within(limit: Duration, start: Instant) -> Result<(), String> {
    ensure(start.elapsed() < limit, || format!("took {:.1?}, limit {limit:?}", start.elapsed()))
}

/// Box equivalence that also reports the first inconclusive search as a
/// failure, then the turn check on accepted words.
fn equal_with_turns(x: Subject, m: &PdaMachine, alphabet: &[String], bound: usize, max_turns: usize) -> Result<usize, String> {
    let v = box_equivalence(x, Subject::Pda(m), EnumerationBox { bound }, alphabet, CapOverrides::default(), Exec::Parallel)
        .map_err(|e| e.to_string())?;
    if let Verdict::Difference { word, left, right } = v {
        return Err(format!("differ on {word:?}: {left} vs {right}"));
    }
    let mut accepted = 0;
    for w in box_words(alphabet, EnumerationBox { bound }) {
        match min_turns(m, &w, SearchCaps::for_input(m, w.len())) {
            TurnsResult::Turns(t) if t <= max_turns => accepted += 1,
            TurnsResult::Turns(t) => return Err(format!("{t} turns on {w:?}")),
            TurnsResult::Rejected => {}
            TurnsResult::Inconclusive => return Err(format!("min_turns inconclusive on {w:?}")),
        }
    }
    Ok(accepted)
}

fn border_of(ctx: Option<(u64, u64)>) -> Option<Border> {
    let (l, r) = ctx?;
    let idx = |m: u64| m.trailing_zeros() as usize + 1;
    match (l != 0, r != 0) {
        (true, true) => Some(Border::new(idx(l), idx(r))),
        (true, false) => Some(Border::new(idx(l), idx(l))),
        (false, true) => Some(Border::new(idx(r), idx(r))),
        (false, false) => None,
    }
}

fn criterion_1() -> Check {
    let start = Instant::now();
    let g = parse_grammar(&std::fs::read_to_string(data("example.cfg")).unwrap()).unwrap();
    let a = letters(3);
    let table = compute_borders(&g, &a).map_err(|e| e.to_string())?;
    let get = |v: &str| table.by_name(v).flatten();
    for (v, want) in [("S", Some((1, 3))), ("A", Some((1, 2))), ("B", Some((2, 3))), ("A1", None), ("A2", None), ("A3", None)] {
        let want = want.map(|(l, r)| Border::new(l, r));
        ensure(get(v) == want, || format!("border({v}) = {:?}, expected {want:?}", get(v)))?;
    }
    let brute = brute_force_contexts(&g, &a, 8).map_err(|e| e.to_string())?;
    for v in ["E", "S'", "F", "G"] {
        let i = g.var_index(v).unwrap();
        let want = border_of(brute[i]);
        ensure(get(v) == want, || format!("border({v}) = {:?}, brute force {want:?}", get(v)))?;
    }
    within(Duration::from_secs(1), start)?;
    Ok("S (1,3), A (1,2), B (2,3); E, S', F, G match depth-8 trees".into())
}

fn criterion_2() -> Check {
    let start = Instant::now();
    let out = scratch("example.pda");
    ftpda(&["to-pda", data("example.cfg").to_str().unwrap(), "--alphabet", "a1,a2,a3", "--out", out.to_str().unwrap()])?;
    let m = PdaMachine::parse(&std::fs::read_to_string(&out).unwrap()).map_err(|e| e.to_string())?;
    let g = parse_grammar(&std::fs::read_to_string(data("example.cfg")).unwrap()).unwrap();
    let accepted = equal_with_turns(Subject::Grammar(&g), &m, &letters(3), 8, 2)?;
    within(Duration::from_secs(60), start)?;
    Ok(format!("box 8 equal, {accepted} accepted words all within 2 turns"))
}

fn random_grammar(rng: &mut ChaCha8Rng) -> Grammar {
    let mut b = GrammarBuilder::new();
    let vars = rng.gen_range(2..=5);
    let v: Vec<usize> = (0..vars).map(|i| b.var(format!("V{i}"))).collect();
    let t: Vec<usize> = (0..2).map(|i| b.term(format!("t{i}"))).collect();
    for &head in &v {
        for _ in 0..rng.gen_range(1..=3) {
            let body = (0..rng.gen_range(1..=5))
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
        b.add(head, vec![Symbol::Term(*t.choose(rng).unwrap())]);
    }
    b.build(v[0]).unwrap()
}

fn criterion_3() -> Check {
    let start = Instant::now();
    let mut rng = ChaCha8Rng::seed_from_u64(3);
    let mut largest = 0;
    for i in 0..100 {
        let g = random_grammar(&mut rng);
        let b = binarize(&g);
        ensure(b.variables().len() <= symb(&g), || format!("grammar {i}: Var {} > Symb {}", b.variables().len(), symb(&g)))?;
        ensure(generate_upto(&g, 6) == generate_upto(&b, 6), || format!("grammar {i}: language changed\n{g}"))?;
        largest = largest.max(b.variables().len());
    }
    within(Duration::from_secs(30), start)?;
    Ok(format!("100 grammars, Var(binarized) <= Symb, languages equal up to length 6 (largest Var {largest})"))
}

fn criterion_4() -> Check {
    let start = Instant::now();
    for n in 2..=4 {
        let m = witness_lprime(n).map_err(|e| e.to_string())?;
        let nfa = one_turn_pda_to_nfa(&m).map_err(|e| e.to_string())?.trim();
        let bound = m.size() * m.size() + 1;
        ensure(nfa.states().len() <= bound, || format!("n={n}: {} states > {bound}", nfa.states().len()))?;
        for t in 0..=4 * n * (n + 1) {
            ensure(nfa.accepts(&vec![0; t]) == (t % (n * (n + 1)) == 0), || format!("n={n}: wrong on a^{t}"))?;
        }
        let d = minimal_unary_dfa_size(&nfa);
        ensure(d == n * (n + 1), || format!("n={n}: minimal DFA has {d} states"))?;
    }
    within(Duration::from_secs(10), start)?;
    Ok("n = 2, 3, 4: size bound, language and minimal DFA n(n+1)".into())
}

/// `j` rounds; round `r` reads `a` and pushes at least once, then pops
/// reading `r + 2` letters per symbol. Accepts `sum n_r (r + 2)` with all
/// `n_r >= 1`, in exactly `j` turns.
fn rounds(j: usize) -> PdaMachine {
    let mut b = PdaBuilder::new();
    let a = b.input("a");
    let z0 = b.stack("Z0");
    let x = b.stack("X");
    let st = |b: &mut PdaBuilder, s: String| b.state(s);
    let start = st(&mut b, "u0".into());
    let mut up = start;
    for r in 0..j {
        let pushed = st(&mut b, format!("v{r}"));
        let down = st(&mut b, format!("d{r}"));
        let next = st(&mut b, if r + 1 == j { "f".into() } else { format!("u{}", r + 1) });
        b.add(PdaTransition { from: up, read: Some(a), top: None, to: pushed, action: Action::Stay });
        b.add(PdaTransition { from: pushed, read: None, top: None, to: up, action: Action::Push(x) });
        b.add(PdaTransition { from: up, read: None, top: Some(x), to: down, action: Action::Stay });
        let mut cur = down;
        for i in 0..r + 2 {
            let s = st(&mut b, format!("d{r}_{i}"));
            b.add(PdaTransition { from: cur, read: Some(a), top: Some(x), to: s, action: Action::Stay });
            cur = s;
        }
        b.add(PdaTransition { from: cur, read: None, top: Some(x), to: down, action: Action::Pop });
        b.add(PdaTransition { from: down, read: None, top: Some(z0), to: next, action: Action::Stay });
        up = next;
    }
    b.accept(up);
    b.build(start, z0, Some(j)).unwrap()
}

fn criterion_5() -> Check {
    let start = Instant::now();
    let mut accepted = 0;
    for j in 2..=4 {
        let m = rounds(j);
        let k = kturn_unary_pda_to_nfa(&m, j, DEFAULT_STATE_BUDGET).map_err(|e| e.to_string())?;
        let cap = (j as f64).log2().floor() as usize + 1;
        ensure(k.max_sequence_len <= cap, || format!("j={j}: sequences of length {} > {cap}", k.max_sequence_len))?;
        for t in 0..=24 {
            let w = vec!["a".to_string(); t];
            let sim = pda_accepts(&m, &w, SearchCaps::for_input(&m, t))
                .verdict()
                .ok_or_else(|| format!("j={j}: inconclusive on a^{t}"))?;
            ensure(k.nfa.accepts(&vec![0; t]) == sim, || format!("j={j}: disagree on a^{t}"))?;
            accepted += usize::from(sim);
        }
    }
    within(Duration::from_secs(30), start)?;
    Ok(format!("j = 2, 3, 4 equal up to a^24 ({accepted} accepted), sequence length within floor(log2 j)+1"))
}

fn criterion_6() -> Check {
    let start = Instant::now();
    let out = scratch("three_turn_reduced.pda");
    ftpda(&["reduce-turns", data("three_turn.pda").to_str().unwrap(), "--alphabet", "a1,a2", "--out", out.to_str().unwrap()])?;
    let red = PdaMachine::parse(&std::fs::read_to_string(&out).unwrap()).map_err(|e| e.to_string())?;
    let orig = PdaMachine::parse(&std::fs::read_to_string(data("three_turn.pda")).unwrap()).unwrap();
    ensure(red.turn_bound() == Some(1), || format!("declared {:?} turns", red.turn_bound()))?;
    let accepted = equal_with_turns(Subject::Pda(&orig), &red, &letters(2), 6, 1)?;
    within(Duration::from_secs(120), start)?;
    Ok(format!("box 6 equal, {accepted} accepted words within 1 turn, {} states", red.states().len()))
}

fn criterion_7() -> Check {
    let start = Instant::now();
    let g = parse_grammar(&std::fs::read_to_string(data("abba.cfg")).unwrap()).unwrap();
    let h = Homomorphism::parse(&std::fs::read_to_string(data("abba.hom")).unwrap()).map_err(|e| e.to_string())?;
    let inv = build_inverse_hom_grammar(&g, &h).map_err(|e| e.to_string())?;
    let (og, oi) = (GrammarOracle::new(&g), GrammarOracle::new(&inv));
    for k1 in 0..=6 {
        for k2 in 0..=6 {
            let w = bounded_word(h.letters(), &[k1, k2]);
            ensure(oi.accepts(&w) == og.accepts(&h.expand(&[k1, k2])), || format!("disagree at ({k1},{k2})"))?;
        }
    }
    let r = symb_ratio(&g, &inv);
    ensure(r.is_finite(), || "ratio is not finite".into())?;
    within(Duration::from_secs(10), start)?;
    Ok(format!("biconditional on k1, k2 <= 6; Symb ratio {r:.4}"))
}

fn criterion_8() -> Check {
    let start = Instant::now();
    for n in 1..=5 {
        let g = witness_ln(n).map_err(|e| e.to_string())?;
        ensure(g.variables().len() == n + 1, || format!("L_{n} has {} variables", g.variables().len()))?;
        let o = GrammarOracle::new(&g);
        for t in 0..=40 {
            ensure(o.accepts(&vec!["a".to_string(); t]) == (t == 1 << n), || format!("L_{n} wrong on a^{t}"))?;
        }
    }
    for (n, m) in [(1, 2), (1, 3), (2, 3)] {
        let g = witness_tilde_ln(n, m).map_err(|e| e.to_string())?;
        ensure(g.variables().len() == n + 4 * m - 3, || format!("({n},{m}): {} variables", g.variables().len()))?;
        let o = GrammarOracle::new(&g);
        let a = letters(m);
        for w in box_words(&a, EnumerationBox { bound: 8 }) {
            let k: Vec<usize> = a.iter().map(|x| w.iter().filter(|y| *y == x).count()).collect();
            ensure(o.accepts(&w) == tilde_ln_contains(n, &k), || format!("({n},{m}) wrong on {k:?}"))?;
        }
    }
    for n in 2..=5 {
        let m = witness_lprime(n).map_err(|e| e.to_string())?;
        ensure(m.size() == 2 * n + 1, || format!("lprime({n}) size {}", m.size()))?;
    }
    within(Duration::from_secs(60), start)?;
    Ok("variable counts n+1 and n+4m-3, languages on the sweeps, size 2n+1".into())
}

/// A machine whose stack cannot grow without reading, so every search
/// on a word of length `t` stays below `|Q| (t+1)` symbols.
fn random_machine(rng: &mut ChaCha8Rng) -> PdaMachine {
    loop {
        let q = 3;
        let mut trans = Vec::new();
        for _ in 0..10 {
            let (from, to) = (rng.gen_range(0..q), rng.gen_range(0..q));
            let top = if rng.gen_bool(0.5) { None } else { Some(rng.gen_range(0..3)) };
            let t = match rng.gen_range(0..4) {
                0 => PdaTransition { from, read: Some(rng.gen_range(0..2)), top, to, action: Action::Stay },
                1 => PdaTransition { from, read: None, top, to, action: Action::Push(rng.gen_range(1..3)) },
                2 => PdaTransition { from, read: None, top: Some(rng.gen_range(1..3)), to, action: Action::Pop },
                _ => PdaTransition { from, read: None, top, to, action: Action::Stay },
            };
            if !trans.contains(&t) {
                trans.push(t);
            }
        }
        let states = (0..q).map(|i| format!("q{i}")).collect();
        let stack = vec!["Z0".into(), "X1".into(), "X2".into()];
        let m = PdaMachine::new(states, letters(2), stack, 0, 0, vec![rng.gen_range(0..q)], trans, None).unwrap();
        if !grows_silently(&m) {
            return m;
        }
    }
}

fn grows_silently(m: &PdaMachine) -> bool {
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
    m.transitions()
        .iter()
        .any(|t| t.read.is_none() && matches!(t.action, Action::Push(_)) && (t.from == t.to || reach[t.to][t.from]))
}

fn random_cnf(rng: &mut ChaCha8Rng) -> Grammar {
    let mut b = GrammarBuilder::new();
    let v: Vec<usize> = (0..3).map(|i| b.var(format!("V{i}"))).collect();
    let t: Vec<usize> = (1..=2).map(|i| b.term(format!("a{i}"))).collect();
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

fn criterion_9() -> Check {
    let start = Instant::now();
    let alphabet = letters(2);
    let mut words: Vec<Vec<String>> = Vec::new();
    for len in 1..=6usize {
        for bits in 0..1u32 << len {
            words.push((0..len).map(|i| alphabet[(bits >> i & 1) as usize].clone()).collect());
        }
    }
    let mut rng = ChaCha8Rng::seed_from_u64(9);
    let (mut checks, mut accepted) = (0, 0);
    for pair in 0..200 {
        let (g, m) = if pair % 2 == 0 {
            let m = random_machine(&mut rng);
            (pda_to_cfg(&m), m)
        } else {
            let g = random_cnf(&mut rng);
            let m = grammar_to_one_state_pda(&g).map_err(|e| e.to_string())?;
            (g, m)
        };
        for w in &words {
            let cyk = cyk_membership(&g, w).map_err(|e| e.to_string())?;
            let sim = pda_accepts(&m, w, SearchCaps::for_input(&m, w.len()))
                .verdict()
                .ok_or_else(|| format!("pair {pair}: inconclusive on {w:?}"))?;
            ensure(cyk == sim, || format!("pair {pair}: cyk {cyk}, simulation {sim} on {w:?}"))?;
            checks += 1;
            accepted += usize::from(sim);
        }
    }
    within(Duration::from_secs(120), start)?;
    Ok(format!("200 pairs, {checks} words ({accepted} accepted), zero inconclusive"))
}

fn digest(path: &Path) -> String {
    Sha256::digest(std::fs::read(path).unwrap()).iter().map(|b| format!("{b:02x}")).collect()
}

fn criterion_10() -> Check {
    let runs: [(&str, &str, &str); 2] = [("to-pda", "example.cfg", "a1,a2,a3"), ("reduce-turns", "three_turn.pda", "a1,a2")];
    let mut hashes = BTreeSet::new();
    for (cmd, input, alphabet) in runs {
        let mut seen = Vec::new();
        for round in 0..2 {
            let out = scratch(&format!("{cmd}-{round}.txt"));
            ftpda(&[cmd, data(input).to_str().unwrap(), "--alphabet", alphabet, "--out", out.to_str().unwrap()])?;
            seen.push(digest(&out));
        }
        ensure(seen[0] == seen[1], || format!("{cmd} artifacts differ: {} vs {}", seen[0], seen[1]))?;
        hashes.insert(format!("{cmd} {}", &seen[0][..16]));
    }
    Ok(hashes.into_iter().collect::<Vec<_>>().join(", "))
}

fn main() {
    let criteria: [(&str, fn() -> Check); 10] = [
        ("borders of the example grammar", criterion_1),
        ("example grammar to a 2-turn automaton", criterion_2),
        ("binarization bound and language", criterion_3),
        ("one-turn unary automaton to NFA", criterion_4),
        ("k-turn unary automaton to NFA", criterion_5),
        ("3-turn automaton reduced to 1 turn", criterion_6),
        ("inverse homomorphism grammar", criterion_7),
        ("witness sizes and languages", criterion_8),
        ("oracle cross-validation", criterion_9),
        ("deterministic artifacts", criterion_10),
    ];
    let mut failed = 0;
    for (i, (name, check)) in criteria.iter().enumerate() {
        let start = Instant::now();
        let result = std::panic::catch_unwind(check).unwrap_or_else(|_| Err("panicked".into()));
        let took = start.elapsed();
        match result {
            Ok(detail) => println!("criterion {:>2} PASS {name} [{took:.2?}]: {detail}", i + 1),
            Err(why) => {
                failed += 1;
                println!("criterion {:>2} FAIL {name} [{took:.2?}]: {why}", i + 1);
            }
        }
    }
    if failed > 0 {
        println!("{failed} of {} criteria failed", criteria.len());
        std::process::exit(1);
    }
    println!("all {} criteria passed", criteria.len());
}
