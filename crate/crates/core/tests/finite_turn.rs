mod common;

use common::{letters, random_letter_bounded, rng, EXAMPLE};
use ftpda::finite_turn::{cfg_to_finite_turn_pipeline, FiniteTurnPda};
use ftpda::oracle::cyk::GrammarOracle;
use ftpda::oracle::equiv::{box_words, EnumerationBox};
use ftpda::oracle::sim::{min_turns, pda_accepts, replay, SearchCaps, SearchResult, TurnsResult};
use ftpda::parse_grammar;
use ftpda::transform::trees::TreeOptions;
use ftpda::Grammar;

fn exponents(w: &[String], m: usize) -> Vec<usize> {
    let mut k = vec![0; m];
    for a in w {
        k[a[1..].parse::<usize>().unwrap() - 1] += 1;
    }
    k
}

/// Checks the loop invariant at every evaluation of the loop condition
/// along an accepting trace, and that work contexts never decrease.
fn check_trace(f: &FiniteTurnPda, g: &GrammarOracle, w: &[String], m: usize) {
    let SearchResult::Accepted(trace) = pda_accepts(&f.machine, w, SearchCaps::for_input(&f.machine, w.len())) else {
        panic!("{w:?} not accepted");
    };
    assert!(replay(&f.machine, w, &trace));
    assert!(trace.turns() < m, "{} turns on {w:?}", trace.turns());
    let mut last = None;
    for c in &trace.configs {
        let Some(s) = &f.states[c.state] else { continue };
        if !s.at_rest() {
            continue;
        }
        let (l, r) = (s.context.l, s.context.r);
        if let Some(prev) = last {
            assert!(prev <= s.context, "context went from {prev} to {}", s.context);
        }
        last = Some(s.context);

        let scanned = &w[..c.pos];
        let seen = exponents(scanned, m);
        assert!(scanned.windows(2).all(|p| p[0] <= p[1]), "unsorted prefix {scanned:?}");
        assert!(seen[l..].iter().all(|&x| x == 0), "prefix {scanned:?} beyond letter {l}");

        let p = f.decode_stack(&c.stack, s.top, m);
        assert!(p[..r - 1].iter().all(|&x| x == 0), "stack {p:?} below letter {r}");

        // The exponents the guessed tree stands for.
        let k: Vec<usize> = (1..=m)
            .map(|j| {
                let mut x = 0;
                if j <= l {
                    x += seen[j - 1];
                }
                if j > l {
                    x += s.counters[j - 1];
                }
                if j >= r {
                    x += p[j - 1];
                }
                x
            })
            .collect();
        let word: Vec<String> = k
            .iter()
            .enumerate()
            .flat_map(|(j, &n)| std::iter::repeat(format!("a{}", j + 1)).take(n))
            .collect();
        assert!(g.accepts(&word), "invariant exponents {k:?} not generated (prefix {scanned:?})");
    }
    assert!(last.is_some(), "no loop evaluation on {w:?}");
}

fn check_grammar(g: &Grammar, m: usize, bound: usize) {
    let alphabet = letters(m);
    let pipe = cfg_to_finite_turn_pipeline(g, &alphabet, TreeOptions::default()).unwrap();
    let f = &pipe.result;
    f.machine.check_normal_form().unwrap();
    assert_eq!(f.machine.turn_bound(), Some(m - 1));
    let oracle = GrammarOracle::new(g);
    for w in box_words(&alphabet, EnumerationBox { bound }) {
        let expected = oracle.accepts(&w);
        let caps = SearchCaps::for_input(&f.machine, w.len());
        match pda_accepts(&f.machine, &w, caps) {
            SearchResult::Accepted(_) => assert!(expected, "{w:?} wrongly accepted\n{g}"),
            SearchResult::Rejected => assert!(!expected, "{w:?} wrongly rejected\n{g}"),
            SearchResult::Inconclusive => panic!("inconclusive on {w:?}"),
        }
        if expected {
            check_trace(f, &oracle, &w, m);
            match min_turns(&f.machine, &w, caps) {
                TurnsResult::Turns(t) => assert!(t < m),
                other => panic!("min_turns on {w:?}: {other:?}"),
            }
        }
    }
}

#[test]
fn example_grammar_box() {
    check_grammar(&parse_grammar(EXAMPLE).unwrap(), 3, 4);
}

#[test]
fn random_bounded_grammars() {
    let mut r = rng(11);
    for case in 0..12 {
        let m = 2 + case % 2;
        let g = random_letter_bounded(&mut r, m, 4);
        check_grammar(&g, m, if m == 2 { 5 } else { 3 });
    }
}
