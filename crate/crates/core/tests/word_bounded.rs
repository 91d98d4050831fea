mod common;

use common::{random_letter_bounded, rng};
use ftpda::oracle::cyk::GrammarOracle;
use ftpda::oracle::sim::{min_turns, pda_accepts, SearchCaps, TurnsResult};
use ftpda::text::bounded_word;
use ftpda::word::*;
use ftpda::transform::normal::to_cnf;
use ftpda::{parse_grammar, Grammar, GrammarBuilder, PdaMachine, Symbol};

const ABBA: &str = "start: S
S -> X T | X Y
T -> S Y
X -> A B
Y -> B A
A -> a
B -> b
";

fn hom() -> Homomorphism {
    Homomorphism::parse("a1 = ab\na2 = ba\n").unwrap()
}

fn abba() -> Grammar {
    parse_grammar(ABBA).unwrap()
}

fn accepts(m: &PdaMachine, w: &[String]) -> bool {
    pda_accepts(m, w, SearchCaps::for_input(m, w.len()))
        .verdict()
        .expect("search within caps")
}

#[test]
fn inverse_grammar_matches_expansions() {
    let (g, h) = (abba(), hom());
    let inv = build_inverse_hom_grammar(&g, &h).unwrap();
    let (og, oi) = (GrammarOracle::new(&g), GrammarOracle::new(&inv));
    for k1 in 0..=6 {
        for k2 in 0..=6 {
            let letters = bounded_word(h.letters(), &[k1, k2]);
            assert_eq!(oi.accepts(&letters), og.accepts(&h.expand(&[k1, k2])), "{k1} {k2}");
            assert_eq!(oi.accepts(&letters), k1 == k2 && k1 >= 1);
        }
    }
    let r = symb_ratio(&g, &inv);
    assert!(r.is_finite() && r > 0.0);
}

#[test]
fn marked_grammar_is_equivalent() {
    let (g, h) = (abba(), hom());
    let marked = build_marked_grammar(&g, &h).unwrap();
    let (og, om) = (GrammarOracle::new(&g), GrammarOracle::new(&marked));
    let ab = ["a".to_string(), "b".to_string()];
    for len in 0..=12usize {
        for bits in 0..1u32 << len {
            let w: Vec<String> = (0..len).map(|i| ab[(bits >> i & 1) as usize].clone()).collect();
            assert_eq!(om.accepts(&w), og.accepts(&w), "{w:?}");
        }
    }
}

#[test]
fn word_pipeline_accepts_expansions() {
    let (g, h) = (abba(), hom());
    let m = word_bounded_cfg_to_pda(&g, &h).unwrap();
    assert_eq!(m.turn_bound(), Some(1));
    let og = GrammarOracle::new(&g);
    for k1 in 0..=4 {
        for k2 in 0..=4 {
            let w = h.expand(&[k1, k2]);
            let want = og.accepts(&w);
            assert_eq!(accepts(&m, &w), want, "{k1} {k2}");
            if want {
                let t = min_turns(&m, &w, SearchCaps::for_input(&m, w.len()));
                assert!(matches!(t, TurnsResult::Turns(n) if n <= 1), "{t:?}");
            }
        }
    }
}

#[test]
fn inverse_machine_and_turn_reduction() {
    let (g, h) = (abba(), hom());
    let m = word_bounded_cfg_to_pda(&g, &h).unwrap();
    let inv = pda_inverse_hom(&m, &h).unwrap();
    let total: usize = h.words().iter().map(Vec::len).sum();
    assert!(inv.states().len() <= m.states().len() * (total + 1));
    for k1 in 0..=6 {
        for k2 in 0..=6 {
            let letters = bounded_word(h.letters(), &[k1, k2]);
            assert_eq!(accepts(&inv, &letters), k1 == k2 && k1 >= 1, "{k1} {k2}");
        }
    }
}

#[test]
fn identity_images_keep_the_language() {
    let g = parse_grammar("start: S\nS -> A T | A B\nT -> S B\nA -> a\nB -> b").unwrap();
    let h = Homomorphism::parse("a = a\nb = b\n").unwrap();
    let inv = build_inverse_hom_grammar(&g, &h).unwrap();
    let (og, oi) = (GrammarOracle::new(&g), GrammarOracle::new(&inv));
    for k1 in 0..=5 {
        for k2 in 0..=5 {
            let w = bounded_word(h.letters(), &[k1, k2]);
            assert_eq!(oi.accepts(&w), og.accepts(&w));
        }
    }
}

#[test]
fn word_turn_reduction_preserves_the_language() {
    let (g, h) = (abba(), hom());
    let m = word_bounded_cfg_to_pda(&g, &h).unwrap();
    let out = reduce_word_turns(&m, 1, &h).unwrap();
    assert_eq!(out.turn_bound(), Some(1));
    let og = GrammarOracle::new(&g);
    for k1 in 0..=3 {
        for k2 in 0..=3 {
            let w = h.expand(&[k1, k2]);
            assert_eq!(accepts(&out, &w), og.accepts(&w), "{k1} {k2}");
        }
    }
}

/// `{(ab)^(nk) (ba)^k : k >= 1}` with `X_j` deriving `(ab)^j`.
fn stretched(n: usize) -> Grammar {
    let mut text = format!("start: S\nS -> X{n} T | X{n} Y\nT -> S Y\nX1 -> A B\nY -> B A\nA -> a\nB -> b\n");
    for j in 2..=n {
        text.push_str(&format!("X{j} -> X1 X{}\n", j - 1));
    }
    parse_grammar(&text).unwrap()
}

/// A bound on `Symb(Ĝ)/Symb(g)` that depends only on the homomorphism:
/// each CNF production has at most `((L+1) m)^3` marked copies of at most
/// four symbols, with `L` the longest word.
fn hom_constant(h: &Homomorphism) -> f64 {
    let c = ((h.max_word_len() + 1) * h.len()) as f64;
    4.0 * c.powi(3)
}

/// Replaces `a_i` by the letters of `w_i` in a grammar over `a1 .. am`.
fn substitute(g: &Grammar, h: &Homomorphism) -> Grammar {
    let mut b = GrammarBuilder::new();
    let vars: Vec<usize> = g.variables().iter().map(|v| b.var(v)).collect();
    for p in g.productions() {
        let mut body = Vec::new();
        for &x in &p.body {
            match x {
                Symbol::Var(v) => body.push(Symbol::Var(vars[v])),
                Symbol::Term(t) => {
                    let i = h.letters().iter().position(|a| *a == g.terminals()[t]).unwrap();
                    for c in &h.words()[i] {
                        body.push(Symbol::Term(b.term(c)));
                    }
                }
            }
        }
        b.add(vars[p.head], body);
    }
    to_cnf(&b.build(vars[g.start()]).unwrap())
}

#[test]
fn symb_ratio_is_bounded_by_the_homomorphism() {
    let h = hom();
    let bound = hom_constant(&h);
    for n in 1..=8 {
        let g = stretched(n);
        let inv = build_inverse_hom_grammar(&g, &h).unwrap();
        let o = GrammarOracle::new(&inv);
        for k in 0..=3 {
            let w = bounded_word(h.letters(), &[n * k, k]);
            assert_eq!(o.accepts(&w), k >= 1);
        }
        let r = symb_ratio(&g, &inv);
        assert!(r.is_finite() && r <= bound, "ratio {r} at n={n}");
    }
    let mut r = rng(31);
    for _ in 0..20 {
        let g = substitute(&random_letter_bounded(&mut r, 2, 4), &h);
        let inv = build_inverse_hom_grammar(&g, &h).unwrap();
        let ratio = symb_ratio(&g, &inv);
        assert!(ratio.is_finite() && ratio <= bound, "ratio {ratio}\n{g}");
        let (og, oi) = (GrammarOracle::new(&g), GrammarOracle::new(&inv));
        for k1 in 0..=3 {
            for k2 in 0..=3 {
                let letters = bounded_word(h.letters(), &[k1, k2]);
                assert_eq!(oi.accepts(&letters), og.accepts(&h.expand(&[k1, k2])), "{k1} {k2}\n{g}");
            }
        }
    }
}
