use std::cmp::Ordering;

use crate::dfa::{determinize, Dfa};
use crate::error::{Error, Result};
use crate::grammar::{Grammar, Symbol};
use crate::nfa::NfaMachine;
use crate::text::Word;

fn better(a: &[usize], b: &Option<Vec<usize>>) -> bool {
    match b {
        None => true,
        Some(b) => match a.len().cmp(&b.len()) {
            Ordering::Less => true,
            Ordering::Greater => false,
            Ordering::Equal => a < b.as_slice(),
        },
    }
}

/// The shortest (then lexicographically least, by terminal index) word of
/// `L(g)` that `dfa` rejects. The automaton reads the terminals of `g` by
/// index. Computed as a fixpoint over triples (variable, entry, exit state).
pub fn shortest_word_outside(g: &Grammar, dfa: &Dfa) -> Option<Vec<usize>> {
    let n = dfa.states();
    let nv = g.variables().len();
    let mut best: Vec<Vec<Option<Vec<usize>>>> = vec![vec![None; n * n]; nv];
    loop {
        let mut changed = false;
        for prod in g.productions() {
            for p in 0..n {
                let mut cur: Vec<Option<Vec<usize>>> = vec![None; n];
                cur[p] = Some(Vec::new());
                for &s in &prod.body {
                    let mut next: Vec<Option<Vec<usize>>> = vec![None; n];
                    for (r, pre) in cur.iter().enumerate() {
                        let Some(pre) = pre else { continue };
                        match s {
                            Symbol::Term(t) => {
                                let r2 = dfa.delta[r][t];
                                let mut w = pre.clone();
                                w.push(t);
                                if better(&w, &next[r2]) {
                                    next[r2] = Some(w);
                                }
                            }
                            Symbol::Var(v) => {
                                for r2 in 0..n {
                                    if let Some(mid) = &best[v][r * n + r2] {
                                        let mut w = pre.clone();
                                        w.extend_from_slice(mid);
                                        if better(&w, &next[r2]) {
                                            next[r2] = Some(w);
                                        }
                                    }
                                }
                            }
                        }
                    }
                    cur = next;
                }
                for (q, w) in cur.into_iter().enumerate() {
                    if let Some(w) = w {
                        if better(&w, &best[prod.head][p * n + q]) {
                            best[prod.head][p * n + q] = Some(w);
                            changed = true;
                        }
                    }
                }
            }
        }
        if !changed {
            break;
        }
    }
    let s = g.start();
    (0..n)
        .filter(|&q| !dfa.accepting[q])
        .filter_map(|q| best[s][dfa.start * n + q].clone())
        .min_by(|a, b| a.len().cmp(&b.len()).then_with(|| a.cmp(b)))
}

/// Automaton for `a_1* .. a_m*` over the terminals of `g`: state `i` means
/// the last letter read was `a_(i+1)`; the last state is dead.
fn letter_bounded_dfa(g: &Grammar, alphabet: &[String]) -> Dfa {
    let m = alphabet.len();
    let pos: Vec<Option<usize>> = g
        .terminals()
        .iter()
        .map(|t| alphabet.iter().position(|a| a == t))
        .collect();
    let mut delta = Vec::with_capacity(m + 1);
    for i in 0..=m {
        delta.push(
            pos.iter()
                .map(|p| match p {
                    Some(j) if i < m && *j >= i => *j,
                    _ => m,
                })
                .collect(),
        );
    }
    let mut accepting = vec![true; m + 1];
    accepting[m] = false;
    Dfa {
        delta,
        start: 0,
        accepting,
    }
}

fn names(g: &Grammar, w: Vec<usize>) -> Word {
    w.into_iter().map(|t| g.terminals()[t].clone()).collect()
}

/// `None` when `L(g)` is included in `a_1* .. a_m*`, otherwise the shortest
/// generated word outside it.
pub fn check_letter_bounded(g: &Grammar, alphabet: &[String]) -> Option<Word> {
    let dfa = letter_bounded_dfa(g, alphabet);
    shortest_word_outside(g, &dfa).map(|w| names(g, w))
}

/// Nondeterministic automaton for `w_1* .. w_m*` over the terminals of `g`.
pub fn word_bounded_nfa(g: &Grammar, words: &[Word]) -> Result<NfaMachine> {
    let mut states = Vec::new();
    let mut trans = Vec::new();
    let hubs: Vec<usize> = (0..words.len())
        .map(|i| {
            states.push(format!("h{i}"));
            i
        })
        .collect();
    for (i, w) in words.iter().enumerate() {
        if w.is_empty() {
            return Err(Error::Precondition(format!("word {} is empty", i + 1)));
        }
        if i + 1 < words.len() {
            trans.push((hubs[i], None, hubs[i + 1]));
        }
        let mut cur = hubs[i];
        for (k, a) in w.iter().enumerate() {
            let next = if k + 1 == w.len() {
                hubs[i]
            } else {
                states.push(format!("w{i}_{k}"));
                states.len() - 1
            };
            if let Some(t) = g.terminals().iter().position(|x| x == a) {
                trans.push((cur, Some(t), next));
            }
            cur = next;
        }
    }
    NfaMachine::new(states, g.terminals().to_vec(), 0, hubs, trans)
}

/// `None` when `L(g)` is included in `w_1* .. w_m*`, otherwise the shortest
/// generated word outside it.
pub fn check_word_bounded(g: &Grammar, words: &[Word]) -> Result<Option<Word>> {
    let dfa = determinize(&word_bounded_nfa(g, words)?);
    Ok(shortest_word_outside(g, &dfa).map(|w| names(g, w)))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::grammar::parse_grammar;
    use crate::text::parse_alphabet;

    #[test]
    fn ab_ba_counterexample() {
        let g = parse_grammar("start: S\nS -> a b | b a").unwrap();
        let w = check_letter_bounded(&g, &parse_alphabet("a,b").unwrap());
        assert_eq!(w, Some(vec!["b".to_string(), "a".to_string()]));
    }

    #[test]
    fn anbn_is_bounded() {
        let g = parse_grammar("start: S\nS -> a S b | a b").unwrap();
        assert_eq!(check_letter_bounded(&g, &parse_alphabet("a,b").unwrap()), None);
    }

    #[test]
    fn word_bounded() {
        let g = parse_grammar("start: S\nS -> a b S b a | a b b a").unwrap();
        let words = vec![
            vec!["a".to_string(), "b".to_string()],
            vec!["b".to_string(), "a".to_string()],
        ];
        assert_eq!(check_word_bounded(&g, &words).unwrap(), None);
        let g2 = parse_grammar("start: S\nS -> b a a b").unwrap();
        assert!(check_word_bounded(&g2, &words).unwrap().is_some());
    }
}
