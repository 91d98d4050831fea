//! Depth-bounded enumeration of derivation trees, used to cross-check the
//! border computation.

use std::collections::BTreeSet;

use crate::error::{Error, Result};
use crate::grammar::{Grammar, Symbol};

/// Letter masks of the left and right contexts `u`, `v` over every
/// derivation tree `A =>+ u A v` of depth at most `depth`, or `None` when
/// no such tree exists within the depth.
pub fn brute_force_contexts(g: &Grammar, alphabet: &[String], depth: usize) -> Result<Vec<Option<(u64, u64)>>> {
    if alphabet.len() > 64 {
        return Err(Error::Precondition("at most 64 letters are supported".into()));
    }
    let n = g.variables().len();
    let letter: Vec<u64> = g
        .terminals()
        .iter()
        .map(|t| alphabet.iter().position(|a| a == t).map_or(0, |i| 1 << i))
        .collect();
    // yields[d][X]: letter masks of complete trees of depth <= d.
    let mut yields: Vec<Vec<BTreeSet<u64>>> = vec![vec![BTreeSet::new(); n]];
    for d in 1..=depth {
        let prev = &yields[d - 1];
        let mut cur = prev.clone();
        for p in g.productions() {
            let mut acc = BTreeSet::from([0u64]);
            for &s in &p.body {
                let options: Vec<u64> = match s {
                    Symbol::Term(t) => vec![letter[t]],
                    Symbol::Var(v) => prev[v].iter().copied().collect(),
                };
                acc = acc.iter().flat_map(|&a| options.iter().map(move |&o| a | o)).collect();
            }
            cur[p.head].extend(acc);
        }
        yields.push(cur);
    }
    let mut out = vec![None; n];
    for (a, slot) in out.iter_mut().enumerate() {
        // ctx[X]: context masks of trees rooted at X with one hole labelled
        // `a`; depth 0 is the hole itself.
        let mut ctx: Vec<BTreeSet<(u64, u64)>> = vec![BTreeSet::new(); n];
        ctx[a].insert((0, 0));
        let mut found: BTreeSet<(u64, u64)> = BTreeSet::new();
        for d in 1..=depth {
            let prev = &yields[d - 1];
            let mut next = ctx.clone();
            for p in g.productions() {
                for (i, &s) in p.body.iter().enumerate() {
                    let Symbol::Var(hole) = s else { continue };
                    if ctx[hole].is_empty() {
                        continue;
                    }
                    let side = |syms: &[Symbol]| {
                        let mut acc = BTreeSet::from([0u64]);
                        for &x in syms {
                            let options: Vec<u64> = match x {
                                Symbol::Term(t) => vec![letter[t]],
                                Symbol::Var(v) => prev[v].iter().copied().collect(),
                            };
                            acc = acc.iter().flat_map(|&a| options.iter().map(move |&o| a | o)).collect();
                        }
                        acc
                    };
                    let (left, right) = (side(&p.body[..i]), side(&p.body[i + 1..]));
                    for &(l0, r0) in &ctx[hole] {
                        for &l in &left {
                            for &r in &right {
                                let c = (l | l0, r | r0);
                                if p.head == a {
                                    found.insert(c);
                                }
                                next[p.head].insert(c);
                            }
                        }
                    }
                }
            }
            ctx = next;
        }
        if !found.is_empty() {
            *slot = Some(found.iter().fold((0, 0), |(l, r), &(x, y)| (l | x, r | y)));
        }
    }
    Ok(out)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::grammar::parse_grammar;
    use crate::text::parse_alphabet;

    #[test]
    fn anbn_context() {
        let g = parse_grammar("start: S\nS -> A T | A B\nT -> S B\nA -> a\nB -> b").unwrap();
        let c = brute_force_contexts(&g, &parse_alphabet("a,b").unwrap(), 6).unwrap();
        assert_eq!(c[0], Some((1, 2)));
        assert_eq!(c[2], None);
    }
}
