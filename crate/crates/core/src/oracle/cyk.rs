use std::collections::{BTreeSet, HashMap};

use crate::error::{Error, Result};
use crate::grammar::{Grammar, Symbol};
use crate::transform::to_cnf;

fn word_indices(g: &Grammar, w: &[String]) -> Option<Vec<usize>> {
    w.iter().map(|a| g.term_index(a)).collect()
}

/// CYK membership for a grammar in Chomsky normal form.
pub fn cyk_membership(g: &Grammar, w: &[String]) -> Result<bool> {
    if let Some(p) = g.cnf_violation() {
        return Err(Error::NotCnf(p));
    }
    Ok(match word_indices(g, w) {
        Some(ix) => cyk_indices(g, &ix),
        None => false,
    })
}

pub(crate) fn cyk_indices(g: &Grammar, w: &[usize]) -> bool {
    let n = w.len();
    if n == 0 {
        return false;
    }
    let nv = g.variables().len();
    let mut unit: HashMap<usize, Vec<usize>> = HashMap::new();
    let mut bin: Vec<(usize, usize, usize)> = Vec::new();
    for p in g.productions() {
        match p.body.as_slice() {
            [Symbol::Term(t)] => unit.entry(*t).or_default().push(p.head),
            [Symbol::Var(b), Symbol::Var(c)] => bin.push((p.head, *b, *c)),
            _ => unreachable!("checked CNF"),
        }
    }
    // table[i][len-1] is a bitset of variables deriving w[i..i+len].
    let words = nv.div_ceil(64).max(1);
    let mut table = vec![vec![vec![0u64; words]; n]; n];
    let set = |row: &mut Vec<u64>, v: usize| row[v / 64] |= 1 << (v % 64);
    let has = |row: &[u64], v: usize| row[v / 64] & (1 << (v % 64)) != 0;
    for i in 0..n {
        if let Some(hs) = unit.get(&w[i]) {
            for &h in hs {
                set(&mut table[i][0], h);
            }
        }
    }
    for len in 2..=n {
        for i in 0..=n - len {
            let mut row = vec![0u64; words];
            for split in 1..len {
                let left = &table[i][split - 1];
                let right = &table[i + split][len - split - 1];
                for &(a, b, c) in &bin {
                    if has(left, b) && has(right, c) {
                        set(&mut row, a);
                    }
                }
            }
            table[i][len - 1] = row;
        }
    }
    has(&table[0][n - 1], g.start())
}

/// Membership for an arbitrary ε-free grammar through its CNF.
#[derive(Clone, Debug)]
pub struct GrammarOracle {
    cnf: Grammar,
}

impl GrammarOracle {
    pub fn new(g: &Grammar) -> Self {
        GrammarOracle { cnf: to_cnf(g) }
    }

    /// The empty word is accepted when the grammar's flag records it.
    pub fn accepts(&self, w: &[String]) -> bool {
        if w.is_empty() {
            return self.cnf.epsilon_stripped();
        }
        match word_indices(&self.cnf, w) {
            Some(ix) => cyk_indices(&self.cnf, &ix),
            None => false,
        }
    }
}

/// Every word of `L(g)` with at most `max_len` letters, by saturation over
/// the productions. Independent of CYK and of normal forms.
pub fn generate_upto(g: &Grammar, max_len: usize) -> BTreeSet<Vec<String>> {
    let nv = g.variables().len();
    let mut lang: Vec<BTreeSet<Vec<usize>>> = vec![BTreeSet::new(); nv];
    loop {
        let mut changed = false;
        for p in g.productions() {
            let mut acc: Vec<Vec<usize>> = vec![Vec::new()];
            for &s in &p.body {
                let mut next = Vec::new();
                for pre in &acc {
                    match s {
                        Symbol::Term(t) => {
                            if pre.len() < max_len {
                                let mut w = pre.clone();
                                w.push(t);
                                next.push(w);
                            }
                        }
                        Symbol::Var(v) => {
                            for suf in &lang[v] {
                                if pre.len() + suf.len() <= max_len {
                                    let mut w = pre.clone();
                                    w.extend_from_slice(suf);
                                    next.push(w);
                                }
                            }
                        }
                    }
                }
                acc = next;
            }
            for w in acc {
                if lang[p.head].insert(w) {
                    changed = true;
                }
            }
        }
        if !changed {
            break;
        }
    }
    lang.swap_remove(g.start())
        .into_iter()
        .map(|w| w.into_iter().map(|t| g.terminals()[t].clone()).collect())
        .collect()
}
