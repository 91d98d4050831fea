//! Complete deterministic automata, used for containment checks.

use std::collections::{BTreeSet, HashMap};

use crate::nfa::NfaMachine;

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Dfa {
    /// `delta[state][symbol]`.
    pub delta: Vec<Vec<usize>>,
    pub start: usize,
    pub accepting: Vec<bool>,
}

impl Dfa {
    pub fn states(&self) -> usize {
        self.delta.len()
    }

    pub fn accepts(&self, word: &[usize]) -> bool {
        let q = word.iter().fold(self.start, |q, &a| self.delta[q][a]);
        self.accepting[q]
    }

    pub fn complement(&self) -> Dfa {
        Dfa {
            accepting: self.accepting.iter().map(|a| !a).collect(),
            ..self.clone()
        }
    }
}

/// Subset construction. The empty subset, when reachable, is the dead state.
pub fn determinize(n: &NfaMachine) -> Dfa {
    let k = n.alphabet().len();
    let mut succ = vec![Vec::new(); n.states().len()];
    for &(p, a, q) in n.transitions() {
        succ[p].push((a, q));
    }
    let close = |set: &mut BTreeSet<usize>| {
        let mut stack: Vec<usize> = set.iter().copied().collect();
        while let Some(p) = stack.pop() {
            for &(a, q) in &succ[p] {
                if a.is_none() && set.insert(q) {
                    stack.push(q);
                }
            }
        }
    };
    let mut start = BTreeSet::from([n.start()]);
    close(&mut start);
    let mut index: HashMap<BTreeSet<usize>, usize> = HashMap::new();
    let mut sets = vec![start.clone()];
    index.insert(start, 0);
    let mut delta: Vec<Vec<usize>> = Vec::new();
    let mut i = 0;
    while i < sets.len() {
        let mut row = Vec::with_capacity(k);
        for a in 0..k {
            let mut next = BTreeSet::new();
            for &p in &sets[i] {
                for &(b, q) in &succ[p] {
                    if b == Some(a) {
                        next.insert(q);
                    }
                }
            }
            close(&mut next);
            let id = *index.entry(next.clone()).or_insert_with(|| {
                sets.push(next);
                sets.len() - 1
            });
            row.push(id);
        }
        delta.push(row);
        i += 1;
    }
    let accepting = sets
        .iter()
        .map(|s| s.iter().any(|q| n.accepting().contains(q)))
        .collect();
    Dfa {
        delta,
        start: 0,
        accepting,
    }
}
