use std::collections::{BTreeSet, HashMap};

use crate::nfa::NfaMachine;

/// Acceptance bits `b_0 b_1 ..` of a unary automaton as a tail followed by
/// a cycle.
pub fn unary_tail_cycle(n: &NfaMachine) -> (Vec<bool>, Vec<bool>) {
    let mut seen: HashMap<BTreeSet<usize>, usize> = HashMap::new();
    let mut bits = Vec::new();
    let mut upto = 64;
    loop {
        let seq = n.unary_subsets(upto);
        seen.clear();
        bits.clear();
        for (t, s) in seq.into_iter().enumerate() {
            if let Some(&i) = seen.get(&s) {
                let cycle = bits[i..t].to_vec();
                bits.truncate(i);
                return (bits, cycle);
            }
            bits.push(s.iter().any(|q| n.accepting().contains(q)));
            seen.insert(s, t);
        }
        upto *= 2;
    }
}

/// State count of the minimal complete DFA of a unary automaton, a dead
/// state included when the language is finite.
pub fn minimal_unary_dfa_size(n: &NfaMachine) -> usize {
    let (tail, cycle) = unary_tail_cycle(n);
    let p = cycle.len();
    let period = (1..=p)
        .filter(|d| p % d == 0)
        .find(|&d| (0..p).all(|i| cycle[i] == cycle[(i + d) % p]))
        .expect("p itself is a period");
    let bit = |t: usize| {
        if t < tail.len() {
            tail[t]
        } else {
            cycle[(t - tail.len()) % p]
        }
    };
    let mut t0 = tail.len();
    while t0 > 0 && bit(t0 - 1) == bit(t0 - 1 + period) {
        t0 -= 1;
    }
    t0 + period
}
