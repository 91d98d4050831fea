//! Finite automata with ε-moves.
//!
//! ```text
//! states: s t
//! alphabet: a
//! start: s
//! accept: t
//! s a -> t
//! t eps -> s
//! ```

use std::collections::{BTreeSet, HashMap, HashSet};
use std::fmt;

use crate::error::{syntax, Error, Result};
use crate::text::{check_token, content_lines, header, EPS};

/// `(from, symbol or ε, to)`.
pub type NfaTransition = (usize, Option<usize>, usize);

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct NfaMachine {
    states: Vec<String>,
    alphabet: Vec<String>,
    start: usize,
    accepting: Vec<usize>,
    transitions: Vec<NfaTransition>,
}

impl NfaMachine {
    pub fn new(
        states: Vec<String>,
        alphabet: Vec<String>,
        start: usize,
        accepting: Vec<usize>,
        transitions: Vec<NfaTransition>,
    ) -> Result<Self> {
        let n = states.len();
        if start >= n || accepting.iter().any(|&q| q >= n) {
            return Err(Error::Invalid("state index out of range".into()));
        }
        if transitions
            .iter()
            .any(|&(p, a, q)| p >= n || q >= n || a.is_some_and(|a| a >= alphabet.len()))
        {
            return Err(Error::Invalid("transition index out of range".into()));
        }
        let mut seen = HashSet::new();
        if let Some(d) = states.iter().find(|s| !seen.insert(s.as_str())) {
            return Err(Error::Invalid(format!("state `{d}` declared twice")));
        }
        let mut accepting = accepting;
        accepting.sort_unstable();
        accepting.dedup();
        Ok(NfaMachine {
            states,
            alphabet,
            start,
            accepting,
            transitions,
        })
    }

    pub fn states(&self) -> &[String] {
        &self.states
    }

    pub fn alphabet(&self) -> &[String] {
        &self.alphabet
    }

    pub fn start(&self) -> usize {
        self.start
    }

    pub fn accepting(&self) -> &[usize] {
        &self.accepting
    }

    pub fn transitions(&self) -> &[NfaTransition] {
        &self.transitions
    }

    pub fn symbol_index(&self, name: &str) -> Option<usize> {
        self.alphabet.iter().position(|a| a == name)
    }

    fn successors(&self) -> Vec<Vec<(Option<usize>, usize)>> {
        let mut out = vec![Vec::new(); self.states.len()];
        for &(p, a, q) in &self.transitions {
            out[p].push((a, q));
        }
        out
    }

    fn closure(succ: &[Vec<(Option<usize>, usize)>], set: &mut BTreeSet<usize>) {
        let mut stack: Vec<usize> = set.iter().copied().collect();
        while let Some(p) = stack.pop() {
            for &(a, q) in &succ[p] {
                if a.is_none() && set.insert(q) {
                    stack.push(q);
                }
            }
        }
    }

    /// The ε-closed set of states reached from the start on `word`.
    pub fn run(&self, word: &[usize]) -> BTreeSet<usize> {
        let succ = self.successors();
        let mut cur = BTreeSet::from([self.start]);
        Self::closure(&succ, &mut cur);
        for &a in word {
            let mut next = BTreeSet::new();
            for &p in &cur {
                for &(b, q) in &succ[p] {
                    if b == Some(a) {
                        next.insert(q);
                    }
                }
            }
            Self::closure(&succ, &mut next);
            cur = next;
        }
        cur
    }

    pub fn accepts(&self, word: &[usize]) -> bool {
        self.run(word).iter().any(|q| self.accepting.binary_search(q).is_ok())
    }

    pub fn accepts_names(&self, word: &[String]) -> bool {
        let mut ix = Vec::with_capacity(word.len());
        for a in word {
            match self.symbol_index(a) {
                Some(i) => ix.push(i),
                None => return false,
            }
        }
        self.accepts(&ix)
    }

    /// Subset sequence for `a^0, a^1, ..` over a one-letter alphabet.
    pub fn unary_subsets(&self, upto: usize) -> Vec<BTreeSet<usize>> {
        let succ = self.successors();
        let mut cur = BTreeSet::from([self.start]);
        Self::closure(&succ, &mut cur);
        let mut out = vec![cur.clone()];
        for _ in 0..upto {
            let mut next = BTreeSet::new();
            for &p in &cur {
                for &(b, q) in &succ[p] {
                    if b.is_some() {
                        next.insert(q);
                    }
                }
            }
            Self::closure(&succ, &mut next);
            cur = next;
            out.push(cur.clone());
        }
        out
    }

    /// Drops states that are unreachable from the start or cannot reach an
    /// accepting state. The start state always survives.
    pub fn trim(&self) -> NfaMachine {
        let n = self.states.len();
        let mut fwd = vec![false; n];
        let mut back = vec![false; n];
        let succ = self.successors();
        let mut pred = vec![Vec::new(); n];
        for &(p, _, q) in &self.transitions {
            pred[q].push(p);
        }
        let mut stack = vec![self.start];
        fwd[self.start] = true;
        while let Some(p) = stack.pop() {
            for &(_, q) in &succ[p] {
                if !fwd[q] {
                    fwd[q] = true;
                    stack.push(q);
                }
            }
        }
        let mut stack: Vec<usize> = self.accepting.clone();
        for &q in &stack {
            back[q] = true;
        }
        while let Some(q) = stack.pop() {
            for &p in &pred[q] {
                if !back[p] {
                    back[p] = true;
                    stack.push(p);
                }
            }
        }
        let keep: Vec<bool> = (0..n).map(|q| q == self.start || (fwd[q] && back[q])).collect();
        let mut map = vec![usize::MAX; n];
        let mut states = Vec::new();
        for q in 0..n {
            if keep[q] {
                map[q] = states.len();
                states.push(self.states[q].clone());
            }
        }
        let mut seen = HashSet::new();
        let transitions = self
            .transitions
            .iter()
            .filter(|&&(p, _, q)| keep[p] && keep[q])
            .map(|&(p, a, q)| (map[p], a, map[q]))
            .filter(|t| seen.insert(*t))
            .collect();
        let accepting = self
            .accepting
            .iter()
            .filter(|&&q| keep[q])
            .map(|&q| map[q])
            .collect();
        NfaMachine::new(states, self.alphabet.clone(), map[self.start], accepting, transitions)
            .expect("trimming keeps indices consistent")
    }

    pub fn parse(text: &str) -> Result<NfaMachine> {
        parse_nfa(text)
    }

    pub fn to_text(&self) -> String {
        self.to_string()
    }
}

impl fmt::Display for NfaMachine {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        writeln!(f, "states: {}", self.states.join(" "))?;
        writeln!(f, "alphabet: {}", self.alphabet.join(" "))?;
        writeln!(f, "start: {}", self.states[self.start])?;
        let acc: Vec<&str> = self.accepting.iter().map(|&q| self.states[q].as_str()).collect();
        writeln!(f, "accept: {}", acc.join(" "))?;
        for &(p, a, q) in &self.transitions {
            let a = a.map_or(EPS, |a| self.alphabet[a].as_str());
            writeln!(f, "{} {} -> {}", self.states[p], a, self.states[q])?;
        }
        Ok(())
    }
}

pub fn parse_nfa(text: &str) -> Result<NfaMachine> {
    let mut states: Option<Vec<String>> = None;
    let mut alphabet: Option<Vec<String>> = None;
    let mut start = None;
    let mut accept = Vec::new();
    let mut lines = Vec::new();
    for (ln, line) in content_lines(text) {
        if line.contains("->") {
            lines.push((ln, line));
            continue;
        }
        let Some((key, rest)) = header(line) else {
            return Err(syntax(ln, format!("expected a header or a transition, got `{line}`")));
        };
        let toks: Vec<String> = rest.split_whitespace().map(str::to_string).collect();
        for t in &toks {
            check_token(ln, t)?;
        }
        match key {
            "states" => states = Some(toks),
            "alphabet" => alphabet = Some(toks),
            "start" => start = Some(rest.to_string()),
            "accept" => accept = toks,
            other => return Err(syntax(ln, format!("unknown header `{other}`"))),
        }
    }
    let states = states.ok_or_else(|| syntax(1, "missing `states:` header"))?;
    let alphabet = alphabet.ok_or_else(|| syntax(1, "missing `alphabet:` header"))?;
    let index: HashMap<&str, usize> = states.iter().enumerate().map(|(i, s)| (s.as_str(), i)).collect();
    let state = |name: &str| {
        index.get(name).copied().ok_or_else(|| Error::Unknown {
            kind: "state",
            name: name.to_string(),
        })
    };
    let start = state(&start.ok_or_else(|| syntax(1, "missing `start:` header"))?)?;
    let accepting = accept.iter().map(|q| state(q)).collect::<Result<Vec<_>>>()?;
    let mut transitions = Vec::with_capacity(lines.len());
    for (ln, line) in lines {
        let (lhs, rhs) = line.split_once("->").expect("filtered on arrow");
        let l: Vec<&str> = lhs.split_whitespace().collect();
        let r: Vec<&str> = rhs.split_whitespace().collect();
        if l.len() != 2 || r.len() != 1 {
            return Err(syntax(ln, "transition is `q <sym|eps> -> p`"));
        }
        let a = match l[1] {
            EPS => None,
            a => Some(alphabet.iter().position(|x| x == a).ok_or_else(|| Error::Unknown {
                kind: "symbol",
                name: a.to_string(),
            })?),
        };
        transitions.push((state(l[0])?, a, state(r[0])?));
    }
    NfaMachine::new(states, alphabet, start, accepting, transitions)
}
