use std::cmp::Ordering;
use std::fmt;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::grammar::{Grammar, Symbol};
use crate::transform::useless::productive;

/// A pair of 1-based alphabet indices `l <= r`.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub struct Border {
    pub l: usize,
    pub r: usize,
}

/// Work contexts share the shape and the order of borders.
pub type WorkContext = Border;

impl Border {
    pub fn new(l: usize, r: usize) -> Self {
        assert!(1 <= l && l <= r, "border needs 1 <= l <= r");
        Border { l, r }
    }
}

/// `(l,r) <= (l',r')` iff `l < l'`, or `l = l'` and `r >= r'`.
impl Ord for Border {
    fn cmp(&self, other: &Self) -> Ordering {
        self.l.cmp(&other.l).then(other.r.cmp(&self.r))
    }
}

impl PartialOrd for Border {
    fn partial_cmp(&self, other: &Self) -> Option<Ordering> {
        Some(self.cmp(other))
    }
}

impl fmt::Display for Border {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "({},{})", self.l, self.r)
    }
}

pub fn compare_borders(x: Border, y: Border) -> Ordering {
    x.cmp(&y)
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct BorderTable {
    names: Vec<String>,
    entries: Vec<Option<Border>>,
}

impl BorderTable {
    pub fn get(&self, v: usize) -> Option<Border> {
        self.entries[v]
    }

    pub fn by_name(&self, name: &str) -> Option<Option<Border>> {
        self.names.iter().position(|n| n == name).map(|i| self.entries[i])
    }

    pub fn entries(&self) -> &[Option<Border>] {
        &self.entries
    }
}

impl fmt::Display for BorderTable {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        for (n, e) in self.names.iter().zip(&self.entries) {
            match e {
                Some(b) => writeln!(f, "{n} {b}")?,
                None => writeln!(f, "{n} undefined")?,
            }
        }
        Ok(())
    }
}

/// Letter masks (bit i = alphabet letter i) of the strings each symbol
/// generates, restricted to productive productions.
fn generated_letters(g: &Grammar, letter_of: &[Option<usize>]) -> Vec<u64> {
    let prod = productive(g);
    let mut mask = vec![0u64; g.variables().len()];
    let sym = |mask: &[u64], s: Symbol| match s {
        Symbol::Var(v) => mask[v],
        Symbol::Term(t) => letter_of[t].map_or(0, |i| 1 << i),
    };
    loop {
        let mut changed = false;
        for p in g.productions() {
            if p.body.iter().any(|s| s.as_var().is_some_and(|v| !prod[v])) {
                continue;
            }
            let m = p.body.iter().fold(0, |acc, &s| acc | sym(&mask, s));
            if mask[p.head] | m != mask[p.head] {
                mask[p.head] |= m;
                changed = true;
            }
        }
        if !changed {
            return mask;
        }
    }
}

/// Maps each terminal of `g` to its position in `alphabet`.
pub(crate) fn letter_positions(g: &Grammar, alphabet: &[String]) -> Result<Vec<Option<usize>>> {
    if alphabet.len() > 64 {
        return Err(Error::Precondition("at most 64 letters are supported".into()));
    }
    Ok(g.terminals()
        .iter()
        .map(|t| alphabet.iter().position(|a| a == t))
        .collect())
}

/// For each variable `A`, the left and right letter masks over all
/// derivations `A =>+ u A v`, or `None` when `A` never embeds itself.
pub fn self_embedding_contexts(g: &Grammar, alphabet: &[String]) -> Result<Vec<Option<(u64, u64)>>> {
    let letter_of = letter_positions(g, alphabet)?;
    let gen = generated_letters(g, &letter_of);
    let prod = productive(g);
    let sym = |s: Symbol| match s {
        Symbol::Var(v) => gen[v],
        Symbol::Term(t) => letter_of[t].map_or(0, |i| 1 << i),
    };
    let n = g.variables().len();
    // Direct steps A -> .. B .. with the letters on either side.
    let mut steps: Vec<Vec<(usize, u64, u64)>> = vec![Vec::new(); n];
    for p in g.productions() {
        if p.body.iter().any(|s| s.as_var().is_some_and(|v| !prod[v])) {
            continue;
        }
        for (i, s) in p.body.iter().enumerate() {
            if let Symbol::Var(b) = *s {
                let left = p.body[..i].iter().fold(0, |acc, &x| acc | sym(x));
                let right = p.body[i + 1..].iter().fold(0, |acc, &x| acc | sym(x));
                steps[p.head].push((b, left, right));
            }
        }
    }
    let mut out = vec![None; n];
    for a in 0..n {
        let mut reach: Vec<Option<(u64, u64)>> = vec![None; n];
        let mut work = Vec::new();
        for &(b, l, r) in &steps[a] {
            let cur = reach[b].unwrap_or((0, 0));
            let merged = (cur.0 | l, cur.1 | r);
            if reach[b] != Some(merged) {
                reach[b] = Some(merged);
                work.push(b);
            }
        }
        while let Some(b) = work.pop() {
            let (lb, rb) = reach[b].expect("queued entries are set");
            for &(c, l, r) in &steps[b] {
                let old = reach[c];
                let cur = old.unwrap_or((0, 0));
                let merged = (cur.0 | lb | l, cur.1 | rb | r);
                if old != Some(merged) {
                    reach[c] = Some(merged);
                    work.push(c);
                }
            }
        }
        out[a] = reach[a];
    }
    Ok(out)
}

fn letter_names(mask: u64, alphabet: &[String]) -> String {
    (0..alphabet.len())
        .filter(|i| mask & (1 << i) != 0)
        .map(|i| alphabet[i].as_str())
        .collect::<Vec<_>>()
        .join(",")
}

/// The border of every variable, from the letters occurring on the left and
/// right of its self-embedding derivations.
pub fn compute_borders(g: &Grammar, alphabet: &[String]) -> Result<BorderTable> {
    let ctx = self_embedding_contexts(g, alphabet)?;
    let mut entries = Vec::with_capacity(ctx.len());
    for (v, c) in ctx.iter().enumerate() {
        let entry = match *c {
            None => None,
            Some((l, r)) => {
                for side in [l, r] {
                    if side.count_ones() > 1 {
                        return Err(Error::InconsistentBorder {
                            variable: g.variables()[v].clone(),
                            letters: letter_names(side, alphabet),
                        });
                    }
                }
                let idx = |m: u64| m.trailing_zeros() as usize + 1;
                match (l != 0, r != 0) {
                    (true, true) => {
                        if idx(l) > idx(r) {
                            return Err(Error::InconsistentBorder {
                                variable: g.variables()[v].clone(),
                                letters: letter_names(l | r, alphabet),
                            });
                        }
                        Some(Border::new(idx(l), idx(r)))
                    }
                    (true, false) => Some(Border::new(idx(l), idx(l))),
                    (false, true) => Some(Border::new(idx(r), idx(r))),
                    (false, false) => None,
                }
            }
        };
        entries.push(entry);
    }
    Ok(BorderTable {
        names: g.variables().to_vec(),
        entries,
    })
}
