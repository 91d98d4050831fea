//! Summaries of short derivation trees and of partial (pumping) trees.
//!
//! Two scopes are available. `All` follows the size bounds literally: every
//! tree of yield at most `2^(h-1)` and every partial tree with
//! `0 < |vx| < 2^h`. `Simple` keeps the trees in which no variable repeats on
//! a root-to-leaf path (for partial trees: on the spine, apart from the root
//! and the hole, and inside each subtree hanging off the spine). The simple
//! families are small enough to enumerate at desk scale and still contain a
//! decomposition of every derivation.

use std::collections::{BTreeSet, HashMap};
use std::rc::Rc;

use crate::error::{Error, Result};
use crate::grammar::{Grammar, Symbol};
use crate::transform::borders::{letter_positions, Border, BorderTable};
use crate::transform::varset::VarSet;

pub const DEFAULT_BUDGET: usize = 200_000;

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum TreeScope {
    All,
    Simple,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct TreeOptions {
    pub scope: TreeScope,
    pub budget: usize,
}

impl Default for TreeOptions {
    fn default() -> Self {
        TreeOptions {
            scope: TreeScope::Simple,
            budget: DEFAULT_BUDGET,
        }
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct ShortTreeSummary {
    /// `n_1 .. n_m`.
    pub yields: Vec<usize>,
    pub varset: VarSet,
}

#[derive(Clone, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct PartialTreeSummary {
    pub root: usize,
    pub border: Border,
    pub left_len: usize,
    pub right_len: usize,
    pub varset: VarSet,
}

type Yields = Vec<(Vec<usize>, VarSet)>;
type Lens = Vec<(usize, VarSet)>;
type Contexts = Vec<(usize, usize, VarSet)>;

struct Enumerator<'g> {
    g: &'g Grammar,
    letter: Vec<usize>,
    m: usize,
    reach: Vec<VarSet>,
    budget: usize,
    used: usize,
    simple: HashMap<(usize, VarSet), Rc<Yields>>,
    simple_lens: HashMap<usize, Rc<Lens>>,
    spine: HashMap<(usize, usize, VarSet), Rc<Contexts>>,
}

fn pow2(e: usize) -> usize {
    if e >= usize::BITS as usize - 1 {
        usize::MAX
    } else {
        1 << e
    }
}

impl<'g> Enumerator<'g> {
    fn new(g: &'g Grammar, alphabet: &[String], budget: usize) -> Result<Self> {
        if g.max_body_len() > 2 {
            return Err(Error::Precondition("tree enumeration needs bodies of length at most 2".into()));
        }
        let pos = letter_positions(g, alphabet)?;
        let mut letter = Vec::with_capacity(pos.len());
        for (t, p) in pos.iter().enumerate() {
            match p {
                Some(i) => letter.push(*i),
                None => {
                    return Err(Error::Precondition(format!(
                        "terminal `{}` is not in the alphabet",
                        g.terminals()[t]
                    )))
                }
            }
        }
        let n = g.variables().len();
        let by_head = g.by_head();
        let mut reach = Vec::with_capacity(n);
        for x in 0..n {
            let mut seen = VarSet::singleton(x);
            let mut stack = vec![x];
            while let Some(a) = stack.pop() {
                for p in &by_head[a] {
                    for v in p.body.iter().filter_map(|s| s.as_var()) {
                        if seen.insert(v) {
                            stack.push(v);
                        }
                    }
                }
            }
            reach.push(seen);
        }
        Ok(Enumerator {
            g,
            letter,
            m: alphabet.len(),
            reach,
            budget,
            used: 0,
            simple: HashMap::new(),
            simple_lens: HashMap::new(),
            spine: HashMap::new(),
        })
    }

    fn charge(&mut self, n: usize) -> Result<()> {
        self.used += n;
        if self.used > self.budget {
            Err(Error::Budget {
                what: "tree summaries",
                limit: self.budget,
            })
        } else {
            Ok(())
        }
    }

    /// Simple trees rooted at `x` that avoid `forbidden` below the root.
    fn simple_trees(&mut self, x: usize, forbidden: &VarSet) -> Result<Rc<Yields>> {
        let key = (x, forbidden.intersection(&self.reach[x]));
        if let Some(r) = self.simple.get(&key) {
            return Ok(r.clone());
        }
        let mut below = key.1.clone();
        below.insert(x);
        let mut out: BTreeSet<(Vec<usize>, VarSet)> = BTreeSet::new();
        let g = self.g;
        for p in g.productions().iter().filter(|p| p.head == x) {
            if p.body.iter().any(|s| s.as_var().is_some_and(|v| below.contains(v))) {
                continue;
            }
            let mut acc: Yields = vec![(vec![0; self.m], VarSet::singleton(x))];
            for &s in &p.body {
                let mut next = Vec::new();
                match s {
                    Symbol::Term(t) => {
                        for (mut y, vs) in acc {
                            y[self.letter[t]] += 1;
                            next.push((y, vs));
                        }
                    }
                    Symbol::Var(v) => {
                        let sub = self.simple_trees(v, &below)?;
                        for (y, vs) in &acc {
                            for (y2, vs2) in sub.iter() {
                                let y: Vec<usize> = y.iter().zip(y2).map(|(a, b)| a + b).collect();
                                next.push((y, vs.union(vs2)));
                            }
                        }
                    }
                }
                acc = next;
            }
            out.extend(acc);
        }
        self.charge(out.len())?;
        let r = Rc::new(out.into_iter().collect::<Vec<_>>());
        self.simple.insert(key, r.clone());
        Ok(r)
    }

    fn simple_lengths(&mut self, x: usize) -> Result<Rc<Lens>> {
        if let Some(r) = self.simple_lens.get(&x) {
            return Ok(r.clone());
        }
        let trees = self.simple_trees(x, &VarSet::new())?;
        let set: BTreeSet<(usize, VarSet)> = trees
            .iter()
            .map(|(y, vs)| (y.iter().sum(), vs.clone()))
            .collect();
        let r = Rc::new(set.into_iter().collect::<Vec<_>>());
        self.simple_lens.insert(x, r.clone());
        Ok(r)
    }

    /// Contexts `x =>+ v a w` whose spine variables lie outside `forbidden`.
    fn spine(&mut self, x: usize, a: usize, forbidden: &VarSet) -> Result<Rc<Contexts>> {
        let key = (x, a, forbidden.intersection(&self.reach[x]));
        if let Some(r) = self.spine.get(&key) {
            return Ok(r.clone());
        }
        let mut out: BTreeSet<(usize, usize, VarSet)> = BTreeSet::new();
        let g = self.g;
        for p in g.productions().iter().filter(|p| p.head == x) {
            for (i, s) in p.body.iter().enumerate() {
                let Symbol::Var(y) = *s else { continue };
                let inner: Rc<Contexts> = if y == a {
                    Rc::new(vec![(0, 0, VarSet::new())])
                } else if key.2.contains(y) || y == x {
                    continue;
                } else {
                    let mut f = key.2.clone();
                    f.insert(y);
                    self.spine(y, a, &f)?
                };
                let mut acc: Contexts = inner
                    .iter()
                    .map(|(l, r, vs)| (*l, *r, vs.union(&VarSet::singleton(x))))
                    .collect();
                for (j, &o) in p.body.iter().enumerate() {
                    if j == i {
                        continue;
                    }
                    let side: Lens = match o {
                        Symbol::Term(_) => vec![(1, VarSet::new())],
                        Symbol::Var(z) => self.simple_lengths(z)?.as_ref().clone(),
                    };
                    let mut next = Vec::with_capacity(acc.len() * side.len());
                    for (l, r, vs) in &acc {
                        for (n, vs2) in &side {
                            let (l, r) = if j < i { (l + n, *r) } else { (*l, r + n) };
                            next.push((l, r, vs.union(vs2)));
                        }
                    }
                    acc = next;
                }
                out.extend(acc);
            }
        }
        self.charge(out.len())?;
        let r = Rc::new(out.into_iter().collect::<Vec<_>>());
        self.spine.insert(key, r.clone());
        Ok(r)
    }

    /// Trees of total yield at most `cap`, by saturation.
    fn all_trees(&mut self, cap: usize) -> Result<Vec<BTreeSet<(Vec<usize>, VarSet)>>> {
        let g = self.g;
        let mut table: Vec<BTreeSet<(Vec<usize>, VarSet)>> = vec![BTreeSet::new(); g.variables().len()];
        loop {
            let mut added = 0;
            for p in g.productions() {
                let mut acc: Yields = vec![(vec![0; self.m], VarSet::singleton(p.head))];
                for &s in &p.body {
                    let mut next = Vec::new();
                    match s {
                        Symbol::Term(t) => {
                            for (mut y, vs) in acc {
                                y[self.letter[t]] += 1;
                                next.push((y, vs));
                            }
                        }
                        Symbol::Var(v) => {
                            for (y, vs) in &acc {
                                let have: usize = y.iter().sum();
                                for (y2, vs2) in &table[v] {
                                    if have + y2.iter().sum::<usize>() > cap {
                                        continue;
                                    }
                                    let y: Vec<usize> = y.iter().zip(y2).map(|(a, b)| a + b).collect();
                                    next.push((y, vs.union(vs2)));
                                }
                            }
                        }
                    }
                    acc = next;
                }
                for e in acc {
                    if e.0.iter().sum::<usize>() <= cap && table[p.head].insert(e) {
                        added += 1;
                    }
                }
            }
            if added == 0 {
                return Ok(table);
            }
            self.charge(added)?;
        }
    }

    /// Contexts `x =>+ v a w` with `|vw| <= cap`, by saturation.
    fn all_contexts(&mut self, a: usize, cap: usize) -> Result<Vec<BTreeSet<(usize, usize, VarSet)>>> {
        let trees = self.all_trees(cap)?;
        let lens: Vec<BTreeSet<(usize, VarSet)>> = trees
            .iter()
            .map(|t| t.iter().map(|(y, vs)| (y.iter().sum(), vs.clone())).collect())
            .collect();
        let g = self.g;
        let mut ctx: Vec<BTreeSet<(usize, usize, VarSet)>> = vec![BTreeSet::new(); g.variables().len()];
        loop {
            let mut added = 0;
            for p in g.productions() {
                for (i, s) in p.body.iter().enumerate() {
                    let Symbol::Var(y) = *s else { continue };
                    let mut acc: Contexts = ctx[y]
                        .iter()
                        .map(|(l, r, vs)| (*l, *r, vs.union(&VarSet::singleton(p.head))))
                        .collect();
                    if y == a {
                        acc.push((0, 0, VarSet::singleton(p.head)));
                    }
                    for (j, &o) in p.body.iter().enumerate() {
                        if j == i {
                            continue;
                        }
                        let side: Vec<(usize, VarSet)> = match o {
                            Symbol::Term(_) => vec![(1, VarSet::new())],
                            Symbol::Var(z) => lens[z].iter().cloned().collect(),
                        };
                        let mut next = Vec::new();
                        for (l, r, vs) in &acc {
                            for (n, vs2) in &side {
                                let (l, r) = if j < i { (l + n, *r) } else { (*l, r + n) };
                                if l + r <= cap {
                                    next.push((l, r, vs.union(vs2)));
                                }
                            }
                        }
                        acc = next;
                    }
                    for e in acc {
                        if ctx[p.head].insert(e) {
                            added += 1;
                        }
                    }
                }
            }
            if added == 0 {
                return Ok(ctx);
            }
            self.charge(added)?;
        }
    }
}

/// Summaries `(n_1..n_m, ν(T))` of short trees `S =>* a_1^n_1 .. a_m^n_m`.
pub fn enumerate_short_trees(
    g: &Grammar,
    alphabet: &[String],
    opts: TreeOptions,
) -> Result<Vec<ShortTreeSummary>> {
    let mut e = Enumerator::new(g, alphabet, opts.budget)?;
    let h = g.variables().len();
    let set: BTreeSet<(Vec<usize>, VarSet)> = match opts.scope {
        TreeScope::Simple => e.simple_trees(g.start(), &VarSet::new())?.iter().cloned().collect(),
        TreeScope::All => {
            let cap = pow2(h.saturating_sub(1));
            e.all_trees(cap)?.swap_remove(g.start())
        }
    };
    Ok(set
        .into_iter()
        .map(|(yields, varset)| ShortTreeSummary { yields, varset })
        .collect())
}

/// Summaries `(A, border(A), |v|, |x|, ν(U))` of partial trees
/// `U : A =>* v A x` with `vx` nonempty.
pub fn enumerate_partial_trees(
    g: &Grammar,
    alphabet: &[String],
    borders: &BorderTable,
    opts: TreeOptions,
) -> Result<Vec<PartialTreeSummary>> {
    let mut e = Enumerator::new(g, alphabet, opts.budget)?;
    let h = g.variables().len();
    let mut out = BTreeSet::new();
    for a in 0..h {
        let Some(border) = borders.get(a) else { continue };
        let contexts: Vec<(usize, usize, VarSet)> = match opts.scope {
            TreeScope::Simple => e.spine(a, a, &VarSet::singleton(a))?.as_ref().clone(),
            TreeScope::All => {
                let cap = pow2(h).saturating_sub(1);
                e.all_contexts(a, cap)?.swap_remove(a).into_iter().collect()
            }
        };
        for (l, r, varset) in contexts {
            if l + r > 0 {
                out.insert(PartialTreeSummary {
                    root: a,
                    border,
                    left_len: l,
                    right_len: r,
                    varset,
                });
            }
        }
    }
    Ok(out.into_iter().collect())
}
