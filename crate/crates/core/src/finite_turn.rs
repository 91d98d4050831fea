//! Letter-bounded grammars to finite-turn pushdown automata, and the
//! standard triple construction back to grammars.
//!
//! The automaton follows the guess-and-pump procedure: guess a short tree
//! `T`, read `a_1^n_1`, then repeatedly guess a partial tree `U : A =>* vAx`
//! whose border is not below the current work context, and finally drain
//! the remaining counters and stack. States are built on demand from the
//! start state, so only reachable combinations of counters, enabled
//! variables and pending micro-operations exist.
//!
//! The stack holds runs `a_j^p_j` over two symbols: `mark` per letter and
//! `sep` between letters, with the letter of the topmost run kept in the
//! state. Runs never end on a separator at rest, so separator pops always
//! follow a mark pop and never open a new turn.

use std::collections::{BTreeMap, HashMap, VecDeque};

use crate::error::{Error, Result};
use crate::grammar::{Grammar, GrammarBuilder, Production, Symbol};
use crate::pda::{Action, PdaBuilder, PdaMachine, PdaTransition};
use crate::transform::borders::{compute_borders, WorkContext};
use crate::transform::bounded::check_letter_bounded;
use crate::transform::normal::{binarize, eliminate_epsilon, eliminate_units, to_cnf};
use crate::transform::trees::{
    enumerate_partial_trees, enumerate_short_trees, PartialTreeSummary, TreeOptions,
};
use crate::transform::useless::{remove_useless, trim};
use crate::transform::varset::VarSet;

pub const BOTTOM: &str = "Z0";
pub const MARK: &str = "mark";
pub const SEP: &str = "sep";

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum Phase {
    Init,
    Loop,
    Drain,
    Accept,
}

/// Pending micro-operations. Letters are 1-based.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
enum Op {
    /// consumeInputAndCounter(j).
    Counter(usize),
    /// consumeInputAndStack(j).
    Stack(usize),
    Read(usize, usize),
    Push(usize, usize),
    Seps(usize),
    Marks(usize),
    PopMark,
    /// Pops separators left behind by an emptied run.
    Settle,
}

#[derive(Clone, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct ConstructionState {
    pub phase: Phase,
    /// Residual `n_1 .. n_m`.
    pub counters: Vec<usize>,
    pub enabled: VarSet,
    pub context: WorkContext,
    /// Letter of the topmost stack run; `None` for a bottom-only stack.
    pub top: Option<usize>,
    pending: VecDeque<Op>,
}

impl ConstructionState {
    /// True at an evaluation of the loop condition.
    pub fn at_rest(&self) -> bool {
        self.phase == Phase::Loop && self.pending.is_empty()
    }
}

/// The produced machine with the construction state behind every state
/// index (`None` for the initial state).
#[derive(Clone, Debug)]
pub struct FiniteTurnPda {
    pub machine: PdaMachine,
    pub states: Vec<Option<ConstructionState>>,
}

impl FiniteTurnPda {
    pub fn letter_of_top(&self, q: usize) -> Option<usize> {
        self.states[q].as_ref().and_then(|s| s.top)
    }

    /// Decodes an encoded stack (bottom first) into letter exponents
    /// `p_1..p_m`, given the letter of the topmost run.
    pub fn decode_stack(&self, stack: &[usize], top: Option<usize>, m: usize) -> Vec<usize> {
        let mark = self.machine.stack_index(MARK);
        let mut p = vec![0; m];
        let Some(mut t) = top else { return p };
        for &z in stack.iter().rev() {
            if Some(z) == mark {
                p[t - 1] += 1;
            } else if z != self.machine.bottom() {
                t += 1;
            }
        }
        p
    }
}

struct Builder<'a> {
    m: usize,
    partial: &'a [PartialTreeSummary],
    budget: usize,
    pda: PdaBuilder,
    index: HashMap<ConstructionState, usize>,
    states: Vec<Option<ConstructionState>>,
    queue: VecDeque<usize>,
    accept: Option<usize>,
    letters: Vec<usize>,
    mark: usize,
    sep: usize,
    bottom: usize,
}

impl Builder<'_> {
    /// Applies every micro-operation that needs no transition. Returns
    /// `None` for states that cannot lead to acceptance.
    fn settle(&self, mut s: ConstructionState) -> Option<ConstructionState> {
        while let Some(&op) = s.pending.front() {
            match op {
                Op::Counter(j) if s.counters[j - 1] == 0 => {}
                Op::Stack(j) if s.top != Some(j) => {}
                Op::Read(_, 0) | Op::Push(_, 0) | Op::Seps(0) | Op::Marks(0) => {}
                Op::Push(j, c) => {
                    s.pending.pop_front();
                    match s.top {
                        None => s.pending.push_front(Op::Marks(c)),
                        Some(t) if t == j => s.pending.push_front(Op::Marks(c)),
                        Some(t) if t > j => {
                            s.pending.push_front(Op::Marks(c));
                            s.pending.push_front(Op::Seps(t - j));
                        }
                        Some(_) => return None,
                    }
                    s.top = Some(j);
                    continue;
                }
                _ => break,
            }
            s.pending.pop_front();
        }
        if s.phase == Phase::Drain && s.pending.is_empty() {
            if s.top.is_some() {
                return None;
            }
            s = ConstructionState {
                phase: Phase::Accept,
                counters: vec![0; self.m],
                enabled: VarSet::new(),
                context: WorkContext::new(self.m, self.m),
                top: None,
                pending: VecDeque::new(),
            };
        }
        Some(s)
    }

    fn intern(&mut self, s: ConstructionState) -> Result<usize> {
        if let Some(&q) = self.index.get(&s) {
            return Ok(q);
        }
        if self.states.len() >= self.budget {
            return Err(Error::Budget {
                what: "construction states",
                limit: self.budget,
            });
        }
        let name = if s.phase == Phase::Accept {
            "accept".to_string()
        } else {
            format!("q{}", self.states.len())
        };
        let q = self.pda.state(name);
        if s.phase == Phase::Accept {
            self.pda.accept(q);
            self.accept = Some(q);
        }
        self.index.insert(s.clone(), q);
        self.states.push(Some(s));
        self.queue.push_back(q);
        Ok(q)
    }

    fn edge(
        &mut self,
        from: usize,
        read: Option<usize>,
        top: Option<usize>,
        next: ConstructionState,
        action: Action,
    ) -> Result<()> {
        if let Some(next) = self.settle(next) {
            let to = self.intern(next)?;
            self.pda.add(PdaTransition {
                from,
                read: read.map(|j| self.letters[j - 1]),
                top,
                to,
                action,
            });
        }
        Ok(())
    }

    fn guesses(&self, s: &ConstructionState) -> Vec<ConstructionState> {
        let (l, r) = (s.context.l, s.context.r);
        let mut out = Vec::new();
        for u in self.partial {
            if !s.enabled.contains(u.root) || s.context > u.border {
                continue;
            }
            let (la, ra) = (u.border.l, u.border.r);
            let mut ops = VecDeque::new();
            if r < ra {
                for j in l + 1..r {
                    ops.push_back(Op::Counter(j));
                }
                for j in r..=la {
                    ops.push_back(Op::Counter(j));
                    ops.push_back(Op::Stack(j));
                }
            } else {
                for j in l + 1..=la {
                    ops.push_back(Op::Counter(j));
                }
            }
            ops.push_back(Op::Read(la, u.left_len));
            if ra != la {
                ops.push_back(Op::Push(ra, u.right_len));
            } else {
                ops.push_back(Op::Read(la, u.right_len));
            }
            out.push(ConstructionState {
                phase: Phase::Loop,
                counters: s.counters.clone(),
                enabled: s.enabled.union(&u.varset),
                context: u.border,
                top: s.top,
                pending: ops,
            });
        }
        let (l, r) = (s.context.l, s.context.r);
        let mut ops = VecDeque::new();
        for j in l + 1..r {
            ops.push_back(Op::Counter(j));
        }
        for j in r..=self.m {
            ops.push_back(Op::Counter(j));
            ops.push_back(Op::Stack(j));
        }
        out.push(ConstructionState {
            phase: Phase::Drain,
            pending: ops,
            ..s.clone()
        });
        out
    }

    fn expand(&mut self, q: usize) -> Result<()> {
        let s = self.states[q].clone().expect("only the initial state is unnamed");
        if s.phase == Phase::Accept {
            return Ok(());
        }
        let Some(&op) = s.pending.front() else {
            for next in self.guesses(&s) {
                self.edge(q, None, None, next, Action::Stay)?;
            }
            return Ok(());
        };
        let mut next = s.clone();
        next.pending.pop_front();
        match op {
            Op::Counter(j) => {
                next.counters[j - 1] -= 1;
                next.pending.push_front(op);
                self.edge(q, Some(j), None, next, Action::Stay)
            }
            Op::Stack(j) => {
                next.pending.push_front(op);
                next.pending.push_front(Op::PopMark);
                self.edge(q, Some(j), Some(self.mark), next, Action::Stay)
            }
            Op::Read(j, c) => {
                next.pending.push_front(Op::Read(j, c - 1));
                self.edge(q, Some(j), None, next, Action::Stay)
            }
            Op::Seps(k) => {
                next.pending.push_front(Op::Seps(k - 1));
                self.edge(q, None, None, next, Action::Push(self.sep))
            }
            Op::Marks(c) => {
                next.pending.push_front(Op::Marks(c - 1));
                self.edge(q, None, None, next, Action::Push(self.mark))
            }
            Op::PopMark => {
                next.pending.push_front(Op::Settle);
                self.edge(q, None, Some(self.mark), next, Action::Pop)
            }
            Op::Settle => {
                self.edge(q, None, Some(self.mark), next.clone(), Action::Stay)?;
                if next.top < Some(self.m) {
                    let mut up = next.clone();
                    up.top = up.top.map(|t| t + 1);
                    up.pending.push_front(Op::Settle);
                    self.edge(q, None, Some(self.sep), up, Action::Pop)?;
                }
                next.top = None;
                self.edge(q, None, Some(self.bottom), next, Action::Stay)
            }
            Op::Push(..) => unreachable!("pushes are resolved when settling"),
        }
    }
}

/// Builds the `(m-1)`-turn automaton for a letter-bounded grammar whose
/// bodies have length at most two.
pub fn build_finite_turn_pda(
    g: &Grammar,
    alphabet: &[String],
    opts: TreeOptions,
) -> Result<FiniteTurnPda> {
    let m = alphabet.len();
    if m == 0 {
        return Err(Error::Precondition("empty alphabet".into()));
    }
    if g.max_body_len() > 2 {
        return Err(Error::Precondition("bodies longer than two symbols".into()));
    }
    if let Some(w) = check_letter_bounded(g, alphabet) {
        return Err(Error::NotBounded(crate::text::fmt_word(&w)));
    }
    let borders = compute_borders(g, alphabet)?;
    let short = enumerate_short_trees(g, alphabet, opts)?;
    let partial = enumerate_partial_trees(g, alphabet, &borders, opts)?;

    let mut pda = PdaBuilder::new();
    let bottom = pda.stack(BOTTOM);
    let mark = pda.stack(MARK);
    let sep = pda.stack(SEP);
    let letters: Vec<usize> = alphabet.iter().map(|a| pda.input(a)).collect();
    let init = pda.state("init");
    let mut b = Builder {
        m,
        partial: &partial,
        budget: opts.budget,
        pda,
        index: HashMap::new(),
        states: vec![None],
        queue: VecDeque::new(),
        accept: None,
        letters,
        mark,
        sep,
        bottom,
    };
    for t in &short {
        let s = ConstructionState {
            phase: Phase::Loop,
            counters: t.yields.clone(),
            enabled: t.varset.clone(),
            context: WorkContext::new(1, m),
            top: None,
            pending: VecDeque::from([Op::Counter(1)]),
        };
        b.edge(init, None, None, s, Action::Stay)?;
    }
    while let Some(q) = b.queue.pop_front() {
        b.expand(q)?;
    }
    if g.epsilon_stripped() {
        b.pda.accept(init);
    }
    let states = b.states;
    let machine = b.pda.build(init, bottom, Some(m - 1))?;
    Ok(FiniteTurnPda { machine, states })
}

/// Intermediate grammars of the pipeline, kept for reporting.
#[derive(Clone, Debug)]
pub struct Pipeline {
    pub trimmed: Grammar,
    pub binarized: Grammar,
    pub result: FiniteTurnPda,
}

/// Removes useless variables, binarizes and builds the automaton.
pub fn cfg_to_finite_turn_pipeline(
    g: &Grammar,
    alphabet: &[String],
    opts: TreeOptions,
) -> Result<Pipeline> {
    let trimmed = remove_useless(g)?;
    let binarized = trim(&eliminate_units(&binarize(&trimmed)));
    let result = build_finite_turn_pda(&binarized, alphabet, opts)?;
    Ok(Pipeline {
        trimmed,
        binarized,
        result,
    })
}

/// Triple variables `[p,X,q]` generate the inputs read while going from
/// `p` with `X` on top to `q` with `X` just popped. For the bottom the
/// variable `[p,Z0,F]` instead ends in an accepting state. The grammar is
/// returned in Chomsky normal form; the flag records the empty word.
pub fn pda_to_cfg(m: &PdaMachine) -> Grammar {
    let trans = m.concrete_transitions();
    let mut out_of: Vec<Vec<&PdaTransition>> = vec![Vec::new(); m.states().len()];
    for t in &trans {
        out_of[t.from].push(t);
    }
    let st = m.states();
    let sk = m.stack();
    let z = m.bottom();
    let mut gb = GrammarBuilder::new();
    for a in m.input() {
        gb.term(a);
    }
    let name = |p: usize, x: usize, q: Option<usize>| match q {
        Some(q) => format!("[{},{},{}]", st[p], sk[x], st[q]),
        None => format!("[{},{},F]", st[p], sk[x]),
    };
    let start = gb.var(name(m.start(), z, None));
    let mut seen: BTreeMap<(usize, usize, Option<usize>), usize> = BTreeMap::new();
    seen.insert((m.start(), z, None), start);
    let mut work = vec![(m.start(), z, None)];
    let mut prods: Vec<Production> = Vec::new();
    let mut var = |key: (usize, usize, Option<usize>),
                   gb: &mut GrammarBuilder,
                   work: &mut Vec<(usize, usize, Option<usize>)>| {
        *seen.entry(key).or_insert_with(|| {
            work.push(key);
            gb.var(name(key.0, key.1, key.2))
        })
    };
    while let Some(key @ (p, x, q)) = work.pop() {
        let head = var(key, &mut gb, &mut work);
        if q.is_none() && m.is_accepting(p) {
            prods.push(Production { head, body: vec![] });
        }
        for t in &out_of[p] {
            if t.top != Some(x) {
                continue;
            }
            match t.action {
                Action::Pop => {
                    if Some(t.to) == q {
                        prods.push(Production { head, body: vec![] });
                    }
                }
                Action::Stay => {
                    let rest = Symbol::Var(var((t.to, x, q), &mut gb, &mut work));
                    let body = match t.read {
                        Some(a) => vec![Symbol::Term(a), rest],
                        None => vec![rest],
                    };
                    prods.push(Production { head, body });
                }
                Action::Push(y) => {
                    for s in 0..st.len() {
                        let inner = var((t.to, y, Some(s)), &mut gb, &mut work);
                        let outer = var((s, x, q), &mut gb, &mut work);
                        prods.push(Production {
                            head,
                            body: vec![Symbol::Var(inner), Symbol::Var(outer)],
                        });
                    }
                }
            }
        }
    }
    let (vars, terms, _) = gb.into_parts();
    let g = eliminate_epsilon(vars, terms, start, prods);
    trim(&to_cnf(&trim(&g)))
}
