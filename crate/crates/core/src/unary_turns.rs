//! Unary pushdown automata to finite automata.
//!
//! A segment `L(q1,A,q2)` collects the inputs read by computations that
//! start in `q1` and end in `q2` at the same stack height with `A` on top
//! and never go below it. Since the input is unary, a segment can be read
//! from both ends at once: forward stay moves advance the left state,
//! backward stay moves retreat the right state, and a push is paired with
//! the pop that undoes it. For several turns the segment splits into
//! sub-segments with their own turn budgets; the automaton keeps the
//! pending sub-segments in its state and always works on the one with the
//! smallest budget.

use std::collections::{HashMap, VecDeque};

use crate::error::{Error, Result};
use crate::nfa::{NfaMachine, NfaTransition};
use crate::pda::{Action, PdaMachine};

pub const DEFAULT_STATE_BUDGET: usize = 500_000;

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct SegmentQuery {
    pub from: String,
    pub top: String,
    pub to: String,
    pub turn_budget: Option<usize>,
}

impl SegmentQuery {
    pub fn new(from: &str, top: &str, to: &str) -> Self {
        SegmentQuery {
            from: from.into(),
            top: top.into(),
            to: to.into(),
            turn_budget: None,
        }
    }

    pub fn with_budget(mut self, j: usize) -> Self {
        self.turn_budget = Some(j);
        self
    }

    fn resolve(&self, m: &PdaMachine) -> Result<(usize, usize, usize)> {
        let state = |n: &str| {
            m.state_index(n).ok_or_else(|| Error::Unknown {
                kind: "state",
                name: n.to_string(),
            })
        };
        let top = m.stack_index(&self.top).ok_or_else(|| Error::Unknown {
            kind: "stack symbol",
            name: self.top.clone(),
        })?;
        Ok((state(&self.from)?, top, state(&self.to)?))
    }
}

/// `(p, Z, q, remaining turns)`.
pub type Quad = (usize, usize, usize, usize);

/// Pending sub-segments; the last entry is the one being simulated.
pub type SententialState = Vec<Quad>;

/// Transition tables of a normal-form machine, indexed for the segment
/// rules.
pub(crate) struct Moves {
    pub(crate) q: usize,
    g: usize,
    /// `(p, Z) -> [(read, p')]` for stay moves.
    fwd: Vec<Vec<(Option<usize>, usize)>>,
    /// `(q, Z) -> [(read, q')]` for stay moves `q' -> q`.
    back: Vec<Vec<(Option<usize>, usize)>>,
    /// `(p, Z) -> [(p', Z')]` for pushes.
    push: Vec<Vec<(usize, usize)>>,
    /// `(q, Z') -> [q']` for pops `q' -> q` of `Z'`.
    pop: Vec<Vec<usize>>,
    /// Segments `(p, Z, q)` that have at least one computation.
    live: Vec<bool>,
}

impl Moves {
    fn new(m: &PdaMachine) -> Result<Self> {
        if m.input().len() != 1 {
            return Err(Error::Precondition(format!(
                "unary input expected, found {} letters",
                m.input().len()
            )));
        }
        Ok(Self::filtered(m, |_| true))
    }

    /// Moves that read nothing or the given input letter.
    pub(crate) fn restricted(m: &PdaMachine, letter: usize) -> Self {
        Self::filtered(m, |a| a == letter)
    }

    /// All moves of the machine, whatever they read.
    pub(crate) fn all(m: &PdaMachine) -> Self {
        Self::filtered(m, |_| true)
    }

    pub(crate) fn filtered(m: &PdaMachine, keep: impl Fn(usize) -> bool) -> Self {
        let (q, g) = (m.states().len(), m.stack().len());
        let mut mv = Moves {
            q,
            g,
            fwd: vec![Vec::new(); q * g],
            back: vec![Vec::new(); q * g],
            push: vec![Vec::new(); q * g],
            pop: vec![Vec::new(); q * g],
            live: Vec::new(),
        };
        for t in m.concrete_transitions() {
            if t.read.is_some_and(|a| !keep(a)) {
                continue;
            }
            let z = t.top.expect("concrete");
            match t.action {
                Action::Stay => {
                    mv.fwd[t.from * g + z].push((t.read, t.to));
                    mv.back[t.to * g + z].push((t.read, t.from));
                }
                Action::Push(y) => mv.push[t.from * g + z].push((t.to, y)),
                Action::Pop => mv.pop[t.to * g + z].push(t.from),
            }
        }
        mv.live = mv.live_segments();
        mv
    }

    fn seg(&self, p: usize, z: usize, q: usize) -> usize {
        (p * self.g + z) * self.q + q
    }

    pub(crate) fn is_live(&self, p: usize, z: usize, q: usize) -> bool {
        self.live[self.seg(p, z, q)]
    }

    fn live_segments(&self) -> Vec<bool> {
        let (nq, g) = (self.q, self.g);
        let mut live = vec![false; nq * nq * g];
        for p in 0..nq {
            for z in 0..g {
                live[self.seg(p, z, p)] = true;
            }
        }
        loop {
            let mut changed = false;
            for p in 0..nq {
                for z in 0..g {
                    for q in 0..nq {
                        let i = self.seg(p, z, q);
                        if live[i] {
                            continue;
                        }
                        let ok = self.fwd[p * g + z].iter().any(|&(_, p2)| live[self.seg(p2, z, q)])
                            || self.matched(p, z, q).iter().any(|&(p2, y, q2)| live[self.seg(p2, y, q2)])
                            || (0..nq).any(|r| r != p && r != q && live[self.seg(p, z, r)] && live[self.seg(r, z, q)]);
                        if ok {
                            live[i] = true;
                            changed = true;
                        }
                    }
                }
            }
            if !changed {
                return live;
            }
        }
    }

    pub(crate) fn forward(&self, p: usize, z: usize) -> &[(Option<usize>, usize)] {
        &self.fwd[p * self.g + z]
    }

    pub(crate) fn backward(&self, q: usize, z: usize) -> &[(Option<usize>, usize)] {
        &self.back[q * self.g + z]
    }

    /// `(p', Z', q')` such that `p` pushes `Z'` going to `p'` and `q'`
    /// pops `Z'` going to `q`.
    pub(crate) fn matched(&self, p: usize, z: usize, q: usize) -> Vec<(usize, usize, usize)> {
        let g = self.g;
        let mut out = Vec::new();
        for &(p2, y) in &self.push[p * g + z] {
            for &q2 in &self.pop[q * g + y] {
                out.push((p2, y, q2));
            }
        }
        out
    }

    /// Successors of `(p, Z, q)` under the three segment rules.
    pub(crate) fn steps(&self, p: usize, z: usize, q: usize) -> Vec<(Option<usize>, (usize, usize, usize))> {
        let g = self.g;
        let mut out = Vec::new();
        for &(a, p2) in &self.fwd[p * g + z] {
            out.push((a, (p2, z, q)));
        }
        for &(a, q2) in &self.back[q * g + z] {
            out.push((a, (p, z, q2)));
        }
        out.extend(self.matched(p, z, q).into_iter().map(|t| (None, t)));
        out.retain(|&(_, (p2, z2, q2))| self.is_live(p2, z2, q2));
        out
    }
}

/// One derivation step on the sub-segment being simulated: a stay, a
/// push/pop pair, its elimination when it is finished, or a split in which
/// the part with fewer remaining turns goes on top.
pub(crate) fn sentential_steps(mv: &Moves, s: &SententialState) -> Vec<(Option<usize>, SententialState)> {
    let Some(&(p, z, q, b)) = s.last() else {
        return Vec::new();
    };
    let rest = &s[..s.len() - 1];
    let mut next = Vec::new();
    for (a, (p2, z2, q2)) in mv.steps(p, z, q) {
        let mut t = rest.to_vec();
        t.push((p2, z2, q2, b));
        next.push((a, t));
    }
    if b == 1 && p == q {
        next.push((None, rest.to_vec()));
    }
    for r in (0..mv.q).filter(|&r| mv.is_live(p, z, r) && mv.is_live(r, z, q)) {
        for i1 in 1..b {
            for i2 in 1..=b - i1 {
                let left = (p, z, r, i1);
                let right = (r, z, q, i2);
                let mut t = rest.to_vec();
                if i1 <= i2 {
                    t.push(right);
                    t.push(left);
                } else {
                    t.push(left);
                    t.push(right);
                }
                next.push((None, t));
            }
        }
    }
    next
}

fn unary_alphabet(m: &PdaMachine) -> Vec<String> {
    m.input().to_vec()
}

/// The automaton for a one-turn segment over all states `Q x Γ x Q`,
/// before trimming.
pub fn one_turn_segment_nfa(m: &PdaMachine, query: &SegmentQuery) -> Result<NfaMachine> {
    let (q1, a, q2) = query.resolve(m)?;
    let mv = Moves::new(m)?;
    let (nq, ng) = (mv.q, mv.g);
    let ix = |p: usize, z: usize, q: usize| (p * ng + z) * nq + q;
    let mut states = Vec::with_capacity(nq * nq * ng);
    let mut accepting = Vec::new();
    let mut trans: Vec<NfaTransition> = Vec::new();
    for p in 0..nq {
        for z in 0..ng {
            for q in 0..nq {
                states.push(format!("[{},{},{}]", m.states()[p], m.stack()[z], m.states()[q]));
                if p == q {
                    accepting.push(ix(p, z, q));
                }
                for (read, (p2, z2, q2)) in mv.steps(p, z, q) {
                    trans.push((ix(p, z, q), read, ix(p2, z2, q2)));
                }
            }
        }
    }
    trans.sort_unstable();
    trans.dedup();
    NfaMachine::new(states, unary_alphabet(m), ix(q1, a, q2), accepting, trans)
}

/// One-turn machine to a finite automaton: a fresh start state guesses the
/// accepting state in which the computation ends.
pub fn one_turn_pda_to_nfa(m: &PdaMachine) -> Result<NfaMachine> {
    let z0 = m.stack()[m.bottom()].clone();
    let q0 = m.states()[m.start()].clone();
    let base = one_turn_segment_nfa(m, &SegmentQuery::new(&q0, &z0, &q0))?;
    let mut states = vec!["start".to_string()];
    states.extend(base.states().iter().cloned());
    let (nq, ng) = (m.states().len(), m.stack().len());
    let mut trans: Vec<NfaTransition> = base
        .transitions()
        .iter()
        .map(|&(p, a, q)| (p + 1, a, q + 1))
        .collect();
    for &f in m.accepting() {
        trans.push((0, None, 1 + (m.start() * ng + m.bottom()) * nq + f));
    }
    let accepting = base.accepting().iter().map(|q| q + 1).collect();
    NfaMachine::new(states, base.alphabet().to_vec(), 0, accepting, trans)
}

/// A segment automaton over sentential states, with the largest sequence
/// length met during construction.
#[derive(Clone, Debug)]
pub struct KturnNfa {
    pub nfa: NfaMachine,
    pub max_sequence_len: usize,
    pub sequences: Vec<SententialState>,
}

fn seq_name(m: &PdaMachine, s: &SententialState) -> String {
    if s.is_empty() {
        return "done".to_string();
    }
    s.iter()
        .map(|&(p, z, q, i)| format!("[{},{},{},{i}]", m.states()[p], m.stack()[z], m.states()[q]))
        .collect()
}

struct SeqBuilder<'a> {
    m: &'a PdaMachine,
    mv: Moves,
    budget: usize,
    index: HashMap<SententialState, usize>,
    seqs: Vec<SententialState>,
    names: Vec<String>,
    trans: Vec<NfaTransition>,
    queue: VecDeque<usize>,
    max_len: usize,
}

impl SeqBuilder<'_> {
    fn intern(&mut self, s: SententialState) -> Result<usize> {
        if let Some(&i) = self.index.get(&s) {
            return Ok(i);
        }
        if self.seqs.len() >= self.budget {
            return Err(Error::Budget {
                what: "sentential states",
                limit: self.budget,
            });
        }
        let i = self.names.len();
        self.max_len = self.max_len.max(s.len());
        self.names.push(seq_name(self.m, &s));
        self.index.insert(s.clone(), i);
        self.seqs.push(s);
        self.queue.push_back(i);
        Ok(i)
    }

    fn expand(&mut self, i: usize) -> Result<()> {
        let next = sentential_steps(&self.mv, &self.seqs[i]);
        for (a, t) in next {
            let j = self.intern(t)?;
            self.trans.push((i, a, j));
        }
        Ok(())
    }
}

fn build_sequences(
    m: &PdaMachine,
    roots: &[SententialState],
    fresh: bool,
    budget: usize,
) -> Result<KturnNfa> {
    let mut b = SeqBuilder {
        m,
        mv: Moves::new(m)?,
        budget,
        index: HashMap::new(),
        seqs: Vec::new(),
        names: Vec::new(),
        trans: Vec::new(),
        queue: VecDeque::new(),
        max_len: 0,
    };
    if fresh {
        b.names.push("start".to_string());
        b.seqs.push(Vec::new());
    }
    for r in roots {
        let j = b.intern(r.clone())?;
        if fresh {
            b.trans.push((0, None, j));
        }
    }
    while let Some(i) = b.queue.pop_front() {
        b.expand(i)?;
    }
    b.trans.sort_unstable();
    b.trans.dedup();
    let accepting = (usize::from(fresh)..b.seqs.len())
        .filter(|&i| b.seqs[i].is_empty())
        .collect();
    let nfa = NfaMachine::new(b.names, unary_alphabet(m), 0, accepting, b.trans)?;
    Ok(KturnNfa {
        nfa,
        max_sequence_len: b.max_len,
        sequences: b.seqs,
    })
}

/// Segment automaton with a turn budget `j` (default 1).
pub fn kturn_segment_nfa(m: &PdaMachine, query: &SegmentQuery, budget: usize) -> Result<KturnNfa> {
    let (q1, a, q2) = query.resolve(m)?;
    let j = query.turn_budget.unwrap_or(1);
    if j == 0 {
        return Err(Error::Precondition("turn budget must be at least 1".into()));
    }
    build_sequences(m, &[vec![(q1, a, q2, j)]], false, budget)
}

/// `k`-turn unary machine to a finite automaton: a fresh start state
/// guesses the final accepting state, and the accepting computation is
/// simulated as a segment of level `Z0`.
pub fn kturn_unary_pda_to_nfa(m: &PdaMachine, k: usize, budget: usize) -> Result<KturnNfa> {
    let j = k.max(1);
    let roots: Vec<SententialState> = m
        .accepting()
        .iter()
        .map(|&f| vec![(m.start(), m.bottom(), f, j)])
        .collect();
    build_sequences(m, &roots, true, budget)
}
