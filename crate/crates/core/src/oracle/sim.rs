//! Bounded breadth-first search over pushdown configurations.

use std::collections::{HashMap, HashSet, VecDeque};

use crate::loose::{Acceptance, LooseAction, LoosePda};
use crate::pda::{Action, PdaMachine};

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct SearchCaps {
    pub max_stack: usize,
    pub max_eps_run: usize,
    pub max_steps: usize,
    pub max_turns: Option<usize>,
}

impl SearchCaps {
    /// Stack ≤ 4|w|+8, ε-run ≤ |Q|·|Γ|·stack cap, 10^6 steps.
    pub fn for_input(m: &PdaMachine, len: usize) -> Self {
        let max_stack = 4 * len + 8;
        SearchCaps {
            max_stack,
            max_eps_run: m.states().len() * m.stack().len() * max_stack,
            max_steps: 1_000_000,
            max_turns: None,
        }
    }

    /// Applies `stack=..,steps=..,eps=..,turns=..` overrides.
    pub fn with_overrides(mut self, o: &CapOverrides) -> Self {
        if let Some(s) = o.stack {
            self.max_stack = s;
        }
        if let Some(s) = o.steps {
            self.max_steps = s;
        }
        if let Some(s) = o.eps {
            self.max_eps_run = s;
        }
        if o.turns.is_some() {
            self.max_turns = o.turns;
        }
        self
    }
}

#[derive(Clone, Copy, Debug, Default, PartialEq, Eq)]
pub struct CapOverrides {
    pub stack: Option<usize>,
    pub steps: Option<usize>,
    pub eps: Option<usize>,
    pub turns: Option<usize>,
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Configuration {
    pub state: usize,
    pub pos: usize,
    /// Bottom first.
    pub stack: Vec<usize>,
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct ComputationTrace {
    pub configs: Vec<Configuration>,
    /// Index into the machine's transition list for each step.
    pub steps: Vec<usize>,
}

impl ComputationTrace {
    pub fn heights(&self) -> Vec<usize> {
        self.configs.iter().map(|c| c.stack.len()).collect()
    }

    /// Number of switches from a rising to a falling stack height.
    pub fn turns(&self) -> usize {
        turns_of_profile(&self.heights())
    }
}

/// Counts push-to-pop switches in a height profile.
pub fn turns_of_profile(h: &[usize]) -> usize {
    let mut turns = 0;
    let mut rising = false;
    for w in h.windows(2) {
        if w[1] > w[0] {
            rising = true;
        } else if w[1] < w[0] && rising {
            turns += 1;
            rising = false;
        }
    }
    turns
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub enum SearchResult {
    Accepted(ComputationTrace),
    Rejected,
    Inconclusive,
}

impl SearchResult {
    pub fn verdict(&self) -> Option<bool> {
        match self {
            SearchResult::Accepted(_) => Some(true),
            SearchResult::Rejected => Some(false),
            SearchResult::Inconclusive => None,
        }
    }
}

/// Hash-consed stacks: node 0 is the bottom.
struct Arena {
    nodes: Vec<(usize, u32, u32)>,
    index: HashMap<(usize, u32), u32>,
}

impl Arena {
    fn new(bottom: usize) -> Self {
        Arena {
            nodes: vec![(bottom, u32::MAX, 1)],
            index: HashMap::new(),
        }
    }

    fn push(&mut self, parent: u32, sym: usize) -> u32 {
        if let Some(&id) = self.index.get(&(sym, parent)) {
            return id;
        }
        let id = self.nodes.len() as u32;
        let h = self.nodes[parent as usize].2 + 1;
        self.nodes.push((sym, parent, h));
        self.index.insert((sym, parent), id);
        id
    }

    fn top(&self, n: u32) -> usize {
        self.nodes[n as usize].0
    }

    fn parent(&self, n: u32) -> u32 {
        self.nodes[n as usize].1
    }

    fn height(&self, n: u32) -> usize {
        self.nodes[n as usize].2 as usize
    }

    fn content(&self, mut n: u32) -> Vec<usize> {
        let mut out = Vec::new();
        while n != u32::MAX {
            out.push(self.nodes[n as usize].0);
            n = self.nodes[n as usize].1;
        }
        out.reverse();
        out
    }
}

/// Lower bounds on the input a stack cell costs before it can disappear.
struct Pruner {
    /// `eps_pop[q]`: symbols X such that from q with X on top, X can be
    /// removed by ε-moves.
    eps_pop: Vec<HashSet<usize>>,
    /// States that can remove any top symbol by ε-moves.
    eps_pop_any: Vec<bool>,
    /// Weight of X when it is below the top.
    below: Vec<usize>,
    bottom: usize,
}

impl Pruner {
    /// Above this many `(p, X, q)` triples the coarse analysis is used.
    const LIMIT: usize = 4_000_000;

    fn new(m: &PdaMachine) -> Pruner {
        let nq = m.states().len();
        let nz = m.stack().len();
        let (eps_pop, eps_pop_any) = if nq.saturating_mul(nq).saturating_mul(nz) > Self::LIMIT {
            Self::coarse(m)
        } else {
            (Self::exact(m), vec![false; nq])
        };
        let mut exposed = vec![false; nq];
        for t in m.transitions() {
            if t.action == Action::Pop {
                exposed[t.to] = true;
            }
        }
        let mut free = vec![false; nz];
        let mut free_any = false;
        for p in (0..nq).filter(|&p| exposed[p]) {
            free_any |= eps_pop_any[p];
            for &z in &eps_pop[p] {
                free[z] = true;
            }
        }
        let below = (0..nz)
            .map(|z| usize::from(z != m.bottom() && !free_any && !free[z]))
            .collect();
        Pruner {
            eps_pop,
            eps_pop_any,
            below,
            bottom: m.bottom(),
        }
    }

    /// Tracks the states reached by each ε-pop, so pushes are matched exactly.
    fn exact(m: &PdaMachine) -> Vec<HashSet<usize>> {
        let nq = m.states().len();
        let nz = m.stack().len();
        let trans = m.concrete_transitions();
        // e[q][X] = set of states p with an ε-computation popping X.
        let mut e: Vec<Vec<HashSet<usize>>> = vec![vec![HashSet::new(); nz]; nq];
        loop {
            let mut changed = false;
            for t in trans.iter().filter(|t| t.read.is_none()) {
                let z = t.top.expect("concrete");
                let add: Vec<usize> = match t.action {
                    Action::Pop => vec![t.to],
                    Action::Stay => e[t.to][z].iter().copied().collect(),
                    Action::Push(y) => e[t.to][y]
                        .iter()
                        .flat_map(|&r| e[r][z].iter().copied())
                        .collect(),
                };
                for p in add {
                    if e[t.from][z].insert(p) {
                        changed = true;
                    }
                }
            }
            if !changed {
                break;
            }
        }
        e.iter()
            .map(|r| (0..nz).filter(|&z| !r[z].is_empty()).collect())
            .collect()
    }

    /// Forgets where an ε-pop ends: after a push, the symbol below counts as
    /// removable as soon as some state can remove it.
    fn coarse(m: &PdaMachine) -> (Vec<HashSet<usize>>, Vec<bool>) {
        let nq = m.states().len();
        let nz = m.stack().len();
        let mut ep: Vec<HashSet<usize>> = vec![HashSet::new(); nq];
        let mut any = vec![false; nq];
        let mut free = vec![false; nz];
        let mut free_any = false;
        let eps: Vec<_> = m.transitions().iter().filter(|t| t.read.is_none()).collect();
        loop {
            let mut changed = false;
            for t in &eps {
                let (from, to) = (t.from, t.to);
                if any[from] {
                    continue;
                }
                let can = |ep: &[HashSet<usize>], q: usize, z: usize| any[q] || ep[q].contains(&z);
                let mut add = Vec::new();
                let mut all = false;
                match (t.action, t.top) {
                    (Action::Pop, Some(z)) => add.push(z),
                    (Action::Pop, None) => all = true,
                    (Action::Stay, Some(z)) => {
                        if can(&ep, to, z) {
                            add.push(z);
                        }
                    }
                    (Action::Stay, None) => {
                        if any[to] {
                            all = true;
                        } else {
                            add.extend(ep[to].iter().copied());
                        }
                    }
                    (Action::Push(y), Some(z)) => {
                        if can(&ep, to, y) && (free_any || free[z]) {
                            add.push(z);
                        }
                    }
                    (Action::Push(y), None) => {
                        if can(&ep, to, y) && (free_any || free.iter().any(|&f| f)) {
                            all = true;
                        }
                    }
                }
                if all {
                    any[from] = true;
                    free_any = true;
                    changed = true;
                    continue;
                }
                for z in add {
                    if ep[from].insert(z) {
                        free[z] = true;
                        changed = true;
                    }
                }
            }
            if !changed {
                return (ep, any);
            }
        }
    }

    fn top_weight(&self, q: usize, z: usize) -> usize {
        usize::from(z != self.bottom && !self.eps_pop_any[q] && !self.eps_pop[q].contains(&z))
    }
}

struct Node {
    state: usize,
    pos: usize,
    stack: u32,
    weight_below: usize,
    eps_run: usize,
    turns: usize,
    rising: bool,
    parent: usize,
    via: usize,
}

/// Shared search driver. With `count_turns`, the search is a 0-1 BFS that
/// minimizes turns; otherwise a plain BFS.
fn search(m: &PdaMachine, w: &[usize], caps: SearchCaps, count_turns: bool) -> (SearchResult, Option<usize>) {
    let by_state = m.by_state();
    let trans = m.transitions();
    let pruner = Pruner::new(m);
    let mut arena = Arena::new(m.bottom());
    let mut nodes: Vec<Node> = Vec::new();
    // Visited keyed on configuration (and phase when counting turns) with
    // the best turn count seen.
    let mut visited: HashMap<(usize, usize, u32, bool), usize> = HashMap::new();
    let mut deque: VecDeque<usize> = VecDeque::new();
    let mut capped = false;
    nodes.push(Node {
        state: m.start(),
        pos: 0,
        stack: 0,
        weight_below: 0,
        eps_run: 0,
        turns: 0,
        rising: false,
        parent: usize::MAX,
        via: usize::MAX,
    });
    visited.insert((m.start(), 0, 0, false), 0);
    deque.push_back(0);
    let mut steps = 0usize;
    while let Some(id) = deque.pop_front() {
        let (q, pos, st, wb, er, turns, rising) = {
            let n = &nodes[id];
            (n.state, n.pos, n.stack, n.weight_below, n.eps_run, n.turns, n.rising)
        };
        if count_turns && visited.get(&(q, pos, st, rising)).is_some_and(|&t| t < turns) {
            continue;
        }
        if pos == w.len() && st == 0 && m.is_accepting(q) {
            return (SearchResult::Accepted(rebuild(&nodes, &arena, id)), Some(turns));
        }
        steps += 1;
        if steps > caps.max_steps {
            return (SearchResult::Inconclusive, None);
        }
        let top = arena.top(st);
        for &ti in &by_state[q] {
            let t = &trans[ti];
            if !t.matches_top(top) {
                continue;
            }
            let (npos, ner) = match t.read {
                Some(a) => {
                    if pos < w.len() && w[pos] == a {
                        (pos + 1, 0)
                    } else {
                        continue;
                    }
                }
                None => (pos, er + 1),
            };
            if ner > caps.max_eps_run {
                capped = true;
                continue;
            }
            let (nst, nwb, nturns, nrising) = match t.action {
                Action::Stay => (st, wb, turns, rising),
                Action::Pop => {
                    let parent = arena.parent(st);
                    let pw = pruner.below[arena.top(parent)];
                    let (nt, nr) = if rising { (turns + 1, false) } else { (turns, false) };
                    (parent, wb - pw, nt, nr)
                }
                Action::Push(b) => {
                    if arena.height(st) + 1 > caps.max_stack {
                        capped = true;
                        continue;
                    }
                    let cw = pruner.below[top];
                    (arena.push(st, b), wb + cw, turns, true)
                }
            };
            if let Some(k) = caps.max_turns {
                if nturns > k {
                    continue;
                }
            }
            if nwb + pruner.top_weight(t.to, arena.top(nst)) > w.len() - npos {
                continue;
            }
            let key = (t.to, npos, nst, count_turns && nrising);
            match visited.get(&key) {
                Some(&best) if !count_turns || best <= nturns => continue,
                _ => {}
            }
            visited.insert(key, nturns);
            nodes.push(Node {
                state: t.to,
                pos: npos,
                stack: nst,
                weight_below: nwb,
                eps_run: ner,
                turns: nturns,
                rising: nrising,
                parent: id,
                via: ti,
            });
            let nid = nodes.len() - 1;
            if count_turns && nturns == turns {
                deque.push_front(nid);
            } else {
                deque.push_back(nid);
            }
        }
    }
    if capped {
        (SearchResult::Inconclusive, None)
    } else {
        (SearchResult::Rejected, None)
    }
}

fn rebuild(nodes: &[Node], arena: &Arena, mut id: usize) -> ComputationTrace {
    let mut configs = Vec::new();
    let mut steps = Vec::new();
    while id != usize::MAX {
        let n = &nodes[id];
        configs.push(Configuration {
            state: n.state,
            pos: n.pos,
            stack: arena.content(n.stack),
        });
        if n.via != usize::MAX {
            steps.push(n.via);
        }
        id = n.parent;
    }
    configs.reverse();
    steps.reverse();
    ComputationTrace { configs, steps }
}

fn input_indices(m: &PdaMachine, w: &[String]) -> Option<Vec<usize>> {
    w.iter().map(|a| m.input_index(a)).collect()
}

/// Acceptance in an accepting state with only the bottom on the stack.
pub fn pda_accepts(m: &PdaMachine, w: &[String], caps: SearchCaps) -> SearchResult {
    match input_indices(m, w) {
        Some(ix) => search(m, &ix, caps, caps.max_turns.is_some()).0,
        None => SearchResult::Rejected,
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum TurnsResult {
    Turns(usize),
    Rejected,
    Inconclusive,
}

/// The fewest turns over accepting computations within the caps.
pub fn min_turns(m: &PdaMachine, w: &[String], caps: SearchCaps) -> TurnsResult {
    let Some(ix) = input_indices(m, w) else {
        return TurnsResult::Rejected;
    };
    match search(m, &ix, caps, true) {
        (SearchResult::Accepted(_), Some(t)) => TurnsResult::Turns(t),
        (SearchResult::Inconclusive, _) => TurnsResult::Inconclusive,
        _ => TurnsResult::Rejected,
    }
}

/// Checks that a trace is a computation of `m` on `w` ending in acceptance.
pub fn replay(m: &PdaMachine, w: &[String], trace: &ComputationTrace) -> bool {
    let Some(ix) = input_indices(m, w) else { return false };
    let first = Configuration {
        state: m.start(),
        pos: 0,
        stack: vec![m.bottom()],
    };
    if trace.configs.first() != Some(&first) || trace.configs.len() != trace.steps.len() + 1 {
        return false;
    }
    for (i, &ti) in trace.steps.iter().enumerate() {
        let (c, d) = (&trace.configs[i], &trace.configs[i + 1]);
        let Some(t) = m.transitions().get(ti) else { return false };
        let Some(&top) = c.stack.last() else { return false };
        if t.from != c.state || t.to != d.state || !t.matches_top(top) {
            return false;
        }
        let pos = match t.read {
            Some(a) => {
                if ix.get(c.pos) != Some(&a) {
                    return false;
                }
                c.pos + 1
            }
            None => c.pos,
        };
        let mut stack = c.stack.clone();
        match t.action {
            Action::Stay => {}
            Action::Pop => {
                stack.pop();
            }
            Action::Push(b) => stack.push(b),
        }
        if d.pos != pos || d.stack != stack {
            return false;
        }
    }
    let last = trace.configs.last().expect("nonempty");
    last.pos == ix.len() && last.stack == [m.bottom()] && m.is_accepting(last.state)
}

/// Plain search over a machine outside normal form.
pub fn loose_accepts(m: &LoosePda, w: &[String], caps: SearchCaps) -> Option<bool> {
    let ix: Option<Vec<usize>> = w
        .iter()
        .map(|a| m.input.iter().position(|x| x == a))
        .collect();
    let Some(ix) = ix else { return Some(false) };
    let mut seen: HashSet<(usize, usize, Vec<usize>)> = HashSet::new();
    let mut queue = VecDeque::from([(m.start, 0usize, vec![m.bottom])]);
    seen.insert((m.start, 0, vec![m.bottom]));
    let mut capped = false;
    let mut steps = 0;
    while let Some((q, pos, stack)) = queue.pop_front() {
        let done = pos == ix.len()
            && m.is_accepting(q)
            && (m.acceptance == Acceptance::Final || stack == [m.bottom]);
        if done {
            return Some(true);
        }
        steps += 1;
        if steps > caps.max_steps {
            return None;
        }
        let Some(&top) = stack.last() else { continue };
        for t in m.transitions.iter().filter(|t| t.from == q) {
            if t.top.is_some_and(|z| z != top) {
                continue;
            }
            let npos = match t.read {
                Some(a) if ix.get(pos) == Some(&a) => pos + 1,
                Some(_) => continue,
                None => pos,
            };
            let mut s = stack.clone();
            match &t.action {
                LooseAction::Stay => {}
                LooseAction::Pop => {
                    s.pop();
                }
                LooseAction::Push(v) => s.extend(v.iter().rev()),
                LooseAction::Replace(v) => {
                    s.pop();
                    s.extend(v.iter().rev());
                }
            }
            if s.len() > caps.max_stack {
                capped = true;
                continue;
            }
            let key = (t.to, npos, s);
            if seen.insert(key.clone()) {
                queue.push_back(key);
            }
        }
    }
    if capped {
        None
    } else {
        Some(false)
    }
}
