//! Reducing the number of turns of a pushdown automaton over
//! `a_1* .. a_m*` to `m - 1`.
//!
//! Variables `[p,Z,q,i,u]` generate the inputs of sequences of strong
//! computations of level `Z` from `p` to `q` with at most `i` turns, tagged
//! with `u ∈ Π(m)`: a single letter `a` (only `a` is read) or a pair `ab`
//! (reads start with `a`-letters and end with `b`-letters). Unary variables
//! expand through the sentential-state automaton of the unary construction,
//! so their extra turns live in the finite control. Splits into two pair
//! variables respect the alphabet order, which keeps at most `m - 1`
//! variables in any sentential form.

use std::collections::{HashMap, VecDeque};
use std::fmt;

use crate::error::{Error, Result};
use crate::grammar::{Grammar, GrammarBuilder, Production, Symbol};
use crate::loose::{Acceptance, LooseAction, LoosePda, LooseTransition};
use crate::measure::{measure_pda, SizeReport};
use crate::pda::PdaMachine;
use crate::transform::normal::eliminate_epsilon;
use crate::transform::useless::trim;
use crate::unary_turns::{sentential_steps, Moves, SententialState};

pub const DEFAULT_VARIABLE_BUDGET: usize = 2_000_000;

/// An element of `Π(m)`; letters are 0-based alphabet positions.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum PiElement {
    Single(usize),
    Pair(usize, usize),
}

impl PiElement {
    pub fn first(self) -> usize {
        match self {
            PiElement::Single(a) | PiElement::Pair(a, _) => a,
        }
    }

    pub fn last(self) -> usize {
        match self {
            PiElement::Single(a) | PiElement::Pair(_, a) => a,
        }
    }

    pub fn is_pair(self) -> bool {
        matches!(self, PiElement::Pair(..))
    }

    /// `Π(m)`: singles first, then pairs in lexicographic order.
    pub fn all(m: usize) -> Vec<PiElement> {
        let mut out: Vec<PiElement> = (0..m).map(PiElement::Single).collect();
        for i in 0..m {
            for j in i + 1..m {
                out.push(PiElement::Pair(i, j));
            }
        }
        out
    }

    fn render(self, alphabet: &[String]) -> String {
        match self {
            PiElement::Single(a) => alphabet[a].clone(),
            PiElement::Pair(a, b) => format!("{}{}", alphabet[a], alphabet[b]),
        }
    }
}

/// First and last letter of a nonempty word sorted along `alphabet`.
pub fn pi_projections(w: &[String], alphabet: &[String]) -> Result<(String, String)> {
    if w.is_empty() {
        return Err(Error::EmptyWord);
    }
    let mut last = 0;
    for a in w {
        let i = alphabet
            .iter()
            .position(|x| x == a)
            .ok_or_else(|| Error::Unsorted(crate::text::fmt_word(w)))?;
        if i < last {
            return Err(Error::Unsorted(crate::text::fmt_word(w)));
        }
        last = i;
    }
    Ok((w[0].clone(), w[w.len() - 1].clone()))
}

/// `(p, Z, q, i, u)`.
type Plain = (usize, usize, usize, usize, PiElement);

#[derive(Clone, Debug, PartialEq, Eq, Hash)]
enum RVar {
    Start,
    Plain(Plain),
    /// Unary variable: letter and pending sub-segments.
    Unary(usize, SententialState),
    /// A unary left part still to be read, then the right variable.
    PairL(usize, SententialState, Plain),
    /// A unary right part still to be read (backwards), then the left one.
    PairR(Plain, usize, SententialState),
}

#[derive(Clone, Debug)]
enum Item {
    Var(RVar),
    Letter(usize),
}

struct Reducer<'a> {
    m: &'a PdaMachine,
    alphabet: &'a [String],
    k: usize,
    /// Machine input index to alphabet position.
    letter_of: Vec<usize>,
    all: Moves,
    unary: Vec<Moves>,
    /// Moves reading letters in `[lo, hi]`, at `lo * n + hi`.
    ranged: Vec<Option<Moves>>,
    pi: Vec<PiElement>,
    budget: usize,
    gb: GrammarBuilder,
    index: HashMap<RVar, usize>,
    queue: VecDeque<RVar>,
    prods: Vec<Production>,
}

impl Reducer<'_> {
    fn quad_name(&self, (p, z, q, i): (usize, usize, usize, usize)) -> String {
        let m = self.m;
        format!("{},{},{},{i}", m.states()[p], m.stack()[z], m.states()[q])
    }

    fn plain_name(&self, (p, z, q, i, u): Plain) -> String {
        format!("[{},{}]", self.quad_name((p, z, q, i)), u.render(self.alphabet))
    }

    fn unary_name(&self, a: usize, s: &SententialState) -> String {
        let body: String = if s.is_empty() {
            "done".to_string()
        } else {
            s.iter().map(|&x| format!("[{}]", self.quad_name(x))).collect()
        };
        format!("<{}:{body}>", self.alphabet[a])
    }

    fn name(&self, v: &RVar) -> String {
        match v {
            RVar::Start => "S".to_string(),
            RVar::Plain(x) => self.plain_name(*x),
            RVar::Unary(a, s) => self.unary_name(*a, s),
            RVar::PairL(a, s, x) => format!("({},{})", self.unary_name(*a, s), self.plain_name(*x)),
            RVar::PairR(x, b, s) => format!("({},{})", self.plain_name(*x), self.unary_name(*b, s)),
        }
    }

    /// Plain variables with a single letter are unary variables.
    fn canon(v: RVar) -> RVar {
        match v {
            RVar::Plain((p, z, q, i, PiElement::Single(a))) => RVar::Unary(a, vec![(p, z, q, i)]),
            v => v,
        }
    }

    fn var(&mut self, v: RVar) -> Result<usize> {
        let v = Self::canon(v);
        if let Some(&i) = self.index.get(&v) {
            return Ok(i);
        }
        if self.index.len() >= self.budget {
            return Err(Error::Budget {
                what: "reduction grammar variables",
                limit: self.budget,
            });
        }
        let i = self.gb.var(self.name(&v));
        self.index.insert(v.clone(), i);
        self.queue.push_back(v);
        Ok(i)
    }

    fn plain_live(&self, (p, z, q, _, u): Plain) -> bool {
        let n = self.alphabet.len();
        match &self.ranged[u.first() * n + u.last()] {
            Some(mv) => mv.is_live(p, z, q),
            None => false,
        }
    }

    fn unary_live(&self, a: usize, s: &SententialState) -> bool {
        s.iter().all(|&(p, z, q, _)| self.unary[a].is_live(p, z, q))
    }

    /// Whether the variable can derive anything at all.
    fn live(&self, v: &RVar) -> bool {
        match v {
            RVar::Start => true,
            RVar::Plain(x) => self.plain_live(*x),
            RVar::Unary(a, s) => self.unary_live(*a, s),
            RVar::PairL(a, s, x) | RVar::PairR(x, a, s) => self.unary_live(*a, s) && self.plain_live(*x),
        }
    }

    fn add(&mut self, head: usize, body: Vec<Item>) -> Result<()> {
        if body.iter().any(|it| matches!(it, Item::Var(v) if !self.live(&Self::canon(v.clone())))) {
            return Ok(());
        }
        let mut out = Vec::with_capacity(body.len());
        for it in body {
            out.push(match it {
                Item::Var(v) => Symbol::Var(self.var(v)?),
                Item::Letter(a) => Symbol::Term(a),
            });
        }
        self.prods.push(Production { head, body: out });
        Ok(())
    }

    fn read_as(&self, read: Option<usize>, want: usize) -> Option<Vec<Item>> {
        match read {
            None => Some(Vec::new()),
            Some(x) if self.letter_of[x] == want => Some(vec![Item::Letter(want)]),
            Some(_) => None,
        }
    }

    fn expand(&mut self, v: RVar) -> Result<()> {
        let head = self.index[&v];
        match v {
            RVar::Start => {
                let (q0, z0) = (self.m.start(), self.m.bottom());
                for &f in self.m.accepting() {
                    for i in 1..=self.k {
                        for u in self.pi.clone() {
                            self.add(head, vec![Item::Var(RVar::Plain((q0, z0, f, i, u)))])?;
                        }
                    }
                }
            }
            RVar::Plain(x) => self.expand_plain(head, x)?,
            RVar::Unary(a, s) => {
                if s.is_empty() {
                    self.add(head, Vec::new())?;
                }
                for (read, t) in sentential_steps(&self.unary[a], &s) {
                    let mut body = self.read_as(read, a).expect("restricted moves");
                    body.push(Item::Var(RVar::Unary(a, t)));
                    self.add(head, body)?;
                }
            }
            RVar::PairL(a, s, x) => {
                if s.is_empty() {
                    self.add(head, vec![Item::Var(RVar::Plain(x))])?;
                }
                for (read, t) in sentential_steps(&self.unary[a], &s) {
                    let mut body = self.read_as(read, a).expect("restricted moves");
                    body.push(Item::Var(RVar::PairL(a, t, x)));
                    self.add(head, body)?;
                }
            }
            RVar::PairR(x, b, s) => {
                if s.is_empty() {
                    self.add(head, vec![Item::Var(RVar::Plain(x))])?;
                }
                for (read, t) in sentential_steps(&self.unary[b], &s) {
                    let mut body = vec![Item::Var(RVar::PairR(x, b, t))];
                    body.extend(self.read_as(read, b).expect("restricted moves"));
                    self.add(head, body)?;
                }
            }
        }
        Ok(())
    }

    fn expand_plain(&mut self, head: usize, x: Plain) -> Result<()> {
        let (p, z, q, i, u) = x;
        let PiElement::Pair(a, b) = u else {
            unreachable!("single-letter variables are unary")
        };
        let fwd = self.all.forward(p, z).to_vec();
        for (read, p2) in fwd {
            if let Some(mut body) = self.read_as(read, a) {
                body.push(Item::Var(RVar::Plain((p2, z, q, i, u))));
                self.add(head, body)?;
            }
        }
        let back = self.all.backward(q, z).to_vec();
        for (read, q2) in back {
            if let Some(tail) = self.read_as(read, b) {
                let mut body = vec![Item::Var(RVar::Plain((p, z, q2, i, u)))];
                body.extend(tail);
                self.add(head, body)?;
            }
        }
        for (p2, z2, q2) in self.all.matched(p, z, q) {
            self.add(head, vec![Item::Var(RVar::Plain((p2, z2, q2, i, u)))])?;
        }
        if i == 1 && p == q {
            self.add(head, Vec::new())?;
        }
        // A part without turns still carries budget 1, hence `i + 1`.
        let nq = self.m.states().len();
        for r in 0..nq {
            for i1 in 1..=i {
                for i2 in 1..=i + 1 - i1 {
                    for &u1 in &self.pi.clone() {
                        for &v1 in &self.pi.clone() {
                            if u1.first() != a || v1.last() != b || u1.last() > v1.first() {
                                continue;
                            }
                            let left = (p, z, r, i1, u1);
                            let right = (r, z, q, i2, v1);
                            let body = match (u1, v1) {
                                (PiElement::Pair(..), PiElement::Pair(..)) => {
                                    vec![Item::Var(RVar::Plain(left)), Item::Var(RVar::Plain(right))]
                                }
                                (PiElement::Single(c), _) => {
                                    vec![Item::Var(RVar::PairL(c, vec![(p, z, r, i1)], right))]
                                }
                                (PiElement::Pair(..), PiElement::Single(d)) => {
                                    vec![Item::Var(RVar::PairR(left, d, vec![(r, z, q, i2)]))]
                                }
                            };
                            self.add(head, body)?;
                        }
                    }
                }
            }
        }
        Ok(())
    }
}

/// The reduction grammar for a `k`-turn machine over `alphabet`, with empty
/// bodies eliminated (the flag records the empty word) and useless
/// variables removed.
pub fn build_reduction_grammar(m: &PdaMachine, k: usize, alphabet: &[String]) -> Result<Grammar> {
    build_reduction_grammar_with(m, k, alphabet, DEFAULT_VARIABLE_BUDGET)
}

pub fn build_reduction_grammar_with(
    m: &PdaMachine,
    k: usize,
    alphabet: &[String],
    budget: usize,
) -> Result<Grammar> {
    if alphabet.is_empty() {
        return Err(Error::Precondition("empty alphabet".into()));
    }
    let mut letter_of = Vec::with_capacity(m.input().len());
    for x in m.input() {
        let i = alphabet.iter().position(|a| a == x).ok_or_else(|| {
            Error::Precondition(format!("input letter `{x}` is not in the alphabet"))
        })?;
        letter_of.push(i);
    }
    // A letter the machine never reads keeps only the ε-moves.
    let unary = alphabet
        .iter()
        .map(|a| Moves::restricted(m, m.input_index(a).unwrap_or(usize::MAX)))
        .collect();
    let n = alphabet.len();
    let ranged = (0..n * n)
        .map(|i| {
            let (lo, hi) = (i / n, i % n);
            (lo <= hi).then(|| Moves::filtered(m, |x| (lo..=hi).contains(&letter_of[x])))
        })
        .collect();
    let mut gb = GrammarBuilder::new();
    for a in alphabet {
        gb.term(a);
    }
    let mut r = Reducer {
        m,
        alphabet,
        k: k.max(1),
        letter_of,
        all: Moves::all(m),
        unary,
        ranged,
        pi: PiElement::all(alphabet.len()),
        budget,
        gb,
        index: HashMap::new(),
        queue: VecDeque::new(),
        prods: Vec::new(),
    };
    let start = r.var(RVar::Start)?;
    while let Some(v) = r.queue.pop_front() {
        r.expand(v)?;
    }
    let (vars, terms, _) = r.gb.into_parts();
    Ok(trim(&eliminate_epsilon(vars, terms, start, r.prods)))
}

/// The expand/match machine of a grammar. The grammar symbol on top lives
/// in the finite control: expanding `A -> t_1 .. t_s X Y_1 .. Y_n` reads the
/// leading terminals, pushes `Y_n .. Y_1` and moves to `X`; a terminal in
/// the control is read; with nothing in the control the next symbol is
/// popped into it. Variables are never popped by an expansion, so a
/// production contributes a single rise.
pub fn grammar_to_one_state_pda(g: &Grammar) -> Result<PdaMachine> {
    normalize_loose(&grammar_to_loose_pda(g))
}

fn normalize_loose(l: &LoosePda) -> Result<PdaMachine> {
    Ok(crate::loose::normalize_pda(l))
}

/// The machine of [`grammar_to_one_state_pda`] before normalization.
pub fn grammar_to_loose_pda(g: &Grammar) -> LoosePda {
    let nv = g.variables().len();
    let nt = g.terminals().len();
    // Stack symbols: bottom, then variables, then terminals.
    let mut stack = vec!["Z0".to_string()];
    let sym_of = |s: Symbol| match s {
        Symbol::Var(v) => 1 + v,
        Symbol::Term(t) => 1 + nv + t,
    };
    stack.extend(g.variables().iter().cloned());
    stack.extend(g.terminals().iter().map(|t| format!("'{t}'")));
    let mut taken: std::collections::HashSet<String> = stack.iter().cloned().collect();
    let fresh = |base: &str, taken: &mut std::collections::HashSet<String>| {
        let mut n = base.to_string();
        while !taken.insert(n.clone()) {
            n.push('\'');
        }
        n
    };
    let mut states = Vec::new();
    let idle = 0;
    states.push(fresh("q", &mut taken));
    let state_of = sym_of;
    for v in g.variables() {
        states.push(fresh(&format!("<{v}>"), &mut taken));
    }
    for t in g.terminals() {
        states.push(fresh(&format!("<'{t}'>"), &mut taken));
    }
    let mut trans = Vec::new();
    let mut aux = 0usize;
    for p in g.productions() {
        let from = state_of(Symbol::Var(p.head));
        let lead = p.body.iter().take_while(|s| s.as_term().is_some()).count();
        let mut cur = from;
        let rest = &p.body[lead..];
        for (n, s) in p.body[..lead].iter().enumerate() {
            let last = n + 1 == lead;
            let to = if last && rest.is_empty() {
                idle
            } else if last && rest.len() == 1 {
                state_of(rest[0])
            } else {
                aux += 1;
                states.push(fresh(&format!("x{aux}"), &mut taken));
                states.len() - 1
            };
            trans.push(LooseTransition {
                from: cur,
                read: s.as_term(),
                top: None,
                to,
                action: LooseAction::Stay,
            });
            cur = to;
        }
        if lead == 0 || rest.len() > 1 {
            match rest {
                [] => unreachable!("bodies are nonempty"),
                [x] => trans.push(LooseTransition {
                    from: cur,
                    read: None,
                    top: None,
                    to: state_of(*x),
                    action: LooseAction::Stay,
                }),
                [x, tail @ ..] => trans.push(LooseTransition {
                    from: cur,
                    read: None,
                    top: None,
                    to: state_of(*x),
                    action: LooseAction::Push(tail.iter().map(|&s| sym_of(s)).collect()),
                }),
            }
        }
    }
    for t in 0..nt {
        trans.push(LooseTransition {
            from: state_of(Symbol::Term(t)),
            read: Some(t),
            top: None,
            to: idle,
            action: LooseAction::Stay,
        });
    }
    let mut pushed = vec![false; stack.len()];
    for t in &trans {
        if let LooseAction::Push(tail) = &t.action {
            for &s in tail {
                pushed[s] = true;
            }
        }
    }
    for s in (1..stack.len()).filter(|&s| pushed[s]) {
        trans.push(LooseTransition {
            from: idle,
            read: None,
            top: Some(s),
            to: s,
            action: LooseAction::Pop,
        });
    }
    let start = state_of(Symbol::Var(g.start()));
    if g.epsilon_stripped() {
        trans.push(LooseTransition {
            from: start,
            read: None,
            top: None,
            to: idle,
            action: LooseAction::Stay,
        });
    }
    LoosePda {
        states,
        input: g.terminals().to_vec(),
        stack,
        bottom: 0,
        start,
        accepting: vec![idle],
        transitions: trans,
        acceptance: Acceptance::Bottom,
        turn_bound: None,
    }
}

/// Sizes along the reduction pipeline.
#[derive(Clone, Debug)]
pub struct ReductionReport {
    pub grammar_variables: usize,
    pub loose_states: usize,
    pub loose_stack: usize,
    pub output: SizeReport,
}

impl fmt::Display for ReductionReport {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        writeln!(f, "grammar_variables: {}", self.grammar_variables)?;
        writeln!(f, "one_state_states: {}", self.loose_states)?;
        writeln!(f, "one_state_stack: {}", self.loose_stack)?;
        write!(f, "{}", self.output)
    }
}

/// Reduction grammar, expand/match machine, normal form. The result
/// declares `m - 1` turns.
pub fn reduce_turns(m: &PdaMachine, k: usize, alphabet: &[String]) -> Result<(PdaMachine, ReductionReport)> {
    let g = build_reduction_grammar(m, k, alphabet)?;
    let loose = grammar_to_loose_pda(&g);
    let out = normalize_loose(&loose)?.with_turn_bound(Some(alphabet.len() - 1));
    let report = ReductionReport {
        grammar_variables: g.variables().len(),
        loose_states: loose.states.len(),
        loose_stack: loose.stack.len(),
        output: measure_pda(&out),
    };
    Ok((out, report))
}
