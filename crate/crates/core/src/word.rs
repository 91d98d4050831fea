//! Word-bounded languages through inverse homomorphisms.
//!
//! For words `w_1 .. w_m` and fresh letters `a_1 .. a_m` with
//! `φ(a_i) = w_i`, the marked grammar annotates every variable `A` as
//! `[A,i,l,r,j]`: it derives the words of `A` that start at position `i+1`
//! of `w_l` and end at position `j` of `w_r`. Replacing the terminal rules
//! that begin a copy of `w_l` by `a_l` and the others by `ε` gives a grammar
//! for `φ⁻¹(L)`.
//!
//! ```text
//! a1 = ab
//! a2 = ba
//! ```

use std::collections::{HashMap, VecDeque};
use std::fmt;

use crate::error::{syntax, Error, Result};
use crate::finite_turn::cfg_to_finite_turn_pipeline;
use crate::grammar::{Grammar, GrammarBuilder, Production, Symbol};
use crate::measure::symb;
use crate::pda::{PdaBuilder, PdaMachine, PdaTransition};
use crate::reduction::reduce_turns;
use crate::text::{check_token, content_lines, Word};
use crate::transform::bounded::check_word_bounded;
use crate::transform::normal::{eliminate_epsilon, eliminate_units, merge_equivalent_variables};
use crate::transform::trees::TreeOptions;
use crate::transform::useless::trim;

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Homomorphism {
    letters: Vec<String>,
    words: Vec<Word>,
}

impl Homomorphism {
    pub fn new(letters: Vec<String>, words: Vec<Word>) -> Result<Self> {
        if letters.is_empty() {
            return Err(Error::Invalid("homomorphism without letters".into()));
        }
        if letters.len() != words.len() {
            return Err(Error::Invalid("one word per letter expected".into()));
        }
        for (i, a) in letters.iter().enumerate() {
            if letters[..i].contains(a) {
                return Err(Error::Invalid(format!("letter `{a}` repeated")));
            }
            if words[i].is_empty() {
                return Err(Error::Invalid(format!("image of `{a}` is empty")));
            }
        }
        Ok(Homomorphism { letters, words })
    }

    /// Lines `a1 = ab`. An image containing spaces is split on them,
    /// otherwise into single characters.
    pub fn parse(text: &str) -> Result<Self> {
        let mut letters = Vec::new();
        let mut words = Vec::new();
        for (line, s) in content_lines(text) {
            let (a, w) = s
                .split_once('=')
                .ok_or_else(|| syntax(line, "expected `letter = word`"))?;
            let a = a.trim();
            check_token(line, a)?;
            let w = w.trim();
            let word: Word = if w.contains(char::is_whitespace) {
                w.split_whitespace().map(str::to_string).collect()
            } else {
                w.chars().map(String::from).collect()
            };
            if word.is_empty() {
                return Err(syntax(line, format!("image of `{a}` is empty")));
            }
            for x in &word {
                check_token(line, x)?;
            }
            if letters.iter().any(|b| b == a) {
                return Err(syntax(line, format!("letter `{a}` repeated")));
            }
            letters.push(a.to_string());
            words.push(word);
        }
        Self::new(letters, words)
    }

    pub fn letters(&self) -> &[String] {
        &self.letters
    }

    pub fn words(&self) -> &[Word] {
        &self.words
    }

    pub fn len(&self) -> usize {
        self.letters.len()
    }

    pub fn is_empty(&self) -> bool {
        self.letters.is_empty()
    }

    pub fn max_word_len(&self) -> usize {
        self.words.iter().map(Vec::len).max().unwrap_or(0)
    }

    pub fn total_len(&self) -> usize {
        self.words.iter().map(Vec::len).sum()
    }

    /// Letters of the images in order of first occurrence.
    pub fn target_alphabet(&self) -> Vec<String> {
        let mut out: Vec<String> = Vec::new();
        for x in self.words.iter().flatten() {
            if !out.contains(x) {
                out.push(x.clone());
            }
        }
        out
    }

    pub fn apply(&self, w: &[String]) -> Result<Word> {
        let mut out = Vec::new();
        for a in w {
            let i = self.letter_index(a)?;
            out.extend(self.words[i].iter().cloned());
        }
        Ok(out)
    }

    /// `w_1^k_1 .. w_m^k_m`.
    pub fn expand(&self, exponents: &[usize]) -> Word {
        let mut out = Vec::new();
        for (w, &k) in self.words.iter().zip(exponents) {
            for _ in 0..k {
                out.extend(w.iter().cloned());
            }
        }
        out
    }

    fn letter_index(&self, a: &str) -> Result<usize> {
        self.letters.iter().position(|b| b == a).ok_or_else(|| Error::Unknown {
            kind: "letter",
            name: a.to_string(),
        })
    }

    pub fn to_text(&self) -> String {
        let mut out = String::new();
        for (a, w) in self.letters.iter().zip(&self.words) {
            let sep = if w.iter().all(|x| x.chars().count() == 1) { "" } else { " " };
            out.push_str(&format!("{a} = {}\n", w.join(sep)));
        }
        out
    }
}

impl fmt::Display for Homomorphism {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&self.to_text())
    }
}

/// `[A,i,l,r,j]` with `l` and `r` counted from zero.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct MarkedVariable {
    pub base: usize,
    pub i: usize,
    pub l: usize,
    pub r: usize,
    pub j: usize,
}

impl MarkedVariable {
    pub fn in_range(&self, hom: &Homomorphism) -> bool {
        let w = hom.words();
        self.l <= self.r && self.r < w.len() && self.i <= w[self.l].len() && self.j <= w[self.r].len()
    }

    fn name(&self, g: &Grammar) -> String {
        format!(
            "[{},{},{},{},{}]",
            g.variables()[self.base],
            self.i,
            self.l + 1,
            self.r + 1,
            self.j
        )
    }
}

fn check_input(g: &Grammar, hom: &Homomorphism) -> Result<()> {
    if let Some(p) = g.cnf_violation() {
        return Err(Error::NotCnf(p));
    }
    if let Some(w) = check_word_bounded(g, hom.words())? {
        return Err(Error::NotBounded(crate::text::fmt_word(&w)));
    }
    Ok(())
}

struct Marker<'a> {
    g: &'a Grammar,
    hom: &'a Homomorphism,
    inverse: bool,
    unit: Vec<Vec<usize>>,
    binary: Vec<Vec<(usize, usize)>>,
    gb: GrammarBuilder,
    index: HashMap<MarkedVariable, usize>,
    queue: VecDeque<MarkedVariable>,
    prods: Vec<Production>,
}

impl Marker<'_> {
    fn var(&mut self, x: MarkedVariable) -> Symbol {
        debug_assert!(x.in_range(self.hom));
        if let Some(&v) = self.index.get(&x) {
            return Symbol::Var(v);
        }
        let v = self.gb.var(x.name(self.g));
        self.index.insert(x, v);
        self.queue.push_back(x);
        Symbol::Var(v)
    }

    fn add(&mut self, head: MarkedVariable, body: Vec<Symbol>) {
        let head = self.index[&head];
        self.prods.push(Production { head, body });
    }

    fn unit_to(&mut self, head: MarkedVariable, x: MarkedVariable) {
        let s = self.var(x);
        self.add(head, vec![s]);
    }

    fn expand(&mut self, x: MarkedVariable) {
        let len: Vec<usize> = self.hom.words().iter().map(Vec::len).collect();
        let MarkedVariable { base, i, l, r, j } = x;
        if l == r && j >= 1 && i + 1 == j {
            let want = &self.hom.words()[l][j - 1];
            for t in self.unit[base].clone() {
                if &self.g.terminals()[t] != want {
                    continue;
                }
                let body = match (self.inverse, j) {
                    (false, _) => vec![Symbol::Term(t)],
                    (true, 1) => vec![Symbol::Term(l)],
                    (true, _) => Vec::new(),
                };
                self.add(x, body);
            }
        }
        for (b, c) in self.binary[base].clone() {
            for h in l..=r {
                for k in 0..=len[h] {
                    let left = self.var(MarkedVariable { base: b, i, l, r: h, j: k });
                    let right = self.var(MarkedVariable { base: c, i: k, l: h, r, j });
                    self.add(x, vec![left, right]);
                }
            }
        }
        if j == 0 {
            self.unit_to(x, MarkedVariable { j: len[r], ..x });
            for h in l..r {
                self.unit_to(x, MarkedVariable { r: h, ..x });
            }
        }
        if i == len[l] {
            self.unit_to(x, MarkedVariable { i: 0, ..x });
            for h in l + 1..=r {
                self.unit_to(x, MarkedVariable { i: len[h], l: h, ..x });
            }
        }
    }
}

/// Generates the reachable part of the marked grammar from its start
/// variable `[S,|w_1|,1,m,0]`.
fn marked_parts(g: &Grammar, hom: &Homomorphism, inverse: bool) -> (GrammarBuilder, usize, Vec<Production>) {
    let nv = g.variables().len();
    let mut unit = vec![Vec::new(); nv];
    let mut binary = vec![Vec::new(); nv];
    for p in g.productions() {
        match p.body[..] {
            [Symbol::Term(t)] => unit[p.head].push(t),
            [Symbol::Var(b), Symbol::Var(c)] => binary[p.head].push((b, c)),
            _ => unreachable!("checked to be in Chomsky normal form"),
        }
    }
    let mut gb = GrammarBuilder::new();
    let terminals = if inverse { hom.letters() } else { g.terminals() };
    for t in terminals {
        gb.term(t);
    }
    let mut mk = Marker {
        g,
        hom,
        inverse,
        unit,
        binary,
        gb,
        index: HashMap::new(),
        queue: VecDeque::new(),
        prods: Vec::new(),
    };
    let start = MarkedVariable {
        base: g.start(),
        i: hom.words()[0].len(),
        l: 0,
        r: hom.len() - 1,
        j: 0,
    };
    let Symbol::Var(s) = mk.var(start) else { unreachable!() };
    while let Some(x) = mk.queue.pop_front() {
        mk.expand(x);
    }
    (mk.gb, s, mk.prods)
}

/// The marked grammar `G'`, equivalent to `g`.
pub fn build_marked_grammar(g: &Grammar, hom: &Homomorphism) -> Result<Grammar> {
    check_input(g, hom)?;
    let (gb, start, prods) = marked_parts(g, hom, false);
    let (vars, terms, _) = gb.into_parts();
    let out = Grammar::new(vars, terms, start, prods)?.with_epsilon_stripped(g.epsilon_stripped());
    Ok(trim(&out))
}

/// The grammar `Ĝ` for `φ⁻¹(L(g))` over the letters of `hom`, without
/// empty bodies or unit rules and with copies of the same variable merged;
/// its flag records the empty word.
pub fn build_inverse_hom_grammar(g: &Grammar, hom: &Homomorphism) -> Result<Grammar> {
    check_input(g, hom)?;
    let (gb, start, prods) = marked_parts(g, hom, true);
    let (vars, terms, _) = gb.into_parts();
    let stripped = eliminate_epsilon(vars, terms, start, prods);
    let flag = stripped.epsilon_stripped() || g.epsilon_stripped();
    let clean = trim(&eliminate_units(&trim(&stripped)));
    Ok(merge_equivalent_variables(&clean).with_epsilon_stripped(flag))
}

/// `φ⁻¹(L)` contains no word besides possibly the empty one.
pub fn is_degenerate(g: &Grammar) -> bool {
    g.productions().iter().all(|p| p.head != g.start())
}

/// `Symb(Ĝ) / Symb(g)`.
pub fn symb_ratio(g: &Grammar, inverse: &Grammar) -> f64 {
    symb(inverse) as f64 / symb(g).max(1) as f64
}

/// Replaces every move reading `a_i` by a chain reading `w_i`.
pub fn expand_letters(m: &PdaMachine, hom: &Homomorphism) -> Result<PdaMachine> {
    let mut b = PdaBuilder::new();
    for q in m.states() {
        b.state(q);
    }
    for z in m.stack() {
        b.stack(z);
    }
    let target = hom.target_alphabet();
    for x in &target {
        b.input(x);
    }
    let image: Vec<Vec<usize>> = m
        .input()
        .iter()
        .map(|a| {
            let i = hom.letter_index(a)?;
            Ok(hom.words()[i].iter().map(|x| b.input(x)).collect())
        })
        .collect::<Result<_>>()?;
    let mut fresh = 0usize;
    for t in m.transitions() {
        let Some(a) = t.read else {
            b.add(*t);
            continue;
        };
        let w = &image[a];
        let mut cur = t.from;
        for (n, &x) in w.iter().enumerate() {
            let to = if n + 1 == w.len() {
                t.to
            } else {
                let mut name;
                loop {
                    fresh += 1;
                    name = format!("{}~{fresh}", m.states()[t.from]);
                    if !b.has_state(&name) {
                        break;
                    }
                }
                b.state(name)
            };
            b.add(PdaTransition {
                from: cur,
                read: Some(x),
                top: t.top,
                to,
                action: t.action,
            });
            cur = to;
        }
    }
    for &f in m.accepting() {
        b.accept(f);
    }
    b.build(m.start(), m.bottom(), m.turn_bound())
}

/// `g` bounded by the words of `hom` to an `(m-1)`-turn machine over the
/// letters of the words.
pub fn word_bounded_cfg_to_pda(g: &Grammar, hom: &Homomorphism) -> Result<PdaMachine> {
    let inverse = build_inverse_hom_grammar(g, hom)?;
    let p = cfg_to_finite_turn_pipeline(&inverse, hom.letters(), TreeOptions::default())?;
    expand_letters(&p.result.machine, hom)
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
enum Buffer {
    /// Nothing buffered; the last letter read, if any.
    Empty(Option<usize>),
    /// `w_i` from position `pos` on is still to be simulated.
    Rest(usize, usize),
}

/// A machine over the letters of `hom` for the sorted words of
/// `φ⁻¹(T(m))`. The state keeps the unread rest of the current image.
pub fn pda_inverse_hom(m: &PdaMachine, hom: &Homomorphism) -> Result<PdaMachine> {
    let words: Vec<Vec<Option<usize>>> = hom
        .words()
        .iter()
        .map(|w| w.iter().map(|x| m.input_index(x)).collect())
        .collect();
    let mut b = PdaBuilder::new();
    let name = |q: usize, buf: Buffer| match buf {
        Buffer::Empty(None) => format!("({},-)", m.states()[q]),
        Buffer::Empty(Some(i)) => format!("({},{})", m.states()[q], hom.letters()[i]),
        Buffer::Rest(i, pos) => format!("({},{},{pos})", m.states()[q], hom.letters()[i]),
    };
    let advance = |i: usize, pos: usize| {
        if pos == words[i].len() {
            Buffer::Empty(Some(i))
        } else {
            Buffer::Rest(i, pos)
        }
    };
    for z in m.stack() {
        b.stack(z);
    }
    for a in hom.letters() {
        b.input(a);
    }
    let by_state = m.by_state();
    let mut index: HashMap<(usize, Buffer), usize> = HashMap::new();
    let mut queue = VecDeque::new();
    let start = (m.start(), Buffer::Empty(None));
    index.insert(start, b.state(name(start.0, start.1)));
    queue.push_back(start);
    while let Some((q, buf)) = queue.pop_front() {
        let from = index[&(q, buf)];
        if m.is_accepting(q) && matches!(buf, Buffer::Empty(_)) {
            b.accept(from);
        }
        for &ti in &by_state[q] {
            let t = m.transitions()[ti];
            let mut moves = Vec::new();
            match (t.read, buf) {
                (None, _) => moves.push((None, buf)),
                (Some(x), Buffer::Rest(i, pos)) => {
                    if words[i][pos] == Some(x) {
                        moves.push((None, advance(i, pos + 1)));
                    }
                }
                (Some(x), Buffer::Empty(last)) => {
                    for i in last.unwrap_or(0)..words.len() {
                        if words[i][0] == Some(x) {
                            moves.push((Some(i), advance(i, 1)));
                        }
                    }
                }
            }
            for (read, nb) in moves {
                let key = (t.to, nb);
                let to = match index.get(&key) {
                    Some(&s) => s,
                    None => {
                        let s = b.state(name(t.to, nb));
                        index.insert(key, s);
                        queue.push_back(key);
                        s
                    }
                };
                b.add(PdaTransition {
                    from,
                    read,
                    top: t.top,
                    to,
                    action: t.action,
                });
            }
        }
    }
    b.build(index[&start], m.bottom(), m.turn_bound())
}

/// Inverse homomorphism, turn reduction over the fresh letters and
/// re-expansion: an `(m-1)`-turn machine for the language of `m`.
pub fn reduce_word_turns(m: &PdaMachine, k: usize, hom: &Homomorphism) -> Result<PdaMachine> {
    let inverse = pda_inverse_hom(m, hom)?;
    let (reduced, _) = reduce_turns(&inverse, k, hom.letters())?;
    expand_letters(&reduced, hom)
}
