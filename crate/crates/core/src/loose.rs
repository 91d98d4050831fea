//! Pushdown automata outside normal form, and their normalization.
//!
//! The text format extends the normal-form one with
//! `push B1 B2 ..` (several symbols, `B1` ends on top; none is a no-op),
//! `replace Y1 ..` (pop the top, then push; no symbols means pop),
//! transitions that read and touch the stack at once, and an
//! `acceptance: final | bottom` header. `final` accepts in an accepting state
//! with any stack content.

use std::collections::{HashMap, HashSet};
use std::fmt;

use crate::error::{syntax, Error, Result};
use crate::pda::{Action, PdaBuilder, PdaMachine, PdaTransition};
use crate::text::{check_token, content_lines, header, ANY_TOP, EPS};

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub enum Acceptance {
    /// Accepting state, input consumed, only the bottom symbol on the stack.
    Bottom,
    /// Accepting state, input consumed, any stack.
    Final,
}

#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub enum LooseAction {
    Stay,
    Pop,
    Push(Vec<usize>),
    Replace(Vec<usize>),
}

#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct LooseTransition {
    pub from: usize,
    pub read: Option<usize>,
    pub top: Option<usize>,
    pub to: usize,
    pub action: LooseAction,
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct LoosePda {
    pub states: Vec<String>,
    pub input: Vec<String>,
    pub stack: Vec<String>,
    pub bottom: usize,
    pub start: usize,
    pub accepting: Vec<usize>,
    pub transitions: Vec<LooseTransition>,
    pub acceptance: Acceptance,
    pub turn_bound: Option<usize>,
}

/// Name lookup for one declared list.
struct Names<'a> {
    kind: &'static str,
    index: HashMap<&'a str, usize>,
}

impl<'a> Names<'a> {
    fn new(kind: &'static str, names: &'a [String]) -> Self {
        let mut index = HashMap::with_capacity(names.len());
        for (i, n) in names.iter().enumerate() {
            index.entry(n.as_str()).or_insert(i);
        }
        Names { kind, index }
    }

    fn get(&self, name: &str) -> Result<usize> {
        self.index.get(name).copied().ok_or_else(|| Error::Unknown {
            kind: self.kind,
            name: name.to_string(),
        })
    }
}

fn list(ln: usize, rest: &str) -> Result<Vec<String>> {
    let toks: Vec<String> = rest.split_whitespace().map(str::to_string).collect();
    for t in &toks {
        check_token(ln, t)?;
    }
    Ok(toks)
}

impl LoosePda {
    pub fn parse(text: &str) -> Result<LoosePda> {
        let mut states = None;
        let mut input = None;
        let mut stack = None;
        let mut bottom = None;
        let mut start = None;
        let mut accept = None;
        let mut turns = None;
        let mut acceptance = Acceptance::Bottom;
        let mut lines = Vec::new();
        for (ln, line) in content_lines(text) {
            if line.contains("->") {
                lines.push((ln, line));
                continue;
            }
            let Some((key, rest)) = header(line) else {
                return Err(syntax(ln, format!("expected a header or a transition, got `{line}`")));
            };
            match key {
                "states" => states = Some(list(ln, rest)?),
                "input" => input = Some(list(ln, rest)?),
                "stack" => stack = Some(list(ln, rest)?),
                "bottom" => bottom = Some((ln, rest.to_string())),
                "start" => start = Some((ln, rest.to_string())),
                "accept" => accept = Some(list(ln, rest)?),
                "turns" => {
                    turns = Some(
                        rest.parse::<usize>()
                            .map_err(|_| syntax(ln, "turns expects a nonnegative integer"))?,
                    )
                }
                "acceptance" => {
                    acceptance = match rest {
                        "final" => Acceptance::Final,
                        "bottom" => Acceptance::Bottom,
                        _ => return Err(syntax(ln, "acceptance is `final` or `bottom`")),
                    }
                }
                other => return Err(syntax(ln, format!("unknown header `{other}`"))),
            }
        }
        let need = |v: Option<Vec<String>>, what: &str| {
            v.ok_or_else(|| syntax(1, format!("missing `{what}:` header")))
        };
        let states = need(states, "states")?;
        let input = need(input, "input")?;
        let stack = need(stack, "stack")?;
        let accept = accept.unwrap_or_default();
        let (_, bottom) = bottom.ok_or_else(|| syntax(1, "missing `bottom:` header"))?;
        let (_, start) = start.ok_or_else(|| syntax(1, "missing `start:` header"))?;
        let state_ix = Names::new("state", &states);
        let input_ix = Names::new("input symbol", &input);
        let stack_ix = Names::new("stack symbol", &stack);
        let bottom = stack_ix.get(&bottom)?;
        let start = state_ix.get(&start)?;
        let accepting = accept.iter().map(|q| state_ix.get(q)).collect::<Result<Vec<_>>>()?;

        let mut transitions = Vec::with_capacity(lines.len());
        for (ln, line) in lines {
            let (lhs, rhs) = line.split_once("->").expect("filtered on arrow");
            let l: Vec<&str> = lhs.split_whitespace().collect();
            let r: Vec<&str> = rhs.split_whitespace().collect();
            if l.len() != 3 || r.len() < 2 {
                return Err(syntax(ln, "transition is `q <sym|eps> <top|*> -> p <action>`"));
            }
            let from = state_ix.get(l[0])?;
            let read = match l[1] {
                EPS => None,
                a => Some(input_ix.get(a)?),
            };
            let top = match l[2] {
                ANY_TOP => None,
                z => Some(stack_ix.get(z)?),
            };
            let to = state_ix.get(r[0])?;
            let syms = r[2..].iter().map(|s| stack_ix.get(s)).collect::<Result<Vec<_>>>()?;
            let action = match (r[1], syms.len()) {
                ("stay", 0) => LooseAction::Stay,
                ("pop", 0) => LooseAction::Pop,
                ("push", _) => LooseAction::Push(syms),
                ("replace", _) => LooseAction::Replace(syms),
                _ => return Err(syntax(ln, format!("bad stack action `{}`", r[1..].join(" ")))),
            };
            transitions.push(LooseTransition {
                from,
                read,
                top,
                to,
                action,
            });
        }
        let m = LoosePda {
            states,
            input,
            stack,
            bottom,
            start,
            accepting,
            transitions,
            acceptance,
            turn_bound: turns,
        };
        m.validate()?;
        Ok(m)
    }

    fn validate(&self) -> Result<()> {
        for (kind, names) in [("state", &self.states), ("input symbol", &self.input), ("stack symbol", &self.stack)] {
            let mut seen = HashSet::new();
            for n in names.iter() {
                if !seen.insert(n) {
                    return Err(Error::Invalid(format!("{kind} `{n}` declared twice")));
                }
            }
        }
        Ok(())
    }

    /// The machine as a normal-form PDA, if it already is one.
    pub fn into_normal(self) -> Result<PdaMachine> {
        if self.acceptance == Acceptance::Final {
            return Err(Error::Invalid(
                "`acceptance: final` is not normal form; run normalize".into(),
            ));
        }
        let mut transitions = Vec::with_capacity(self.transitions.len());
        for t in &self.transitions {
            let action = match &t.action {
                LooseAction::Stay => Action::Stay,
                LooseAction::Pop => Action::Pop,
                LooseAction::Push(v) if v.len() == 1 => Action::Push(v[0]),
                _ => {
                    return Err(Error::Invalid(format!(
                        "`{}` is not a normal-form transition; run normalize",
                        self.render(t)
                    )))
                }
            };
            transitions.push(PdaTransition {
                from: t.from,
                read: t.read,
                top: t.top,
                to: t.to,
                action,
            });
        }
        PdaMachine::new(
            self.states,
            self.input,
            self.stack,
            self.bottom,
            self.start,
            self.accepting,
            transitions,
            self.turn_bound,
        )
    }

    pub fn is_accepting(&self, q: usize) -> bool {
        self.accepting.contains(&q)
    }

    pub fn render(&self, t: &LooseTransition) -> String {
        let read = t.read.map_or(EPS, |a| self.input[a].as_str());
        let top = t.top.map_or(ANY_TOP, |z| self.stack[z].as_str());
        let names = |v: &[usize]| {
            v.iter()
                .map(|&z| self.stack[z].as_str())
                .collect::<Vec<_>>()
                .join(" ")
        };
        let action = match &t.action {
            LooseAction::Stay => "stay".to_string(),
            LooseAction::Pop => "pop".to_string(),
            LooseAction::Push(v) if v.is_empty() => "push".to_string(),
            LooseAction::Push(v) => format!("push {}", names(v)),
            LooseAction::Replace(v) if v.is_empty() => "replace".to_string(),
            LooseAction::Replace(v) => format!("replace {}", names(v)),
        };
        format!(
            "{} {} {} -> {} {}",
            self.states[t.from], read, top, self.states[t.to], action
        )
    }

    fn touches_bottom(&self) -> bool {
        self.transitions.iter().any(|t| match &t.action {
            LooseAction::Stay => false,
            LooseAction::Pop => t.top.map_or(true, |z| z == self.bottom),
            LooseAction::Push(v) => v.contains(&self.bottom),
            LooseAction::Replace(v) => {
                v.contains(&self.bottom) || t.top.map_or(true, |z| z == self.bottom)
            }
        })
    }
}

impl fmt::Display for LoosePda {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        writeln!(f, "states: {}", self.states.join(" "))?;
        writeln!(f, "input: {}", self.input.join(" "))?;
        writeln!(f, "stack: {}", self.stack.join(" "))?;
        writeln!(f, "bottom: {}", self.stack[self.bottom])?;
        writeln!(f, "start: {}", self.states[self.start])?;
        let acc: Vec<&str> = self.accepting.iter().map(|&q| self.states[q].as_str()).collect();
        writeln!(f, "accept: {}", acc.join(" "))?;
        if self.acceptance == Acceptance::Final {
            writeln!(f, "acceptance: final")?;
        }
        if let Some(k) = self.turn_bound {
            writeln!(f, "turns: {k}")?;
        }
        for t in &self.transitions {
            writeln!(f, "{}", self.render(t))?;
        }
        Ok(())
    }
}

fn fresh(b: &mut PdaBuilder, base: &str) -> usize {
    let mut name = base.to_string();
    while b.has_state(&name) {
        name.push('\'');
    }
    b.state(name)
}

/// Rewrites a loosely specified machine into normal form with the same
/// accepted language. A machine that is already in normal form with
/// bottom-only acceptance comes back unchanged.
pub fn normalize_pda(m: &LoosePda) -> PdaMachine {
    let mut b = PdaBuilder::new();
    for q in &m.states {
        b.state(q);
    }
    for a in &m.input {
        b.input(a);
    }
    for z in &m.stack {
        b.stack(z);
    }
    let nz = m.stack.len();
    let all_tops = |top: Option<usize>| -> Vec<usize> {
        match top {
            Some(z) => vec![z],
            None => (0..nz).collect(),
        }
    };

    let new_bottom = m.touches_bottom();
    let bottom = if new_bottom {
        let mut name = format!("{}_", m.stack[m.bottom]);
        while m.stack.contains(&name) {
            name.push('_');
        }
        b.stack(name)
    } else {
        m.bottom
    };

    let mut counter = 0usize;
    let mut fresh_state = |b: &mut PdaBuilder| {
        counter += 1;
        fresh(b, &format!("n{counter}"))
    };

    // Pushes `syms` (first element ends on top) from `from` to `to`.
    let push_chain = |b: &mut PdaBuilder,
                      fs: &mut dyn FnMut(&mut PdaBuilder) -> usize,
                      from: usize,
                      top: Option<usize>,
                      syms: &[usize],
                      to: usize| {
        let mut cur = from;
        let mut cur_top = top;
        for (i, &z) in syms.iter().rev().enumerate() {
            let next = if i + 1 == syms.len() { to } else { fs(b) };
            b.add(PdaTransition {
                from: cur,
                read: None,
                top: cur_top,
                to: next,
                action: Action::Push(z),
            });
            cur = next;
            cur_top = Some(z);
        }
    };

    // With a fresh bottom, wildcards must not match it.
    let mut concrete = Vec::new();
    for t in &m.transitions {
        match t.top {
            None if new_bottom => concrete.extend((0..nz).map(|z| LooseTransition {
                top: Some(z),
                ..t.clone()
            })),
            _ => concrete.push(t.clone()),
        }
    }

    for t in &mut concrete {
        if t.action == LooseAction::Push(Vec::new()) {
            t.action = LooseAction::Stay;
        }
    }
    for t in &concrete {
        let needs_split = t.read.is_some() && t.action != LooseAction::Stay;
        let (src, src_top) = if needs_split {
            let mid = fresh_state(&mut b);
            b.add(PdaTransition {
                from: t.from,
                read: t.read,
                top: t.top,
                to: mid,
                action: Action::Stay,
            });
            (mid, t.top)
        } else {
            (t.from, t.top)
        };
        let read = if needs_split { None } else { t.read };
        match &t.action {
            LooseAction::Stay => b.add(PdaTransition {
                from: src,
                read,
                top: src_top,
                to: t.to,
                action: Action::Stay,
            }),
            LooseAction::Pop => {
                for z in all_tops(src_top) {
                    b.add(PdaTransition {
                        from: src,
                        read: None,
                        top: Some(z),
                        to: t.to,
                        action: Action::Pop,
                    });
                }
            }
            LooseAction::Push(syms) => {
                push_chain(&mut b, &mut fresh_state, src, src_top, syms, t.to);
            }
            LooseAction::Replace(syms) => {
                let after = if syms.is_empty() { t.to } else { fresh_state(&mut b) };
                for z in all_tops(src_top) {
                    b.add(PdaTransition {
                        from: src,
                        read: None,
                        top: Some(z),
                        to: after,
                        action: Action::Pop,
                    });
                }
                if !syms.is_empty() {
                    push_chain(&mut b, &mut fresh_state, after, None, syms, t.to);
                }
            }
        }
    }

    let mut start = m.start;
    if new_bottom {
        start = fresh(&mut b, "init");
        b.add(PdaTransition {
            from: start,
            read: None,
            top: Some(bottom),
            to: m.start,
            action: Action::Push(m.bottom),
        });
    }

    match (m.acceptance, new_bottom) {
        (Acceptance::Bottom, false) => {
            for &q in &m.accepting {
                b.accept(q);
            }
        }
        (Acceptance::Bottom, true) => {
            let done = fresh(&mut b, "accept");
            for &q in &m.accepting {
                b.add(PdaTransition {
                    from: q,
                    read: None,
                    top: Some(m.bottom),
                    to: done,
                    action: Action::Pop,
                });
            }
            b.accept(done);
        }
        (Acceptance::Final, _) => {
            let drain = fresh(&mut b, "drain");
            for &q in &m.accepting {
                b.add(PdaTransition {
                    from: q,
                    read: None,
                    top: None,
                    to: drain,
                    action: Action::Stay,
                });
            }
            let tops: Vec<usize> = (0..nz).filter(|&z| new_bottom || z != bottom).collect();
            for z in tops {
                b.add(PdaTransition {
                    from: drain,
                    read: None,
                    top: Some(z),
                    to: drain,
                    action: Action::Pop,
                });
            }
            b.accept(drain);
        }
    }

    b.build(start, bottom, m.turn_bound)
        .expect("normalization emits only normal-form transitions")
}
