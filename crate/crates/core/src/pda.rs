//! Normal-form pushdown automata.
//!
//! ```text
//! states: q0 q1
//! input: a
//! stack: Z0 X
//! bottom: Z0
//! start: q0
//! accept: q1
//! turns: 1
//! q0 a * -> q0 stay
//! q0 eps * -> q1 push X
//! q1 eps X -> q1 pop
//! ```
//!
//! A top of `*` matches any stack symbol. It is only allowed on `stay` and
//! `push` transitions; a pop always names the symbol it removes.

use std::collections::HashMap;
use std::fmt;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::loose::{LooseAction, LoosePda};

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
pub enum Action {
    Stay,
    Pop,
    Push(usize),
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
pub struct PdaTransition {
    pub from: usize,
    /// `None` is an ε-move.
    pub read: Option<usize>,
    /// `None` matches any top.
    pub top: Option<usize>,
    pub to: usize,
    pub action: Action,
}

impl PdaTransition {
    pub fn matches_top(&self, top: usize) -> bool {
        self.top.map_or(true, |t| t == top)
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct PdaMachine {
    states: Vec<String>,
    input: Vec<String>,
    stack: Vec<String>,
    bottom: usize,
    start: usize,
    accepting: Vec<usize>,
    transitions: Vec<PdaTransition>,
    turn_bound: Option<usize>,
}

fn check_unique(kind: &str, names: &[String]) -> Result<()> {
    let mut seen = HashMap::new();
    for n in names {
        if seen.insert(n.as_str(), ()).is_some() {
            return Err(Error::Invalid(format!("{kind} `{n}` declared twice")));
        }
    }
    Ok(())
}

impl PdaMachine {
    #[allow(clippy::too_many_arguments)]
    pub fn new(
        states: Vec<String>,
        input: Vec<String>,
        stack: Vec<String>,
        bottom: usize,
        start: usize,
        accepting: Vec<usize>,
        transitions: Vec<PdaTransition>,
        turn_bound: Option<usize>,
    ) -> Result<Self> {
        check_unique("state", &states)?;
        check_unique("input symbol", &input)?;
        check_unique("stack symbol", &stack)?;
        if bottom >= stack.len() {
            return Err(Error::Invalid("bottom symbol is not a stack symbol".into()));
        }
        if start >= states.len() || accepting.iter().any(|&q| q >= states.len()) {
            return Err(Error::Invalid("state index out of range".into()));
        }
        let mut accepting = accepting;
        accepting.sort_unstable();
        accepting.dedup();
        let m = PdaMachine {
            states,
            input,
            stack,
            bottom,
            start,
            accepting,
            transitions,
            turn_bound,
        };
        for t in &m.transitions {
            m.check_transition(t)?;
        }
        Ok(m)
    }

    fn check_transition(&self, t: &PdaTransition) -> Result<()> {
        let ok = t.from < self.states.len()
            && t.to < self.states.len()
            && t.read.map_or(true, |a| a < self.input.len())
            && t.top.map_or(true, |z| z < self.stack.len());
        if !ok {
            return Err(Error::Invalid("transition index out of range".into()));
        }
        let line = self.render_transition(t);
        if t.read.is_some() && t.action != Action::Stay {
            return Err(Error::Invalid(format!("`{line}` reads and changes the stack")));
        }
        match t.action {
            Action::Push(b) if b == self.bottom => {
                Err(Error::Invalid(format!("`{line}` pushes the bottom symbol")))
            }
            Action::Push(b) if b >= self.stack.len() => {
                Err(Error::Invalid("pushed symbol out of range".into()))
            }
            Action::Pop if t.top.is_none() => {
                Err(Error::Invalid(format!("`{line}` pops without naming the top")))
            }
            Action::Pop if t.top == Some(self.bottom) => {
                Err(Error::Invalid(format!("`{line}` pops the bottom symbol")))
            }
            _ => Ok(()),
        }
    }

    /// Re-checks the four normal-form assumptions on the transition list.
    pub fn check_normal_form(&self) -> Result<()> {
        for t in &self.transitions {
            self.check_transition(t)?;
        }
        Ok(())
    }

    pub fn states(&self) -> &[String] {
        &self.states
    }

    pub fn input(&self) -> &[String] {
        &self.input
    }

    pub fn stack(&self) -> &[String] {
        &self.stack
    }

    pub fn bottom(&self) -> usize {
        self.bottom
    }

    pub fn start(&self) -> usize {
        self.start
    }

    pub fn accepting(&self) -> &[usize] {
        &self.accepting
    }

    pub fn is_accepting(&self, q: usize) -> bool {
        self.accepting.binary_search(&q).is_ok()
    }

    pub fn transitions(&self) -> &[PdaTransition] {
        &self.transitions
    }

    pub fn turn_bound(&self) -> Option<usize> {
        self.turn_bound
    }

    pub fn with_turn_bound(mut self, k: Option<usize>) -> Self {
        self.turn_bound = k;
        self
    }

    pub fn state_index(&self, name: &str) -> Option<usize> {
        self.states.iter().position(|s| s == name)
    }

    pub fn input_index(&self, name: &str) -> Option<usize> {
        self.input.iter().position(|s| s == name)
    }

    pub fn stack_index(&self, name: &str) -> Option<usize> {
        self.stack.iter().position(|s| s == name)
    }

    /// states × stack symbols other than the bottom.
    pub fn size(&self) -> usize {
        self.states.len() * (self.stack.len() - 1)
    }

    /// Transition indices grouped by source state.
    pub fn by_state(&self) -> Vec<Vec<usize>> {
        let mut out = vec![Vec::new(); self.states.len()];
        for (i, t) in self.transitions.iter().enumerate() {
            out[t.from].push(i);
        }
        out
    }

    /// Transitions with every wildcard top replaced by each stack symbol.
    pub fn concrete_transitions(&self) -> Vec<PdaTransition> {
        let mut out = Vec::with_capacity(self.transitions.len());
        for t in &self.transitions {
            match t.top {
                Some(_) => out.push(*t),
                None => out.extend((0..self.stack.len()).map(|z| PdaTransition {
                    top: Some(z),
                    ..*t
                })),
            }
        }
        out
    }

    pub fn render_transition(&self, t: &PdaTransition) -> String {
        let read = t.read.map_or("eps", |a| self.input[a].as_str());
        let top = t.top.map_or("*", |z| self.stack[z].as_str());
        let action = match t.action {
            Action::Stay => "stay".to_string(),
            Action::Pop => "pop".to_string(),
            Action::Push(b) => format!("push {}", self.stack[b]),
        };
        format!(
            "{} {} {} -> {} {}",
            self.states[t.from], read, top, self.states[t.to], action
        )
    }

    pub fn parse(text: &str) -> Result<PdaMachine> {
        LoosePda::parse(text)?.into_normal()
    }

    pub fn to_text(&self) -> String {
        self.to_string()
    }
}

impl fmt::Display for PdaMachine {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        writeln!(f, "states: {}", self.states.join(" "))?;
        writeln!(f, "input: {}", self.input.join(" "))?;
        writeln!(f, "stack: {}", self.stack.join(" "))?;
        writeln!(f, "bottom: {}", self.stack[self.bottom])?;
        writeln!(f, "start: {}", self.states[self.start])?;
        let acc: Vec<&str> = self.accepting.iter().map(|&q| self.states[q].as_str()).collect();
        writeln!(f, "accept: {}", acc.join(" "))?;
        if let Some(k) = self.turn_bound {
            writeln!(f, "turns: {k}")?;
        }
        for t in &self.transitions {
            writeln!(f, "{}", self.render_transition(t))?;
        }
        Ok(())
    }
}

impl From<&PdaMachine> for LoosePda {
    fn from(m: &PdaMachine) -> LoosePda {
        let transitions = m
            .transitions
            .iter()
            .map(|t| crate::loose::LooseTransition {
                from: t.from,
                read: t.read,
                top: t.top,
                to: t.to,
                action: match t.action {
                    Action::Stay => LooseAction::Stay,
                    Action::Pop => LooseAction::Pop,
                    Action::Push(b) => LooseAction::Push(vec![b]),
                },
            })
            .collect();
        LoosePda {
            states: m.states.clone(),
            input: m.input.clone(),
            stack: m.stack.clone(),
            bottom: m.bottom,
            start: m.start,
            accepting: m.accepting.clone(),
            transitions,
            acceptance: crate::loose::Acceptance::Bottom,
            turn_bound: m.turn_bound,
        }
    }
}

/// Interns names while assembling a machine.
#[derive(Clone, Debug, Default)]
pub struct PdaBuilder {
    states: Vec<String>,
    state_ix: HashMap<String, usize>,
    input: Vec<String>,
    input_ix: HashMap<String, usize>,
    stack: Vec<String>,
    stack_ix: HashMap<String, usize>,
    accepting: Vec<usize>,
    transitions: Vec<PdaTransition>,
    seen: std::collections::HashSet<PdaTransition>,
}

impl PdaBuilder {
    pub fn new() -> Self {
        Self::default()
    }

    fn intern(names: &mut Vec<String>, ix: &mut HashMap<String, usize>, name: &str) -> usize {
        if let Some(&i) = ix.get(name) {
            return i;
        }
        names.push(name.to_string());
        ix.insert(name.to_string(), names.len() - 1);
        names.len() - 1
    }

    pub fn state(&mut self, name: impl AsRef<str>) -> usize {
        Self::intern(&mut self.states, &mut self.state_ix, name.as_ref())
    }

    pub fn has_state(&self, name: &str) -> bool {
        self.state_ix.contains_key(name)
    }

    pub fn input(&mut self, name: impl AsRef<str>) -> usize {
        Self::intern(&mut self.input, &mut self.input_ix, name.as_ref())
    }

    pub fn stack(&mut self, name: impl AsRef<str>) -> usize {
        Self::intern(&mut self.stack, &mut self.stack_ix, name.as_ref())
    }

    pub fn accept(&mut self, q: usize) {
        self.accepting.push(q);
    }

    pub fn add(&mut self, t: PdaTransition) {
        if self.seen.insert(t) {
            self.transitions.push(t);
        }
    }

    pub fn state_count(&self) -> usize {
        self.states.len()
    }

    pub fn build(self, start: usize, bottom: usize, turn_bound: Option<usize>) -> Result<PdaMachine> {
        PdaMachine::new(
            self.states,
            self.input,
            self.stack,
            bottom,
            start,
            self.accepting,
            self.transitions,
            turn_bound,
        )
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    const SMALL: &str = "\
states: q0 q1
input: a
stack: Z0 X
bottom: Z0
start: q0
accept: q1
turns: 1
q0 a * -> q0 stay
q0 eps * -> q1 push X
q1 eps X -> q1 pop
";

    #[test]
    fn round_trip() {
        let m = PdaMachine::parse(SMALL).unwrap();
        assert_eq!(m.to_text(), SMALL);
        assert_eq!(m.size(), 2);
        assert_eq!(m.turn_bound(), Some(1));
    }

    #[test]
    fn rejects_bottom_push() {
        let bad = SMALL.replace("push X", "push Z0");
        assert!(PdaMachine::parse(&bad).is_err());
    }

    #[test]
    fn rejects_read_with_pop() {
        let bad = SMALL.replace("q1 eps X -> q1 pop", "q1 a X -> q1 pop");
        assert!(PdaMachine::parse(&bad).is_err());
    }

    #[test]
    fn wildcard_expansion() {
        let m = PdaMachine::parse(SMALL).unwrap();
        assert_eq!(m.concrete_transitions().len(), 5);
    }
}
