//! Graphviz export. Node and edge order follow the data model order, so the
//! output is a pure function of the input.

use std::fmt::Write;

use crate::grammar::{Grammar, Symbol};
use crate::nfa::NfaMachine;
use crate::pda::PdaMachine;

fn quote(s: &str) -> String {
    format!("\"{}\"", s.replace('\\', "\\\\").replace('"', "\\\""))
}

/// One node per variable; one edge per variable occurrence in a body.
pub fn grammar_dot(g: &Grammar) -> String {
    let mut out = String::from("digraph grammar {\n");
    for (i, v) in g.variables().iter().enumerate() {
        let shape = if i == g.start() { "doublecircle" } else { "circle" };
        writeln!(out, "  {} [shape={shape}];", quote(v)).unwrap();
    }
    for p in g.productions() {
        for s in &p.body {
            if let Symbol::Var(v) = s {
                writeln!(
                    out,
                    "  {} -> {};",
                    quote(&g.variables()[p.head]),
                    quote(&g.variables()[*v])
                )
                .unwrap();
            }
        }
    }
    out.push_str("}\n");
    out
}

pub fn pda_dot(m: &PdaMachine) -> String {
    let mut out = String::from("digraph pda {\n  rankdir=LR;\n");
    for (i, q) in m.states().iter().enumerate() {
        let shape = if m.is_accepting(i) { "doublecircle" } else { "circle" };
        writeln!(out, "  {} [shape={shape}];", quote(q)).unwrap();
    }
    writeln!(out, "  __start [shape=point];").unwrap();
    writeln!(out, "  __start -> {};", quote(&m.states()[m.start()])).unwrap();
    for t in m.transitions() {
        let read = t.read.map_or("eps", |a| m.input()[a].as_str());
        let top = t.top.map_or("*", |z| m.stack()[z].as_str());
        writeln!(
            out,
            "  {} -> {} [label={}];",
            quote(&m.states()[t.from]),
            quote(&m.states()[t.to]),
            quote(&format!("{read}, {top} / {}", action_label(m, t)))
        )
        .unwrap();
    }
    out.push_str("}\n");
    out
}

fn action_label(m: &PdaMachine, t: &crate::pda::PdaTransition) -> String {
    match t.action {
        crate::pda::Action::Stay => "stay".into(),
        crate::pda::Action::Pop => "pop".into(),
        crate::pda::Action::Push(b) => format!("push {}", m.stack()[b]),
    }
}

pub fn nfa_dot(n: &NfaMachine) -> String {
    let mut out = String::from("digraph nfa {\n  rankdir=LR;\n");
    for (i, q) in n.states().iter().enumerate() {
        let shape = if n.accepting().contains(&i) { "doublecircle" } else { "circle" };
        writeln!(out, "  {} [shape={shape}];", quote(q)).unwrap();
    }
    if !n.transitions().is_empty() || n.states().len() > 1 {
        writeln!(out, "  __start [shape=point];").unwrap();
        writeln!(out, "  __start -> {};", quote(&n.states()[n.start()])).unwrap();
    }
    for &(p, a, q) in n.transitions() {
        let a = a.map_or("eps", |a| n.alphabet()[a].as_str());
        writeln!(
            out,
            "  {} -> {} [label={}];",
            quote(&n.states()[p]),
            quote(&n.states()[q]),
            quote(a)
        )
        .unwrap();
    }
    out.push_str("}\n");
    out
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::nfa::parse_nfa;

    #[test]
    fn single_state_nfa_has_no_edges() {
        let n = parse_nfa("states: s\nalphabet: a\nstart: s\naccept: s\n").unwrap();
        let d = nfa_dot(&n);
        assert_eq!(d.matches("->").count(), 0);
        assert_eq!(d.matches("shape=").count(), 1);
    }
}
