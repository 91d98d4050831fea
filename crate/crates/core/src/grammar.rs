//! Context-free grammars and their text format.
//!
//! ```text
//! start: S
//! terminals: a b          # optional
//! S -> A B | a
//! A -> a
//! ```

use std::collections::{HashMap, HashSet};
use std::fmt;

use serde::{Deserialize, Serialize};

use crate::error::{syntax, Error, Result};
use crate::text::{check_token, content_lines, header, EPS};

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
pub enum Symbol {
    Var(usize),
    Term(usize),
}

impl Symbol {
    pub fn as_var(self) -> Option<usize> {
        match self {
            Symbol::Var(v) => Some(v),
            Symbol::Term(_) => None,
        }
    }

    pub fn as_term(self) -> Option<usize> {
        match self {
            Symbol::Term(t) => Some(t),
            Symbol::Var(_) => None,
        }
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
pub struct Production {
    pub head: usize,
    pub body: Vec<Symbol>,
}

/// A context-free grammar without empty bodies.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Grammar {
    variables: Vec<String>,
    terminals: Vec<String>,
    start: usize,
    productions: Vec<Production>,
    epsilon_stripped: bool,
}

impl Grammar {
    pub fn new(
        variables: Vec<String>,
        terminals: Vec<String>,
        start: usize,
        productions: Vec<Production>,
    ) -> Result<Self> {
        let mut names = HashSet::new();
        for n in variables.iter().chain(&terminals) {
            if !names.insert(n.as_str()) {
                return Err(Error::Invalid(format!("symbol `{n}` declared twice")));
            }
        }
        if start >= variables.len() {
            return Err(Error::Invalid("start symbol out of range".into()));
        }
        for p in &productions {
            if p.head >= variables.len() {
                return Err(Error::Invalid("production head out of range".into()));
            }
            if p.body.is_empty() {
                return Err(Error::EpsilonProduction(variables[p.head].clone()));
            }
            for s in &p.body {
                let ok = match *s {
                    Symbol::Var(v) => v < variables.len(),
                    Symbol::Term(t) => t < terminals.len(),
                };
                if !ok {
                    return Err(Error::Invalid("body symbol out of range".into()));
                }
            }
        }
        Ok(Grammar {
            variables,
            terminals,
            start,
            productions,
            epsilon_stripped: false,
        })
    }

    pub fn with_epsilon_stripped(mut self, stripped: bool) -> Self {
        self.epsilon_stripped = stripped;
        self
    }

    pub fn variables(&self) -> &[String] {
        &self.variables
    }

    pub fn terminals(&self) -> &[String] {
        &self.terminals
    }

    pub fn start(&self) -> usize {
        self.start
    }

    pub fn start_name(&self) -> &str {
        &self.variables[self.start]
    }

    pub fn productions(&self) -> &[Production] {
        &self.productions
    }

    /// Whether the empty word was removed from the language when this
    /// grammar was produced.
    pub fn epsilon_stripped(&self) -> bool {
        self.epsilon_stripped
    }

    pub fn var_index(&self, name: &str) -> Option<usize> {
        self.variables.iter().position(|v| v == name)
    }

    pub fn term_index(&self, name: &str) -> Option<usize> {
        self.terminals.iter().position(|t| t == name)
    }

    pub fn symbol_name(&self, s: Symbol) -> &str {
        match s {
            Symbol::Var(v) => &self.variables[v],
            Symbol::Term(t) => &self.terminals[t],
        }
    }

    /// Productions grouped by head, indexed by variable.
    pub fn by_head(&self) -> Vec<Vec<&Production>> {
        let mut out = vec![Vec::new(); self.variables.len()];
        for p in &self.productions {
            out[p.head].push(p);
        }
        out
    }

    pub fn max_body_len(&self) -> usize {
        self.productions.iter().map(|p| p.body.len()).max().unwrap_or(0)
    }

    /// The first production breaking Chomsky normal form, rendered.
    pub fn cnf_violation(&self) -> Option<String> {
        self.productions
            .iter()
            .find(|p| {
                !matches!(
                    p.body.as_slice(),
                    [Symbol::Term(_)] | [Symbol::Var(_), Symbol::Var(_)]
                )
            })
            .map(|p| self.render_production(p))
    }

    pub fn is_cnf(&self) -> bool {
        self.cnf_violation().is_none()
    }

    pub fn render_production(&self, p: &Production) -> String {
        let body: Vec<&str> = p.body.iter().map(|&s| self.symbol_name(s)).collect();
        format!("{} -> {}", self.variables[p.head], body.join(" "))
    }

    /// Same language, variables renamed through `f`.
    pub fn rename_variables(&self, f: impl Fn(&str) -> String) -> Result<Grammar> {
        let vars = self.variables.iter().map(|v| f(v)).collect();
        Ok(Grammar::new(vars, self.terminals.clone(), self.start, self.productions.clone())?
            .with_epsilon_stripped(self.epsilon_stripped))
    }

    /// A grammar with the same productions rooted at another variable.
    pub fn with_start(&self, start: usize) -> Result<Grammar> {
        if start >= self.variables.len() {
            return Err(Error::Invalid("start symbol out of range".into()));
        }
        let mut g = self.clone();
        g.start = start;
        Ok(g)
    }

    pub fn parse(text: &str) -> Result<Grammar> {
        parse_grammar(text)
    }

    pub fn to_text(&self) -> String {
        self.to_string()
    }
}

impl fmt::Display for Grammar {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        writeln!(f, "start: {}", self.variables[self.start])?;
        writeln!(f, "variables: {}", self.variables.join(" "))?;
        writeln!(f, "terminals: {}", self.terminals.join(" "))?;
        if self.epsilon_stripped {
            writeln!(f, "epsilon: stripped")?;
        }
        for p in &self.productions {
            writeln!(f, "{}", self.render_production(p))?;
        }
        Ok(())
    }
}

/// Incrementally assembles a grammar from named symbols. Duplicate
/// productions are dropped; empty bodies are kept so that constructions can
/// run epsilon elimination afterwards.
#[derive(Clone, Debug, Default)]
pub struct GrammarBuilder {
    variables: Vec<String>,
    var_ix: HashMap<String, usize>,
    terminals: Vec<String>,
    term_ix: HashMap<String, usize>,
    productions: Vec<Production>,
    seen: HashSet<Production>,
}

impl GrammarBuilder {
    pub fn new() -> Self {
        Self::default()
    }

    pub fn var(&mut self, name: impl AsRef<str>) -> usize {
        let name = name.as_ref();
        if let Some(&i) = self.var_ix.get(name) {
            return i;
        }
        let i = self.variables.len();
        self.variables.push(name.to_string());
        self.var_ix.insert(name.to_string(), i);
        i
    }

    pub fn term(&mut self, name: impl AsRef<str>) -> usize {
        let name = name.as_ref();
        if let Some(&i) = self.term_ix.get(name) {
            return i;
        }
        let i = self.terminals.len();
        self.terminals.push(name.to_string());
        self.term_ix.insert(name.to_string(), i);
        i
    }

    pub fn lookup_var(&self, name: &str) -> Option<usize> {
        self.var_ix.get(name).copied()
    }

    pub fn add(&mut self, head: usize, body: Vec<Symbol>) -> bool {
        let p = Production { head, body };
        if self.seen.contains(&p) {
            return false;
        }
        self.seen.insert(p.clone());
        self.productions.push(p);
        true
    }

    pub fn variables(&self) -> &[String] {
        &self.variables
    }

    pub fn terminals(&self) -> &[String] {
        &self.terminals
    }

    pub fn productions(&self) -> &[Production] {
        &self.productions
    }

    pub fn production_count(&self) -> usize {
        self.productions.len()
    }

    pub fn into_parts(self) -> (Vec<String>, Vec<String>, Vec<Production>) {
        (self.variables, self.terminals, self.productions)
    }

    pub fn build(self, start: usize) -> Result<Grammar> {
        Grammar::new(self.variables, self.terminals, start, self.productions)
    }
}

/// Parses the native grammar format.
pub fn parse_grammar(text: &str) -> Result<Grammar> {
    let mut start: Option<(usize, String)> = None;
    let mut declared_terms: Option<Vec<String>> = None;
    let mut declared_vars: Option<Vec<String>> = None;
    let mut stripped = false;
    let mut rules: Vec<(usize, String, Vec<String>)> = Vec::new();

    for (ln, line) in content_lines(text) {
        if let Some((lhs, rhs)) = line.split_once("->") {
            let head = lhs.trim();
            check_token(ln, head)?;
            for alt in rhs.split('|') {
                let body: Vec<String> = alt.split_whitespace().map(str::to_string).collect();
                if body.is_empty() || body.iter().any(|s| s == EPS) {
                    return Err(Error::EpsilonProduction(head.to_string()));
                }
                for s in &body {
                    check_token(ln, s)?;
                }
                rules.push((ln, head.to_string(), body));
            }
            continue;
        }
        let Some((key, rest)) = header(line) else {
            return Err(syntax(ln, format!("expected a header or a production, got `{line}`")));
        };
        let toks: Vec<String> = rest.split_whitespace().map(str::to_string).collect();
        for t in &toks {
            check_token(ln, t)?;
        }
        match key {
            "start" => {
                if toks.len() != 1 {
                    return Err(syntax(ln, "start expects exactly one variable"));
                }
                start = Some((ln, toks[0].clone()));
            }
            "terminals" => declared_terms = Some(toks),
            "variables" => declared_vars = Some(toks),
            "epsilon" => stripped = rest == "stripped",
            other => return Err(syntax(ln, format!("unknown header `{other}`"))),
        }
    }

    let (start_line, start_name) = match start {
        Some(s) => s,
        None => match rules.first() {
            Some((ln, h, _)) => (*ln, h.clone()),
            None => return Err(syntax(1, "missing `start:` header")),
        },
    };

    let mut b = GrammarBuilder::new();
    let term_set: Option<HashSet<&str>> = declared_terms
        .as_ref()
        .map(|ts| ts.iter().map(String::as_str).collect());
    if term_set.as_ref().is_some_and(|t| t.contains(start_name.as_str())) {
        return Err(syntax(start_line, format!("start symbol `{start_name}` is a terminal")));
    }
    b.var(&start_name);
    if let Some(vs) = &declared_vars {
        for v in vs {
            if term_set.as_ref().is_some_and(|t| t.contains(v.as_str())) {
                return Err(Error::Invalid(format!("`{v}` declared as variable and terminal")));
            }
            b.var(v);
        }
    }
    for (ln, h, _) in &rules {
        if term_set.as_ref().is_some_and(|t| t.contains(h.as_str())) {
            return Err(syntax(*ln, format!("terminal `{h}` used as a production head")));
        }
        if declared_vars.is_some() && b.lookup_var(h).is_none() {
            return Err(Error::UndeclaredSymbol(h.clone()));
        }
        b.var(h);
    }
    if let Some(ts) = &declared_terms {
        for t in ts {
            b.term(t);
        }
    }
    let explicit = declared_terms.is_some() || declared_vars.is_some();
    let mut prods = Vec::with_capacity(rules.len());
    for (_, h, body) in &rules {
        let head = b.lookup_var(h).expect("heads interned");
        let mut syms = Vec::with_capacity(body.len());
        for s in body {
            if let Some(v) = b.lookup_var(s) {
                syms.push(Symbol::Var(v));
            } else if term_set.as_ref().is_some_and(|t| t.contains(s.as_str())) || !explicit {
                syms.push(Symbol::Term(b.term(s)));
            } else if declared_terms.is_none() {
                // variables declared, terminals implicit
                syms.push(Symbol::Term(b.term(s)));
            } else {
                return Err(Error::UndeclaredSymbol(s.clone()));
            }
        }
        prods.push((head, syms));
    }
    for (head, body) in prods {
        b.add(head, body);
    }
    Ok(b.build(0)?.with_epsilon_stripped(stripped))
}

#[cfg(test)]
mod tests {
    use super::*;

    pub(crate) const EXAMPLE: &str = "\
start: S
S -> A1 E
E -> S A3 | S' A3
S' -> A B
A -> A1 F | A1 A2
B -> A2 G | A2 A3
F -> A A2
G -> B A3
A1 -> a1
A2 -> a2
A3 -> a3
";

    #[test]
    fn minimal_document() {
        let g = parse_grammar("start: S\nS -> a").unwrap();
        assert_eq!(g.variables().len(), 1);
        assert_eq!(g.productions().len(), 1);
        assert_eq!(g.terminals(), ["a"]);
    }

    #[test]
    fn example_grammar_variables() {
        let g = parse_grammar(EXAMPLE).unwrap();
        let mut vars: Vec<&str> = g.variables().iter().map(String::as_str).collect();
        vars.sort();
        assert_eq!(vars, ["A", "A1", "A2", "A3", "B", "E", "F", "G", "S", "S'"]);
        assert_eq!(g.productions().len(), 13);
        assert!(g.is_cnf());
    }

    #[test]
    fn empty_body_rejected() {
        assert_eq!(
            parse_grammar("S -> ").unwrap_err(),
            Error::EpsilonProduction("S".into())
        );
        assert_eq!(
            parse_grammar("start: S\nS -> a | eps").unwrap_err(),
            Error::EpsilonProduction("S".into())
        );
    }

    #[test]
    fn undeclared_symbol() {
        let err = parse_grammar("start: S\nterminals: a\nS -> a b").unwrap_err();
        assert_eq!(err, Error::UndeclaredSymbol("b".into()));
    }

    #[test]
    fn syntax_error_has_line() {
        let err = parse_grammar("start: S\n\nS => a").unwrap_err();
        assert!(matches!(err, Error::Syntax { line: 3, .. }));
    }

    #[test]
    fn round_trip_keeps_productionless_variables() {
        let g = parse_grammar("start: S\nvariables: S X\nS -> a X | b").unwrap();
        assert_eq!(parse_grammar(&g.to_text()).unwrap(), g);
    }
}
