//! Size measures: Var and Symb for grammars, size for machines.

use std::collections::BTreeMap;
use std::fmt;

use serde::{Deserialize, Serialize};

use crate::grammar::Grammar;
use crate::nfa::NfaMachine;
use crate::pda::PdaMachine;

#[derive(Clone, Debug, Default, PartialEq, Eq, Serialize, Deserialize)]
pub struct SizeReport {
    pub var_count: usize,
    pub symb_count: usize,
    /// states × stack symbols, bottom excluded.
    pub pda_size: usize,
    /// states × stack symbols, bottom included.
    pub pda_size_with_bottom: usize,
    pub nfa_size: usize,
    pub turn_bound: Option<usize>,
    /// Additional named counts (transitions, productions, ratios ...).
    #[serde(default, skip_serializing_if = "BTreeMap::is_empty")]
    pub extra: BTreeMap<String, String>,
}

impl SizeReport {
    pub fn with(mut self, key: &str, value: impl ToString) -> Self {
        self.extra.insert(key.to_string(), value.to_string());
        self
    }

    pub fn to_json(&self) -> String {
        serde_json::to_string_pretty(self).expect("report serializes")
    }
}

impl fmt::Display for SizeReport {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        writeln!(f, "var_count: {}", self.var_count)?;
        writeln!(f, "symb_count: {}", self.symb_count)?;
        writeln!(f, "pda_size: {}", self.pda_size)?;
        writeln!(f, "pda_size_with_bottom: {}", self.pda_size_with_bottom)?;
        writeln!(f, "nfa_size: {}", self.nfa_size)?;
        match self.turn_bound {
            Some(k) => writeln!(f, "turn_bound: {k}")?,
            None => writeln!(f, "turn_bound: none")?,
        }
        for (k, v) in &self.extra {
            writeln!(f, "{k}: {v}")?;
        }
        Ok(())
    }
}

/// Σ (2 + |α|) over all productions A → α.
pub fn symb(g: &Grammar) -> usize {
    g.productions().iter().map(|p| 2 + p.body.len()).sum()
}

pub fn measure_grammar(g: &Grammar) -> SizeReport {
    SizeReport {
        var_count: g.variables().len(),
        symb_count: symb(g),
        ..Default::default()
    }
    .with("productions", g.productions().len())
    .with("terminals", g.terminals().len())
}

pub fn measure_pda(m: &PdaMachine) -> SizeReport {
    SizeReport {
        pda_size: m.size(),
        pda_size_with_bottom: m.states().len() * m.stack().len(),
        turn_bound: m.turn_bound(),
        ..Default::default()
    }
    .with("states", m.states().len())
    .with("stack_symbols", m.stack().len() - 1)
    .with("transitions", m.transitions().len())
}

pub fn measure_nfa(n: &NfaMachine) -> SizeReport {
    SizeReport {
        nfa_size: n.states().len(),
        ..Default::default()
    }
    .with("transitions", n.transitions().len())
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::grammar::parse_grammar;

    #[test]
    fn symb_of_l2_witness() {
        let g = parse_grammar("start: S\nS -> A1 A1\nA1 -> A2 A2\nA2 -> a").unwrap();
        assert_eq!(symb(&g), 11);
        assert_eq!(measure_grammar(&g).var_count, 3);
    }

    #[test]
    fn no_productions() {
        let g = parse_grammar("start: S\nvariables: S").unwrap();
        assert_eq!(symb(&g), 0);
    }
}
