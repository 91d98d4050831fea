//! Membership comparison over every sorted word of an exponent box.

#[cfg(feature = "parallel")]
use rayon::prelude::*;

use crate::error::{Error, Result};
use crate::grammar::Grammar;
use crate::nfa::NfaMachine;
use crate::oracle::cyk::GrammarOracle;
use crate::oracle::sim::{pda_accepts, CapOverrides, SearchCaps};
use crate::pda::PdaMachine;
use crate::text::{bounded_word, Word};

#[derive(Clone, Copy, Debug)]
pub enum Subject<'a> {
    Grammar(&'a Grammar),
    Pda(&'a PdaMachine),
    Nfa(&'a NfaMachine),
}

/// A subject prepared for repeated membership queries.
pub enum Oracle<'a> {
    Grammar(GrammarOracle),
    Pda(&'a PdaMachine, CapOverrides),
    Nfa(&'a NfaMachine),
}

impl<'a> Oracle<'a> {
    pub fn new(s: Subject<'a>, caps: CapOverrides) -> Self {
        match s {
            Subject::Grammar(g) => Oracle::Grammar(GrammarOracle::new(g)),
            Subject::Pda(m) => Oracle::Pda(m, caps),
            Subject::Nfa(n) => Oracle::Nfa(n),
        }
    }

    /// `None` when the pushdown search hit its caps.
    pub fn accepts(&self, w: &[String]) -> Option<bool> {
        match self {
            Oracle::Grammar(g) => Some(g.accepts(w)),
            Oracle::Pda(m, o) => {
                pda_accepts(m, w, SearchCaps::for_input(m, w.len()).with_overrides(o)).verdict()
            }
            Oracle::Nfa(n) => Some(n.accepts_names(w)),
        }
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct EnumerationBox {
    /// Per-letter exponent bound.
    pub bound: usize,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Default)]
pub enum Exec {
    Sequential,
    #[default]
    Parallel,
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub enum Verdict {
    Equal,
    Difference { word: Word, left: bool, right: bool },
}

/// Exponent vectors of the box in lexicographic order.
pub fn box_vectors(m: usize, bound: usize) -> Vec<Vec<usize>> {
    let mut out = Vec::new();
    let mut v = vec![0; m];
    loop {
        out.push(v.clone());
        let mut i = m;
        loop {
            if i == 0 {
                return out;
            }
            i -= 1;
            if v[i] < bound {
                v[i] += 1;
                for x in v.iter_mut().skip(i + 1) {
                    *x = 0;
                }
                break;
            }
        }
    }
}

/// Every word `a_1^k_1 .. a_m^k_m` with `k_i <= bound`, in box order.
pub fn box_words(alphabet: &[String], bx: EnumerationBox) -> Vec<Word> {
    box_vectors(alphabet.len(), bx.bound)
        .iter()
        .map(|k| bounded_word(alphabet, k))
        .collect()
}

enum Outcome {
    Same,
    Differs(bool, bool),
    Unknown,
}

fn compare(x: &Oracle, y: &Oracle, w: &[String]) -> Outcome {
    match (x.accepts(w), y.accepts(w)) {
        (Some(a), Some(b)) if a == b => Outcome::Same,
        (Some(a), Some(b)) => Outcome::Differs(a, b),
        _ => Outcome::Unknown,
    }
}

fn settle(words: &[Word], outcomes: impl IntoIterator<Item = Outcome>) -> Result<Verdict> {
    for (w, o) in words.iter().zip(outcomes) {
        match o {
            Outcome::Same => {}
            Outcome::Differs(left, right) => {
                return Ok(Verdict::Difference {
                    word: w.clone(),
                    left,
                    right,
                })
            }
            Outcome::Unknown => return Err(Error::Inconclusive(crate::text::fmt_word(w))),
        }
    }
    Ok(Verdict::Equal)
}

/// Compares membership on every word of the box and reports the first
/// disagreement in box order. The verdict does not depend on `exec`.
pub fn box_equivalence(
    x: Subject,
    y: Subject,
    bx: EnumerationBox,
    alphabet: &[String],
    caps: CapOverrides,
    exec: Exec,
) -> Result<Verdict> {
    let words = box_words(alphabet, bx);
    let (ox, oy) = (Oracle::new(x, caps), Oracle::new(y, caps));
    match exec {
        Exec::Sequential => {
            let lazy = words.iter().map(|w| compare(&ox, &oy, w));
            settle(&words, lazy)
        }
        Exec::Parallel => {
            #[cfg(feature = "parallel")]
            let outcomes: Vec<Outcome> = words.par_iter().map(|w| compare(&ox, &oy, w)).collect();
            #[cfg(not(feature = "parallel"))]
            let outcomes: Vec<Outcome> = words.iter().map(|w| compare(&ox, &oy, w)).collect();
            settle(&words, outcomes)
        }
    }
}
