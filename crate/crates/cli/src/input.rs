//! Reading subjects from files, with the kind told apart by the headers.

use std::io::Read;
use std::path::Path;

use ftpda::{Grammar, NfaMachine, PdaMachine};

use crate::Failure;

pub enum Loaded {
    Grammar(Grammar),
    Pda(PdaMachine),
    Nfa(NfaMachine),
}

/// File contents; `-` is standard input.
pub fn read(path: &Path) -> Result<String, Failure> {
    if path.as_os_str() == "-" {
        let mut s = String::new();
        std::io::stdin().read_to_string(&mut s)?;
        return Ok(s);
    }
    std::fs::read_to_string(path).map_err(|e| Failure::usage(format!("{}: {e}", path.display())))
}

fn has_header(text: &str, key: &str) -> bool {
    text.lines()
        .map(str::trim)
        .any(|l| l.split_once(':').is_some_and(|(k, _)| k.trim() == key))
}

fn with_path<T>(path: &Path, r: ftpda::Result<T>) -> Result<T, Failure> {
    r.map_err(|e| {
        let mut f = Failure::from(e);
        f.message = format!("{}: {}", path.display(), f.message);
        f
    })
}

pub fn load(path: &Path) -> Result<Loaded, Failure> {
    let text = read(path)?;
    if has_header(&text, "states") {
        if has_header(&text, "alphabet") {
            with_path(path, NfaMachine::parse(&text)).map(Loaded::Nfa)
        } else {
            with_path(path, PdaMachine::parse(&text)).map(Loaded::Pda)
        }
    } else {
        with_path(path, Grammar::parse(&text)).map(Loaded::Grammar)
    }
}

pub fn grammar(path: &Path) -> Result<Grammar, Failure> {
    match load(path)? {
        Loaded::Grammar(g) => Ok(g),
        _ => Err(Failure::usage(format!("{}: expected a grammar", path.display()))),
    }
}

pub fn pda(path: &Path) -> Result<PdaMachine, Failure> {
    match load(path)? {
        Loaded::Pda(m) => Ok(m),
        _ => Err(Failure::usage(format!("{}: expected a pushdown automaton", path.display()))),
    }
}
