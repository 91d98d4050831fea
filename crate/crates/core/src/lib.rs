//! Bounded context-free languages and finite-turn pushdown automata.

pub mod dfa;
pub mod dot;
pub mod error;
pub mod finite_turn;
pub mod grammar;
pub mod loose;
pub mod measure;
pub mod nfa;
pub mod oracle;
pub mod pda;
pub mod reduction;
pub mod text;
pub mod transform;
pub mod unary_turns;
pub mod word;

pub use error::{Error, Result};
pub use grammar::{parse_grammar, Grammar, GrammarBuilder, Production, Symbol};
pub use loose::{normalize_pda, LoosePda};
pub use measure::{measure_grammar, measure_nfa, measure_pda, SizeReport};
pub use nfa::{parse_nfa, NfaMachine};
pub use pda::{Action, PdaBuilder, PdaMachine, PdaTransition};
