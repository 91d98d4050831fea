//! Independent oracles used to check the constructions, and the witness
//! families.

pub mod brute;
pub mod cyk;
pub mod equiv;
pub mod sim;
pub mod unary;
pub mod witness;

pub use brute::brute_force_contexts;
pub use cyk::{cyk_membership, generate_upto, GrammarOracle};
pub use equiv::{box_equivalence, box_words, EnumerationBox, Exec, Subject, Verdict};
pub use sim::{
    loose_accepts, min_turns, pda_accepts, replay, CapOverrides, ComputationTrace, SearchCaps,
    SearchResult, TurnsResult,
};
pub use unary::minimal_unary_dfa_size;
pub use witness::{witness_ln, witness_lprime, witness_tilde_ln};
