//! Grammar hygiene and the static analyses used by the constructions.

pub mod borders;
pub mod bounded;
pub mod normal;
pub mod trees;
pub mod useless;
pub mod varset;

pub use borders::{compare_borders, compute_borders, Border, BorderTable, WorkContext};
pub use bounded::{check_letter_bounded, check_word_bounded};
pub use normal::{binarize, eliminate_epsilon, eliminate_units, to_cnf};
pub use trees::{
    enumerate_partial_trees, enumerate_short_trees, PartialTreeSummary, ShortTreeSummary,
    TreeOptions, TreeScope,
};
pub use useless::{remove_useless, trim};
pub use varset::VarSet;
