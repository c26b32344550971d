//! Attacker-indexed equivalence relations and validity judgments for
//! the fine-grained and coarse-grained calculi, plus the cross-language
//! relation connecting them.
//!
//! These relations are the observational side of the security story:
//! noninterference says related inputs yield related outputs, and the
//! relations here decide relatedness. Flow-sensitive heaps are compared
//! up to a bijection between address spaces; [`find_bijection_fg`] and
//! [`find_bijection_cg`] search for a witness.

pub mod bijection;
pub mod cg_equiv;
pub mod cross;
pub mod fg_equiv;
pub mod search;
pub mod valid;

pub use bijection::{bij_compose, bij_extends, bij_identity, bij_inverse, Bijection, BijectionError};
pub use cg_equiv::{
    leq_cg_env, leq_cg_final, leq_cg_heap, leq_cg_initial, leq_cg_labeled, leq_cg_memory,
    leq_cg_store, leq_cg_value,
};
pub use cross::{CrossHooks, CrossRel};
pub use fg_equiv::{
    leq_fg_env, leq_fg_final, leq_fg_heap, leq_fg_initial, leq_fg_memory, leq_fg_raw,
    leq_fg_store, leq_fg_value,
};
pub use search::{find_bijection_cg, find_bijection_fg};
pub use valid::{
    valid_cg_env, valid_cg_heap, valid_cg_inputs, valid_cg_memory, valid_cg_outputs,
    valid_cg_store, valid_cg_value, valid_fg_env, valid_fg_heap, valid_fg_inputs,
    valid_fg_memory, valid_fg_outputs, valid_fg_raw, valid_fg_store, valid_fg_value,
};
