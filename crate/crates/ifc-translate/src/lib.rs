//! Program translations between the fine-grained and coarse-grained
//! calculi, in both directions.
//!
//! The fine-to-coarse direction boxes every intermediate result in an
//! explicitly labeled value and is exact: a source run and its translated
//! run finish in structurally equal configurations (after translating the
//! source's), with the floating label back where it started. The
//! coarse-to-fine direction suspends computations as unit-functions and is
//! relational: the translated run's result carries the source's final
//! floating label as its annotation and matches its value up to the
//! cross-language relation, with [`translate_hooks`] deciding closure
//! cases.

pub mod cg2fg;
pub mod fg2cg;
pub mod hooks;

pub use cg2fg::{
    cg2fg_env, cg2fg_env_types, cg2fg_expr, cg2fg_heap, cg2fg_memory, cg2fg_sensitivity,
    cg2fg_state, cg2fg_store, cg2fg_thunk, cg2fg_type, cg2fg_value, TranslateError,
};
pub use fg2cg::{
    fg2cg_bare_type, fg2cg_env, fg2cg_env_types, fg2cg_expr, fg2cg_heap, fg2cg_memory,
    fg2cg_raw, fg2cg_sensitivity, fg2cg_state, fg2cg_store, fg2cg_thunk, fg2cg_type,
    fg2cg_value,
};
pub use hooks::translate_hooks;
