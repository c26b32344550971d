//! The fine-grained dynamic information-flow calculus: every value carries
//! an intrinsic security label, and a big-step monitor propagates and checks
//! labels during evaluation.

pub mod eval;
pub mod syntax;
pub mod typecheck;
pub mod value;

pub use eval::{eval_fg, eval_fg_monitored, FGMonitor, FGOutcome};
pub use syntax::{FGExpr, FGType, Sensitivity};
pub use typecheck::{typecheck_fg, FGCtx, FGTypeError};
pub use value::{
    fg_value_has_type, type_of_fg_value, FGEnv, FGHeap, FGMemory, FGRaw, FGStore, FGValue,
};
