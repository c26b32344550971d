//! The coarse-grained dynamic information-flow calculus: data is unlabeled
//! unless explicitly wrapped, effects live in a monad, and a single floating
//! pc label tracks the sensitivity of everything in scope.

pub mod eval;
pub mod syntax;
pub mod typecheck;
pub mod value;

pub use eval::{
    eval_force, eval_force_monitored, eval_pure, eval_thunk, eval_thunk_monitored, CGMonitor,
    CGOutcome, CGPureOutcome,
};
pub use syntax::{CGExpr, CGThunk, CGType, Sensitivity};
pub use typecheck::{typecheck_cg, typecheck_cg_thunk, CGCtx, CGTypeError};
pub use value::{
    cg_value_has_type, type_of_cg_value, CGEnv, CGHeap, CGMemory, CGStore, CGValue,
};
