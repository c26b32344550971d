//! Validity: no dangling flow-sensitive references.
//!
//! A value is valid with respect to a heap size `n` when every heap
//! address it mentions, transitively through pairs, sums, labeled
//! wrappers, closures, and the store, is below `n`. Equivalence up to a
//! bijection is only an equivalence relation on valid states: the
//! identity bijection must be able to cover every reachable address.

use ifc_cg::{CGEnv, CGHeap, CGMemory, CGStore, CGValue};
use ifc_fg::{FGEnv, FGHeap, FGMemory, FGRaw, FGStore, FGValue};

pub fn valid_fg_value(n: usize, v: &FGValue) -> bool {
    valid_fg_raw(n, &v.raw)
}

pub fn valid_fg_raw(n: usize, r: &FGRaw) -> bool {
    match r {
        FGRaw::Unit | FGRaw::Lab(_) | FGRaw::RefI(_, _) => true,
        FGRaw::Closure { env, .. } => valid_fg_env(n, env),
        FGRaw::Inl(_, v) | FGRaw::Inr(_, v) => valid_fg_value(n, v),
        FGRaw::Pair(x, y) => valid_fg_value(n, x) && valid_fg_value(n, y),
        FGRaw::RefS(addr) => *addr < n,
    }
}

pub fn valid_fg_env(n: usize, env: &FGEnv) -> bool {
    env.iter().all(|v| valid_fg_value(n, v))
}

pub fn valid_fg_memory(n: usize, m: &FGMemory) -> bool {
    m.iter().all(|r| valid_fg_raw(n, r))
}

pub fn valid_fg_store(n: usize, s: &FGStore) -> bool {
    s.values().all(|m| valid_fg_memory(n, m))
}

pub fn valid_fg_heap(n: usize, h: &FGHeap) -> bool {
    h.iter().all(|v| valid_fg_value(n, v))
}

/// Inputs of a run: store, heap, and environment, all bounded by the
/// current heap size.
pub fn valid_fg_inputs(s: &FGStore, h: &FGHeap, env: &FGEnv) -> bool {
    let n = h.len();
    valid_fg_store(n, s) && valid_fg_heap(n, h) && valid_fg_env(n, env)
}

/// Outputs of a run: store, heap, and result value.
pub fn valid_fg_outputs(s: &FGStore, h: &FGHeap, v: &FGValue) -> bool {
    let n = h.len();
    valid_fg_store(n, s) && valid_fg_heap(n, h) && valid_fg_value(n, v)
}

pub fn valid_cg_value(n: usize, v: &CGValue) -> bool {
    match v {
        CGValue::Unit | CGValue::Lab(_) | CGValue::RefI(_, _) => true,
        CGValue::Closure { env, .. } | CGValue::TClosure { env, .. } => valid_cg_env(n, env),
        CGValue::Inl(_, v) | CGValue::Inr(_, v) | CGValue::Labeled(_, v) => valid_cg_value(n, v),
        CGValue::Pair(x, y) => valid_cg_value(n, x) && valid_cg_value(n, y),
        CGValue::RefS(addr) => *addr < n,
    }
}

pub fn valid_cg_env(n: usize, env: &CGEnv) -> bool {
    env.iter().all(|v| valid_cg_value(n, v))
}

pub fn valid_cg_memory(n: usize, m: &CGMemory) -> bool {
    m.iter().all(|v| valid_cg_value(n, v))
}

pub fn valid_cg_store(n: usize, s: &CGStore) -> bool {
    s.values().all(|m| valid_cg_memory(n, m))
}

pub fn valid_cg_heap(n: usize, h: &CGHeap) -> bool {
    h.iter().all(|(_, v)| valid_cg_value(n, v))
}

/// Inputs of a run: store, heap, and environment, all bounded by the
/// current heap size.
pub fn valid_cg_inputs(s: &CGStore, h: &CGHeap, env: &CGEnv) -> bool {
    let n = h.len();
    valid_cg_store(n, s) && valid_cg_heap(n, h) && valid_cg_env(n, env)
}

/// Outputs of a run: store, heap, and result value.
pub fn valid_cg_outputs(s: &CGStore, h: &CGHeap, v: &CGValue) -> bool {
    let n = h.len();
    valid_cg_store(n, s) && valid_cg_heap(n, h) && valid_cg_value(n, v)
}
