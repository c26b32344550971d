#![allow(dead_code)]

//! Shared generators for the equivalence-law tests: valid values,
//! stores, and heaps for both calculi, plus the two label-respecting
//! transformations used to build related copies. Scrambling replaces
//! content under secret labels, renaming permutes flow-sensitive heap
//! addresses; a generated value, its scrambled-renamed copy, and the
//! permutation's bijection are related by construction.

use std::collections::BTreeMap;
use std::sync::OnceLock;

use ifc_cg::{CGHeap, CGMemory, CGStore, CGType, CGValue};
use ifc_fg::{FGHeap, FGMemory, FGRaw, FGStore, FGType, FGValue};
use ifc_lattice::{Label, Lattice};
use ifc_security::Bijection;
use proptest::prelude::*;
use proptest::strategy::Union;

pub fn lat() -> &'static Lattice {
    static LAT: OnceLock<Lattice> = OnceLock::new();
    LAT.get_or_init(Lattice::two_point)
}

pub fn low() -> Label {
    lat().label("L").unwrap()
}

pub fn high() -> Label {
    lat().label("H").unwrap()
}

pub fn arb_label() -> impl Strategy<Value = Label> {
    prop_oneof![Just(low()), Just(high())]
}

pub fn arb_permutation(n: usize) -> BoxedStrategy<Vec<usize>> {
    Just((0..n).collect::<Vec<usize>>()).prop_shuffle().boxed()
}

pub fn perm_bijection(pi: &[usize]) -> Bijection {
    Bijection::new(pi.iter().enumerate().map(|(i, &j)| (i, j)))
        .expect("a permutation is injective")
}

// Fine-grained generators.

pub fn arb_fg_value(heap_size: usize) -> BoxedStrategy<FGValue> {
    let mut leaves: Vec<BoxedStrategy<FGRaw>> = vec![
        Just(FGRaw::Unit).boxed(),
        arb_label().prop_map(FGRaw::Lab).boxed(),
        (arb_label(), 0..3usize)
            .prop_map(|(l, n)| FGRaw::RefI(l, n))
            .boxed(),
    ];
    if heap_size > 0 {
        leaves.push((0..heap_size).prop_map(FGRaw::RefS).boxed());
    }
    let leaf = (Union::new(leaves), arb_label()).prop_map(|(r, l)| FGValue::new(r, l));
    leaf.prop_recursive(3, 24, 3, |inner| {
        prop_oneof![
            (inner.clone(), arb_label()).prop_map(|(v, l)| {
                FGValue::new(FGRaw::Inl(FGType::bool_ty(), Box::new(v)), l)
            }),
            (inner.clone(), arb_label()).prop_map(|(v, l)| {
                FGValue::new(FGRaw::Inr(FGType::bool_ty(), Box::new(v)), l)
            }),
            (inner.clone(), inner.clone(), arb_label()).prop_map(|(x, y, l)| {
                FGValue::new(FGRaw::Pair(Box::new(x), Box::new(y)), l)
            }),
            (prop::collection::vec(inner, 0..3), arb_label()).prop_map(|(env, l)| {
                let env_tys = vec![FGType::Unit; env.len()];
                FGValue::new(
                    FGRaw::Closure {
                        param: FGType::Unit,
                        body: Box::new(ifc_fg::syntax::build::var(0)),
                        env,
                        env_tys,
                    },
                    l,
                )
            }),
        ]
    })
    .boxed()
}

pub fn arb_fg_memory(heap_size: usize) -> BoxedStrategy<FGMemory> {
    prop::collection::vec(arb_fg_value(heap_size).prop_map(|v| v.raw), 0..3).boxed()
}

pub fn arb_fg_store(heap_size: usize) -> BoxedStrategy<FGStore> {
    (arb_fg_memory(heap_size), arb_fg_memory(heap_size))
        .prop_map(|(m_low, m_high)| {
            BTreeMap::from([(low(), m_low), (high(), m_high)])
        })
        .boxed()
}

pub fn arb_fg_heap(heap_size: usize) -> BoxedStrategy<FGHeap> {
    prop::collection::vec(arb_fg_value(heap_size), heap_size..=heap_size).boxed()
}

/// A store, heap, and value that are valid by construction: every
/// flow-sensitive address is below the heap size.
pub fn arb_fg_state(max_heap: usize) -> BoxedStrategy<(FGStore, FGHeap, FGValue)> {
    (0..=max_heap)
        .prop_flat_map(|n| (arb_fg_store(n), arb_fg_heap(n), arb_fg_value(n)))
        .boxed()
}

pub fn scramble_fg_value(a: Label, v: &FGValue, salt: &FGRaw) -> FGValue {
    if !lat().leq(v.lab, a).unwrap() {
        return FGValue::new(salt.clone(), v.lab);
    }
    FGValue::new(scramble_fg_raw(a, &v.raw, salt), v.lab)
}

pub fn scramble_fg_raw(a: Label, r: &FGRaw, salt: &FGRaw) -> FGRaw {
    match r {
        FGRaw::Unit | FGRaw::Lab(_) | FGRaw::RefI(_, _) | FGRaw::RefS(_) => r.clone(),
        FGRaw::Inl(t, v) => FGRaw::Inl(t.clone(), Box::new(scramble_fg_value(a, v, salt))),
        FGRaw::Inr(t, v) => FGRaw::Inr(t.clone(), Box::new(scramble_fg_value(a, v, salt))),
        FGRaw::Pair(x, y) => FGRaw::Pair(
            Box::new(scramble_fg_value(a, x, salt)),
            Box::new(scramble_fg_value(a, y, salt)),
        ),
        FGRaw::Closure { param, body, env, env_tys } => FGRaw::Closure {
            param: param.clone(),
            body: body.clone(),
            env: env.iter().map(|v| scramble_fg_value(a, v, salt)).collect(),
            env_tys: env_tys.clone(),
        },
    }
}

pub fn scramble_fg_store(a: Label, s: &FGStore, salt: &FGRaw) -> FGStore {
    s.iter()
        .map(|(&l, m)| {
            let m = if lat().leq(l, a).unwrap() {
                m.iter().map(|r| scramble_fg_raw(a, r, salt)).collect()
            } else {
                // Secret memories may change arbitrarily, length included.
                vec![salt.clone(); m.len() + 1]
            };
            (l, m)
        })
        .collect()
}

pub fn scramble_fg_heap(a: Label, h: &FGHeap, salt: &FGRaw) -> FGHeap {
    h.iter().map(|v| scramble_fg_value(a, v, salt)).collect()
}

pub fn rename_fg_value(v: &FGValue, pi: &[usize]) -> FGValue {
    FGValue::new(rename_fg_raw(&v.raw, pi), v.lab)
}

pub fn rename_fg_raw(r: &FGRaw, pi: &[usize]) -> FGRaw {
    match r {
        FGRaw::Unit | FGRaw::Lab(_) | FGRaw::RefI(_, _) => r.clone(),
        FGRaw::RefS(n) => FGRaw::RefS(pi[*n]),
        FGRaw::Inl(t, v) => FGRaw::Inl(t.clone(), Box::new(rename_fg_value(v, pi))),
        FGRaw::Inr(t, v) => FGRaw::Inr(t.clone(), Box::new(rename_fg_value(v, pi))),
        FGRaw::Pair(x, y) => FGRaw::Pair(
            Box::new(rename_fg_value(x, pi)),
            Box::new(rename_fg_value(y, pi)),
        ),
        FGRaw::Closure { param, body, env, env_tys } => FGRaw::Closure {
            param: param.clone(),
            body: body.clone(),
            env: env.iter().map(|v| rename_fg_value(v, pi)).collect(),
            env_tys: env_tys.clone(),
        },
    }
}

pub fn rename_fg_store(s: &FGStore, pi: &[usize]) -> FGStore {
    s.iter()
        .map(|(&l, m)| (l, m.iter().map(|r| rename_fg_raw(r, pi)).collect()))
        .collect()
}

pub fn rename_fg_heap(h: &FGHeap, pi: &[usize]) -> FGHeap {
    let mut out = h.clone();
    for (i, v) in h.iter().enumerate() {
        out[pi[i]] = rename_fg_value(v, pi);
    }
    out
}

// Coarse-grained generators.

pub fn arb_cg_value(heap_size: usize) -> BoxedStrategy<CGValue> {
    let mut leaves: Vec<BoxedStrategy<CGValue>> = vec![
        Just(CGValue::Unit).boxed(),
        arb_label().prop_map(CGValue::Lab).boxed(),
        (arb_label(), 0..3usize)
            .prop_map(|(l, n)| CGValue::RefI(l, n))
            .boxed(),
    ];
    if heap_size > 0 {
        leaves.push((0..heap_size).prop_map(CGValue::RefS).boxed());
    }
    let leaf = Union::new(leaves);
    leaf.prop_recursive(3, 24, 3, |inner| {
        prop_oneof![
            inner.clone().prop_map(|v| CGValue::Inl(CGType::bool_ty(), Box::new(v))),
            inner.clone().prop_map(|v| CGValue::Inr(CGType::bool_ty(), Box::new(v))),
            (inner.clone(), inner.clone())
                .prop_map(|(x, y)| CGValue::Pair(Box::new(x), Box::new(y))),
            (arb_label(), inner.clone())
                .prop_map(|(l, v)| CGValue::Labeled(l, Box::new(v))),
            prop::collection::vec(inner.clone(), 0..3).prop_map(|env| {
                let env_tys = vec![CGType::Unit; env.len()];
                CGValue::Closure {
                    param: CGType::Unit,
                    body: Box::new(ifc_cg::syntax::build::var(0)),
                    env,
                    env_tys,
                }
            }),
            prop::collection::vec(inner, 0..3).prop_map(|env| {
                let env_tys = vec![CGType::Unit; env.len()];
                CGValue::TClosure {
                    thunk: Box::new(ifc_cg::syntax::build::ret(
                        ifc_cg::syntax::build::unit(),
                    )),
                    env,
                    env_tys,
                }
            }),
        ]
    })
    .boxed()
}

pub fn arb_cg_memory(heap_size: usize) -> BoxedStrategy<CGMemory> {
    prop::collection::vec(arb_cg_value(heap_size), 0..3).boxed()
}

pub fn arb_cg_store(heap_size: usize) -> BoxedStrategy<CGStore> {
    (arb_cg_memory(heap_size), arb_cg_memory(heap_size))
        .prop_map(|(m_low, m_high)| {
            BTreeMap::from([(low(), m_low), (high(), m_high)])
        })
        .boxed()
}

pub fn arb_cg_heap(heap_size: usize) -> BoxedStrategy<CGHeap> {
    prop::collection::vec((arb_label(), arb_cg_value(heap_size)), heap_size..=heap_size).boxed()
}

/// A store, heap, and value that are valid by construction.
pub fn arb_cg_state(max_heap: usize) -> BoxedStrategy<(CGStore, CGHeap, CGValue)> {
    (0..=max_heap)
        .prop_flat_map(|n| (arb_cg_store(n), arb_cg_heap(n), arb_cg_value(n)))
        .boxed()
}

pub fn scramble_cg_value(a: Label, v: &CGValue, salt: &CGValue) -> CGValue {
    match v {
        CGValue::Unit | CGValue::Lab(_) | CGValue::RefI(_, _) | CGValue::RefS(_) => v.clone(),
        CGValue::Inl(t, w) => CGValue::Inl(t.clone(), Box::new(scramble_cg_value(a, w, salt))),
        CGValue::Inr(t, w) => CGValue::Inr(t.clone(), Box::new(scramble_cg_value(a, w, salt))),
        CGValue::Pair(x, y) => CGValue::Pair(
            Box::new(scramble_cg_value(a, x, salt)),
            Box::new(scramble_cg_value(a, y, salt)),
        ),
        CGValue::Labeled(l, w) => {
            if lat().leq(*l, a).unwrap() {
                CGValue::Labeled(*l, Box::new(scramble_cg_value(a, w, salt)))
            } else {
                CGValue::Labeled(*l, Box::new(salt.clone()))
            }
        }
        CGValue::Closure { param, body, env, env_tys } => CGValue::Closure {
            param: param.clone(),
            body: body.clone(),
            env: env.iter().map(|w| scramble_cg_value(a, w, salt)).collect(),
            env_tys: env_tys.clone(),
        },
        CGValue::TClosure { thunk, env, env_tys } => CGValue::TClosure {
            thunk: thunk.clone(),
            env: env.iter().map(|w| scramble_cg_value(a, w, salt)).collect(),
            env_tys: env_tys.clone(),
        },
    }
}

pub fn scramble_cg_store(a: Label, s: &CGStore, salt: &CGValue) -> CGStore {
    s.iter()
        .map(|(&l, m)| {
            let m = if lat().leq(l, a).unwrap() {
                m.iter().map(|v| scramble_cg_value(a, v, salt)).collect()
            } else {
                vec![salt.clone(); m.len() + 1]
            };
            (l, m)
        })
        .collect()
}

pub fn scramble_cg_heap(a: Label, h: &CGHeap, salt: &CGValue) -> CGHeap {
    h.iter()
        .map(|(l, v)| {
            if lat().leq(*l, a).unwrap() {
                (*l, scramble_cg_value(a, v, salt))
            } else {
                (*l, salt.clone())
            }
        })
        .collect()
}

pub fn rename_cg_value(v: &CGValue, pi: &[usize]) -> CGValue {
    match v {
        CGValue::Unit | CGValue::Lab(_) | CGValue::RefI(_, _) => v.clone(),
        CGValue::RefS(n) => CGValue::RefS(pi[*n]),
        CGValue::Inl(t, w) => CGValue::Inl(t.clone(), Box::new(rename_cg_value(w, pi))),
        CGValue::Inr(t, w) => CGValue::Inr(t.clone(), Box::new(rename_cg_value(w, pi))),
        CGValue::Pair(x, y) => CGValue::Pair(
            Box::new(rename_cg_value(x, pi)),
            Box::new(rename_cg_value(y, pi)),
        ),
        CGValue::Labeled(l, w) => CGValue::Labeled(*l, Box::new(rename_cg_value(w, pi))),
        CGValue::Closure { param, body, env, env_tys } => CGValue::Closure {
            param: param.clone(),
            body: body.clone(),
            env: env.iter().map(|w| rename_cg_value(w, pi)).collect(),
            env_tys: env_tys.clone(),
        },
        CGValue::TClosure { thunk, env, env_tys } => CGValue::TClosure {
            thunk: thunk.clone(),
            env: env.iter().map(|w| rename_cg_value(w, pi)).collect(),
            env_tys: env_tys.clone(),
        },
    }
}

pub fn rename_cg_store(s: &CGStore, pi: &[usize]) -> CGStore {
    s.iter()
        .map(|(&l, m)| (l, m.iter().map(|v| rename_cg_value(v, pi)).collect()))
        .collect()
}

pub fn rename_cg_heap(h: &CGHeap, pi: &[usize]) -> CGHeap {
    let mut out = h.clone();
    for (i, (l, v)) in h.iter().enumerate() {
        out[pi[i]] = (*l, rename_cg_value(v, pi));
    }
    out
}
