//! Runtime values, stores, heaps, and the value-typing oracle.
//!
//! Values carry no intrinsic label; sensitivity lives only in explicit
//! `Labeled` wrappers and in the floating pc of a running configuration.
//! Both closure forms record the types of their captured environment so
//! values are typeable without consulting the evaluation context, even when
//! the store contains cycles.

use std::collections::{BTreeMap, BTreeSet};

use ifc_lattice::{Label, Lattice};

use crate::syntax::{CGExpr, CGThunk, CGType, Sensitivity};
use crate::typecheck::{typecheck_cg, typecheck_cg_thunk};

/// Evaluation environment; De Bruijn index `n` resolves to
/// `env[env.len() - 1 - n]`.
pub type CGEnv = Vec<CGValue>;

#[derive(PartialEq, Eq, Clone, Debug)]
pub enum CGValue {
    Unit,
    Lab(Label),
    Closure {
        param: CGType,
        body: Box<CGExpr>,
        env: CGEnv,
        /// Types of `env`, innermost binder last.
        env_tys: Vec<CGType>,
    },
    /// A suspended computation closed over its environment.
    TClosure {
        thunk: Box<CGThunk>,
        env: CGEnv,
        env_tys: Vec<CGType>,
    },
    /// Annotated with the full sum type, mirroring the expression form.
    Inl(CGType, Box<CGValue>),
    Inr(CGType, Box<CGValue>),
    Pair(Box<CGValue>, Box<CGValue>),
    Labeled(Label, Box<CGValue>),
    /// Flow-insensitive reference: address `n` within the `ℓ`-labeled memory.
    RefI(Label, usize),
    /// Flow-sensitive reference: heap address `n`.
    RefS(usize),
}

/// One label's memory: a sequence of unlabeled cell contents.
pub type CGMemory = Vec<CGValue>;

/// The label-partitioned store; absent labels denote empty memories.
pub type CGStore = BTreeMap<Label, CGMemory>;

/// The heap of flow-sensitive cells, each a current label plus content.
pub type CGHeap = Vec<(Label, CGValue)>;

#[derive(PartialEq, Eq, PartialOrd, Ord, Clone, Copy, Debug)]
enum CellId {
    I(Label, usize),
    S(usize),
}

/// Synthesizes the unique type of a value. Fails on dangling references,
/// foreign labels, mismatched closure environments, and (defensively) on
/// store cycles that are not cut by a closure.
pub fn type_of_cg_value(
    lat: &Lattice,
    store: &CGStore,
    heap: &CGHeap,
    v: &CGValue,
) -> Result<CGType, String> {
    let mut visiting = BTreeSet::new();
    synth_value(lat, store, heap, v, &mut visiting)
}

fn synth_value(
    lat: &Lattice,
    store: &CGStore,
    heap: &CGHeap,
    v: &CGValue,
    visiting: &mut BTreeSet<CellId>,
) -> Result<CGType, String> {
    match v {
        CGValue::Unit => Ok(CGType::Unit),
        CGValue::Lab(l) => {
            if lat.owns(*l) {
                Ok(CGType::LabelT)
            } else {
                Err("label value from a foreign lattice".into())
            }
        }
        CGValue::Closure { param, body, env, env_tys } => {
            if env.len() != env_tys.len() {
                return Err("closure environment and its types disagree in length".into());
            }
            for (v, ty) in env.iter().zip(env_tys) {
                check_value(lat, store, heap, v, ty, &mut BTreeSet::new())?;
            }
            let mut ctx = env_tys.clone();
            ctx.push(param.clone());
            let ret = typecheck_cg(&ctx, body).map_err(|e| format!("closure body: {e}"))?;
            Ok(CGType::Fun(Box::new(param.clone()), Box::new(ret)))
        }
        CGValue::TClosure { thunk, env, env_tys } => {
            if env.len() != env_tys.len() {
                return Err("thunk environment and its types disagree in length".into());
            }
            for (v, ty) in env.iter().zip(env_tys) {
                check_value(lat, store, heap, v, ty, &mut BTreeSet::new())?;
            }
            typecheck_cg_thunk(env_tys, thunk).map_err(|e| format!("thunk body: {e}"))
        }
        CGValue::Inl(sum_ty, v) => match sum_ty {
            CGType::Sum(t1, _) => {
                check_value(lat, store, heap, v, t1, &mut BTreeSet::new())?;
                Ok(sum_ty.clone())
            }
            _ => Err("inl annotated with a non-sum type".into()),
        },
        CGValue::Inr(sum_ty, v) => match sum_ty {
            CGType::Sum(_, t2) => {
                check_value(lat, store, heap, v, t2, &mut BTreeSet::new())?;
                Ok(sum_ty.clone())
            }
            _ => Err("inr annotated with a non-sum type".into()),
        },
        CGValue::Pair(a, b) => Ok(CGType::Prod(
            Box::new(synth_value(lat, store, heap, a, visiting)?),
            Box::new(synth_value(lat, store, heap, b, visiting)?),
        )),
        CGValue::Labeled(l, v) => {
            if !lat.owns(*l) {
                return Err("labeled value with a foreign label".into());
            }
            Ok(CGType::Labeled(Box::new(synth_value(lat, store, heap, v, visiting)?)))
        }
        CGValue::RefI(l, n) => {
            let cell = store
                .get(l)
                .and_then(|mem| mem.get(*n))
                .ok_or_else(|| format!("dangling flow-insensitive reference {n}"))?;
            if !visiting.insert(CellId::I(*l, *n)) {
                return Err("store cycle not cut by a closure".into());
            }
            let t = synth_value(lat, store, heap, cell, visiting)?;
            visiting.remove(&CellId::I(*l, *n));
            Ok(CGType::Ref(Sensitivity::I, Box::new(t)))
        }
        CGValue::RefS(n) => {
            let (l, cell) = heap
                .get(*n)
                .ok_or_else(|| format!("dangling flow-sensitive reference {n}"))?;
            if !lat.owns(*l) {
                return Err("heap cell labeled by a foreign lattice".into());
            }
            if !visiting.insert(CellId::S(*n)) {
                return Err("heap cycle not cut by a closure".into());
            }
            let t = synth_value(lat, store, heap, cell, visiting)?;
            visiting.remove(&CellId::S(*n));
            Ok(CGType::Ref(Sensitivity::S, Box::new(t)))
        }
    }
}

/// Checks a value against an expected type. Reference cells are checked
/// coinductively: a cell already assumed to have the expected content type
/// is not revisited, which makes cyclic stores checkable.
pub fn cg_value_has_type(
    lat: &Lattice,
    store: &CGStore,
    heap: &CGHeap,
    v: &CGValue,
    ty: &CGType,
) -> Result<(), String> {
    check_value(lat, store, heap, v, ty, &mut BTreeSet::new())
}

fn check_value(
    lat: &Lattice,
    store: &CGStore,
    heap: &CGHeap,
    v: &CGValue,
    ty: &CGType,
    assumed: &mut BTreeSet<(CellId, CGType)>,
) -> Result<(), String> {
    let mismatch = |found: &str| Err(format!("expected {ty}, found {found}"));
    match (v, ty) {
        (CGValue::Unit, CGType::Unit) => Ok(()),
        (CGValue::Lab(l), CGType::LabelT) => {
            if lat.owns(*l) {
                Ok(())
            } else {
                Err("label value from a foreign lattice".into())
            }
        }
        (CGValue::Closure { param, body, env, env_tys }, CGType::Fun(t1, t2)) => {
            if param != t1.as_ref() {
                return mismatch(&format!("closure with parameter {param}"));
            }
            if env.len() != env_tys.len() {
                return Err("closure environment and its types disagree in length".into());
            }
            let mut ctx = env_tys.clone();
            ctx.push(param.clone());
            let ret = typecheck_cg(&ctx, body).map_err(|e| format!("closure body: {e}"))?;
            if &ret != t2.as_ref() {
                return mismatch(&format!("closure returning {ret}"));
            }
            for (v, vty) in env.iter().zip(env_tys) {
                check_value(lat, store, heap, v, vty, assumed)?;
            }
            Ok(())
        }
        (CGValue::TClosure { thunk, env, env_tys }, CGType::Lio(_)) => {
            if env.len() != env_tys.len() {
                return Err("thunk environment and its types disagree in length".into());
            }
            let found =
                typecheck_cg_thunk(env_tys, thunk).map_err(|e| format!("thunk body: {e}"))?;
            if &found != ty {
                return mismatch(&format!("thunk of {found}"));
            }
            for (v, vty) in env.iter().zip(env_tys) {
                check_value(lat, store, heap, v, vty, assumed)?;
            }
            Ok(())
        }
        (CGValue::Inl(sum_ty, v), CGType::Sum(t1, _)) => {
            if sum_ty != ty {
                return mismatch(&format!("inl of {sum_ty}"));
            }
            check_value(lat, store, heap, v, t1, assumed)
        }
        (CGValue::Inr(sum_ty, v), CGType::Sum(_, t2)) => {
            if sum_ty != ty {
                return mismatch(&format!("inr of {sum_ty}"));
            }
            check_value(lat, store, heap, v, t2, assumed)
        }
        (CGValue::Pair(a, b), CGType::Prod(t1, t2)) => {
            check_value(lat, store, heap, a, t1, assumed)?;
            check_value(lat, store, heap, b, t2, assumed)
        }
        (CGValue::Labeled(l, v), CGType::Labeled(t)) => {
            if !lat.owns(*l) {
                return Err("labeled value with a foreign label".into());
            }
            check_value(lat, store, heap, v, t, assumed)
        }
        (CGValue::RefI(l, n), CGType::Ref(Sensitivity::I, t)) => {
            let cell = store
                .get(l)
                .and_then(|mem| mem.get(*n))
                .ok_or_else(|| format!("dangling flow-insensitive reference {n}"))?;
            if assumed.insert((CellId::I(*l, *n), ty.clone())) {
                check_value(lat, store, heap, cell, t, assumed)?;
            }
            Ok(())
        }
        (CGValue::RefS(n), CGType::Ref(Sensitivity::S, t)) => {
            let (l, cell) = heap
                .get(*n)
                .ok_or_else(|| format!("dangling flow-sensitive reference {n}"))?;
            if !lat.owns(*l) {
                return Err("heap cell labeled by a foreign lattice".into());
            }
            if assumed.insert((CellId::S(*n), ty.clone())) {
                check_value(lat, store, heap, cell, t, assumed)?;
            }
            Ok(())
        }
        (CGValue::Unit, _) => mismatch("unit"),
        (CGValue::Lab(_), _) => mismatch("label"),
        (CGValue::Closure { .. }, _) => mismatch("function"),
        (CGValue::TClosure { .. }, _) => mismatch("thunk"),
        (CGValue::Inl(..), _) | (CGValue::Inr(..), _) => mismatch("sum"),
        (CGValue::Pair(..), _) => mismatch("pair"),
        (CGValue::Labeled(..), _) => mismatch("labeled value"),
        (CGValue::RefI(..), _) => mismatch("flow-insensitive reference"),
        (CGValue::RefS(..), _) => mismatch("flow-sensitive reference"),
    }
}
