//! Runtime values, stores, heaps, and the value-typing oracle.
//!
//! Every value carries an intrinsic label (`r^ℓ`). Closures also record the
//! types of their captured environment so that values are typeable without
//! consulting the evaluation context, even when the store contains cycles
//! (a cell holding a closure that captures a reference to that same cell).

use std::collections::{BTreeMap, BTreeSet};

use ifc_lattice::{Label, Lattice};

use crate::syntax::{FGExpr, FGType, Sensitivity};
use crate::typecheck::typecheck_fg;

/// Evaluation environment; De Bruijn index `n` resolves to
/// `env[env.len() - 1 - n]`.
pub type FGEnv = Vec<FGValue>;

#[derive(PartialEq, Eq, Clone, Debug)]
pub struct FGValue {
    pub raw: FGRaw,
    pub lab: Label,
}

impl FGValue {
    pub fn new(raw: FGRaw, lab: Label) -> FGValue {
        FGValue { raw, lab }
    }
}

#[derive(PartialEq, Eq, Clone, Debug)]
pub enum FGRaw {
    Unit,
    Lab(Label),
    Closure {
        param: FGType,
        body: Box<FGExpr>,
        env: FGEnv,
        /// Types of `env`, innermost binder last.
        env_tys: Vec<FGType>,
    },
    /// Annotated with the full sum type, mirroring the expression form.
    Inl(FGType, Box<FGValue>),
    Inr(FGType, Box<FGValue>),
    Pair(Box<FGValue>, Box<FGValue>),
    /// Flow-insensitive reference: address `n` within the `ℓ`-labeled memory.
    RefI(Label, usize),
    /// Flow-sensitive reference: heap address `n`.
    RefS(usize),
}

/// One label's memory: a sequence of raw (unlabeled) values.
pub type FGMemory = Vec<FGRaw>;

/// The label-partitioned store; absent labels denote empty memories.
pub type FGStore = BTreeMap<Label, FGMemory>;

/// The linear heap of labeled cells used by flow-sensitive references.
pub type FGHeap = Vec<FGValue>;

#[derive(PartialEq, Eq, PartialOrd, Ord, Clone, Copy, Debug)]
enum CellId {
    I(Label, usize),
    S(usize),
}

/// Synthesizes the unique type of a value. Fails on dangling references,
/// foreign labels, mismatched closure environments, and (defensively) on
/// store cycles that are not cut by a closure.
pub fn type_of_fg_value(
    lat: &Lattice,
    store: &FGStore,
    heap: &FGHeap,
    v: &FGValue,
) -> Result<FGType, String> {
    let mut visiting = BTreeSet::new();
    synth_value(lat, store, heap, v, &mut visiting)
}

fn synth_value(
    lat: &Lattice,
    store: &FGStore,
    heap: &FGHeap,
    v: &FGValue,
    visiting: &mut BTreeSet<CellId>,
) -> Result<FGType, String> {
    if !lat.owns(v.lab) {
        return Err("value labeled by a foreign lattice".into());
    }
    synth_raw(lat, store, heap, &v.raw, visiting)
}

fn synth_raw(
    lat: &Lattice,
    store: &FGStore,
    heap: &FGHeap,
    r: &FGRaw,
    visiting: &mut BTreeSet<CellId>,
) -> Result<FGType, String> {
    match r {
        FGRaw::Unit => Ok(FGType::Unit),
        FGRaw::Lab(l) => {
            if lat.owns(*l) {
                Ok(FGType::LabelT)
            } else {
                Err("label value from a foreign lattice".into())
            }
        }
        FGRaw::Closure { param, body, env, env_tys } => {
            if env.len() != env_tys.len() {
                return Err("closure environment and its types disagree in length".into());
            }
            for (v, ty) in env.iter().zip(env_tys) {
                check_value(lat, store, heap, v, ty, &mut BTreeSet::new())?;
            }
            let mut ctx = env_tys.clone();
            ctx.push(param.clone());
            let ret = typecheck_fg(&ctx, body).map_err(|e| format!("closure body: {e}"))?;
            Ok(FGType::Fun(Box::new(param.clone()), Box::new(ret)))
        }
        FGRaw::Inl(sum_ty, v) => match sum_ty {
            FGType::Sum(t1, _) => {
                check_value(lat, store, heap, v, t1, &mut BTreeSet::new())?;
                Ok(sum_ty.clone())
            }
            _ => Err("inl annotated with a non-sum type".into()),
        },
        FGRaw::Inr(sum_ty, v) => match sum_ty {
            FGType::Sum(_, t2) => {
                check_value(lat, store, heap, v, t2, &mut BTreeSet::new())?;
                Ok(sum_ty.clone())
            }
            _ => Err("inr annotated with a non-sum type".into()),
        },
        FGRaw::Pair(a, b) => Ok(FGType::Prod(
            Box::new(synth_value(lat, store, heap, a, visiting)?),
            Box::new(synth_value(lat, store, heap, b, visiting)?),
        )),
        FGRaw::RefI(l, n) => {
            let cell = store
                .get(l)
                .and_then(|mem| mem.get(*n))
                .ok_or_else(|| format!("dangling flow-insensitive reference {n}"))?;
            if !visiting.insert(CellId::I(*l, *n)) {
                return Err("store cycle not cut by a closure".into());
            }
            let t = synth_raw(lat, store, heap, cell, visiting)?;
            visiting.remove(&CellId::I(*l, *n));
            Ok(FGType::Ref(Sensitivity::I, Box::new(t)))
        }
        FGRaw::RefS(n) => {
            let cell = heap
                .get(*n)
                .ok_or_else(|| format!("dangling flow-sensitive reference {n}"))?;
            if !visiting.insert(CellId::S(*n)) {
                return Err("heap cycle not cut by a closure".into());
            }
            let t = synth_value(lat, store, heap, cell, visiting)?;
            visiting.remove(&CellId::S(*n));
            Ok(FGType::Ref(Sensitivity::S, Box::new(t)))
        }
    }
}

/// Checks a value against an expected type. Reference cells are checked
/// coinductively: a cell already assumed to have the expected content type
/// is not revisited, which makes cyclic stores checkable.
pub fn fg_value_has_type(
    lat: &Lattice,
    store: &FGStore,
    heap: &FGHeap,
    v: &FGValue,
    ty: &FGType,
) -> Result<(), String> {
    check_value(lat, store, heap, v, ty, &mut BTreeSet::new())
}

fn check_value(
    lat: &Lattice,
    store: &FGStore,
    heap: &FGHeap,
    v: &FGValue,
    ty: &FGType,
    assumed: &mut BTreeSet<(CellId, FGType)>,
) -> Result<(), String> {
    if !lat.owns(v.lab) {
        return Err("value labeled by a foreign lattice".into());
    }
    check_raw(lat, store, heap, &v.raw, ty, assumed)
}

fn check_raw(
    lat: &Lattice,
    store: &FGStore,
    heap: &FGHeap,
    r: &FGRaw,
    ty: &FGType,
    assumed: &mut BTreeSet<(CellId, FGType)>,
) -> Result<(), String> {
    let mismatch = |found: &str| Err(format!("expected {ty}, found {found}"));
    match (r, ty) {
        (FGRaw::Unit, FGType::Unit) => Ok(()),
        (FGRaw::Lab(l), FGType::LabelT) => {
            if lat.owns(*l) {
                Ok(())
            } else {
                Err("label value from a foreign lattice".into())
            }
        }
        (FGRaw::Closure { param, body, env, env_tys }, FGType::Fun(t1, t2)) => {
            if param != t1.as_ref() {
                return mismatch(&format!("closure with parameter {param}"));
            }
            if env.len() != env_tys.len() {
                return Err("closure environment and its types disagree in length".into());
            }
            let mut ctx = env_tys.clone();
            ctx.push(param.clone());
            let ret = typecheck_fg(&ctx, body).map_err(|e| format!("closure body: {e}"))?;
            if &ret != t2.as_ref() {
                return mismatch(&format!("closure returning {ret}"));
            }
            for (v, vty) in env.iter().zip(env_tys) {
                check_value(lat, store, heap, v, vty, assumed)?;
            }
            Ok(())
        }
        (FGRaw::Inl(sum_ty, v), FGType::Sum(t1, _)) => {
            if sum_ty != ty {
                return mismatch(&format!("inl of {sum_ty}"));
            }
            check_value(lat, store, heap, v, t1, assumed)
        }
        (FGRaw::Inr(sum_ty, v), FGType::Sum(_, t2)) => {
            if sum_ty != ty {
                return mismatch(&format!("inr of {sum_ty}"));
            }
            check_value(lat, store, heap, v, t2, assumed)
        }
        (FGRaw::Pair(a, b), FGType::Prod(t1, t2)) => {
            check_value(lat, store, heap, a, t1, assumed)?;
            check_value(lat, store, heap, b, t2, assumed)
        }
        (FGRaw::RefI(l, n), FGType::Ref(Sensitivity::I, t)) => {
            let cell = store
                .get(l)
                .and_then(|mem| mem.get(*n))
                .ok_or_else(|| format!("dangling flow-insensitive reference {n}"))?;
            if assumed.insert((CellId::I(*l, *n), ty.clone())) {
                check_raw(lat, store, heap, cell, t, assumed)?;
            }
            Ok(())
        }
        (FGRaw::RefS(n), FGType::Ref(Sensitivity::S, t)) => {
            let cell = heap
                .get(*n)
                .ok_or_else(|| format!("dangling flow-sensitive reference {n}"))?;
            if assumed.insert((CellId::S(*n), ty.clone())) {
                check_value(lat, store, heap, cell, t, assumed)?;
            }
            Ok(())
        }
        (FGRaw::Unit, _) => mismatch("unit"),
        (FGRaw::Lab(_), _) => mismatch("label"),
        (FGRaw::Closure { .. }, _) => mismatch("function"),
        (FGRaw::Inl(..), _) | (FGRaw::Inr(..), _) => mismatch("sum"),
        (FGRaw::Pair(..), _) => mismatch("pair"),
        (FGRaw::RefI(..), _) => mismatch("flow-insensitive reference"),
        (FGRaw::RefS(..), _) => mismatch("flow-sensitive reference"),
    }
}
