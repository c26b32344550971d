//! Attacker-indexed low-equivalence for the fine-grained calculus.
//!
//! Two pieces of state are related when an attacker able to observe
//! labels up to `a` cannot tell them apart. Flow-sensitive heap
//! addresses are compared through a bijection `b`, so public cells may
//! sit at different addresses in the two heaps. All relations are
//! structural; code is compared by syntactic equality, which coincides
//! with alpha-equivalence on De Bruijn terms.

use ifc_fg::{FGEnv, FGHeap, FGMemory, FGRaw, FGStore, FGValue};
use ifc_fg::FGExpr;
use ifc_lattice::{Label, Lattice, LatticeError};

use crate::bijection::Bijection;

/// Labeled values: related when both labels are secret, or when both are
/// public, equal, and the raw contents are related.
pub fn leq_fg_value(
    lat: &Lattice,
    a: Label,
    b: &Bijection,
    v1: &FGValue,
    v2: &FGValue,
) -> Result<bool, LatticeError> {
    let o1 = lat.leq(v1.lab, a)?;
    let o2 = lat.leq(v2.lab, a)?;
    Ok(match (o1, o2) {
        (true, true) => v1.lab == v2.lab && leq_fg_raw(lat, a, b, &v1.raw, &v2.raw)?,
        (false, false) => true,
        _ => false,
    })
}

/// Raw values: structural comparison, recursing through labeled parts.
pub fn leq_fg_raw(
    lat: &Lattice,
    a: Label,
    b: &Bijection,
    r1: &FGRaw,
    r2: &FGRaw,
) -> Result<bool, LatticeError> {
    Ok(match (r1, r2) {
        (FGRaw::Unit, FGRaw::Unit) => true,
        (FGRaw::Lab(l1), FGRaw::Lab(l2)) => l1 == l2,
        (
            FGRaw::Closure { param: p1, body: b1, env: e1, .. },
            FGRaw::Closure { param: p2, body: b2, env: e2, .. },
        ) => p1 == p2 && b1 == b2 && leq_fg_env(lat, a, b, e1, e2)?,
        (FGRaw::Inl(t1, v1), FGRaw::Inl(t2, v2)) | (FGRaw::Inr(t1, v1), FGRaw::Inr(t2, v2)) => {
            t1 == t2 && leq_fg_value(lat, a, b, v1, v2)?
        }
        (FGRaw::Pair(x1, y1), FGRaw::Pair(x2, y2)) => {
            leq_fg_value(lat, a, b, x1, x2)? && leq_fg_value(lat, a, b, y1, y2)?
        }
        (FGRaw::RefI(l1, n1), FGRaw::RefI(l2, n2)) => {
            if lat.leq(*l1, a)? || lat.leq(*l2, a)? {
                l1 == l2 && n1 == n2
            } else {
                true
            }
        }
        (FGRaw::RefS(n1), FGRaw::RefS(n2)) => b.contains(*n1, *n2),
        _ => false,
    })
}

/// Environments: equal length, pointwise related.
pub fn leq_fg_env(
    lat: &Lattice,
    a: Label,
    b: &Bijection,
    e1: &FGEnv,
    e2: &FGEnv,
) -> Result<bool, LatticeError> {
    if e1.len() != e2.len() {
        return Ok(false);
    }
    for (v1, v2) in e1.iter().zip(e2) {
        if !leq_fg_value(lat, a, b, v1, v2)? {
            return Ok(false);
        }
    }
    Ok(true)
}

/// One label's memory. A memory the attacker cannot read is arbitrary;
/// a readable one must have equal length and pointwise-related cells.
pub fn leq_fg_memory(
    lat: &Lattice,
    a: Label,
    b: &Bijection,
    mem_label: Label,
    m1: &FGMemory,
    m2: &FGMemory,
) -> Result<bool, LatticeError> {
    if !lat.leq(mem_label, a)? {
        return Ok(true);
    }
    if m1.len() != m2.len() {
        return Ok(false);
    }
    for (r1, r2) in m1.iter().zip(m2) {
        if !leq_fg_raw(lat, a, b, r1, r2)? {
            return Ok(false);
        }
    }
    Ok(true)
}

/// Stores: related at every label of the lattice; an absent memory is
/// the empty one.
pub fn leq_fg_store(
    lat: &Lattice,
    a: Label,
    b: &Bijection,
    s1: &FGStore,
    s2: &FGStore,
) -> Result<bool, LatticeError> {
    let empty = FGMemory::new();
    for l in lat.points() {
        let m1 = s1.get(&l).unwrap_or(&empty);
        let m2 = s2.get(&l).unwrap_or(&empty);
        if !leq_fg_memory(lat, a, b, l, m1, m2)? {
            return Ok(false);
        }
    }
    Ok(true)
}

/// Heaps: the bijection must stay within both address spaces and every
/// paired pair of cells must be related. Unpaired cells are
/// unconstrained.
pub fn leq_fg_heap(
    lat: &Lattice,
    a: Label,
    b: &Bijection,
    h1: &FGHeap,
    h2: &FGHeap,
) -> Result<bool, LatticeError> {
    if !b.within_bounds(h1.len(), h2.len()) {
        return Ok(false);
    }
    for (n1, n2) in b.iter() {
        if !leq_fg_value(lat, a, b, &h1[n1], &h2[n2])? {
            return Ok(false);
        }
    }
    Ok(true)
}

/// Initial configurations: identical programs over related state.
#[allow(clippy::too_many_arguments)]
pub fn leq_fg_initial(
    lat: &Lattice,
    a: Label,
    b: &Bijection,
    s1: &FGStore,
    h1: &FGHeap,
    e1: &FGExpr,
    s2: &FGStore,
    h2: &FGHeap,
    e2: &FGExpr,
) -> Result<bool, LatticeError> {
    Ok(e1 == e2
        && leq_fg_store(lat, a, b, s1, s2)?
        && leq_fg_heap(lat, a, b, h1, h2)?)
}

/// Final configurations: related state and related result values.
#[allow(clippy::too_many_arguments)]
pub fn leq_fg_final(
    lat: &Lattice,
    a: Label,
    b: &Bijection,
    s1: &FGStore,
    h1: &FGHeap,
    v1: &FGValue,
    s2: &FGStore,
    h2: &FGHeap,
    v2: &FGValue,
) -> Result<bool, LatticeError> {
    Ok(leq_fg_store(lat, a, b, s1, s2)?
        && leq_fg_heap(lat, a, b, h1, h2)?
        && leq_fg_value(lat, a, b, v1, v2)?)
}
