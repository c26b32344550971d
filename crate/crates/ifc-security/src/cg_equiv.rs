//! Attacker-indexed low-equivalence for the coarse-grained calculus.
//!
//! Values carry no intrinsic labels here; secrecy lives in `Labeled`
//! wrappers, in the store partitioning, and in the program counter of a
//! configuration. Two final configurations whose program counters are
//! both above the attacker are related regardless of their results: the
//! attacker never saw those runs finish at an observable level.

use ifc_cg::{CGEnv, CGHeap, CGMemory, CGStore, CGValue};
use ifc_cg::CGThunk;
use ifc_lattice::{Label, Lattice, LatticeError};

use crate::bijection::Bijection;

/// Values: structural comparison; `Labeled` wrappers are opaque to the
/// attacker when both labels are secret.
pub fn leq_cg_value(
    lat: &Lattice,
    a: Label,
    b: &Bijection,
    v1: &CGValue,
    v2: &CGValue,
) -> Result<bool, LatticeError> {
    Ok(match (v1, v2) {
        (CGValue::Unit, CGValue::Unit) => true,
        (CGValue::Lab(l1), CGValue::Lab(l2)) => l1 == l2,
        (
            CGValue::Closure { param: p1, body: b1, env: e1, .. },
            CGValue::Closure { param: p2, body: b2, env: e2, .. },
        ) => p1 == p2 && b1 == b2 && leq_cg_env(lat, a, b, e1, e2)?,
        (
            CGValue::TClosure { thunk: t1, env: e1, .. },
            CGValue::TClosure { thunk: t2, env: e2, .. },
        ) => t1 == t2 && leq_cg_env(lat, a, b, e1, e2)?,
        (CGValue::Inl(t1, v1), CGValue::Inl(t2, v2))
        | (CGValue::Inr(t1, v1), CGValue::Inr(t2, v2)) => {
            t1 == t2 && leq_cg_value(lat, a, b, v1, v2)?
        }
        (CGValue::Pair(x1, y1), CGValue::Pair(x2, y2)) => {
            leq_cg_value(lat, a, b, x1, x2)? && leq_cg_value(lat, a, b, y1, y2)?
        }
        (CGValue::Labeled(l1, v1), CGValue::Labeled(l2, v2)) => {
            leq_cg_labeled(lat, a, b, *l1, v1, *l2, v2)?
        }
        (CGValue::RefI(l1, n1), CGValue::RefI(l2, n2)) => {
            if lat.leq(*l1, a)? || lat.leq(*l2, a)? {
                l1 == l2 && n1 == n2
            } else {
                true
            }
        }
        (CGValue::RefS(n1), CGValue::RefS(n2)) => b.contains(*n1, *n2),
        _ => false,
    })
}

/// The labeled-content relation shared by `Labeled` values and
/// flow-sensitive heap cells: both secret, or both public with equal
/// labels and related contents.
pub fn leq_cg_labeled(
    lat: &Lattice,
    a: Label,
    b: &Bijection,
    l1: Label,
    v1: &CGValue,
    l2: Label,
    v2: &CGValue,
) -> Result<bool, LatticeError> {
    let o1 = lat.leq(l1, a)?;
    let o2 = lat.leq(l2, a)?;
    Ok(match (o1, o2) {
        (true, true) => l1 == l2 && leq_cg_value(lat, a, b, v1, v2)?,
        (false, false) => true,
        _ => false,
    })
}

/// Environments: equal length, pointwise related.
pub fn leq_cg_env(
    lat: &Lattice,
    a: Label,
    b: &Bijection,
    e1: &CGEnv,
    e2: &CGEnv,
) -> Result<bool, LatticeError> {
    if e1.len() != e2.len() {
        return Ok(false);
    }
    for (v1, v2) in e1.iter().zip(e2) {
        if !leq_cg_value(lat, a, b, v1, v2)? {
            return Ok(false);
        }
    }
    Ok(true)
}

/// One label's memory: arbitrary above the attacker, otherwise equal
/// length and pointwise related.
pub fn leq_cg_memory(
    lat: &Lattice,
    a: Label,
    b: &Bijection,
    mem_label: Label,
    m1: &CGMemory,
    m2: &CGMemory,
) -> Result<bool, LatticeError> {
    if !lat.leq(mem_label, a)? {
        return Ok(true);
    }
    if m1.len() != m2.len() {
        return Ok(false);
    }
    for (v1, v2) in m1.iter().zip(m2) {
        if !leq_cg_value(lat, a, b, v1, v2)? {
            return Ok(false);
        }
    }
    Ok(true)
}

/// Stores: related at every label of the lattice; an absent memory is
/// the empty one.
pub fn leq_cg_store(
    lat: &Lattice,
    a: Label,
    b: &Bijection,
    s1: &CGStore,
    s2: &CGStore,
) -> Result<bool, LatticeError> {
    let empty = CGMemory::new();
    for l in lat.points() {
        let m1 = s1.get(&l).unwrap_or(&empty);
        let m2 = s2.get(&l).unwrap_or(&empty);
        if !leq_cg_memory(lat, a, b, l, m1, m2)? {
            return Ok(false);
        }
    }
    Ok(true)
}

/// Heaps: the bijection must stay within both address spaces and every
/// paired pair of cells must be related like labeled values.
pub fn leq_cg_heap(
    lat: &Lattice,
    a: Label,
    b: &Bijection,
    h1: &CGHeap,
    h2: &CGHeap,
) -> Result<bool, LatticeError> {
    if !b.within_bounds(h1.len(), h2.len()) {
        return Ok(false);
    }
    for (n1, n2) in b.iter() {
        let (l1, v1) = &h1[n1];
        let (l2, v2) = &h2[n2];
        if !leq_cg_labeled(lat, a, b, *l1, v1, *l2, v2)? {
            return Ok(false);
        }
    }
    Ok(true)
}

/// Initial configurations: related state, equal program counters, and
/// identical programs. Unlike final configurations, a secret counter does
/// not lift the code constraint; the attacker picks the program.
#[allow(clippy::too_many_arguments)]
pub fn leq_cg_initial(
    lat: &Lattice,
    a: Label,
    b: &Bijection,
    s1: &CGStore,
    h1: &CGHeap,
    pc1: Label,
    t1: &CGThunk,
    s2: &CGStore,
    h2: &CGHeap,
    pc2: Label,
    t2: &CGThunk,
) -> Result<bool, LatticeError> {
    if !(leq_cg_store(lat, a, b, s1, s2)? && leq_cg_heap(lat, a, b, h1, h2)?) {
        return Ok(false);
    }
    Ok(pc1 == pc2 && t1 == t2)
}

/// Final configurations: related state, and either equal public program
/// counters with related results, or both counters secret with the
/// results unconstrained.
#[allow(clippy::too_many_arguments)]
pub fn leq_cg_final(
    lat: &Lattice,
    a: Label,
    b: &Bijection,
    s1: &CGStore,
    h1: &CGHeap,
    pc1: Label,
    v1: &CGValue,
    s2: &CGStore,
    h2: &CGHeap,
    pc2: Label,
    v2: &CGValue,
) -> Result<bool, LatticeError> {
    if !(leq_cg_store(lat, a, b, s1, s2)? && leq_cg_heap(lat, a, b, h1, h2)?) {
        return Ok(false);
    }
    pc_indexed(lat, a, pc1, pc2, || leq_cg_value(lat, a, b, v1, v2))
}

fn pc_indexed(
    lat: &Lattice,
    a: Label,
    pc1: Label,
    pc2: Label,
    observable: impl FnOnce() -> Result<bool, LatticeError>,
) -> Result<bool, LatticeError> {
    let o1 = lat.leq(pc1, a)?;
    let o2 = lat.leq(pc2, a)?;
    Ok(match (o1, o2) {
        (true, true) => pc1 == pc2 && observable()?,
        (false, false) => true,
        _ => false,
    })
}
