//! Search for a bijection witnessing low-equivalence of two final
//! configurations.
//!
//! Every pair the search adds is forced: two flow-sensitive references
//! that meet in an attacker-observable position must map to each other.
//! The search co-traverses the result values and the public store
//! partitions, then iterates through the heap cells reachable from the
//! collected pairs until no new pair appears. A conflict among forced
//! pairs, or any observable mismatch that no renaming could repair,
//! means no extension of the base bijection exists. The candidate is
//! re-checked with the full relation before it is returned.

use ifc_cg::{CGHeap, CGMemory, CGStore, CGValue};
use ifc_fg::{FGHeap, FGMemory, FGRaw, FGStore, FGValue};
use ifc_lattice::{Label, Lattice, LatticeError};

use crate::bijection::Bijection;
use crate::cg_equiv::leq_cg_final;
use crate::fg_equiv::leq_fg_final;

enum Stop {
    Infeasible,
    Lattice(LatticeError),
}

impl From<LatticeError> for Stop {
    fn from(e: LatticeError) -> Stop {
        Stop::Lattice(e)
    }
}

type Walk = Result<(), Stop>;

fn infeasible() -> Walk {
    Err(Stop::Infeasible)
}

fn feasible(ok: bool) -> Walk {
    if ok {
        Ok(())
    } else {
        infeasible()
    }
}

struct Collector<'a> {
    lat: &'a Lattice,
    a: Label,
    b: Bijection,
    queue: Vec<(usize, usize)>,
}

impl<'a> Collector<'a> {
    fn new(lat: &'a Lattice, a: Label, base: &Bijection) -> Collector<'a> {
        Collector {
            lat,
            a,
            b: base.clone(),
            queue: base.iter().collect(),
        }
    }

    fn observable(&self, l: Label) -> Result<bool, Stop> {
        Ok(self.lat.leq(l, self.a)?)
    }

    /// Forces `(n1, n2)` into the candidate; a clash with an existing
    /// pair rules out every extension of the base.
    fn force(&mut self, n1: usize, n2: usize) -> Walk {
        if self.b.contains(n1, n2) {
            return Ok(());
        }
        if self.b.insert(n1, n2).is_err() {
            return infeasible();
        }
        self.queue.push((n1, n2));
        Ok(())
    }
}

/// Looks for a bijection extending `base` under which the two
/// fine-grained final configurations are related.
#[allow(clippy::too_many_arguments)]
pub fn find_bijection_fg(
    lat: &Lattice,
    a: Label,
    base: &Bijection,
    s1: &FGStore,
    h1: &FGHeap,
    v1: &FGValue,
    s2: &FGStore,
    h2: &FGHeap,
    v2: &FGValue,
) -> Result<Option<Bijection>, LatticeError> {
    let mut c = Collector::new(lat, a, base);
    let walked = (|| -> Walk {
        fg_value(&mut c, v1, v2)?;
        fg_store(&mut c, s1, s2)?;
        while let Some((n1, n2)) = c.queue.pop() {
            if n1 >= h1.len() || n2 >= h2.len() {
                return infeasible();
            }
            fg_value(&mut c, &h1[n1], &h2[n2])?;
        }
        Ok(())
    })();
    match walked {
        Err(Stop::Infeasible) => Ok(None),
        Err(Stop::Lattice(e)) => Err(e),
        Ok(()) => {
            if leq_fg_final(lat, a, &c.b, s1, h1, v1, s2, h2, v2)? {
                Ok(Some(c.b))
            } else {
                Ok(None)
            }
        }
    }
}

fn fg_value(c: &mut Collector, v1: &FGValue, v2: &FGValue) -> Walk {
    let o1 = c.observable(v1.lab)?;
    let o2 = c.observable(v2.lab)?;
    match (o1, o2) {
        (true, true) => {
            feasible(v1.lab == v2.lab)?;
            fg_raw(c, &v1.raw, &v2.raw)
        }
        (false, false) => Ok(()),
        _ => infeasible(),
    }
}

fn fg_raw(c: &mut Collector, r1: &FGRaw, r2: &FGRaw) -> Walk {
    match (r1, r2) {
        (FGRaw::Unit, FGRaw::Unit) => Ok(()),
        (FGRaw::Lab(l1), FGRaw::Lab(l2)) => feasible(l1 == l2),
        (
            FGRaw::Closure { param: p1, body: b1, env: e1, .. },
            FGRaw::Closure { param: p2, body: b2, env: e2, .. },
        ) => {
            feasible(p1 == p2 && b1 == b2)?;
            feasible(e1.len() == e2.len())?;
            for (v1, v2) in e1.iter().zip(e2) {
                fg_value(c, v1, v2)?;
            }
            Ok(())
        }
        (FGRaw::Inl(t1, v1), FGRaw::Inl(t2, v2)) | (FGRaw::Inr(t1, v1), FGRaw::Inr(t2, v2)) => {
            feasible(t1 == t2)?;
            fg_value(c, v1, v2)
        }
        (FGRaw::Pair(x1, y1), FGRaw::Pair(x2, y2)) => {
            fg_value(c, x1, x2)?;
            fg_value(c, y1, y2)
        }
        (FGRaw::RefI(l1, n1), FGRaw::RefI(l2, n2)) => {
            if c.observable(*l1)? || c.observable(*l2)? {
                feasible(l1 == l2 && n1 == n2)
            } else {
                Ok(())
            }
        }
        (FGRaw::RefS(n1), FGRaw::RefS(n2)) => c.force(*n1, *n2),
        _ => infeasible(),
    }
}

fn fg_store(c: &mut Collector, s1: &FGStore, s2: &FGStore) -> Walk {
    let empty = FGMemory::new();
    for l in c.lat.points() {
        if !c.observable(l)? {
            continue;
        }
        let m1 = s1.get(&l).unwrap_or(&empty);
        let m2 = s2.get(&l).unwrap_or(&empty);
        feasible(m1.len() == m2.len())?;
        for (r1, r2) in m1.iter().zip(m2) {
            fg_raw(c, r1, r2)?;
        }
    }
    Ok(())
}

/// Looks for a bijection extending `base` under which the two
/// coarse-grained final configurations are related.
#[allow(clippy::too_many_arguments)]
pub fn find_bijection_cg(
    lat: &Lattice,
    a: Label,
    base: &Bijection,
    s1: &CGStore,
    h1: &CGHeap,
    pc1: Label,
    v1: &CGValue,
    s2: &CGStore,
    h2: &CGHeap,
    pc2: Label,
    v2: &CGValue,
) -> Result<Option<Bijection>, LatticeError> {
    let mut c = Collector::new(lat, a, base);
    let walked = (|| -> Walk {
        match (c.observable(pc1)?, c.observable(pc2)?) {
            (true, true) => {
                feasible(pc1 == pc2)?;
                cg_value(&mut c, v1, v2)?;
            }
            (false, false) => {}
            _ => return infeasible(),
        }
        cg_store(&mut c, s1, s2)?;
        while let Some((n1, n2)) = c.queue.pop() {
            if n1 >= h1.len() || n2 >= h2.len() {
                return infeasible();
            }
            let (l1, w1) = &h1[n1];
            let (l2, w2) = &h2[n2];
            cg_labeled(&mut c, *l1, w1, *l2, w2)?;
        }
        Ok(())
    })();
    match walked {
        Err(Stop::Infeasible) => Ok(None),
        Err(Stop::Lattice(e)) => Err(e),
        Ok(()) => {
            if leq_cg_final(lat, a, &c.b, s1, h1, pc1, v1, s2, h2, pc2, v2)? {
                Ok(Some(c.b))
            } else {
                Ok(None)
            }
        }
    }
}

fn cg_value(c: &mut Collector, v1: &CGValue, v2: &CGValue) -> Walk {
    match (v1, v2) {
        (CGValue::Unit, CGValue::Unit) => Ok(()),
        (CGValue::Lab(l1), CGValue::Lab(l2)) => feasible(l1 == l2),
        (
            CGValue::Closure { param: p1, body: b1, env: e1, .. },
            CGValue::Closure { param: p2, body: b2, env: e2, .. },
        ) => {
            feasible(p1 == p2 && b1 == b2)?;
            cg_env(c, e1, e2)
        }
        (
            CGValue::TClosure { thunk: t1, env: e1, .. },
            CGValue::TClosure { thunk: t2, env: e2, .. },
        ) => {
            feasible(t1 == t2)?;
            cg_env(c, e1, e2)
        }
        (CGValue::Inl(t1, v1), CGValue::Inl(t2, v2))
        | (CGValue::Inr(t1, v1), CGValue::Inr(t2, v2)) => {
            feasible(t1 == t2)?;
            cg_value(c, v1, v2)
        }
        (CGValue::Pair(x1, y1), CGValue::Pair(x2, y2)) => {
            cg_value(c, x1, x2)?;
            cg_value(c, y1, y2)
        }
        (CGValue::Labeled(l1, v1), CGValue::Labeled(l2, v2)) => {
            cg_labeled(c, *l1, v1, *l2, v2)
        }
        (CGValue::RefI(l1, n1), CGValue::RefI(l2, n2)) => {
            if c.observable(*l1)? || c.observable(*l2)? {
                feasible(l1 == l2 && n1 == n2)
            } else {
                Ok(())
            }
        }
        (CGValue::RefS(n1), CGValue::RefS(n2)) => c.force(*n1, *n2),
        _ => infeasible(),
    }
}

fn cg_labeled(c: &mut Collector, l1: Label, v1: &CGValue, l2: Label, v2: &CGValue) -> Walk {
    match (c.observable(l1)?, c.observable(l2)?) {
        (true, true) => {
            feasible(l1 == l2)?;
            cg_value(c, v1, v2)
        }
        (false, false) => Ok(()),
        _ => infeasible(),
    }
}

fn cg_env(c: &mut Collector, e1: &[CGValue], e2: &[CGValue]) -> Walk {
    feasible(e1.len() == e2.len())?;
    for (v1, v2) in e1.iter().zip(e2) {
        cg_value(c, v1, v2)?;
    }
    Ok(())
}

fn cg_store(c: &mut Collector, s1: &CGStore, s2: &CGStore) -> Walk {
    let empty = CGMemory::new();
    for l in c.lat.points() {
        if !c.observable(l)? {
            continue;
        }
        let m1 = s1.get(&l).unwrap_or(&empty);
        let m2 = s2.get(&l).unwrap_or(&empty);
        feasible(m1.len() == m2.len())?;
        for (v1, v2) in m1.iter().zip(m2) {
            cg_value(c, v1, v2)?;
        }
    }
    Ok(())
}
