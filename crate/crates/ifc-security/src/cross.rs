//! Cross-language equivalence between fine-grained and coarse-grained
//! runs.
//!
//! The relation compares a fine-grained configuration produced by
//! running translated code against the coarse-grained configuration it
//! came from, at the coarse run's program counter. Addresses align
//! exactly on both sides, so no bijection is involved.
//!
//! Function and thunk closures are related when the fine-grained code is
//! the translation of the coarse-grained code. The translation itself
//! lives downstream of this crate, so the relation is parameterised by
//! [`CrossHooks`]: three predicates deciding whether a fine-grained
//! type, function body, or suspended thunk is the image of its
//! coarse-grained counterpart. Everything else here is structural.

use ifc_cg::{CGExpr, CGHeap, CGMemory, CGStore, CGThunk, CGType, CGValue};
use ifc_fg::{FGExpr, FGHeap, FGMemory, FGRaw, FGStore, FGType, FGValue};
use ifc_lattice::{Label, Lattice, LatticeError};

/// Predicates connecting fine-grained code to the coarse-grained code
/// it translates. The final argument of `fun` and `thunk` is the typing
/// context the coarse closure was built under (its `env_tys`).
pub struct CrossHooks<'r> {
    /// Is the fine-grained type the image of the coarse-grained type?
    pub ty: &'r dyn Fn(&FGType, &CGType) -> bool,
    /// Is the fine-grained lambda (param, body) the image of the
    /// coarse-grained lambda (param, body)?
    pub fun: &'r dyn Fn(&FGType, &FGExpr, &CGType, &CGExpr, &[CGType]) -> bool,
    /// Is the fine-grained lambda (param, body) the suspension wrapper
    /// of the coarse-grained thunk?
    pub thunk: &'r dyn Fn(&FGType, &FGExpr, &CGThunk, &[CGType]) -> bool,
}

impl<'r> CrossHooks<'r> {
    /// Hooks that reject every closure and type pair. Sufficient for
    /// first-order values; callers with access to the translation
    /// supply real hooks.
    pub fn none() -> CrossHooks<'static> {
        CrossHooks {
            ty: &|_, _| false,
            fun: &|_, _, _, _, _| false,
            thunk: &|_, _, _, _| false,
        }
    }
}

pub struct CrossRel<'r> {
    pub lat: &'r Lattice,
    pub hooks: CrossHooks<'r>,
}

impl<'r> CrossRel<'r> {
    pub fn new(lat: &'r Lattice, hooks: CrossHooks<'r>) -> CrossRel<'r> {
        CrossRel { lat, hooks }
    }

    /// A labeled fine-grained value against a bare coarse-grained one:
    /// the intrinsic label must sit below the program counter and the
    /// raw contents must correspond.
    pub fn ceq_value(&self, pc: Label, fg: &FGValue, cg: &CGValue) -> Result<bool, LatticeError> {
        Ok(self.lat.leq(fg.lab, pc)? && self.ceq_raw(pc, &fg.raw, cg)?)
    }

    pub fn ceq_raw(&self, pc: Label, fg: &FGRaw, cg: &CGValue) -> Result<bool, LatticeError> {
        Ok(match (fg, cg) {
            (FGRaw::Unit, CGValue::Unit) => true,
            (FGRaw::Lab(l1), CGValue::Lab(l2)) => l1 == l2,
            (FGRaw::RefI(l1, n1), CGValue::RefI(l2, n2)) => l1 == l2 && n1 == n2,
            (FGRaw::RefS(n1), CGValue::RefS(n2)) => n1 == n2,
            (FGRaw::Inl(t1, v1), CGValue::Inl(t2, v2))
            | (FGRaw::Inr(t1, v1), CGValue::Inr(t2, v2)) => {
                (self.hooks.ty)(t1, t2) && self.ceq_value(pc, v1, v2)?
            }
            (FGRaw::Pair(x1, y1), CGValue::Pair(x2, y2)) => {
                self.ceq_value(pc, x1, x2)? && self.ceq_value(pc, y1, y2)?
            }
            // A labeled coarse value corresponds to a pair of the label
            // and the payload, with the payload related at that label.
            (FGRaw::Pair(l, w), CGValue::Labeled(l2, v2)) => {
                l.raw == FGRaw::Lab(*l2) && l.lab == *l2 && self.ceq_value(*l2, w, v2)?
            }
            (
                FGRaw::Closure { param: p1, body: b1, env: e1, .. },
                CGValue::Closure { param: p2, body: b2, env: e2, env_tys },
            ) => (self.hooks.fun)(p1, b1, p2, b2, env_tys) && self.ceq_env(pc, e1, e2)?,
            (
                FGRaw::Closure { param: p1, body: b1, env: e1, .. },
                CGValue::TClosure { thunk: t2, env: e2, env_tys },
            ) => (self.hooks.thunk)(p1, b1, t2, env_tys) && self.ceq_env(pc, e1, e2)?,
            _ => false,
        })
    }

    pub fn ceq_env(&self, pc: Label, e1: &[FGValue], e2: &[CGValue]) -> Result<bool, LatticeError> {
        if e1.len() != e2.len() {
            return Ok(false);
        }
        for (v1, v2) in e1.iter().zip(e2) {
            if !self.ceq_value(pc, v1, v2)? {
                return Ok(false);
            }
        }
        Ok(true)
    }

    /// Cells of one label's memory correspond at that label.
    pub fn ceq_memory(
        &self,
        mem_label: Label,
        m1: &FGMemory,
        m2: &CGMemory,
    ) -> Result<bool, LatticeError> {
        if m1.len() != m2.len() {
            return Ok(false);
        }
        for (r, v) in m1.iter().zip(m2) {
            if !self.ceq_raw(mem_label, r, v)? {
                return Ok(false);
            }
        }
        Ok(true)
    }

    pub fn ceq_store(&self, s1: &FGStore, s2: &CGStore) -> Result<bool, LatticeError> {
        let empty_fg = FGMemory::new();
        let empty_cg = CGMemory::new();
        for l in self.lat.points() {
            let m1 = s1.get(&l).unwrap_or(&empty_fg);
            let m2 = s2.get(&l).unwrap_or(&empty_cg);
            if !self.ceq_memory(l, m1, m2)? {
                return Ok(false);
            }
        }
        Ok(true)
    }

    /// Heap cells correspond pointwise: same label on both sides, and
    /// contents related at that label.
    pub fn ceq_heap(&self, h1: &FGHeap, h2: &CGHeap) -> Result<bool, LatticeError> {
        if h1.len() != h2.len() {
            return Ok(false);
        }
        for (fg_cell, (l2, v2)) in h1.iter().zip(h2) {
            if fg_cell.lab != *l2 || !self.ceq_raw(*l2, &fg_cell.raw, v2)? {
                return Ok(false);
            }
        }
        Ok(true)
    }

    /// Related stores and related heaps.
    pub fn state_rel(
        &self,
        s1: &FGStore,
        h1: &FGHeap,
        s2: &CGStore,
        h2: &CGHeap,
    ) -> Result<bool, LatticeError> {
        Ok(self.ceq_store(s1, s2)? && self.ceq_heap(h1, h2)?)
    }

    /// Initial configurations of a translated run: the state components
    /// must correspond; the code corresponds by construction.
    pub fn config_rel_initial(
        &self,
        s1: &FGStore,
        h1: &FGHeap,
        s2: &CGStore,
        h2: &CGHeap,
    ) -> Result<bool, LatticeError> {
        self.state_rel(s1, h1, s2, h2)
    }

    /// Final configurations: the fine-grained result label must equal
    /// the coarse run's final program counter, with the raw result
    /// related at that level over corresponding state.
    #[allow(clippy::too_many_arguments)]
    pub fn config_rel_final(
        &self,
        s1: &FGStore,
        h1: &FGHeap,
        v1: &FGValue,
        s2: &CGStore,
        h2: &CGHeap,
        pc: Label,
        v2: &CGValue,
    ) -> Result<bool, LatticeError> {
        Ok(self.state_rel(s1, h1, s2, h2)?
            && v1.lab == pc
            && self.ceq_raw(pc, &v1.raw, v2)?)
    }
}
