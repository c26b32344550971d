//! The monitored big-step interpreter.
//!
//! Evaluation is total: a fuel counter (one unit per rule application) turns
//! divergence into `Timeout`, failed security checks into `SecurityAbort`,
//! and ill-typed configurations into `Stuck`. On well-typed input `Stuck` is
//! unreachable.

use ifc_lattice::{Label, Lattice};

use crate::syntax::{FGExpr, FGType, Sensitivity};
use crate::typecheck::drop_indices;
use crate::value::{type_of_fg_value, FGEnv, FGHeap, FGRaw, FGStore, FGValue};

#[derive(PartialEq, Eq, Clone, Debug)]
pub enum FGOutcome {
    Final { store: FGStore, heap: FGHeap, value: FGValue },
    SecurityAbort { rule: String, check: String },
    Timeout,
    Stuck { reason: String },
}

impl FGOutcome {
    pub fn is_final(&self) -> bool {
        matches!(self, FGOutcome::Final { .. })
    }
}

/// Toggles for the monitor's security checks. Disabling a check produces a
/// deliberately unsound interpreter for mutation testing; the default
/// monitor has every check enabled.
#[derive(PartialEq, Eq, Clone, Copy, Debug)]
pub struct FGMonitor {
    /// The `ℓ' ⊑ ℓ` guard of `taint(e1, e2)`.
    pub check_taint_guard: bool,
    /// The `ℓ2 ⊑ ℓ` value-flow check of flow-insensitive writes.
    pub check_write_value_flow: bool,
    /// The no-sensitive-upgrade check of flow-sensitive writes.
    pub check_nsu: bool,
}

impl Default for FGMonitor {
    fn default() -> Self {
        FGMonitor { check_taint_guard: true, check_write_value_flow: true, check_nsu: true }
    }
}

impl FGMonitor {
    pub fn is_intact(&self) -> bool {
        *self == FGMonitor::default()
    }
}

enum Halt {
    Abort { rule: &'static str, check: &'static str },
    Timeout,
    Stuck(String),
}

fn stuck<T>(reason: impl Into<String>) -> Result<T, Halt> {
    Err(Halt::Stuck(reason.into()))
}

/// Evaluates `e` with the default (fully enabled) monitor. The types of the
/// initial environment are synthesized from its values.
pub fn eval_fg(
    lat: &Lattice,
    store: &FGStore,
    heap: &FGHeap,
    e: &FGExpr,
    env: &FGEnv,
    pc: Label,
    fuel: u64,
) -> FGOutcome {
    eval_fg_monitored(lat, store, heap, e, env, None, pc, fuel, FGMonitor::default())
}

/// Evaluates `e` under a configurable monitor. `env_tys` gives the types of
/// the initial environment (innermost last); when `None` they are
/// synthesized from the values.
#[allow(clippy::too_many_arguments)]
pub fn eval_fg_monitored(
    lat: &Lattice,
    store: &FGStore,
    heap: &FGHeap,
    e: &FGExpr,
    env: &FGEnv,
    env_tys: Option<&[FGType]>,
    pc: Label,
    fuel: u64,
    mon: FGMonitor,
) -> FGOutcome {
    if !lat.owns(pc) {
        return FGOutcome::Stuck { reason: "program counter from a foreign lattice".into() };
    }
    let tys = match env_tys {
        Some(tys) => {
            if tys.len() != env.len() {
                return FGOutcome::Stuck {
                    reason: "environment and its types disagree in length".into(),
                };
            }
            tys.to_vec()
        }
        None => {
            let mut tys = Vec::with_capacity(env.len());
            for v in env {
                match type_of_fg_value(lat, store, heap, v) {
                    Ok(t) => tys.push(t),
                    Err(e) => {
                        return FGOutcome::Stuck {
                            reason: format!("untypeable initial environment: {e}"),
                        }
                    }
                }
            }
            tys
        }
    };
    let mut ev = Ev { lat, mon, store: store.clone(), heap: heap.clone(), fuel };
    match ev.eval(e, env, &tys, pc) {
        Ok(value) => FGOutcome::Final { store: ev.store, heap: ev.heap, value },
        Err(Halt::Abort { rule, check }) => {
            FGOutcome::SecurityAbort { rule: rule.to_string(), check: check.to_string() }
        }
        Err(Halt::Timeout) => FGOutcome::Timeout,
        Err(Halt::Stuck(reason)) => FGOutcome::Stuck { reason },
    }
}

struct Ev<'a> {
    lat: &'a Lattice,
    mon: FGMonitor,
    store: FGStore,
    heap: FGHeap,
    fuel: u64,
}

impl Ev<'_> {
    fn join(&self, a: Label, b: Label) -> Result<Label, Halt> {
        self.lat.join(a, b).map_err(|e| Halt::Stuck(e.to_string()))
    }

    fn leq(&self, a: Label, b: Label) -> Result<bool, Halt> {
        self.lat.leq(a, b).map_err(|e| Halt::Stuck(e.to_string()))
    }

    fn eval(
        &mut self,
        e: &FGExpr,
        env: &FGEnv,
        tys: &Vec<FGType>,
        pc: Label,
    ) -> Result<FGValue, Halt> {
        if self.fuel == 0 {
            return Err(Halt::Timeout);
        }
        self.fuel -= 1;
        match e {
            FGExpr::Var(n) => {
                let i = env
                    .len()
                    .checked_sub(1 + n)
                    .ok_or_else(|| Halt::Stuck(format!("unbound variable {n}")))?;
                let mut v = env[i].clone();
                v.lab = self.join(v.lab, pc)?;
                Ok(v)
            }
            FGExpr::Lam(param, body) => Ok(FGValue::new(
                FGRaw::Closure {
                    param: param.clone(),
                    body: body.clone(),
                    env: env.clone(),
                    env_tys: tys.clone(),
                },
                pc,
            )),
            FGExpr::App(e1, e2) => {
                let f = self.eval(e1, env, tys, pc)?;
                let (param, body, cenv, ctys) = match f.raw {
                    FGRaw::Closure { param, body, env, env_tys } => (param, body, env, env_tys),
                    _ => return stuck("applied a non-function"),
                };
                let arg = self.eval(e2, env, tys, pc)?;
                let mut env2 = cenv;
                env2.push(arg);
                let mut tys2 = ctys;
                tys2.push(param);
                let pc2 = self.join(pc, f.lab)?;
                self.eval(&body, &env2, &tys2, pc2)
            }
            FGExpr::Unit => Ok(FGValue::new(FGRaw::Unit, pc)),
            FGExpr::Lab(l) => {
                if !self.lat.owns(*l) {
                    return stuck("label literal from a foreign lattice");
                }
                Ok(FGValue::new(FGRaw::Lab(*l), pc))
            }
            FGExpr::Pair(e1, e2) => {
                let v1 = self.eval(e1, env, tys, pc)?;
                let v2 = self.eval(e2, env, tys, pc)?;
                Ok(FGValue::new(FGRaw::Pair(Box::new(v1), Box::new(v2)), pc))
            }
            FGExpr::Fst(e) => {
                let v = self.eval(e, env, tys, pc)?;
                match v.raw {
                    FGRaw::Pair(a, _) => {
                        let mut out = *a;
                        out.lab = self.join(out.lab, v.lab)?;
                        Ok(out)
                    }
                    _ => stuck("fst of a non-pair"),
                }
            }
            FGExpr::Snd(e) => {
                let v = self.eval(e, env, tys, pc)?;
                match v.raw {
                    FGRaw::Pair(_, b) => {
                        let mut out = *b;
                        out.lab = self.join(out.lab, v.lab)?;
                        Ok(out)
                    }
                    _ => stuck("snd of a non-pair"),
                }
            }
            FGExpr::Inl(sum_ty, e) => {
                let v = self.eval(e, env, tys, pc)?;
                Ok(FGValue::new(FGRaw::Inl(sum_ty.clone(), Box::new(v)), pc))
            }
            FGExpr::Inr(sum_ty, e) => {
                let v = self.eval(e, env, tys, pc)?;
                Ok(FGValue::new(FGRaw::Inr(sum_ty.clone(), Box::new(v)), pc))
            }
            FGExpr::Case(scrut, left, right) => {
                let v = self.eval(scrut, env, tys, pc)?;
                let pc2 = self.join(pc, v.lab)?;
                let (branch, bound, bound_ty) = match v.raw {
                    FGRaw::Inl(sum_ty, w) => {
                        let t1 = match sum_ty {
                            FGType::Sum(t1, _) => *t1,
                            _ => return stuck("inl annotated with a non-sum type"),
                        };
                        (left, *w, t1)
                    }
                    FGRaw::Inr(sum_ty, w) => {
                        let t2 = match sum_ty {
                            FGType::Sum(_, t2) => *t2,
                            _ => return stuck("inr annotated with a non-sum type"),
                        };
                        (right, *w, t2)
                    }
                    _ => return stuck("case of a non-sum"),
                };
                let mut env2 = env.clone();
                env2.push(bound);
                let mut tys2 = tys.clone();
                tys2.push(bound_ty);
                self.eval(branch, &env2, &tys2, pc2)
            }
            FGExpr::GetLabel => Ok(FGValue::new(FGRaw::Lab(pc), pc)),
            FGExpr::LabelOf(e) => {
                let v = self.eval(e, env, tys, pc)?;
                Ok(FGValue::new(FGRaw::Lab(v.lab), v.lab))
            }
            FGExpr::Leq(e1, e2) => {
                let v1 = self.eval(e1, env, tys, pc)?;
                let v2 = self.eval(e2, env, tys, pc)?;
                let (l1, l2) = match (&v1.raw, &v2.raw) {
                    (FGRaw::Lab(l1), FGRaw::Lab(l2)) => (*l1, *l2),
                    _ => return stuck("label comparison of non-labels"),
                };
                let inner = FGValue::new(FGRaw::Unit, pc);
                let raw = if self.leq(l1, l2)? {
                    FGRaw::Inl(FGType::bool_ty(), Box::new(inner))
                } else {
                    FGRaw::Inr(FGType::bool_ty(), Box::new(inner))
                };
                Ok(FGValue::new(raw, self.join(v1.lab, v2.lab)?))
            }
            FGExpr::Taint(e1, e2) => {
                let v1 = self.eval(e1, env, tys, pc)?;
                let l = match v1.raw {
                    FGRaw::Lab(l) => l,
                    _ => return stuck("taint target is not a label"),
                };
                if self.mon.check_taint_guard && !self.leq(v1.lab, l)? {
                    return Err(Halt::Abort { rule: "Taint", check: "l' <= l" });
                }
                self.eval(e2, env, tys, l)
            }
            FGExpr::New(Sensitivity::I, e) => {
                let v = self.eval(e, env, tys, pc)?;
                if self.mon.is_intact() {
                    // Redundant with pc-raising; asserted rather than checked.
                    debug_assert!(
                        self.leq(pc, v.lab)?,
                        "flow-insensitive allocation below the program counter"
                    );
                }
                let mem = self.store.entry(v.lab).or_default();
                let n = mem.len();
                mem.push(v.raw);
                Ok(FGValue::new(FGRaw::RefI(v.lab, n), pc))
            }
            FGExpr::New(Sensitivity::S, e) => {
                let v = self.eval(e, env, tys, pc)?;
                let n = self.heap.len();
                self.heap.push(v);
                Ok(FGValue::new(FGRaw::RefS(n), pc))
            }
            FGExpr::Read(e) => {
                let v = self.eval(e, env, tys, pc)?;
                match v.raw {
                    FGRaw::RefI(l, n) => {
                        let cell = self
                            .store
                            .get(&l)
                            .and_then(|mem| mem.get(n))
                            .cloned()
                            .ok_or_else(|| Halt::Stuck("dangling reference".into()))?;
                        Ok(FGValue::new(cell, self.join(l, v.lab)?))
                    }
                    FGRaw::RefS(n) => {
                        let cell = self
                            .heap
                            .get(n)
                            .cloned()
                            .ok_or_else(|| Halt::Stuck("dangling reference".into()))?;
                        Ok(FGValue::new(cell.raw, self.join(cell.lab, v.lab)?))
                    }
                    _ => stuck("read of a non-reference"),
                }
            }
            FGExpr::Write(e1, e2) => {
                let r = self.eval(e1, env, tys, pc)?;
                match r.raw {
                    FGRaw::RefI(l, n) => {
                        if !self.leq(r.lab, l)? {
                            return Err(Halt::Abort { rule: "Write", check: "l1 <= l" });
                        }
                        let v = self.eval(e2, env, tys, pc)?;
                        if self.mon.check_write_value_flow && !self.leq(v.lab, l)? {
                            return Err(Halt::Abort { rule: "Write", check: "l2 <= l" });
                        }
                        let cell = self
                            .store
                            .get_mut(&l)
                            .and_then(|mem| mem.get_mut(n))
                            .ok_or_else(|| Halt::Stuck("dangling reference".into()))?;
                        *cell = v.raw;
                        Ok(FGValue::new(FGRaw::Unit, pc))
                    }
                    FGRaw::RefS(n) => {
                        let v = self.eval(e2, env, tys, pc)?;
                        let old_lab = self
                            .heap
                            .get(n)
                            .map(|cell| cell.lab)
                            .ok_or_else(|| Halt::Stuck("dangling reference".into()))?;
                        if self.mon.check_nsu && !self.leq(r.lab, old_lab)? {
                            return Err(Halt::Abort { rule: "NSU", check: "l <= l1" });
                        }
                        let new_lab = self.join(v.lab, r.lab)?;
                        self.heap[n] = FGValue::new(v.raw, new_lab);
                        Ok(FGValue::new(FGRaw::Unit, pc))
                    }
                    _ => stuck("write to a non-reference"),
                }
            }
            FGExpr::LabelOfRef(e) => {
                let v = self.eval(e, env, tys, pc)?;
                match v.raw {
                    FGRaw::RefI(l, _) => Ok(FGValue::new(FGRaw::Lab(l), self.join(l, v.lab)?)),
                    FGRaw::RefS(n) => {
                        let cell_lab = self
                            .heap
                            .get(n)
                            .map(|cell| cell.lab)
                            .ok_or_else(|| Halt::Stuck("dangling reference".into()))?;
                        Ok(FGValue::new(FGRaw::Lab(cell_lab), self.join(v.lab, cell_lab)?))
                    }
                    _ => stuck("labelOfRef of a non-reference"),
                }
            }
            FGExpr::Wken(drop, e) => {
                for &n in drop {
                    if n >= env.len() {
                        return stuck(format!("wken drops unbound variable {n}"));
                    }
                }
                let env2 = drop_indices(env, drop);
                let tys2 = drop_indices(tys, drop);
                self.eval(e, &env2, &tys2, pc)
            }
        }
    }
}
