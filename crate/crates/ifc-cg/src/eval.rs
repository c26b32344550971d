//! The monitored big-step interpreter, split into a pure evaluator and a
//! forcing evaluator.
//!
//! `eval_pure` has no access to the store, heap, or pc; its signature is the
//! purity guarantee. `eval_force` and `eval_thunk` run computations over a
//! configuration with a floating pc that only ever rises. A shared fuel
//! counter (one unit per rule application) turns divergence into `Timeout`;
//! failed security checks become `SecurityAbort`, ill-typed configurations
//! `Stuck`. On well-typed input `Stuck` is unreachable.

use ifc_lattice::{Label, Lattice};

use crate::syntax::{CGExpr, CGThunk, CGType, Sensitivity};
use crate::typecheck::{drop_indices, typecheck_cg};
use crate::value::{type_of_cg_value, CGEnv, CGHeap, CGStore, CGValue};

#[derive(PartialEq, Eq, Clone, Debug)]
pub enum CGOutcome {
    Final { store: CGStore, heap: CGHeap, pc: Label, value: CGValue },
    SecurityAbort { rule: String, check: String },
    Timeout,
    Stuck { reason: String },
}

impl CGOutcome {
    pub fn is_final(&self) -> bool {
        matches!(self, CGOutcome::Final { .. })
    }
}

/// Result of running the pure fragment, which touches no state and performs
/// no security checks.
#[derive(PartialEq, Eq, Clone, Debug)]
pub enum CGPureOutcome {
    Value(CGValue),
    Timeout,
    Stuck { reason: String },
}

/// Toggles for the monitor's security checks. Disabling a check produces a
/// deliberately unsound interpreter for mutation testing; the default
/// monitor has every check enabled.
#[derive(PartialEq, Eq, Clone, Copy, Debug)]
pub struct CGMonitor {
    /// The `pc ⊑ ℓ` check at allocation, both reference flavors.
    pub check_new: bool,
    /// The `pc ⊑ ℓ1` check of flow-insensitive writes.
    pub check_write_pc: bool,
    /// The no-sensitive-upgrade check of flow-sensitive writes.
    pub check_nsu: bool,
}

impl Default for CGMonitor {
    fn default() -> Self {
        CGMonitor { check_new: true, check_write_pc: true, check_nsu: true }
    }
}

impl CGMonitor {
    pub fn is_intact(&self) -> bool {
        *self == CGMonitor::default()
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

/// Evaluates a pure expression. `env_tys` gives the types of the initial
/// environment; when `None` they are synthesized against empty state, so an
/// environment holding references needs explicit types here.
pub fn eval_pure(
    lat: &Lattice,
    e: &CGExpr,
    env: &CGEnv,
    env_tys: Option<&[CGType]>,
    mut fuel: u64,
) -> CGPureOutcome {
    let tys = match initial_tys(lat, &CGStore::new(), &CGHeap::new(), env, env_tys) {
        Ok(tys) => tys,
        Err(reason) => return CGPureOutcome::Stuck { reason },
    };
    match pure(lat, e, env, &tys, &mut fuel) {
        Ok(value) => CGPureOutcome::Value(value),
        Err(Halt::Timeout) => CGPureOutcome::Timeout,
        Err(Halt::Stuck(reason)) => CGPureOutcome::Stuck { reason },
        Err(Halt::Abort { .. }) => {
            unreachable!("the pure fragment performs no security checks")
        }
    }
}

/// Forces `e` (which must evaluate to a suspended computation) with the
/// default monitor.
#[allow(clippy::too_many_arguments)]
pub fn eval_force(
    lat: &Lattice,
    store: &CGStore,
    heap: &CGHeap,
    pc: Label,
    e: &CGExpr,
    env: &CGEnv,
    fuel: u64,
) -> CGOutcome {
    eval_force_monitored(lat, store, heap, pc, e, env, None, fuel, CGMonitor::default())
}

/// Forces `e` under a configurable monitor. `env_tys` gives the types of the
/// initial environment (innermost last); when `None` they are synthesized
/// from the values.
#[allow(clippy::too_many_arguments)]
pub fn eval_force_monitored(
    lat: &Lattice,
    store: &CGStore,
    heap: &CGHeap,
    pc: Label,
    e: &CGExpr,
    env: &CGEnv,
    env_tys: Option<&[CGType]>,
    fuel: u64,
    mon: CGMonitor,
) -> CGOutcome {
    run(lat, store, heap, pc, env, env_tys, fuel, mon, |ev, tys| {
        let env = env.to_vec();
        ev.force(e, &env, tys)
    })
}

/// Runs the computation `t` directly with the default monitor.
pub fn eval_thunk(
    lat: &Lattice,
    store: &CGStore,
    heap: &CGHeap,
    pc: Label,
    t: &CGThunk,
    env: &CGEnv,
    fuel: u64,
) -> CGOutcome {
    eval_thunk_monitored(lat, store, heap, pc, t, env, None, fuel, CGMonitor::default())
}

/// Runs the computation `t` directly under a configurable monitor.
#[allow(clippy::too_many_arguments)]
pub fn eval_thunk_monitored(
    lat: &Lattice,
    store: &CGStore,
    heap: &CGHeap,
    pc: Label,
    t: &CGThunk,
    env: &CGEnv,
    env_tys: Option<&[CGType]>,
    fuel: u64,
    mon: CGMonitor,
) -> CGOutcome {
    run(lat, store, heap, pc, env, env_tys, fuel, mon, |ev, tys| {
        let env = env.to_vec();
        ev.thunk(t, &env, tys)
    })
}

#[allow(clippy::too_many_arguments)]
fn run(
    lat: &Lattice,
    store: &CGStore,
    heap: &CGHeap,
    pc: Label,
    env: &CGEnv,
    env_tys: Option<&[CGType]>,
    fuel: u64,
    mon: CGMonitor,
    body: impl FnOnce(&mut Ev<'_>, &Vec<CGType>) -> Result<CGValue, Halt>,
) -> CGOutcome {
    if !lat.owns(pc) {
        return CGOutcome::Stuck { reason: "program counter from a foreign lattice".into() };
    }
    let tys = match initial_tys(lat, store, heap, env, env_tys) {
        Ok(tys) => tys,
        Err(reason) => return CGOutcome::Stuck { reason },
    };
    let mut ev = Ev { lat, mon, store: store.clone(), heap: heap.clone(), pc, fuel };
    match body(&mut ev, &tys) {
        Ok(value) => CGOutcome::Final { store: ev.store, heap: ev.heap, pc: ev.pc, value },
        Err(Halt::Abort { rule, check }) => {
            CGOutcome::SecurityAbort { rule: rule.to_string(), check: check.to_string() }
        }
        Err(Halt::Timeout) => CGOutcome::Timeout,
        Err(Halt::Stuck(reason)) => CGOutcome::Stuck { reason },
    }
}

fn initial_tys(
    lat: &Lattice,
    store: &CGStore,
    heap: &CGHeap,
    env: &CGEnv,
    env_tys: Option<&[CGType]>,
) -> Result<Vec<CGType>, String> {
    match env_tys {
        Some(tys) => {
            if tys.len() != env.len() {
                return Err("environment and its types disagree in length".into());
            }
            Ok(tys.to_vec())
        }
        None => {
            let mut tys = Vec::with_capacity(env.len());
            for v in env {
                match type_of_cg_value(lat, store, heap, v) {
                    Ok(t) => tys.push(t),
                    Err(e) => return Err(format!("untypeable initial environment: {e}")),
                }
            }
            Ok(tys)
        }
    }
}

/// The pure evaluator. Its parameter list is the purity proof: no store, no
/// heap, no pc.
fn pure(
    lat: &Lattice,
    e: &CGExpr,
    env: &CGEnv,
    tys: &Vec<CGType>,
    fuel: &mut u64,
) -> Result<CGValue, Halt> {
    if *fuel == 0 {
        return Err(Halt::Timeout);
    }
    *fuel -= 1;
    match e {
        CGExpr::Var(n) => {
            let i = env
                .len()
                .checked_sub(1 + n)
                .ok_or_else(|| Halt::Stuck(format!("unbound variable {n}")))?;
            Ok(env[i].clone())
        }
        CGExpr::Lam(param, body) => Ok(CGValue::Closure {
            param: param.clone(),
            body: body.clone(),
            env: env.clone(),
            env_tys: tys.clone(),
        }),
        CGExpr::App(e1, e2) => {
            let f = pure(lat, e1, env, tys, fuel)?;
            let (param, body, cenv, ctys) = match f {
                CGValue::Closure { param, body, env, env_tys } => (param, body, env, env_tys),
                _ => return stuck("applied a non-function"),
            };
            let arg = pure(lat, e2, env, tys, fuel)?;
            let mut env2 = cenv;
            env2.push(arg);
            let mut tys2 = ctys;
            tys2.push(param);
            pure(lat, &body, &env2, &tys2, fuel)
        }
        CGExpr::Unit => Ok(CGValue::Unit),
        CGExpr::Lab(l) => {
            if !lat.owns(*l) {
                return stuck("label literal from a foreign lattice");
            }
            Ok(CGValue::Lab(*l))
        }
        CGExpr::Pair(e1, e2) => {
            let v1 = pure(lat, e1, env, tys, fuel)?;
            let v2 = pure(lat, e2, env, tys, fuel)?;
            Ok(CGValue::Pair(Box::new(v1), Box::new(v2)))
        }
        CGExpr::Fst(e) => match pure(lat, e, env, tys, fuel)? {
            CGValue::Pair(a, _) => Ok(*a),
            _ => stuck("fst of a non-pair"),
        },
        CGExpr::Snd(e) => match pure(lat, e, env, tys, fuel)? {
            CGValue::Pair(_, b) => Ok(*b),
            _ => stuck("snd of a non-pair"),
        },
        CGExpr::Inl(sum_ty, e) => {
            let v = pure(lat, e, env, tys, fuel)?;
            Ok(CGValue::Inl(sum_ty.clone(), Box::new(v)))
        }
        CGExpr::Inr(sum_ty, e) => {
            let v = pure(lat, e, env, tys, fuel)?;
            Ok(CGValue::Inr(sum_ty.clone(), Box::new(v)))
        }
        CGExpr::Case(scrut, left, right) => {
            let v = pure(lat, scrut, env, tys, fuel)?;
            let (branch, bound, bound_ty) = match v {
                CGValue::Inl(sum_ty, w) => {
                    let t1 = match sum_ty {
                        CGType::Sum(t1, _) => *t1,
                        _ => return stuck("inl annotated with a non-sum type"),
                    };
                    (left, *w, t1)
                }
                CGValue::Inr(sum_ty, w) => {
                    let t2 = match sum_ty {
                        CGType::Sum(_, t2) => *t2,
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
            pure(lat, branch, &env2, &tys2, fuel)
        }
        CGExpr::Leq(e1, e2) => {
            let v1 = pure(lat, e1, env, tys, fuel)?;
            let v2 = pure(lat, e2, env, tys, fuel)?;
            let (l1, l2) = match (&v1, &v2) {
                (CGValue::Lab(l1), CGValue::Lab(l2)) => (*l1, *l2),
                _ => return stuck("label comparison of non-labels"),
            };
            let holds = lat.leq(l1, l2).map_err(|e| Halt::Stuck(e.to_string()))?;
            Ok(if holds {
                CGValue::Inl(CGType::bool_ty(), Box::new(CGValue::Unit))
            } else {
                CGValue::Inr(CGType::bool_ty(), Box::new(CGValue::Unit))
            })
        }
        CGExpr::Thunk(t) => Ok(CGValue::TClosure {
            thunk: t.clone(),
            env: env.clone(),
            env_tys: tys.clone(),
        }),
        CGExpr::Wken(drop, e) => {
            for &n in drop {
                if n >= env.len() {
                    return stuck(format!("wken drops unbound variable {n}"));
                }
            }
            let env2 = drop_indices(env, drop);
            let tys2 = drop_indices(tys, drop);
            pure(lat, e, &env2, &tys2, fuel)
        }
    }
}

struct Ev<'a> {
    lat: &'a Lattice,
    mon: CGMonitor,
    store: CGStore,
    heap: CGHeap,
    pc: Label,
    fuel: u64,
}

impl Ev<'_> {
    fn join(&self, a: Label, b: Label) -> Result<Label, Halt> {
        self.lat.join(a, b).map_err(|e| Halt::Stuck(e.to_string()))
    }

    fn leq(&self, a: Label, b: Label) -> Result<bool, Halt> {
        self.lat.leq(a, b).map_err(|e| Halt::Stuck(e.to_string()))
    }

    fn raise(&mut self, l: Label) -> Result<(), Halt> {
        self.pc = self.join(self.pc, l)?;
        Ok(())
    }

    /// Evaluates `e` purely to a suspended computation and runs it.
    fn force(&mut self, e: &CGExpr, env: &CGEnv, tys: &Vec<CGType>) -> Result<CGValue, Halt> {
        if self.fuel == 0 {
            return Err(Halt::Timeout);
        }
        self.fuel -= 1;
        let v = pure(self.lat, e, env, tys, &mut self.fuel)?;
        match v {
            CGValue::TClosure { thunk, env, env_tys } => self.thunk(&thunk, &env, &env_tys),
            _ => stuck("forced a value that is not a suspended computation"),
        }
    }

    fn thunk(&mut self, t: &CGThunk, env: &CGEnv, tys: &Vec<CGType>) -> Result<CGValue, Halt> {
        if self.fuel == 0 {
            return Err(Halt::Timeout);
        }
        self.fuel -= 1;
        match t {
            CGThunk::Return(e) => pure(self.lat, e, env, tys, &mut self.fuel),
            CGThunk::Bind(e1, e2) => {
                let t1 = match typecheck_cg(tys, e1) {
                    Ok(CGType::Lio(t1)) => *t1,
                    Ok(other) => {
                        return stuck(format!("bound a non-computation of type {other}"))
                    }
                    Err(e) => return stuck(format!("ill-typed bind: {e}")),
                };
                let v1 = self.force(e1, env, tys)?;
                let mut env2 = env.clone();
                env2.push(v1);
                let mut tys2 = tys.clone();
                tys2.push(t1);
                self.force(e2, &env2, &tys2)
            }
            CGThunk::Unlabel(e) => {
                let v = pure(self.lat, e, env, tys, &mut self.fuel)?;
                match v {
                    CGValue::Labeled(l, w) => {
                        if !self.lat.owns(l) {
                            return stuck("labeled value with a foreign label");
                        }
                        self.raise(l)?;
                        Ok(*w)
                    }
                    _ => stuck("unlabel of an unlabeled value"),
                }
            }
            CGThunk::ToLabeled(e) => {
                let saved_pc = self.pc;
                let v = self.force(e, env, tys)?;
                let inner_pc = self.pc;
                self.pc = saved_pc;
                Ok(CGValue::Labeled(inner_pc, Box::new(v)))
            }
            CGThunk::LabelOf(e) => {
                let v = pure(self.lat, e, env, tys, &mut self.fuel)?;
                match v {
                    CGValue::Labeled(l, _) => {
                        if !self.lat.owns(l) {
                            return stuck("labeled value with a foreign label");
                        }
                        self.raise(l)?;
                        Ok(CGValue::Lab(l))
                    }
                    _ => stuck("labelOf of an unlabeled value"),
                }
            }
            CGThunk::GetLabel => Ok(CGValue::Lab(self.pc)),
            CGThunk::Taint(e) => {
                let v = pure(self.lat, e, env, tys, &mut self.fuel)?;
                match v {
                    CGValue::Lab(l) => {
                        if !self.lat.owns(l) {
                            return stuck("taint target is not a label of this lattice");
                        }
                        self.raise(l)?;
                        Ok(CGValue::Unit)
                    }
                    _ => stuck("taint target is not a label"),
                }
            }
            CGThunk::New(s, e) => {
                let v = pure(self.lat, e, env, tys, &mut self.fuel)?;
                let (l, w) = match v {
                    CGValue::Labeled(l, w) => (l, w),
                    _ => return stuck("allocated an unlabeled value"),
                };
                if !self.lat.owns(l) {
                    return stuck("labeled value with a foreign label");
                }
                if self.mon.check_new && !self.leq(self.pc, l)? {
                    return Err(Halt::Abort { rule: "New", check: "pc <= l" });
                }
                match s {
                    Sensitivity::I => {
                        let mem = self.store.entry(l).or_default();
                        let n = mem.len();
                        mem.push(*w);
                        Ok(CGValue::RefI(l, n))
                    }
                    Sensitivity::S => {
                        let n = self.heap.len();
                        self.heap.push((l, *w));
                        Ok(CGValue::RefS(n))
                    }
                }
            }
            CGThunk::Read(e) => {
                let v = pure(self.lat, e, env, tys, &mut self.fuel)?;
                match v {
                    CGValue::RefI(l, n) => {
                        let cell = self
                            .store
                            .get(&l)
                            .and_then(|mem| mem.get(n))
                            .cloned()
                            .ok_or_else(|| Halt::Stuck("dangling reference".into()))?;
                        self.raise(l)?;
                        Ok(cell)
                    }
                    CGValue::RefS(n) => {
                        let (l, cell) = self
                            .heap
                            .get(n)
                            .cloned()
                            .ok_or_else(|| Halt::Stuck("dangling reference".into()))?;
                        self.raise(l)?;
                        Ok(cell)
                    }
                    _ => stuck("read of a non-reference"),
                }
            }
            CGThunk::Write(e1, e2) => {
                let r = pure(self.lat, e1, env, tys, &mut self.fuel)?;
                let v = pure(self.lat, e2, env, tys, &mut self.fuel)?;
                let (l2, w) = match v {
                    CGValue::Labeled(l2, w) => (l2, w),
                    _ => return stuck("wrote an unlabeled value"),
                };
                if !self.lat.owns(l2) {
                    return stuck("labeled value with a foreign label");
                }
                match r {
                    CGValue::RefI(l1, n) => {
                        if !self.leq(l2, l1)? {
                            return Err(Halt::Abort { rule: "Write", check: "l2 <= l1" });
                        }
                        if self.mon.check_write_pc && !self.leq(self.pc, l1)? {
                            return Err(Halt::Abort { rule: "Write", check: "pc <= l1" });
                        }
                        let cell = self
                            .store
                            .get_mut(&l1)
                            .and_then(|mem| mem.get_mut(n))
                            .ok_or_else(|| Halt::Stuck("dangling reference".into()))?;
                        *cell = *w;
                        Ok(CGValue::Unit)
                    }
                    CGValue::RefS(n) => {
                        let old_lab = self
                            .heap
                            .get(n)
                            .map(|(l, _)| *l)
                            .ok_or_else(|| Halt::Stuck("dangling reference".into()))?;
                        if self.mon.check_nsu && !self.leq(self.pc, old_lab)? {
                            return Err(Halt::Abort { rule: "NSU", check: "pc <= l" });
                        }
                        let new_lab = self.join(self.pc, l2)?;
                        self.heap[n] = (new_lab, *w);
                        Ok(CGValue::Unit)
                    }
                    _ => stuck("write to a non-reference"),
                }
            }
            CGThunk::LabelOfRef(e) => {
                let v = pure(self.lat, e, env, tys, &mut self.fuel)?;
                match v {
                    CGValue::RefI(l, _) => {
                        self.raise(l)?;
                        Ok(CGValue::Lab(l))
                    }
                    CGValue::RefS(n) => {
                        let l = self
                            .heap
                            .get(n)
                            .map(|(l, _)| *l)
                            .ok_or_else(|| Halt::Stuck("dangling reference".into()))?;
                        self.raise(l)?;
                        Ok(CGValue::Lab(l))
                    }
                    _ => stuck("labelOfRef of a non-reference"),
                }
            }
        }
    }
}
