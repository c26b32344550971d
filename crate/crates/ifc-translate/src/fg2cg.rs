//! Fine- to coarse-grained translation.
//!
//! Every fine-grained type gains an outer `Labeled` wrapper, every value
//! embeds its intrinsic annotation as an explicit `Labeled` tag, and every
//! expression becomes a thunk whose effects sequence inside the monad. The
//! translation is total and syntax-directed.
//!
//! Each expression case emits a `toLabeled` block so that the label of the
//! block's result records exactly the final floating label of the nested
//! computation, which mirrors the intrinsic annotation the fine-grained
//! monitor would have produced. Chain temporaries introduced by `bind` are
//! dropped with `wken` before any nested translation runs, so closures
//! created by translated code capture precisely the image of the source
//! environment. That discipline is what makes preservation an equality of
//! final configurations rather than a coarser relation.

use ifc_cg::syntax::{build as cg, CGExpr, CGThunk, CGType};
use ifc_cg::value::{CGEnv, CGHeap, CGMemory, CGStore, CGValue};
use ifc_fg::syntax::{FGExpr, FGType};
use ifc_fg::value::{FGEnv, FGHeap, FGMemory, FGRaw, FGStore, FGValue};

/// Maps a flow-sensitivity tag across calculi.
pub fn fg2cg_sensitivity(s: ifc_fg::syntax::Sensitivity) -> ifc_cg::syntax::Sensitivity {
    match s {
        ifc_fg::syntax::Sensitivity::I => ifc_cg::syntax::Sensitivity::I,
        ifc_fg::syntax::Sensitivity::S => ifc_cg::syntax::Sensitivity::S,
    }
}

/// Translates a type, wrapping the image of every constructor in `Labeled`.
pub fn fg2cg_type(t: &FGType) -> CGType {
    CGType::Labeled(Box::new(fg2cg_bare_type(t)))
}

/// The image of a type without its outer `Labeled` wrapper: the type of
/// translated raw values. Function bodies become computations, and reference
/// cells store bare images because allocation strips one `Labeled` layer.
pub fn fg2cg_bare_type(t: &FGType) -> CGType {
    match t {
        FGType::Unit => CGType::Unit,
        FGType::LabelT => CGType::LabelT,
        FGType::Fun(a, b) => CGType::Fun(
            Box::new(fg2cg_type(a)),
            Box::new(CGType::Lio(Box::new(fg2cg_type(b)))),
        ),
        FGType::Sum(a, b) => CGType::Sum(Box::new(fg2cg_type(a)), Box::new(fg2cg_type(b))),
        FGType::Prod(a, b) => CGType::Prod(Box::new(fg2cg_type(a)), Box::new(fg2cg_type(b))),
        FGType::Ref(s, a) => CGType::Ref(fg2cg_sensitivity(*s), Box::new(fg2cg_bare_type(a))),
    }
}

/// Translates a value: the intrinsic annotation becomes an explicit label.
pub fn fg2cg_value(v: &FGValue) -> CGValue {
    CGValue::Labeled(v.lab, Box::new(fg2cg_raw(&v.raw)))
}

/// Translates a raw value, homomorphic in the constructors.
pub fn fg2cg_raw(r: &FGRaw) -> CGValue {
    match r {
        FGRaw::Unit => CGValue::Unit,
        FGRaw::Lab(l) => CGValue::Lab(*l),
        FGRaw::Pair(a, b) => {
            CGValue::Pair(Box::new(fg2cg_value(a)), Box::new(fg2cg_value(b)))
        }
        FGRaw::Inl(sum, v) => CGValue::Inl(fg2cg_bare_type(sum), Box::new(fg2cg_value(v))),
        FGRaw::Inr(sum, v) => CGValue::Inr(fg2cg_bare_type(sum), Box::new(fg2cg_value(v))),
        FGRaw::Closure {
            param,
            body,
            env,
            env_tys,
        } => CGValue::Closure {
            param: fg2cg_type(param),
            body: Box::new(fg2cg_expr(body)),
            env: fg2cg_env(env),
            env_tys: fg2cg_env_types(env_tys),
        },
        FGRaw::RefI(l, n) => CGValue::RefI(*l, *n),
        FGRaw::RefS(n) => CGValue::RefS(*n),
    }
}

/// Translates an environment pointwise.
pub fn fg2cg_env(env: &FGEnv) -> CGEnv {
    env.iter().map(fg2cg_value).collect()
}

/// Translates a typing environment pointwise.
pub fn fg2cg_env_types(tys: &[FGType]) -> Vec<CGType> {
    tys.iter().map(fg2cg_type).collect()
}

/// Translates one memory; cells are raw images, the memory label is implicit.
pub fn fg2cg_memory(m: &FGMemory) -> CGMemory {
    m.iter().map(fg2cg_raw).collect()
}

/// Translates a store pointwise over its memories.
pub fn fg2cg_store(s: &FGStore) -> CGStore {
    s.iter().map(|(l, m)| (*l, fg2cg_memory(m))).collect()
}

/// Translates a heap; each cell's annotation becomes the explicit cell label.
pub fn fg2cg_heap(h: &FGHeap) -> CGHeap {
    h.iter().map(|v| (v.lab, fg2cg_raw(&v.raw))).collect()
}

/// Translates a whole evaluation state.
pub fn fg2cg_state(s: &FGStore, h: &FGHeap, env: &FGEnv) -> (CGStore, CGHeap, CGEnv) {
    (fg2cg_store(s), fg2cg_heap(h), fg2cg_env(env))
}

/// Translates an expression to a suspended computation of its labeled image.
pub fn fg2cg_expr(e: &FGExpr) -> CGExpr {
    cg::thunk(fg2cg_thunk(e))
}

fn tl(t: CGThunk) -> CGThunk {
    cg::to_labeled(cg::thunk(t))
}

fn th(t: CGThunk) -> CGExpr {
    cg::thunk(t)
}

/// Translates an expression to the thunk computing its labeled image.
///
/// The result label of each `toLabeled` block equals the annotation the
/// source monitor puts on the corresponding result; the floating label
/// outside the block is left where it started.
pub fn fg2cg_thunk(e: &FGExpr) -> CGThunk {
    match e {
        FGExpr::Var(n) => tl(cg::unlabel(cg::var(*n))),
        FGExpr::Unit => tl(cg::ret(cg::unit())),
        FGExpr::Lab(l) => tl(cg::ret(cg::lab(*l))),
        FGExpr::Lam(param, body) => tl(cg::ret(cg::lam(
            fg2cg_type(param),
            th(fg2cg_thunk(body)),
        ))),
        // Temporaries: lv1, lv2, v1 (the unwrapped closure), then the
        // closure's computation is forced and its result unwrapped so the
        // block label matches the callee's result annotation.
        FGExpr::App(e1, e2) => tl(cg::bind(
            th(fg2cg_thunk(e1)),
            th(cg::bind(
                cg::wken([0], th(fg2cg_thunk(e2))),
                th(cg::bind(
                    th(cg::unlabel(cg::var(1))),
                    th(cg::bind(
                        cg::app(cg::var(0), cg::var(1)),
                        th(cg::unlabel(cg::var(0))),
                    )),
                )),
            )),
        )),
        FGExpr::Pair(e1, e2) => tl(cg::bind(
            th(fg2cg_thunk(e1)),
            th(cg::bind(
                cg::wken([0], th(fg2cg_thunk(e2))),
                th(cg::ret(cg::pair(cg::var(1), cg::var(0)))),
            )),
        )),
        // Two unlabels: the pair's own tag, then the component's tag, so the
        // block label is their join as in the projection rules.
        FGExpr::Fst(e) => tl(cg::bind(
            th(fg2cg_thunk(e)),
            th(cg::bind(
                th(cg::unlabel(cg::var(0))),
                th(cg::unlabel(cg::fst(cg::var(0)))),
            )),
        )),
        FGExpr::Snd(e) => tl(cg::bind(
            th(fg2cg_thunk(e)),
            th(cg::bind(
                th(cg::unlabel(cg::var(0))),
                th(cg::unlabel(cg::snd(cg::var(0)))),
            )),
        )),
        FGExpr::Inl(sum, e) => tl(cg::bind(
            th(fg2cg_thunk(e)),
            th(cg::ret(cg::inl(fg2cg_bare_type(sum), cg::var(0)))),
        )),
        FGExpr::Inr(sum, e) => tl(cg::bind(
            th(fg2cg_thunk(e)),
            th(cg::ret(cg::inr(fg2cg_bare_type(sum), cg::var(0)))),
        )),
        // Branches drop the scrutinee temporaries {1, 2} and keep only the
        // case payload, matching the source branch environment.
        FGExpr::Case(scrut, left, right) => tl(cg::bind(
            th(fg2cg_thunk(scrut)),
            th(cg::bind(
                th(cg::unlabel(cg::var(0))),
                th(cg::bind(
                    cg::case(
                        cg::var(0),
                        cg::wken([1, 2], th(fg2cg_thunk(left))),
                        cg::wken([1, 2], th(fg2cg_thunk(right))),
                    ),
                    th(cg::unlabel(cg::var(0))),
                )),
            )),
        )),
        FGExpr::GetLabel => tl(cg::get_label()),
        FGExpr::LabelOf(e) => tl(cg::bind(
            th(fg2cg_thunk(e)),
            th(cg::label_of(cg::var(0))),
        )),
        // The inner unit is boxed at the ambient floating label before the
        // operand tags taint it, mirroring the annotation on the source's
        // injected boolean payload. Temporaries at the terminal: v2, v1, lu.
        FGExpr::Leq(e1, e2) => {
            let bool_sum = CGType::Sum(
                Box::new(CGType::Labeled(Box::new(CGType::Unit))),
                Box::new(CGType::Labeled(Box::new(CGType::Unit))),
            );
            tl(cg::bind(
                th(fg2cg_thunk(e1)),
                th(cg::bind(
                    cg::wken([0], th(fg2cg_thunk(e2))),
                    th(cg::bind(
                        th(cg::to_labeled(th(cg::ret(cg::unit())))),
                        th(cg::bind(
                            th(cg::unlabel(cg::var(2))),
                            th(cg::bind(
                                th(cg::unlabel(cg::var(2))),
                                th(cg::ret(cg::ite(
                                    cg::leq(cg::var(1), cg::var(0)),
                                    cg::inl(bool_sum.clone(), cg::var(2)),
                                    cg::inr(bool_sum, cg::var(2)),
                                ))),
                            )),
                        )),
                    )),
                )),
            ))
        }
        // The guard compares the operand's tag against its payload before any
        // taint happens; on failure the source monitor stops, and the target,
        // which has no comparable check, is sent into a knot that never
        // terminates, so neither side reaches a final configuration.
        // Temporaries in order: lv1, l', v1, the guard unit, the taint unit.
        FGExpr::Taint(e1, e2) => tl(cg::bind(
            th(fg2cg_thunk(e1)),
            th(cg::bind(
                th(cg::label_of(cg::var(0))),
                th(cg::bind(
                    th(cg::unlabel(cg::var(1))),
                    th(cg::bind(
                        cg::ite(
                            cg::leq(cg::var(1), cg::var(0)),
                            th(cg::ret(cg::unit())),
                            th(diverge()),
                        ),
                        th(cg::bind(
                            th(cg::taint(cg::var(1))),
                            th(cg::bind(
                                cg::wken([0, 1, 2, 3, 4], th(fg2cg_thunk(e2))),
                                th(cg::unlabel(cg::var(0))),
                            )),
                        )),
                    )),
                )),
            )),
        )),
        FGExpr::New(s, e) => tl(cg::bind(
            th(fg2cg_thunk(e)),
            th(cg::new(fg2cg_sensitivity(*s), cg::var(0))),
        )),
        FGExpr::Read(e) => tl(cg::bind(
            th(fg2cg_thunk(e)),
            th(cg::bind(th(cg::unlabel(cg::var(0))), th(cg::read(cg::var(0))))),
        )),
        // First block performs the update, second returns unit boxed at the
        // ambient floating label, as in the source rule's result.
        FGExpr::Write(e1, e2) => cg::bind(
            th(tl(cg::bind(
                th(fg2cg_thunk(e1)),
                th(cg::bind(
                    cg::wken([0], th(fg2cg_thunk(e2))),
                    th(cg::bind(
                        th(cg::unlabel(cg::var(1))),
                        th(cg::write(cg::var(0), cg::var(1))),
                    )),
                )),
            ))),
            th(tl(cg::ret(cg::unit()))),
        ),
        FGExpr::LabelOfRef(e) => tl(cg::bind(
            th(fg2cg_thunk(e)),
            th(cg::bind(
                th(cg::unlabel(cg::var(0))),
                th(cg::label_of_ref(cg::var(0))),
            )),
        )),
        FGExpr::Wken(drop, e) => cg::bind(
            cg::wken(drop.iter().copied(), th(fg2cg_thunk(e))),
            th(cg::ret(cg::var(0))),
        ),
    }
}

/// A closed computation of unit type that never terminates: a reference is
/// tied into a knot where reading it yields a function that reads it again.
/// Every cycle consumes fuel, so evaluation always times out. The knot lives
/// at the current floating label, so its allocation check always passes.
///
/// Bindings in order: the initial cell content (a function that returns
/// immediately), a reference to it, the knot (a function that reads the
/// reference and calls the result), the write tying the knot, and finally a
/// read-and-call that loops forever.
fn diverge() -> CGThunk {
    cg::bind(
        th(cg::to_labeled(th(cg::ret(cg::lam(
            CGType::Unit,
            th(cg::ret(cg::unit())),
        ))))),
        th(cg::bind(
            th(cg::new(ifc_cg::syntax::Sensitivity::I, cg::var(0))),
            th(cg::bind(
                th(cg::to_labeled(th(cg::ret(cg::lam(
                    CGType::Unit,
                    th(cg::bind(
                        th(cg::read(cg::var(1))),
                        cg::app(cg::var(0), cg::unit()),
                    )),
                ))))),
                th(cg::bind(
                    th(cg::write(cg::var(1), cg::var(0))),
                    th(cg::bind(
                        th(cg::read(cg::var(2))),
                        cg::app(cg::var(0), cg::unit()),
                    )),
                )),
            )),
        )),
    )
}
