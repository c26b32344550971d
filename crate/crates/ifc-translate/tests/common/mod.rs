//! Shared fixtures for the translation tests: lattices, initial
//! configurations, constructor-covering program corpora for both calculi,
//! and the checkers that compare a source run against its translated run.

#![allow(dead_code)]

use std::collections::BTreeMap;

use ifc_cg::eval::{eval_force_monitored, CGMonitor, CGOutcome};
use ifc_cg::syntax::{build as cg, CGExpr, CGType};
use ifc_cg::value::{CGEnv, CGHeap, CGStore, CGValue};
use ifc_fg::eval::{eval_fg_monitored, FGMonitor, FGOutcome};
use ifc_fg::syntax::{build as fg, FGExpr, FGType};
use ifc_fg::value::{FGEnv, FGHeap, FGRaw, FGStore, FGValue};
use ifc_lattice::{Label, Lattice};
use ifc_security::CrossRel;
use ifc_translate::{
    cg2fg_env_types, cg2fg_expr, cg2fg_state, fg2cg_env_types, fg2cg_expr, fg2cg_heap,
    fg2cg_state, fg2cg_store, fg2cg_value, translate_hooks,
};

pub const FG_FUEL: u64 = 2_000;
pub const CG_FUEL: u64 = 2_000;

/// Fuel for the translated side of a run comparison. The translation expands
/// each source rule into a bounded number of image rules, so a generous
/// multiplier keeps a terminating source run terminating in the image.
pub fn image_fuel(fuel: u64) -> u64 {
    fuel.saturating_mul(64) + 64
}

pub fn lattices() -> Vec<Lattice> {
    vec![Lattice::two_point(), Lattice::powerset(2).unwrap()]
}

/// Runs a test body on a thread with a deep stack. The interpreters recurse
/// once per fuel unit on divergent programs, and image runs carry a 64-fold
/// fuel allowance, which outgrows the default test stack.
pub fn with_deep_stack<T: Send + 'static>(f: impl FnOnce() -> T + Send + 'static) -> T {
    std::thread::Builder::new()
        .stack_size(256 * 1024 * 1024)
        .spawn(f)
        .expect("spawn deep-stack thread")
        .join()
        .unwrap_or_else(|e| std::panic::resume_unwind(e))
}

/// The least point of a lattice.
pub fn bottom(lat: &Lattice) -> Label {
    least_where(lat, |_| true)
}

/// The greatest point of a lattice.
pub fn top(lat: &Lattice) -> Label {
    lat.points()
        .find(|&t| lat.points().all(|p| lat.leq(p, t).unwrap()))
        .expect("lattice has a top")
}

fn least_where(lat: &Lattice, keep: impl Fn(Label) -> bool) -> Label {
    lat.points()
        .filter(|&b| keep(b))
        .find(|&b| lat.points().filter(|&p| keep(p)).all(|p| lat.leq(b, p).unwrap()))
        .expect("lattice has a bottom")
}

/// Two incomparable points, when the lattice has them.
pub fn incomparable_pair(lat: &Lattice) -> Option<(Label, Label)> {
    for a in lat.points() {
        for b in lat.points() {
            if !lat.leq(a, b).unwrap() && !lat.leq(b, a).unwrap() {
                return Some((a, b));
            }
        }
    }
    None
}

// ---------------------------------------------------------------------------
// Fine-grained fixture
// ---------------------------------------------------------------------------

pub struct FgFixture {
    pub store: FGStore,
    pub heap: FGHeap,
    pub env: FGEnv,
    pub env_tys: Vec<FGType>,
    pub lo: Label,
    pub hi: Label,
}

/// Environment layout, outermost binder first. Index 0 in a program is the
/// innermost entry, the closure.
pub fn fg_env_types() -> Vec<FGType> {
    vec![
        FGType::bool_ty(),
        FGType::LabelT,
        FGType::Prod(Box::new(FGType::Unit), Box::new(FGType::bool_ty())),
        FGType::Ref(ifc_fg::syntax::Sensitivity::I, Box::new(FGType::Unit)),
        FGType::Ref(ifc_fg::syntax::Sensitivity::S, Box::new(FGType::bool_ty())),
        FGType::Fun(Box::new(FGType::Unit), Box::new(FGType::bool_ty())),
    ]
}

pub fn fg_true(l: Label, inner: Label) -> FGValue {
    FGValue {
        raw: FGRaw::Inl(FGType::bool_ty(), Box::new(FGValue { raw: FGRaw::Unit, lab: inner })),
        lab: l,
    }
}

pub fn fg_false(l: Label, inner: Label) -> FGValue {
    FGValue {
        raw: FGRaw::Inr(FGType::bool_ty(), Box::new(FGValue { raw: FGRaw::Unit, lab: inner })),
        lab: l,
    }
}

pub fn fg_fixture(lat: &Lattice) -> FgFixture {
    let lo = bottom(lat);
    let hi = top(lat);
    let mut store: FGStore = BTreeMap::new();
    for l in lat.points() {
        store.insert(l, vec![FGRaw::Unit]);
    }
    let heap = vec![fg_true(lo, lo), fg_false(hi, lo)];
    let env = vec![
        fg_true(lo, lo),
        FGValue { raw: FGRaw::Lab(hi), lab: lo },
        FGValue {
            raw: FGRaw::Pair(
                Box::new(FGValue { raw: FGRaw::Unit, lab: lo }),
                Box::new(fg_false(hi, lo)),
            ),
            lab: lo,
        },
        FGValue { raw: FGRaw::RefI(lo, 0), lab: lo },
        FGValue { raw: FGRaw::RefS(0), lab: lo },
        FGValue {
            raw: FGRaw::Closure {
                param: FGType::Unit,
                body: Box::new(fg::tt()),
                env: vec![],
                env_tys: vec![],
            },
            lab: lo,
        },
    ];
    FgFixture { store, heap, env, env_tys: fg_env_types(), lo, hi }
}

/// Programs covering every expression constructor, well typed in the fixture
/// environment. Variable indices: 0 closure, 1 flow-sensitive ref, 2
/// flow-insensitive ref, 3 pair, 4 label, 5 boolean.
pub fn fg_corpus(lat: &Lattice) -> Vec<(&'static str, FGExpr)> {
    use ifc_fg::syntax::Sensitivity::{I, S};
    let lo = bottom(lat);
    let hi = top(lat);
    let bool_ty = FGType::bool_ty;
    vec![
        ("unit", fg::unit()),
        ("label_literal", fg::lab(hi)),
        ("var", fg::var(5)),
        ("lam", fg::lam(FGType::Unit, fg::var(0))),
        ("app_identity", fg::app(fg::lam(bool_ty(), fg::var(0)), fg::var(5))),
        ("app_env_closure", fg::app(fg::var(0), fg::unit())),
        ("pair", fg::pair(fg::var(5), fg::lab(lo))),
        ("fst", fg::fst(fg::var(3))),
        ("snd", fg::snd(fg::var(3))),
        ("inl", fg::inl(FGType::Sum(Box::new(bool_ty()), Box::new(FGType::Unit)), fg::var(5))),
        ("case", fg::case(fg::var(5), fg::lab(lo), fg::lab(hi))),
        ("get_label", fg::get_label()),
        ("label_of", fg::label_of(fg::var(5))),
        ("leq", fg::leq(fg::lab(lo), fg::var(4))),
        ("taint_env_label", fg::taint(fg::var(4), fg::get_label())),
        ("taint_lo", fg::taint(fg::lab(lo), fg::unit())),
        ("new_i", fg::new(I, fg::var(5))),
        ("read_i", fg::read(fg::var(2))),
        ("write_i", fg::write(fg::var(2), fg::unit())),
        ("label_of_ref_i", fg::label_of_ref(fg::var(2))),
        ("new_s", fg::new(S, fg::var(5))),
        ("read_s", fg::read(fg::var(1))),
        ("write_s", fg::write(fg::var(1), fg::ff())),
        ("label_of_ref_s", fg::label_of_ref(fg::var(1))),
        ("wken", fg::wken([0, 2], fg::label_of(fg::var(3)))),
        ("ite", fg::ite(fg::var(5), fg::lab(lo), fg::lab(hi))),
        ("let", fg::let_(bool_ty(), fg::ff(), fg::pair(fg::var(0), fg::var(6)))),
        (
            "seq_write_read",
            fg::seq(FGType::Unit, fg::write(fg::var(2), fg::unit()), fg::read(fg::var(2))),
        ),
        (
            "app_returns_closure",
            fg::app(fg::lam(bool_ty(), fg::lam(FGType::Unit, fg::var(1))), fg::var(5)),
        ),
        (
            "case_inr",
            fg::case(
                fg::inr(FGType::Sum(Box::new(FGType::Unit), Box::new(bool_ty())), fg::var(5)),
                fg::tt(),
                fg::var(0),
            ),
        ),
        (
            "app_effectful_arg",
            fg::app(fg::lam(FGType::Unit, fg::read(fg::var(3))), fg::write(fg::var(2), fg::unit())),
        ),
        ("taint_label_of", fg::taint(fg::label_of(fg::var(5)), fg::var(5))),
        (
            "landin_knot",
            fg::let_(
                FGType::Ref(I, Box::new(FGType::Fun(Box::new(FGType::Unit), Box::new(FGType::Unit)))),
                fg::new(I, fg::lam(FGType::Unit, fg::unit())),
                fg::seq(
                    FGType::Unit,
                    fg::write(fg::var(0), fg::lam(FGType::Unit, fg::app(fg::read(fg::var(1)), fg::unit()))),
                    fg::app(fg::read(fg::var(0)), fg::unit()),
                ),
            ),
        ),
    ]
}

// ---------------------------------------------------------------------------
// Coarse-grained fixture
// ---------------------------------------------------------------------------

pub struct CgFixture {
    pub store: CGStore,
    pub heap: CGHeap,
    pub env: CGEnv,
    pub env_tys: Vec<CGType>,
    pub lo: Label,
    pub hi: Label,
}

pub fn cg_env_types() -> Vec<CGType> {
    vec![
        CGType::bool_ty(),
        CGType::LabelT,
        CGType::Labeled(Box::new(CGType::bool_ty())),
        CGType::Ref(ifc_cg::syntax::Sensitivity::I, Box::new(CGType::Unit)),
        CGType::Ref(ifc_cg::syntax::Sensitivity::S, Box::new(CGType::bool_ty())),
        CGType::Fun(Box::new(CGType::Unit), Box::new(CGType::Lio(Box::new(CGType::Unit)))),
    ]
}

pub fn cg_true() -> CGValue {
    CGValue::Inl(CGType::bool_ty(), Box::new(CGValue::Unit))
}

pub fn cg_false() -> CGValue {
    CGValue::Inr(CGType::bool_ty(), Box::new(CGValue::Unit))
}

pub fn cg_fixture(lat: &Lattice) -> CgFixture {
    let lo = bottom(lat);
    let hi = top(lat);
    let mut store: CGStore = BTreeMap::new();
    for l in lat.points() {
        store.insert(l, vec![CGValue::Unit]);
    }
    let heap = vec![(lo, cg_true()), (hi, cg_false())];
    let env = vec![
        cg_true(),
        CGValue::Lab(hi),
        CGValue::Labeled(hi, Box::new(cg_false())),
        CGValue::RefI(lo, 0),
        CGValue::RefS(0),
        CGValue::Closure {
            param: CGType::Unit,
            body: Box::new(cg::thunk(cg::ret(cg::unit()))),
            env: vec![],
            env_tys: vec![],
        },
    ];
    CgFixture { store, heap, env, env_tys: cg_env_types(), lo, hi }
}

/// Computation-typed programs covering every thunk constructor, well typed
/// in the fixture environment. Variable indices: 0 closure, 1 flow-sensitive
/// ref, 2 flow-insensitive ref, 3 labeled boolean, 4 label, 5 boolean.
pub fn cg_corpus(lat: &Lattice) -> Vec<(&'static str, CGExpr)> {
    use ifc_cg::syntax::Sensitivity::{I, S};
    let lo = bottom(lat);
    let hi = top(lat);
    let th = cg::thunk;
    vec![
        ("return_unit", th(cg::ret(cg::unit()))),
        ("return_var", th(cg::ret(cg::var(5)))),
        ("return_lam", th(cg::ret(cg::lam(CGType::Unit, th(cg::ret(cg::var(0))))))),
        ("bind", th(cg::bind(cg::thunk(cg::ret(cg::var(5))), cg::thunk(cg::ret(cg::var(0)))))),
        ("unlabel", th(cg::unlabel(cg::var(3)))),
        ("to_labeled", th(cg::to_labeled(cg::thunk(cg::unlabel(cg::var(3)))))),
        ("label_of", th(cg::label_of(cg::var(3)))),
        ("get_label", th(cg::get_label())),
        ("taint_env_label", th(cg::taint(cg::var(4)))),
        ("taint_lo", th(cg::taint(cg::lab(lo)))),
        ("new_i", th(cg::new(I, cg::var(3)))),
        ("new_s", th(cg::new(S, cg::var(3)))),
        ("read_i", th(cg::read(cg::var(2)))),
        (
            "write_i",
            th(cg::bind(
                cg::thunk(cg::to_labeled(cg::thunk(cg::ret(cg::unit())))),
                cg::thunk(cg::write(cg::var(3), cg::var(0))),
            )),
        ),
        ("label_of_ref_i", th(cg::label_of_ref(cg::var(2)))),
        ("read_s", th(cg::read(cg::var(1)))),
        (
            "write_s",
            th(cg::bind(
                cg::thunk(cg::to_labeled(cg::thunk(cg::ret(cg::ff())))),
                cg::thunk(cg::write(cg::var(2), cg::var(0))),
            )),
        ),
        ("label_of_ref_s", th(cg::label_of_ref(cg::var(1)))),
        ("app_env_closure", th(cg::bind(cg::app(cg::var(0), cg::unit()), cg::thunk(cg::ret(cg::var(0)))))),
        ("ite_labels", th(cg::ret(cg::ite(cg::var(5), cg::lab(lo), cg::lab(hi))))),
        (
            "bind_wken",
            th(cg::bind(cg::thunk(cg::ret(cg::var(5))), cg::wken([0], cg::thunk(cg::ret(cg::var(5)))))),
        ),
        (
            "to_labeled_then_label_of",
            th(cg::bind(
                cg::thunk(cg::to_labeled(cg::thunk(cg::bind(
                    cg::thunk(cg::unlabel(cg::var(3))),
                    cg::thunk(cg::ret(cg::var(0))),
                )))),
                cg::thunk(cg::label_of(cg::var(0))),
            )),
        ),
        (
            "closure_captures_temp",
            th(cg::bind(
                cg::thunk(cg::ret(cg::unit())),
                cg::thunk(cg::ret(cg::lam(CGType::Unit, th(cg::ret(cg::var(1)))))),
            )),
        ),
        ("leq", th(cg::ret(cg::leq(cg::var(4), cg::lab(hi))))),
        ("fst_pair", th(cg::ret(cg::fst(cg::pair(cg::unit(), cg::var(5)))))),
        (
            "case_inr",
            th(cg::ret(cg::case(
                cg::inr(CGType::Sum(Box::new(CGType::Unit), Box::new(CGType::bool_ty())), cg::var(5)),
                cg::tt(),
                cg::var(0),
            ))),
        ),
        (
            "ite_between_thunks",
            cg::ite(cg::var(5), cg::thunk(cg::ret(cg::lab(lo))), cg::thunk(cg::ret(cg::lab(hi)))),
        ),
    ]
}

// ---------------------------------------------------------------------------
// Checkers
// ---------------------------------------------------------------------------

/// Runs a fine-grained program and its image and demands equal final
/// configurations when the source finishes, with the image's floating label
/// parked at the starting pc. A non-final source run must stay non-final in
/// the image.
pub fn assert_fg2cg_exact(lat: &Lattice, fix: &FgFixture, name: &str, e: &FGExpr, pc: Label, fuel: u64) {
    let fg_out = eval_fg_monitored(
        lat,
        &fix.store,
        &fix.heap,
        e,
        &fix.env,
        Some(&fix.env_tys),
        pc,
        fuel,
        FGMonitor::default(),
    );
    let (cs, ch, cenv) = fg2cg_state(&fix.store, &fix.heap, &fix.env);
    let ctys = fg2cg_env_types(&fix.env_tys);
    let ce = fg2cg_expr(e);
    let cg_out = eval_force_monitored(
        lat,
        &cs,
        &ch,
        pc,
        &ce,
        &cenv,
        Some(&ctys),
        image_fuel(fuel),
        CGMonitor::default(),
    );
    match (fg_out, cg_out) {
        (
            FGOutcome::Final { store, heap, value },
            CGOutcome::Final { store: s2, heap: h2, pc: pc2, value: v2 },
        ) => {
            assert_eq!(pc2, pc, "{name} at pc {pc:?}: image moved the floating label");
            assert_eq!(s2, fg2cg_store(&store), "{name} at pc {pc:?}: stores differ");
            assert_eq!(h2, fg2cg_heap(&heap), "{name} at pc {pc:?}: heaps differ");
            assert_eq!(v2, fg2cg_value(&value), "{name} at pc {pc:?}: results differ");
        }
        (FGOutcome::Final { .. }, cg) => {
            panic!("{name} at pc {pc:?}: source finished but image did not: {cg:?}")
        }
        (fg, CGOutcome::Final { .. }) => {
            panic!("{name} at pc {pc:?}: image finished but source did not: {fg:?}")
        }
        (_, _) => {}
    }
}

/// Runs a coarse-grained computation and its image and demands related final
/// configurations when the source finishes: the image result's annotation
/// equals the source's final floating label, and the two states agree up to
/// the cross-language relation. Translation itself must succeed.
pub fn assert_cg2fg_related(lat: &Lattice, fix: &CgFixture, name: &str, e: &CGExpr, pc: Label, fuel: u64) {
    let cg_out = eval_force_monitored(
        lat,
        &fix.store,
        &fix.heap,
        pc,
        e,
        &fix.env,
        Some(&fix.env_tys),
        fuel,
        CGMonitor::default(),
    );
    let fe = match cg2fg_expr(&fix.env_tys, e) {
        Ok(fe) => fe,
        Err(err) => panic!("{name}: translation failed: {err}"),
    };
    let forced = fg::app(fe, fg::unit());
    let (fs, fh, fenv) = cg2fg_state(&fix.store, &fix.heap, &fix.env, pc)
        .unwrap_or_else(|err| panic!("{name}: state translation failed: {err}"));
    let ftys = cg2fg_env_types(&fix.env_tys);

    let rel = CrossRel::new(lat, translate_hooks());
    assert!(
        rel.config_rel_initial(&fs, &fh, &fix.store, &fix.heap).unwrap(),
        "{name} at pc {pc:?}: translated initial state unrelated to source"
    );
    assert!(
        rel.ceq_env(pc, &fenv, &fix.env).unwrap(),
        "{name} at pc {pc:?}: translated environment unrelated to source"
    );

    let CGOutcome::Final { store: s2, heap: h2, pc: pc2, value: v2 } = cg_out else {
        return;
    };
    let fg_out = eval_fg_monitored(
        lat,
        &fs,
        &fh,
        &forced,
        &fenv,
        Some(&ftys),
        pc,
        image_fuel(fuel),
        FGMonitor::default(),
    );
    let FGOutcome::Final { store: s1, heap: h1, value: v1 } = fg_out else {
        panic!("{name} at pc {pc:?}: source finished but image did not: {fg_out:?}")
    };
    assert!(
        rel.config_rel_final(&s1, &h1, &v1, &s2, &h2, pc2, &v2).unwrap(),
        "{name} at pc {pc:?}: final configurations unrelated\n image: {v1:?}\n source: {v2:?} at {pc2:?}"
    );
}
