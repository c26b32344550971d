//! Coarse- to fine-grained translation.
//!
//! Pure expressions translate homomorphically. A thunk becomes a suspension,
//! a function from unit, so that forcing corresponds to application. Labeled
//! values become pairs of the label and the content, and the floating label
//! of the source computation reappears as the annotation on the result of
//! the translated expression, kept in sync by explicit `taint` steps at each
//! `bind`, `unlabel`, and write.
//!
//! This direction is type-directed: eliminators need the type of their
//! operand to name binder types for the temporaries the translation
//! introduces, so translating ill-typed sources fails with an error instead
//! of producing a wrong program.

use ifc_cg::syntax::{CGExpr, CGThunk, CGType};
use ifc_cg::typecheck::{drop_indices, typecheck_cg, CGCtx, CGTypeError};
use ifc_cg::value::{CGEnv, CGHeap, CGMemory, CGStore, CGValue};
use ifc_fg::syntax::{build as fg, FGExpr, FGType};
use ifc_fg::value::{FGEnv, FGHeap, FGMemory, FGRaw, FGStore, FGValue};
use ifc_lattice::Label;
use thiserror::Error;

/// Why a source program could not be translated.
#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum TranslateError {
    /// The source does not typecheck, so binder types cannot be named.
    #[error("source does not typecheck: {0}")]
    SourceType(#[from] CGTypeError),
    /// A subterm has a type whose shape does not fit its position.
    #[error("{location} has type {found:?}, which does not fit here")]
    Shape {
        location: &'static str,
        found: CGType,
    },
}

/// Maps a flow-sensitivity tag across calculi.
pub fn cg2fg_sensitivity(s: ifc_cg::syntax::Sensitivity) -> ifc_fg::syntax::Sensitivity {
    match s {
        ifc_cg::syntax::Sensitivity::I => ifc_fg::syntax::Sensitivity::I,
        ifc_cg::syntax::Sensitivity::S => ifc_fg::syntax::Sensitivity::S,
    }
}

/// Translates a type. `Labeled` becomes a label-content pair and a
/// computation becomes a suspension from unit; the rest is homomorphic.
pub fn cg2fg_type(t: &CGType) -> FGType {
    match t {
        CGType::Unit => FGType::Unit,
        CGType::LabelT => FGType::LabelT,
        CGType::Fun(a, b) => FGType::Fun(Box::new(cg2fg_type(a)), Box::new(cg2fg_type(b))),
        CGType::Sum(a, b) => FGType::Sum(Box::new(cg2fg_type(a)), Box::new(cg2fg_type(b))),
        CGType::Prod(a, b) => FGType::Prod(Box::new(cg2fg_type(a)), Box::new(cg2fg_type(b))),
        CGType::Lio(a) => FGType::Fun(Box::new(FGType::Unit), Box::new(cg2fg_type(a))),
        CGType::Labeled(a) => FGType::Prod(Box::new(FGType::LabelT), Box::new(cg2fg_type(a))),
        CGType::Ref(s, a) => FGType::Ref(cg2fg_sensitivity(*s), Box::new(cg2fg_type(a))),
    }
}

/// Translates a typing environment pointwise.
pub fn cg2fg_env_types(tys: &[CGType]) -> Vec<FGType> {
    tys.iter().map(cg2fg_type).collect()
}

fn lio_inner(t: CGType, location: &'static str) -> Result<CGType, TranslateError> {
    match t {
        CGType::Lio(inner) => Ok(*inner),
        found => Err(TranslateError::Shape { location, found }),
    }
}

fn labeled_shape(t: &CGType, location: &'static str) -> Result<(), TranslateError> {
    match t {
        CGType::Labeled(_) => Ok(()),
        found => Err(TranslateError::Shape {
            location,
            found: found.clone(),
        }),
    }
}

/// Translates a pure expression under the given typing environment.
pub fn cg2fg_expr(ctx: &CGCtx, e: &CGExpr) -> Result<FGExpr, TranslateError> {
    Ok(match e {
        CGExpr::Var(n) => fg::var(*n),
        CGExpr::Lam(param, body) => {
            let mut ctx2 = ctx.clone();
            ctx2.push(param.clone());
            fg::lam(cg2fg_type(param), cg2fg_expr(&ctx2, body)?)
        }
        CGExpr::App(f, a) => fg::app(cg2fg_expr(ctx, f)?, cg2fg_expr(ctx, a)?),
        CGExpr::Unit => fg::unit(),
        CGExpr::Lab(l) => fg::lab(*l),
        CGExpr::Pair(a, b) => fg::pair(cg2fg_expr(ctx, a)?, cg2fg_expr(ctx, b)?),
        CGExpr::Fst(a) => fg::fst(cg2fg_expr(ctx, a)?),
        CGExpr::Snd(a) => fg::snd(cg2fg_expr(ctx, a)?),
        CGExpr::Inl(sum, a) => fg::inl(cg2fg_type(sum), cg2fg_expr(ctx, a)?),
        CGExpr::Inr(sum, a) => fg::inr(cg2fg_type(sum), cg2fg_expr(ctx, a)?),
        CGExpr::Case(scrut, left, right) => {
            let st = typecheck_cg(ctx, scrut)?;
            let CGType::Sum(t1, t2) = st else {
                return Err(TranslateError::Shape {
                    location: "case scrutinee",
                    found: st,
                });
            };
            let mut lctx = ctx.clone();
            lctx.push(*t1);
            let mut rctx = ctx.clone();
            rctx.push(*t2);
            fg::case(
                cg2fg_expr(ctx, scrut)?,
                cg2fg_expr(&lctx, left)?,
                cg2fg_expr(&rctx, right)?,
            )
        }
        CGExpr::Leq(a, b) => fg::leq(cg2fg_expr(ctx, a)?, cg2fg_expr(ctx, b)?),
        // The dummy argument slot is dropped inside, so the body's indices
        // line up with the source thunk's environment.
        CGExpr::Thunk(t) => fg::lam(FGType::Unit, fg::wken([0], cg2fg_thunk(ctx, t)?)),
        CGExpr::Wken(drop, a) => {
            let trimmed = drop_indices(ctx, drop);
            FGExpr::Wken(drop.clone(), Box::new(cg2fg_expr(&trimmed, a)?))
        }
    })
}

/// Translates a thunk to the body of its suspension.
///
/// The caller wraps the result in a unit-function; see [`cg2fg_expr`] on
/// [`CGExpr::Thunk`]. Thunk temporaries only ever name the let-bound result
/// of one step, so no source index shifts.
pub fn cg2fg_thunk(ctx: &CGCtx, t: &CGThunk) -> Result<FGExpr, TranslateError> {
    Ok(match t {
        CGThunk::Return(e) => cg2fg_expr(ctx, e)?,
        // Forcing the first computation yields its result annotated with the
        // final floating label; tainting by that annotation before the
        // continuation keeps the two program counters synchronized.
        CGThunk::Bind(e1, e2) => {
            let t1 = lio_inner(typecheck_cg(ctx, e1)?, "bind's first computation")?;
            let bound = fg::app(cg2fg_expr(ctx, e1)?, fg::unit());
            let mut ctx2 = ctx.clone();
            ctx2.push(t1.clone());
            let body = fg::taint(
                fg::label_of(fg::var(0)),
                fg::app(cg2fg_expr(&ctx2, e2)?, fg::unit()),
            );
            fg::let_(cg2fg_type(&t1), bound, body)
        }
        // Reading the label component would already taint by the pair's own
        // annotation; tainting by the annotation of the label value keeps
        // the guard trivially satisfied while raising to the same point.
        CGThunk::Unlabel(e) => {
            let ty = typecheck_cg(ctx, e)?;
            labeled_shape(&ty, "unlabel's operand")?;
            fg::let_(
                cg2fg_type(&ty),
                cg2fg_expr(ctx, e)?,
                fg::taint(fg::label_of(fg::fst(fg::var(0))), fg::snd(fg::var(0))),
            )
        }
        // The result annotation of the forced computation is exactly the
        // label the source monitor would box the result with.
        CGThunk::ToLabeled(e) => {
            let inner = lio_inner(typecheck_cg(ctx, e)?, "toLabeled's operand")?;
            fg::let_(
                cg2fg_type(&inner),
                fg::app(cg2fg_expr(ctx, e)?, fg::unit()),
                fg::pair(fg::label_of(fg::var(0)), fg::var(0)),
            )
        }
        CGThunk::LabelOf(e) => fg::fst(cg2fg_expr(ctx, e)?),
        CGThunk::GetLabel => fg::get_label(),
        // The fine-grained taint guard requires the target label to sit
        // above the annotation of the label value, which here is the
        // ambient program counter. When the target is already below the
        // counter the taint is a no-op and is skipped; on a totally ordered
        // lattice the remaining case always passes the guard.
        CGThunk::Taint(e) => fg::let_(
            FGType::LabelT,
            cg2fg_expr(ctx, e)?,
            fg::ite(
                fg::leq(fg::var(0), fg::get_label()),
                fg::unit(),
                fg::taint(fg::var(0), fg::unit()),
            ),
        ),
        // Tainting the content by the pair's label component reproduces the
        // allocation check and stores the content at the declared label.
        CGThunk::New(s, e) => {
            let ty = typecheck_cg(ctx, e)?;
            labeled_shape(&ty, "new's operand")?;
            fg::let_(
                cg2fg_type(&ty),
                cg2fg_expr(ctx, e)?,
                fg::new(
                    cg2fg_sensitivity(*s),
                    fg::taint(fg::fst(fg::var(0)), fg::snd(fg::var(0))),
                ),
            )
        }
        CGThunk::Read(e) => fg::read(cg2fg_expr(ctx, e)?),
        // The stored value's annotation must carry both the declared label
        // and the ambient counter so the write checks of the two monitors
        // coincide; tainting by the annotation of the label component
        // produces exactly that join.
        CGThunk::Write(e1, e2) => {
            let ty2 = typecheck_cg(ctx, e2)?;
            labeled_shape(&ty2, "a write's value operand")?;
            fg::write(
                cg2fg_expr(ctx, e1)?,
                fg::let_(
                    cg2fg_type(&ty2),
                    cg2fg_expr(ctx, e2)?,
                    fg::taint(fg::label_of(fg::fst(fg::var(0))), fg::snd(fg::var(0))),
                ),
            )
        }
        CGThunk::LabelOfRef(e) => fg::label_of_ref(cg2fg_expr(ctx, e)?),
    })
}

/// Translates a value; every annotation at this level becomes `pc`.
///
/// A labeled value becomes a pair whose label component is annotated with
/// itself and whose content is translated at the content's label.
pub fn cg2fg_value(v: &CGValue, pc: Label) -> Result<FGValue, TranslateError> {
    let raw = match v {
        CGValue::Unit => FGRaw::Unit,
        CGValue::Lab(l) => FGRaw::Lab(*l),
        CGValue::Inl(sum, w) => FGRaw::Inl(cg2fg_type(sum), Box::new(cg2fg_value(w, pc)?)),
        CGValue::Inr(sum, w) => FGRaw::Inr(cg2fg_type(sum), Box::new(cg2fg_value(w, pc)?)),
        CGValue::Pair(a, b) => FGRaw::Pair(
            Box::new(cg2fg_value(a, pc)?),
            Box::new(cg2fg_value(b, pc)?),
        ),
        CGValue::Closure {
            param,
            body,
            env,
            env_tys,
        } => {
            let mut ctx: CGCtx = env_tys.clone();
            ctx.push(param.clone());
            FGRaw::Closure {
                param: cg2fg_type(param),
                body: Box::new(cg2fg_expr(&ctx, body)?),
                env: cg2fg_env(env, pc)?,
                env_tys: cg2fg_env_types(env_tys),
            }
        }
        CGValue::TClosure {
            thunk,
            env,
            env_tys,
        } => FGRaw::Closure {
            param: FGType::Unit,
            body: Box::new(fg::wken([0], cg2fg_thunk(env_tys, thunk)?)),
            env: cg2fg_env(env, pc)?,
            env_tys: cg2fg_env_types(env_tys),
        },
        CGValue::Labeled(l, w) => FGRaw::Pair(
            Box::new(FGValue::new(FGRaw::Lab(*l), *l)),
            Box::new(cg2fg_value(w, *l)?),
        ),
        CGValue::RefI(l, n) => FGRaw::RefI(*l, *n),
        CGValue::RefS(n) => FGRaw::RefS(*n),
    };
    Ok(FGValue::new(raw, pc))
}

/// Translates an environment pointwise at the given counter.
pub fn cg2fg_env(env: &CGEnv, pc: Label) -> Result<FGEnv, TranslateError> {
    env.iter().map(|v| cg2fg_value(v, pc)).collect()
}

/// Translates one memory; cells are translated at the memory's label.
pub fn cg2fg_memory(m: &CGMemory, l: Label) -> Result<FGMemory, TranslateError> {
    m.iter().map(|w| Ok(cg2fg_value(w, l)?.raw)).collect()
}

/// Translates a store pointwise over its memories.
pub fn cg2fg_store(s: &CGStore) -> Result<FGStore, TranslateError> {
    s.iter()
        .map(|(l, m)| Ok((*l, cg2fg_memory(m, *l)?)))
        .collect()
}

/// Translates a heap; each cell is translated at its own label, which
/// becomes the annotation of the resulting cell.
pub fn cg2fg_heap(h: &CGHeap) -> Result<FGHeap, TranslateError> {
    h.iter().map(|(l, w)| cg2fg_value(w, *l)).collect()
}

/// Translates a whole evaluation state at the given counter.
pub fn cg2fg_state(
    s: &CGStore,
    h: &CGHeap,
    env: &CGEnv,
    pc: Label,
) -> Result<(FGStore, FGHeap, FGEnv), TranslateError> {
    Ok((cg2fg_store(s)?, cg2fg_heap(h)?, cg2fg_env(env, pc)?))
}
