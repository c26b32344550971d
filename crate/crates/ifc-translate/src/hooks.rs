//! Cross-language hooks backed by the coarse-to-fine translation.
//!
//! The cross-language relation delegates closure and type comparisons to
//! these predicates: a fine-grained piece of code is related to a
//! coarse-grained one exactly when translating the latter reproduces the
//! former.

use ifc_cg::syntax::{CGExpr, CGThunk, CGType};
use ifc_cg::typecheck::CGCtx;
use ifc_fg::syntax::{build as fg, FGExpr, FGType};
use ifc_security::cross::CrossHooks;

use crate::cg2fg::{cg2fg_expr, cg2fg_thunk, cg2fg_type};

fn ty_is_image(fg_ty: &FGType, cg_ty: &CGType) -> bool {
    cg2fg_type(cg_ty) == *fg_ty
}

fn fun_is_image(
    fg_param: &FGType,
    fg_body: &FGExpr,
    cg_param: &CGType,
    cg_body: &CGExpr,
    cg_env_tys: &[CGType],
) -> bool {
    if *fg_param != cg2fg_type(cg_param) {
        return false;
    }
    let mut ctx: CGCtx = cg_env_tys.to_vec();
    ctx.push(cg_param.clone());
    cg2fg_expr(&ctx, cg_body).is_ok_and(|b| b == *fg_body)
}

fn thunk_is_image(
    fg_param: &FGType,
    fg_body: &FGExpr,
    cg_thunk: &CGThunk,
    cg_env_tys: &[CGType],
) -> bool {
    if *fg_param != FGType::Unit {
        return false;
    }
    let ctx: CGCtx = cg_env_tys.to_vec();
    cg2fg_thunk(&ctx, cg_thunk).is_ok_and(|b| fg::wken([0], b) == *fg_body)
}

/// Hooks that recognize fine-grained code as the image of coarse-grained
/// code under the translation.
pub fn translate_hooks() -> CrossHooks<'static> {
    CrossHooks {
        ty: &ty_is_image,
        fun: &fun_is_image,
        thunk: &thunk_is_image,
    }
}
