//! The security-unaware type system.

use thiserror::Error;

use crate::syntax::{FGExpr, FGType};

/// Typing context, innermost binder last; De Bruijn index `n` resolves to
/// `ctx[ctx.len() - 1 - n]`.
pub type FGCtx = Vec<FGType>;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum FGTypeError {
    #[error("type error at {location}: expected {expected}, found {found}")]
    TypeError { location: String, expected: String, found: String },
    #[error("unbound variable {index} at {location}")]
    UnboundVariable { location: String, index: usize },
}

/// Returns the unique type of `e` under `ctx`.
pub fn typecheck_fg(ctx: &FGCtx, e: &FGExpr) -> Result<FGType, FGTypeError> {
    let mut ctx = ctx.clone();
    let mut path = Vec::new();
    tc(&mut ctx, e, &mut path)
}

fn err(path: &[&'static str], expected: &str, found: &FGType) -> FGTypeError {
    FGTypeError::TypeError {
        location: location(path),
        expected: expected.to_string(),
        found: found.to_string(),
    }
}

fn location(path: &[&'static str]) -> String {
    if path.is_empty() {
        "root".to_string()
    } else {
        path.join(".")
    }
}

fn tc(
    ctx: &mut FGCtx,
    e: &FGExpr,
    path: &mut Vec<&'static str>,
) -> Result<FGType, FGTypeError> {
    macro_rules! sub {
        ($seg:literal, $ctx:expr, $e:expr) => {{
            path.push($seg);
            let t = tc($ctx, $e, path)?;
            path.pop();
            t
        }};
    }
    match e {
        FGExpr::Var(n) => match ctx.len().checked_sub(1 + n) {
            Some(i) => Ok(ctx[i].clone()),
            None => Err(FGTypeError::UnboundVariable { location: location(path), index: *n }),
        },
        FGExpr::Lam(param, body) => {
            ctx.push(param.clone());
            let ret = sub!("lam.body", ctx, body);
            ctx.pop();
            Ok(FGType::Fun(Box::new(param.clone()), Box::new(ret)))
        }
        FGExpr::App(e1, e2) => {
            let tf = sub!("app.fun", ctx, e1);
            let ta = sub!("app.arg", ctx, e2);
            match tf {
                FGType::Fun(t1, t2) if *t1 == ta => Ok(*t2),
                FGType::Fun(t1, _) => Err(err(path, &t1.to_string(), &ta)),
                other => Err(err(path, "a function type", &other)),
            }
        }
        FGExpr::Unit => Ok(FGType::Unit),
        FGExpr::Lab(_) => Ok(FGType::LabelT),
        FGExpr::Pair(e1, e2) => {
            let t1 = sub!("pair.fst", ctx, e1);
            let t2 = sub!("pair.snd", ctx, e2);
            Ok(FGType::Prod(Box::new(t1), Box::new(t2)))
        }
        FGExpr::Fst(e) => match sub!("fst", ctx, e) {
            FGType::Prod(t1, _) => Ok(*t1),
            other => Err(err(path, "a pair type", &other)),
        },
        FGExpr::Snd(e) => match sub!("snd", ctx, e) {
            FGType::Prod(_, t2) => Ok(*t2),
            other => Err(err(path, "a pair type", &other)),
        },
        FGExpr::Inl(sum_ty, e) => match sum_ty {
            FGType::Sum(t1, _) => {
                let t = sub!("inl", ctx, e);
                if &t == t1.as_ref() {
                    Ok(sum_ty.clone())
                } else {
                    Err(err(path, &t1.to_string(), &t))
                }
            }
            other => Err(err(path, "a sum type annotation", other)),
        },
        FGExpr::Inr(sum_ty, e) => match sum_ty {
            FGType::Sum(_, t2) => {
                let t = sub!("inr", ctx, e);
                if &t == t2.as_ref() {
                    Ok(sum_ty.clone())
                } else {
                    Err(err(path, &t2.to_string(), &t))
                }
            }
            other => Err(err(path, "a sum type annotation", other)),
        },
        FGExpr::Case(scrut, left, right) => {
            let ts = sub!("case.scrutinee", ctx, scrut);
            let (t1, t2) = match ts {
                FGType::Sum(t1, t2) => (*t1, *t2),
                other => return Err(err(path, "a sum type", &other)),
            };
            ctx.push(t1);
            let tl = sub!("case.left", ctx, left);
            ctx.pop();
            ctx.push(t2);
            let tr = sub!("case.right", ctx, right);
            ctx.pop();
            if tl == tr {
                Ok(tl)
            } else {
                Err(err(path, &tl.to_string(), &tr))
            }
        }
        FGExpr::GetLabel => Ok(FGType::LabelT),
        FGExpr::LabelOf(e) => {
            sub!("labelOf", ctx, e);
            Ok(FGType::LabelT)
        }
        FGExpr::Leq(e1, e2) => {
            let t1 = sub!("leq.left", ctx, e1);
            if t1 != FGType::LabelT {
                return Err(err(path, "label", &t1));
            }
            let t2 = sub!("leq.right", ctx, e2);
            if t2 != FGType::LabelT {
                return Err(err(path, "label", &t2));
            }
            Ok(FGType::bool_ty())
        }
        FGExpr::Taint(e1, e2) => {
            let t1 = sub!("taint.label", ctx, e1);
            if t1 != FGType::LabelT {
                return Err(err(path, "label", &t1));
            }
            Ok(sub!("taint.body", ctx, e2))
        }
        FGExpr::New(s, e) => {
            let t = sub!("new", ctx, e);
            Ok(FGType::Ref(*s, Box::new(t)))
        }
        FGExpr::Read(e) => match sub!("read", ctx, e) {
            FGType::Ref(_, t) => Ok(*t),
            other => Err(err(path, "a reference type", &other)),
        },
        FGExpr::Write(e1, e2) => {
            let tr = sub!("write.ref", ctx, e1);
            let tv = sub!("write.value", ctx, e2);
            match tr {
                FGType::Ref(_, t) if *t == tv => Ok(FGType::Unit),
                FGType::Ref(_, t) => Err(err(path, &t.to_string(), &tv)),
                other => Err(err(path, "a reference type", &other)),
            }
        }
        FGExpr::LabelOfRef(e) => match sub!("labelOfRef", ctx, e) {
            FGType::Ref(..) => Ok(FGType::LabelT),
            other => Err(err(path, "a reference type", &other)),
        },
        FGExpr::Wken(drop, e) => {
            for &n in drop {
                if n >= ctx.len() {
                    return Err(FGTypeError::UnboundVariable {
                        location: location(path),
                        index: n,
                    });
                }
            }
            let mut trimmed = drop_indices(ctx, drop);
            let t = sub!("wken", &mut trimmed, e);
            Ok(t)
        }
    }
}

/// Removes the context entries named by De Bruijn indices in `drop`.
pub fn drop_indices<T: Clone>(ctx: &[T], drop: &std::collections::BTreeSet<usize>) -> Vec<T> {
    let len = ctx.len();
    let mut positions: Vec<usize> = drop.iter().map(|n| len - 1 - n).collect();
    positions.sort_unstable_by(|a, b| b.cmp(a));
    let mut out = ctx.to_vec();
    for p in positions {
        out.remove(p);
    }
    out
}
