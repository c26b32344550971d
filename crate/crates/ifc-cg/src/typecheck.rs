//! The security-unaware type system, split like the syntax: pure expressions
//! and monadic thunks check against the same context.

use thiserror::Error;

use crate::syntax::{CGExpr, CGThunk, CGType};

/// Typing context, innermost binder last; De Bruijn index `n` resolves to
/// `ctx[ctx.len() - 1 - n]`.
pub type CGCtx = Vec<CGType>;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum CGTypeError {
    #[error("type error at {location}: expected {expected}, found {found}")]
    TypeError { location: String, expected: String, found: String },
    #[error("unbound variable {index} at {location}")]
    UnboundVariable { location: String, index: usize },
}

/// Returns the unique type of the pure expression `e` under `ctx`.
pub fn typecheck_cg(ctx: &CGCtx, e: &CGExpr) -> Result<CGType, CGTypeError> {
    let mut ctx = ctx.clone();
    let mut path = Vec::new();
    tc(&mut ctx, e, &mut path)
}

/// Returns the type of the computation `t` under `ctx`, always `lio _`.
pub fn typecheck_cg_thunk(ctx: &CGCtx, t: &CGThunk) -> Result<CGType, CGTypeError> {
    let mut ctx = ctx.clone();
    let mut path = Vec::new();
    tc_thunk(&mut ctx, t, &mut path)
}

fn err(path: &[&'static str], expected: &str, found: &CGType) -> CGTypeError {
    CGTypeError::TypeError {
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
    ctx: &mut CGCtx,
    e: &CGExpr,
    path: &mut Vec<&'static str>,
) -> Result<CGType, CGTypeError> {
    macro_rules! sub {
        ($seg:literal, $ctx:expr, $e:expr) => {{
            path.push($seg);
            let t = tc($ctx, $e, path)?;
            path.pop();
            t
        }};
    }
    match e {
        CGExpr::Var(n) => match ctx.len().checked_sub(1 + n) {
            Some(i) => Ok(ctx[i].clone()),
            None => Err(CGTypeError::UnboundVariable { location: location(path), index: *n }),
        },
        CGExpr::Lam(param, body) => {
            ctx.push(param.clone());
            let ret = sub!("lam.body", ctx, body);
            ctx.pop();
            Ok(CGType::Fun(Box::new(param.clone()), Box::new(ret)))
        }
        CGExpr::App(e1, e2) => {
            let tf = sub!("app.fun", ctx, e1);
            let ta = sub!("app.arg", ctx, e2);
            match tf {
                CGType::Fun(t1, t2) if *t1 == ta => Ok(*t2),
                CGType::Fun(t1, _) => Err(err(path, &t1.to_string(), &ta)),
                other => Err(err(path, "a function type", &other)),
            }
        }
        CGExpr::Unit => Ok(CGType::Unit),
        CGExpr::Lab(_) => Ok(CGType::LabelT),
        CGExpr::Pair(e1, e2) => {
            let t1 = sub!("pair.fst", ctx, e1);
            let t2 = sub!("pair.snd", ctx, e2);
            Ok(CGType::Prod(Box::new(t1), Box::new(t2)))
        }
        CGExpr::Fst(e) => match sub!("fst", ctx, e) {
            CGType::Prod(t1, _) => Ok(*t1),
            other => Err(err(path, "a pair type", &other)),
        },
        CGExpr::Snd(e) => match sub!("snd", ctx, e) {
            CGType::Prod(_, t2) => Ok(*t2),
            other => Err(err(path, "a pair type", &other)),
        },
        CGExpr::Inl(sum_ty, e) => match sum_ty {
            CGType::Sum(t1, _) => {
                let t = sub!("inl", ctx, e);
                if &t == t1.as_ref() {
                    Ok(sum_ty.clone())
                } else {
                    Err(err(path, &t1.to_string(), &t))
                }
            }
            other => Err(err(path, "a sum type annotation", other)),
        },
        CGExpr::Inr(sum_ty, e) => match sum_ty {
            CGType::Sum(_, t2) => {
                let t = sub!("inr", ctx, e);
                if &t == t2.as_ref() {
                    Ok(sum_ty.clone())
                } else {
                    Err(err(path, &t2.to_string(), &t))
                }
            }
            other => Err(err(path, "a sum type annotation", other)),
        },
        CGExpr::Case(scrut, left, right) => {
            let ts = sub!("case.scrutinee", ctx, scrut);
            let (t1, t2) = match ts {
                CGType::Sum(t1, t2) => (*t1, *t2),
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
        CGExpr::Leq(e1, e2) => {
            let t1 = sub!("leq.left", ctx, e1);
            if t1 != CGType::LabelT {
                return Err(err(path, "label", &t1));
            }
            let t2 = sub!("leq.right", ctx, e2);
            if t2 != CGType::LabelT {
                return Err(err(path, "label", &t2));
            }
            Ok(CGType::bool_ty())
        }
        CGExpr::Thunk(t) => {
            path.push("thunk");
            let ty = tc_thunk(ctx, t, path)?;
            path.pop();
            Ok(ty)
        }
        CGExpr::Wken(drop, e) => {
            for &n in drop {
                if n >= ctx.len() {
                    return Err(CGTypeError::UnboundVariable {
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

fn tc_thunk(
    ctx: &mut CGCtx,
    t: &CGThunk,
    path: &mut Vec<&'static str>,
) -> Result<CGType, CGTypeError> {
    macro_rules! sub {
        ($seg:literal, $ctx:expr, $e:expr) => {{
            path.push($seg);
            let t = tc($ctx, $e, path)?;
            path.pop();
            t
        }};
    }
    let lio = |t: CGType| CGType::Lio(Box::new(t));
    match t {
        CGThunk::Return(e) => {
            let t = sub!("return", ctx, e);
            Ok(lio(t))
        }
        CGThunk::Bind(e1, e2) => {
            let t1 = match sub!("bind.first", ctx, e1) {
                CGType::Lio(t1) => *t1,
                other => return Err(err(path, "a computation type", &other)),
            };
            ctx.push(t1);
            let t2 = sub!("bind.rest", ctx, e2);
            ctx.pop();
            match t2 {
                CGType::Lio(_) => Ok(t2),
                other => Err(err(path, "a computation type", &other)),
            }
        }
        CGThunk::Unlabel(e) => match sub!("unlabel", ctx, e) {
            CGType::Labeled(t) => Ok(lio(*t)),
            other => Err(err(path, "a labeled type", &other)),
        },
        CGThunk::ToLabeled(e) => match sub!("toLabeled", ctx, e) {
            CGType::Lio(t) => Ok(lio(CGType::Labeled(t))),
            other => Err(err(path, "a computation type", &other)),
        },
        CGThunk::LabelOf(e) => match sub!("labelOf", ctx, e) {
            CGType::Labeled(_) => Ok(lio(CGType::LabelT)),
            other => Err(err(path, "a labeled type", &other)),
        },
        CGThunk::GetLabel => Ok(lio(CGType::LabelT)),
        CGThunk::Taint(e) => {
            let t = sub!("taint", ctx, e);
            if t != CGType::LabelT {
                return Err(err(path, "label", &t));
            }
            Ok(lio(CGType::Unit))
        }
        CGThunk::New(s, e) => match sub!("new", ctx, e) {
            CGType::Labeled(t) => Ok(lio(CGType::Ref(*s, t))),
            other => Err(err(path, "a labeled type", &other)),
        },
        CGThunk::Read(e) => match sub!("read", ctx, e) {
            CGType::Ref(_, t) => Ok(lio(*t)),
            other => Err(err(path, "a reference type", &other)),
        },
        CGThunk::Write(e1, e2) => {
            let tr = sub!("write.ref", ctx, e1);
            let tv = sub!("write.value", ctx, e2);
            match tr {
                CGType::Ref(_, t) => match tv {
                    CGType::Labeled(tv) if tv == t => Ok(lio(CGType::Unit)),
                    other => Err(err(path, &CGType::Labeled(t).to_string(), &other)),
                },
                other => Err(err(path, "a reference type", &other)),
            }
        }
        CGThunk::LabelOfRef(e) => match sub!("labelOfRef", ctx, e) {
            CGType::Ref(..) => Ok(lio(CGType::LabelT)),
            other => Err(err(path, "a reference type", &other)),
        },
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
