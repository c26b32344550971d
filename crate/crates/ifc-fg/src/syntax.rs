//! Abstract syntax of the fine-grained calculus.
//!
//! Variables are De Bruijn indices (0 = innermost binder), so alpha
//! equivalence is structural equality. Binders and injections carry type
//! annotations to keep type synthesis unique.

use std::collections::BTreeSet;
use std::fmt;

use ifc_lattice::Label;

/// Flow-sensitivity tag on reference types: `I` references live in the
/// label-partitioned store, `S` references in the linear heap.
#[derive(PartialEq, Eq, PartialOrd, Ord, Clone, Copy, Debug)]
pub enum Sensitivity {
    I,
    S,
}

#[derive(PartialEq, Eq, PartialOrd, Ord, Clone, Debug)]
pub enum FGType {
    Unit,
    Fun(Box<FGType>, Box<FGType>),
    Sum(Box<FGType>, Box<FGType>),
    Prod(Box<FGType>, Box<FGType>),
    /// The type of label values.
    LabelT,
    Ref(Sensitivity, Box<FGType>),
}

impl FGType {
    /// The boolean encoding `unit + unit`.
    pub fn bool_ty() -> FGType {
        FGType::Sum(Box::new(FGType::Unit), Box::new(FGType::Unit))
    }
}

impl fmt::Display for FGType {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            FGType::Unit => write!(f, "unit"),
            FGType::Fun(a, b) => write!(f, "({a} -> {b})"),
            FGType::Sum(a, b) => write!(f, "({a} + {b})"),
            FGType::Prod(a, b) => write!(f, "({a} * {b})"),
            FGType::LabelT => write!(f, "label"),
            FGType::Ref(Sensitivity::I, t) => write!(f, "(ref-I {t})"),
            FGType::Ref(Sensitivity::S, t) => write!(f, "(ref-S {t})"),
        }
    }
}

#[derive(PartialEq, Eq, Clone, Debug)]
pub enum FGExpr {
    Var(usize),
    /// `λx:τ. e` — the annotation is the parameter type.
    Lam(FGType, Box<FGExpr>),
    App(Box<FGExpr>, Box<FGExpr>),
    Unit,
    Lab(Label),
    Pair(Box<FGExpr>, Box<FGExpr>),
    Fst(Box<FGExpr>),
    Snd(Box<FGExpr>),
    /// `inl e` annotated with the full sum type it constructs.
    Inl(FGType, Box<FGExpr>),
    /// `inr e` annotated with the full sum type it constructs.
    Inr(FGType, Box<FGExpr>),
    /// `case e of inl x. e1 | inr x. e2` — both branches bind index 0.
    Case(Box<FGExpr>, Box<FGExpr>, Box<FGExpr>),
    GetLabel,
    LabelOf(Box<FGExpr>),
    /// `e1 ⊑? e2` on label values.
    Leq(Box<FGExpr>, Box<FGExpr>),
    /// `taint(e1, e2)`: raise the program counter to the label `e1` and run
    /// `e2` there.
    Taint(Box<FGExpr>, Box<FGExpr>),
    New(Sensitivity, Box<FGExpr>),
    Read(Box<FGExpr>),
    Write(Box<FGExpr>, Box<FGExpr>),
    LabelOfRef(Box<FGExpr>),
    /// `wken(x̄, e)`: evaluate `e` with the variables at the given De Bruijn
    /// indices dropped from the environment.
    Wken(BTreeSet<usize>, Box<FGExpr>),
}

/// Constructor helpers that keep deeply nested test and translation code
/// readable.
pub mod build {
    use super::*;

    pub fn var(n: usize) -> FGExpr {
        FGExpr::Var(n)
    }
    pub fn lam(param: FGType, body: FGExpr) -> FGExpr {
        FGExpr::Lam(param, Box::new(body))
    }
    pub fn app(f: FGExpr, a: FGExpr) -> FGExpr {
        FGExpr::App(Box::new(f), Box::new(a))
    }
    pub fn unit() -> FGExpr {
        FGExpr::Unit
    }
    pub fn lab(l: Label) -> FGExpr {
        FGExpr::Lab(l)
    }
    pub fn pair(a: FGExpr, b: FGExpr) -> FGExpr {
        FGExpr::Pair(Box::new(a), Box::new(b))
    }
    pub fn fst(e: FGExpr) -> FGExpr {
        FGExpr::Fst(Box::new(e))
    }
    pub fn snd(e: FGExpr) -> FGExpr {
        FGExpr::Snd(Box::new(e))
    }
    pub fn inl(sum_ty: FGType, e: FGExpr) -> FGExpr {
        FGExpr::Inl(sum_ty, Box::new(e))
    }
    pub fn inr(sum_ty: FGType, e: FGExpr) -> FGExpr {
        FGExpr::Inr(sum_ty, Box::new(e))
    }
    pub fn case(scrut: FGExpr, left: FGExpr, right: FGExpr) -> FGExpr {
        FGExpr::Case(Box::new(scrut), Box::new(left), Box::new(right))
    }
    pub fn get_label() -> FGExpr {
        FGExpr::GetLabel
    }
    pub fn label_of(e: FGExpr) -> FGExpr {
        FGExpr::LabelOf(Box::new(e))
    }
    pub fn leq(a: FGExpr, b: FGExpr) -> FGExpr {
        FGExpr::Leq(Box::new(a), Box::new(b))
    }
    pub fn taint(l: FGExpr, e: FGExpr) -> FGExpr {
        FGExpr::Taint(Box::new(l), Box::new(e))
    }
    pub fn new(s: Sensitivity, e: FGExpr) -> FGExpr {
        FGExpr::New(s, Box::new(e))
    }
    pub fn read(e: FGExpr) -> FGExpr {
        FGExpr::Read(Box::new(e))
    }
    pub fn write(r: FGExpr, v: FGExpr) -> FGExpr {
        FGExpr::Write(Box::new(r), Box::new(v))
    }
    pub fn label_of_ref(e: FGExpr) -> FGExpr {
        FGExpr::LabelOfRef(Box::new(e))
    }
    pub fn wken<I: IntoIterator<Item = usize>>(drop: I, e: FGExpr) -> FGExpr {
        FGExpr::Wken(drop.into_iter().collect(), Box::new(e))
    }

    /// `true` = inl () at type unit + unit.
    pub fn tt() -> FGExpr {
        inl(FGType::bool_ty(), unit())
    }
    /// `false` = inr () at type unit + unit.
    pub fn ff() -> FGExpr {
        inr(FGType::bool_ty(), unit())
    }
    /// `if e then a else b` = case with a wildcard binder; the branch bodies
    /// drop the unused binder so their indices are undisturbed.
    pub fn ite(e: FGExpr, a: FGExpr, b: FGExpr) -> FGExpr {
        case(e, wken([0], a), wken([0], b))
    }
    /// `let x = e1 in e2` = (λx. e2) e1.
    pub fn let_(param: FGType, e1: FGExpr, e2: FGExpr) -> FGExpr {
        app(lam(param, e2), e1)
    }
    /// `e1; e2` = let _ = e1 in e2 with the binder dropped from e2's scope.
    pub fn seq(param: FGType, e1: FGExpr, e2: FGExpr) -> FGExpr {
        let_(param, e1, wken([0], e2))
    }
}
