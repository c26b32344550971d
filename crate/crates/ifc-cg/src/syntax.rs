use std::collections::BTreeSet;
use std::fmt;

use ifc_lattice::Label;

/// Reference flavor: `I` cells live in the label-partitioned store and keep
/// their label forever; `S` cells live in the heap and may be relabeled on
/// write.
#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub enum Sensitivity {
    I,
    S,
}

/// Types of the coarse-grained calculus. `LIO` classifies suspended monadic
/// computations, `Labeled` explicitly labeled data; everything else is plain.
#[derive(Clone, Debug, PartialEq, Eq, PartialOrd, Ord)]
pub enum CGType {
    Unit,
    Fun(Box<CGType>, Box<CGType>),
    Sum(Box<CGType>, Box<CGType>),
    Prod(Box<CGType>, Box<CGType>),
    LabelT,
    Lio(Box<CGType>),
    Labeled(Box<CGType>),
    Ref(Sensitivity, Box<CGType>),
}

impl CGType {
    /// Booleans are the two-point sum, `true = inl ()`.
    pub fn bool_ty() -> CGType {
        CGType::Sum(Box::new(CGType::Unit), Box::new(CGType::Unit))
    }
}

impl fmt::Display for CGType {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            CGType::Unit => write!(f, "unit"),
            CGType::Fun(a, b) => write!(f, "({a} -> {b})"),
            CGType::Sum(a, b) => write!(f, "({a} + {b})"),
            CGType::Prod(a, b) => write!(f, "({a} * {b})"),
            CGType::LabelT => write!(f, "label"),
            CGType::Lio(t) => write!(f, "(lio {t})"),
            CGType::Labeled(t) => write!(f, "(labeled {t})"),
            CGType::Ref(Sensitivity::I, t) => write!(f, "(ref-I {t})"),
            CGType::Ref(Sensitivity::S, t) => write!(f, "(ref-S {t})"),
        }
    }
}

/// Pure expressions. Variables are De Bruijn indices; index 0 is the most
/// recently bound variable. `Inl`/`Inr` carry the full sum type so every
/// value synthesizes a unique type. Effects only ever appear suspended,
/// behind `Thunk`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub enum CGExpr {
    Var(usize),
    Lam(CGType, Box<CGExpr>),
    App(Box<CGExpr>, Box<CGExpr>),
    Unit,
    Lab(Label),
    Pair(Box<CGExpr>, Box<CGExpr>),
    Fst(Box<CGExpr>),
    Snd(Box<CGExpr>),
    Inl(CGType, Box<CGExpr>),
    Inr(CGType, Box<CGExpr>),
    Case(Box<CGExpr>, Box<CGExpr>, Box<CGExpr>),
    Leq(Box<CGExpr>, Box<CGExpr>),
    Thunk(Box<CGThunk>),
    /// Forgets the listed indices before evaluating the body; the body is
    /// scoped over the trimmed environment.
    Wken(BTreeSet<usize>, Box<CGExpr>),
}

/// Monadic computations. These only run under `eval_force`/`eval_thunk`,
/// which carry the store, heap, and floating pc.
#[derive(Clone, Debug, PartialEq, Eq)]
pub enum CGThunk {
    Return(Box<CGExpr>),
    /// `bind(e1, e2)`: forces `e1`, then forces `e2` with the result bound
    /// at index 0.
    Bind(Box<CGExpr>, Box<CGExpr>),
    Unlabel(Box<CGExpr>),
    /// Runs the inner computation, then restores the pc and wraps the
    /// result at the label the computation finished at.
    ToLabeled(Box<CGExpr>),
    LabelOf(Box<CGExpr>),
    GetLabel,
    Taint(Box<CGExpr>),
    New(Sensitivity, Box<CGExpr>),
    Read(Box<CGExpr>),
    Write(Box<CGExpr>, Box<CGExpr>),
    LabelOfRef(Box<CGExpr>),
}

/// Constructor helpers for building terms in tests and translations.
pub mod build {
    use super::*;

    pub fn var(n: usize) -> CGExpr {
        CGExpr::Var(n)
    }
    pub fn lam(param: CGType, body: CGExpr) -> CGExpr {
        CGExpr::Lam(param, Box::new(body))
    }
    pub fn app(f: CGExpr, a: CGExpr) -> CGExpr {
        CGExpr::App(Box::new(f), Box::new(a))
    }
    pub fn unit() -> CGExpr {
        CGExpr::Unit
    }
    pub fn lab(l: Label) -> CGExpr {
        CGExpr::Lab(l)
    }
    pub fn pair(a: CGExpr, b: CGExpr) -> CGExpr {
        CGExpr::Pair(Box::new(a), Box::new(b))
    }
    pub fn fst(e: CGExpr) -> CGExpr {
        CGExpr::Fst(Box::new(e))
    }
    pub fn snd(e: CGExpr) -> CGExpr {
        CGExpr::Snd(Box::new(e))
    }
    pub fn inl(sum: CGType, e: CGExpr) -> CGExpr {
        CGExpr::Inl(sum, Box::new(e))
    }
    pub fn inr(sum: CGType, e: CGExpr) -> CGExpr {
        CGExpr::Inr(sum, Box::new(e))
    }
    pub fn case(scrut: CGExpr, left: CGExpr, right: CGExpr) -> CGExpr {
        CGExpr::Case(Box::new(scrut), Box::new(left), Box::new(right))
    }
    pub fn leq(a: CGExpr, b: CGExpr) -> CGExpr {
        CGExpr::Leq(Box::new(a), Box::new(b))
    }
    pub fn wken<I: IntoIterator<Item = usize>>(drop: I, e: CGExpr) -> CGExpr {
        CGExpr::Wken(drop.into_iter().collect(), Box::new(e))
    }

    pub fn thunk(t: CGThunk) -> CGExpr {
        CGExpr::Thunk(Box::new(t))
    }
    pub fn ret(e: CGExpr) -> CGThunk {
        CGThunk::Return(Box::new(e))
    }
    pub fn bind(e1: CGExpr, e2: CGExpr) -> CGThunk {
        CGThunk::Bind(Box::new(e1), Box::new(e2))
    }
    pub fn unlabel(e: CGExpr) -> CGThunk {
        CGThunk::Unlabel(Box::new(e))
    }
    pub fn to_labeled(e: CGExpr) -> CGThunk {
        CGThunk::ToLabeled(Box::new(e))
    }
    pub fn label_of(e: CGExpr) -> CGThunk {
        CGThunk::LabelOf(Box::new(e))
    }
    pub fn get_label() -> CGThunk {
        CGThunk::GetLabel
    }
    pub fn taint(e: CGExpr) -> CGThunk {
        CGThunk::Taint(Box::new(e))
    }
    pub fn new(s: Sensitivity, e: CGExpr) -> CGThunk {
        CGThunk::New(s, Box::new(e))
    }
    pub fn read(e: CGExpr) -> CGThunk {
        CGThunk::Read(Box::new(e))
    }
    pub fn write(r: CGExpr, v: CGExpr) -> CGThunk {
        CGThunk::Write(Box::new(r), Box::new(v))
    }
    pub fn label_of_ref(e: CGExpr) -> CGThunk {
        CGThunk::LabelOfRef(Box::new(e))
    }

    pub fn tt() -> CGExpr {
        inl(CGType::bool_ty(), unit())
    }
    pub fn ff() -> CGExpr {
        inr(CGType::bool_ty(), unit())
    }
    /// `if e then a else b`, a case whose branches ignore the bound unit.
    pub fn ite(e: CGExpr, a: CGExpr, b: CGExpr) -> CGExpr {
        case(e, wken([0], a), wken([0], b))
    }
    /// Monadic sequencing: force `e1`, drop its result, force `e2`.
    pub fn seq(e1: CGExpr, e2: CGExpr) -> CGThunk {
        bind(e1, wken([0], e2))
    }
}
