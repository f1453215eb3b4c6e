//! Surface syntax trees for set-constraint formulas.
//!
//! Terms are built from `&` (meet), `|` (join), `~` (complement), the
//! constants `0` and `1`, and variables. Formulas combine atoms `s == t` and
//! `s != t` with `and`, `or` and `not`.

use crate::error::SourceSpan;

#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub enum TermExpr {
    Zero,
    One,
    Var(String),
    Not(Box<TermExpr>),
    Meet(Box<TermExpr>, Box<TermExpr>),
    Join(Box<TermExpr>, Box<TermExpr>),
}

impl TermExpr {
    pub fn var(name: impl Into<String>) -> Self {
        TermExpr::Var(name.into())
    }

    #[allow(clippy::should_implement_trait)]
    pub fn not(self) -> Self {
        TermExpr::Not(Box::new(self))
    }

    pub fn meet(self, other: TermExpr) -> Self {
        TermExpr::Meet(Box::new(self), Box::new(other))
    }

    pub fn join(self, other: TermExpr) -> Self {
        TermExpr::Join(Box::new(self), Box::new(other))
    }

    /// Visits variable names left to right.
    pub fn for_each_var<'a>(&'a self, f: &mut impl FnMut(&'a str)) {
        match self {
            TermExpr::Zero | TermExpr::One => {}
            TermExpr::Var(name) => f(name),
            TermExpr::Not(t) => t.for_each_var(f),
            TermExpr::Meet(a, b) | TermExpr::Join(a, b) => {
                a.for_each_var(f);
                b.for_each_var(f);
            }
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum AtomOp {
    Eq,
    Ne,
}

impl AtomOp {
    pub fn flipped(self) -> Self {
        match self {
            AtomOp::Eq => AtomOp::Ne,
            AtomOp::Ne => AtomOp::Eq,
        }
    }

    pub fn symbol(self) -> &'static str {
        match self {
            AtomOp::Eq => "==",
            AtomOp::Ne => "!=",
        }
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct Atom {
    pub lhs: TermExpr,
    pub op: AtomOp,
    pub rhs: TermExpr,
    pub span: SourceSpan,
}

impl Atom {
    pub fn new(lhs: TermExpr, op: AtomOp, rhs: TermExpr) -> Self {
        Self {
            lhs,
            op,
            rhs,
            span: SourceSpan::default(),
        }
    }
}

/// A quantifier-free formula in surface syntax.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub enum SurfaceFormula {
    True,
    False,
    Atom(Atom),
    Not(Box<SurfaceFormula>),
    And(Box<SurfaceFormula>, Box<SurfaceFormula>),
    Or(Box<SurfaceFormula>, Box<SurfaceFormula>),
}

impl SurfaceFormula {
    pub fn atom(lhs: TermExpr, op: AtomOp, rhs: TermExpr) -> Self {
        SurfaceFormula::Atom(Atom::new(lhs, op, rhs))
    }

    pub fn eq(lhs: TermExpr, rhs: TermExpr) -> Self {
        Self::atom(lhs, AtomOp::Eq, rhs)
    }

    pub fn ne(lhs: TermExpr, rhs: TermExpr) -> Self {
        Self::atom(lhs, AtomOp::Ne, rhs)
    }

    pub fn and(self, other: SurfaceFormula) -> Self {
        SurfaceFormula::And(Box::new(self), Box::new(other))
    }

    pub fn or(self, other: SurfaceFormula) -> Self {
        SurfaceFormula::Or(Box::new(self), Box::new(other))
    }

    #[allow(clippy::should_implement_trait)]
    pub fn not(self) -> Self {
        SurfaceFormula::Not(Box::new(self))
    }

    pub fn for_each_var<'a>(&'a self, f: &mut impl FnMut(&'a str)) {
        match self {
            SurfaceFormula::True | SurfaceFormula::False => {}
            SurfaceFormula::Atom(a) => {
                a.lhs.for_each_var(f);
                a.rhs.for_each_var(f);
            }
            SurfaceFormula::Not(g) => g.for_each_var(f),
            SurfaceFormula::And(a, b) | SurfaceFormula::Or(a, b) => {
                a.for_each_var(f);
                b.for_each_var(f);
            }
        }
    }

    /// Variable names in order of first occurrence.
    pub fn var_names(&self) -> Vec<String> {
        let mut out: Vec<String> = Vec::new();
        self.for_each_var(&mut |name| {
            if !out.iter().any(|n| n == name) {
                out.push(name.to_string());
            }
        });
        out
    }
}
