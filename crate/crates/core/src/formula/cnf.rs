//! Conversion from surface syntax to inner/outer CNF.
//!
//! Both levels use plain distribution. Fresh variables are never introduced,
//! because a fresh set variable would change the relation being defined; the
//! price is a worst-case exponential blowup, which is harmless at the small
//! arities relation definitions have.

use crate::error::{Error, Result};
use crate::syntax::{Atom, AtomOp, SurfaceFormula, TermExpr};

use super::{ClausalFormula, InnerClause, InnerLiteral, OuterClause, OuterLiteral, Term, Var};

/// Rewrites `s == t` / `s != t` into `T == 1` / `T != 1`, where `T` is
/// `(~s | t) & (~t | s)`. Atoms that already compare against `1` are kept.
pub fn desugar_atom(atom: &Atom) -> Atom {
    let (term, op) = match (&atom.lhs, &atom.rhs) {
        (s, TermExpr::One) => (s.clone(), atom.op),
        (TermExpr::One, t) => (t.clone(), atom.op),
        (s, t) => {
            let forward = s.clone().not().join(t.clone());
            let backward = t.clone().not().join(s.clone());
            (forward.meet(backward), atom.op)
        }
    };
    Atom {
        lhs: term,
        op,
        rhs: TermExpr::One,
        span: atom.span,
    }
}

/// Converts a term to inner CNF, interning unseen variable names at the end
/// of `vars`.
pub fn to_inner_cnf(term: &TermExpr, vars: &mut Vec<String>) -> Term {
    let mut resolve = |name: &str| -> Result<Var> { Ok(intern(vars, name)) };
    Term::new(
        inner_cnf(term, false, &mut resolve)
            .expect("interning never fails")
            .into_iter()
            .map(InnerClause::new),
    )
}

/// Converts a formula to a normalized clausal formula. Variables are
/// numbered in order of first occurrence.
pub fn to_clausal(formula: &SurfaceFormula) -> ClausalFormula {
    let mut vars = Vec::new();
    let mut resolve = |name: &str| -> Result<Var> { Ok(intern(&mut vars, name)) };
    let clauses = outer_cnf(formula, false, &mut resolve).expect("interning never fails");
    ClausalFormula::new(vars, clauses.into_iter().map(OuterClause::new).collect()).normalize()
}

/// Converts a relation body whose variables must all be among `params`;
/// parameter `i` becomes variable `i`.
pub fn to_clausal_with_params(
    relation: &str,
    params: &[String],
    body: &SurfaceFormula,
) -> Result<ClausalFormula> {
    let mut resolve = |name: &str| -> Result<Var> {
        params
            .iter()
            .position(|p| p == name)
            .map(Var::new)
            .ok_or_else(|| Error::UnknownVariable {
                relation: relation.to_string(),
                name: name.to_string(),
            })
    };
    let clauses = outer_cnf(body, false, &mut resolve)?;
    Ok(ClausalFormula::new(params.to_vec(), clauses.into_iter().map(OuterClause::new).collect()).normalize())
}

fn intern(vars: &mut Vec<String>, name: &str) -> Var {
    match vars.iter().position(|v| v == name) {
        Some(i) => Var::new(i),
        None => {
            vars.push(name.to_string());
            Var::new(vars.len() - 1)
        }
    }
}

type Resolver<'a> = dyn FnMut(&str) -> Result<Var> + 'a;

/// Inner CNF of `term` (or of its complement when `negated`), as raw
/// literal lists. `[]` is `1`, `[[]]` is `0`.
fn inner_cnf(term: &TermExpr, negated: bool, resolve: &mut Resolver<'_>) -> Result<Vec<Vec<InnerLiteral>>> {
    Ok(match (term, negated) {
        (TermExpr::One, false) | (TermExpr::Zero, true) => Vec::new(),
        (TermExpr::Zero, false) | (TermExpr::One, true) => vec![Vec::new()],
        (TermExpr::Var(name), neg) => {
            let var = resolve(name)?;
            vec![vec![InnerLiteral { var, positive: !neg }]]
        }
        (TermExpr::Not(t), neg) => inner_cnf(t, !neg, resolve)?,
        // De Morgan: ~(a & b) = ~a | ~b and ~(a | b) = ~a & ~b.
        (TermExpr::Meet(a, b), false) | (TermExpr::Join(a, b), true) => {
            let mut left = inner_cnf(a, negated, resolve)?;
            left.extend(inner_cnf(b, negated, resolve)?);
            left
        }
        (TermExpr::Join(a, b), false) | (TermExpr::Meet(a, b), true) => {
            let left = inner_cnf(a, negated, resolve)?;
            let right = inner_cnf(b, negated, resolve)?;
            distribute_inner(&left, &right)
        }
    })
}

fn distribute_inner(left: &[Vec<InnerLiteral>], right: &[Vec<InnerLiteral>]) -> Vec<Vec<InnerLiteral>> {
    let mut out = Vec::with_capacity(left.len() * right.len());
    for a in left {
        for b in right {
            let clause = InnerClause::new(a.iter().chain(b).copied());
            if !clause.is_tautology() {
                out.push(clause.literals().to_vec());
            }
        }
    }
    out.sort_unstable();
    out.dedup();
    out
}

fn outer_cnf(
    formula: &SurfaceFormula,
    negated: bool,
    resolve: &mut Resolver<'_>,
) -> Result<Vec<Vec<OuterLiteral>>> {
    Ok(match (formula, negated) {
        (SurfaceFormula::True, false) | (SurfaceFormula::False, true) => Vec::new(),
        (SurfaceFormula::False, false) | (SurfaceFormula::True, true) => vec![Vec::new()],
        (SurfaceFormula::Atom(atom), neg) => {
            let atom = desugar_atom(atom);
            let term = Term::new(inner_cnf(&atom.lhs, false, resolve)?.into_iter().map(InnerClause::new));
            let positive = (atom.op == AtomOp::Eq) != neg;
            vec![vec![OuterLiteral { term, positive }]]
        }
        (SurfaceFormula::Not(g), neg) => outer_cnf(g, !neg, resolve)?,
        (SurfaceFormula::And(a, b), false) | (SurfaceFormula::Or(a, b), true) => {
            let mut left = outer_cnf(a, negated, resolve)?;
            left.extend(outer_cnf(b, negated, resolve)?);
            left
        }
        (SurfaceFormula::Or(a, b), false) | (SurfaceFormula::And(a, b), true) => {
            let left = outer_cnf(a, negated, resolve)?;
            let right = outer_cnf(b, negated, resolve)?;
            let mut out = Vec::with_capacity(left.len() * right.len());
            for l in &left {
                for r in &right {
                    out.push(l.iter().chain(r).cloned().collect());
                }
            }
            out
        }
    })
}
