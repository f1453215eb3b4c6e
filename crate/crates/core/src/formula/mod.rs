//! Clausal representation of quantifier-free set constraints.
//!
//! A constraint is a conjunction of *outer clauses*. Each outer clause is a
//! disjunction of outer literals `t = 1` or `t != 1`, and each term `t` is a
//! meet of *inner clauses*, which are joins of possibly complemented
//! variables. Every container is kept sorted and duplicate-free, except for
//! the top-level clause list, which keeps first-occurrence order so that
//! clause indices in traces and rewrite logs match the source.

mod cnf;
mod subst;

use std::collections::HashSet;
use std::fmt;

pub use cnf::{desugar_atom, to_clausal, to_clausal_with_params, to_inner_cnf};
pub use subst::{substitute, substitute_clauses};

/// A set variable, identified by its dense index in the owning formula's
/// variable list.
#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct Var(pub u32);

impl Var {
    pub fn new(index: usize) -> Self {
        Var(u32::try_from(index).expect("variable index overflows u32"))
    }

    #[inline]
    pub fn index(self) -> usize {
        self.0 as usize
    }
}

/// `x` (positive) or its complement `~x`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct InnerLiteral {
    pub var: Var,
    pub positive: bool,
}

impl InnerLiteral {
    pub fn pos(var: Var) -> Self {
        Self {
            var,
            positive: true,
        }
    }

    pub fn neg(var: Var) -> Self {
        Self {
            var,
            positive: false,
        }
    }

    pub fn negated(self) -> Self {
        Self {
            var: self.var,
            positive: !self.positive,
        }
    }
}

/// A join of inner literals. The empty clause denotes `0`.
#[derive(Debug, Clone, PartialEq, Eq, PartialOrd, Ord, Hash, Default)]
pub struct InnerClause {
    literals: Vec<InnerLiteral>,
}

impl InnerClause {
    pub fn new(literals: impl IntoIterator<Item = InnerLiteral>) -> Self {
        let mut literals: Vec<_> = literals.into_iter().collect();
        literals.sort_unstable();
        literals.dedup();
        Self { literals }
    }

    pub fn empty() -> Self {
        Self::default()
    }

    pub fn literals(&self) -> &[InnerLiteral] {
        &self.literals
    }

    pub fn len(&self) -> usize {
        self.literals.len()
    }

    pub fn is_empty(&self) -> bool {
        self.literals.is_empty()
    }

    pub fn positives(&self) -> impl Iterator<Item = Var> + '_ {
        self.literals.iter().filter(|l| l.positive).map(|l| l.var)
    }

    pub fn negatives(&self) -> impl Iterator<Item = Var> + '_ {
        self.literals.iter().filter(|l| !l.positive).map(|l| l.var)
    }

    pub fn positive_count(&self) -> usize {
        self.literals.iter().filter(|l| l.positive).count()
    }

    /// At most one positive literal.
    pub fn is_horn(&self) -> bool {
        self.positive_count() <= 1
    }

    /// Contains both `x` and `~x` for some `x`, so it denotes `1`.
    pub fn is_tautology(&self) -> bool {
        // Sorted by (var, positive): complementary literals are adjacent.
        self.literals
            .windows(2)
            .any(|w| w[0].var == w[1].var && w[0].positive != w[1].positive)
    }

    pub fn max_var(&self) -> Option<Var> {
        self.literals.iter().map(|l| l.var).max()
    }

    pub(crate) fn map_vars(&self, f: impl Fn(Var) -> Var) -> Self {
        Self::new(self.literals.iter().map(|l| InnerLiteral {
            var: f(l.var),
            positive: l.positive,
        }))
    }
}

/// A meet of inner clauses. The empty meet denotes `1`.
#[derive(Debug, Clone, PartialEq, Eq, PartialOrd, Ord, Hash, Default)]
pub struct Term {
    clauses: Vec<InnerClause>,
}

impl Term {
    /// Builds a normalized term: tautological clauses are dropped and a term
    /// containing the empty clause collapses to `0`.
    pub fn new(clauses: impl IntoIterator<Item = InnerClause>) -> Self {
        let mut out = Vec::new();
        for clause in clauses {
            if clause.is_empty() {
                return Self::zero();
            }
            if !clause.is_tautology() {
                out.push(clause);
            }
        }
        out.sort_unstable();
        out.dedup();
        Self { clauses: out }
    }

    /// Wraps clauses without normalizing them.
    pub fn from_raw(clauses: Vec<InnerClause>) -> Self {
        Self { clauses }
    }

    pub fn one() -> Self {
        Self::default()
    }

    pub fn zero() -> Self {
        Self {
            clauses: vec![InnerClause::empty()],
        }
    }

    pub fn clauses(&self) -> &[InnerClause] {
        &self.clauses
    }

    pub fn is_one(&self) -> bool {
        self.clauses.is_empty()
    }

    pub fn is_zero(&self) -> bool {
        self.clauses.len() == 1 && self.clauses[0].is_empty()
    }

    pub fn literal_count(&self) -> usize {
        self.clauses.iter().map(InnerClause::len).sum()
    }

    pub fn vars(&self) -> impl Iterator<Item = Var> + '_ {
        self.clauses
            .iter()
            .flat_map(|c| c.literals().iter().map(|l| l.var))
    }

    fn normalized(&self) -> Self {
        Self::new(self.clauses.iter().map(|c| InnerClause::new(c.literals.iter().copied())))
    }

    pub(crate) fn map_vars(&self, f: &impl Fn(Var) -> Var) -> Self {
        Self::new(self.clauses.iter().map(|c| c.map_vars(f)))
    }
}

/// `term = 1` when positive, `term != 1` when negative.
#[derive(Debug, Clone, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct OuterLiteral {
    pub term: Term,
    pub positive: bool,
}

impl OuterLiteral {
    pub fn eq_one(term: Term) -> Self {
        Self {
            term,
            positive: true,
        }
    }

    pub fn ne_one(term: Term) -> Self {
        Self {
            term,
            positive: false,
        }
    }

    pub fn negated(&self) -> Self {
        Self {
            term: self.term.clone(),
            positive: !self.positive,
        }
    }
}

/// A disjunction of outer literals. The empty clause denotes false.
#[derive(Debug, Clone, PartialEq, Eq, PartialOrd, Ord, Hash, Default)]
pub struct OuterClause {
    literals: Vec<OuterLiteral>,
}

impl OuterClause {
    /// Wraps literals as given; call [`ClausalFormula::normalize`] to
    /// establish the sorted, duplicate-free form.
    pub fn new(literals: Vec<OuterLiteral>) -> Self {
        Self { literals }
    }

    pub fn unit(literal: OuterLiteral) -> Self {
        Self {
            literals: vec![literal],
        }
    }

    pub fn literals(&self) -> &[OuterLiteral] {
        &self.literals
    }

    pub fn len(&self) -> usize {
        self.literals.len()
    }

    pub fn is_empty(&self) -> bool {
        self.literals.is_empty()
    }

    pub fn positive_count(&self) -> usize {
        self.literals.iter().filter(|l| l.positive).count()
    }

    pub fn into_literals(self) -> Vec<OuterLiteral> {
        self.literals
    }

    /// Normalizes the clause. `None` means the clause is valid (denotes
    /// true) and should be dropped.
    pub(crate) fn normalized(&self) -> Option<Self> {
        let mut lits = Vec::with_capacity(self.literals.len());
        for lit in &self.literals {
            let term = lit.term.normalized();
            if term.is_one() {
                if lit.positive {
                    return None;
                }
                continue;
            }
            lits.push(OuterLiteral {
                term,
                positive: lit.positive,
            });
        }
        lits.sort_unstable();
        lits.dedup();
        // `t != 1` sorts directly before `t = 1`.
        if lits
            .windows(2)
            .any(|w| w[0].term == w[1].term && w[0].positive != w[1].positive)
        {
            return None;
        }
        Some(Self { literals: lits })
    }

    pub fn vars(&self) -> impl Iterator<Item = Var> + '_ {
        self.literals.iter().flat_map(|l| l.term.vars())
    }
}

/// An outer-CNF formula: a conjunction of outer clauses over a named,
/// densely indexed variable list. The empty formula denotes true.
#[derive(Debug, Clone, PartialEq, Eq, Default)]
pub struct ClausalFormula {
    vars: Vec<String>,
    clauses: Vec<OuterClause>,
}

impl ClausalFormula {
    /// # Panics
    /// If a clause mentions a variable index outside `vars`.
    pub fn new(vars: Vec<String>, clauses: Vec<OuterClause>) -> Self {
        let n = vars.len();
        for clause in &clauses {
            if let Some(v) = clause.vars().find(|v| v.index() >= n) {
                panic!("clause mentions variable {} but only {n} are registered", v.0);
            }
        }
        Self { vars, clauses }
    }

    pub fn truth(vars: Vec<String>) -> Self {
        Self {
            vars,
            clauses: Vec::new(),
        }
    }

    pub fn vars(&self) -> &[String] {
        &self.vars
    }

    pub fn num_vars(&self) -> usize {
        self.vars.len()
    }

    pub fn var_name(&self, var: Var) -> &str {
        &self.vars[var.index()]
    }

    pub fn var_by_name(&self, name: &str) -> Option<Var> {
        self.vars.iter().position(|v| v == name).map(Var::new)
    }

    pub fn clauses(&self) -> &[OuterClause] {
        &self.clauses
    }

    pub fn into_parts(self) -> (Vec<String>, Vec<OuterClause>) {
        (self.vars, self.clauses)
    }

    pub fn is_true(&self) -> bool {
        self.clauses.is_empty()
    }

    /// Total number of inner literals, the natural input size measure.
    pub fn size(&self) -> usize {
        self.clauses
            .iter()
            .flat_map(|c| c.literals())
            .map(|l| l.term.literal_count().max(1))
            .sum()
    }

    /// Removes duplicate inner and outer literals, tautological inner
    /// clauses, valid outer clauses, `t != 1` literals with `t = 1`, and
    /// duplicate outer clauses. The result is equivalent to `self`.
    pub fn normalize(&self) -> Self {
        let mut seen = HashSet::new();
        let mut clauses = Vec::with_capacity(self.clauses.len());
        for clause in &self.clauses {
            if let Some(c) = clause.normalized() {
                if seen.insert(c.clone()) {
                    clauses.push(c);
                }
            }
        }
        Self {
            vars: self.vars.clone(),
            clauses,
        }
    }

    /// Re-expresses the formula over `names`, which must contain every
    /// variable name of `self`.
    pub fn rebase(&self, names: &[String]) -> Option<Self> {
        let map: Vec<Var> = self
            .vars
            .iter()
            .map(|v| names.iter().position(|n| n == v).map(Var::new))
            .collect::<Option<_>>()?;
        let clauses = self
            .clauses
            .iter()
            .map(|c| {
                OuterClause::new(
                    c.literals()
                        .iter()
                        .map(|l| OuterLiteral {
                            term: l.term.map_vars(&|v| map[v.index()]),
                            positive: l.positive,
                        })
                        .collect(),
                )
            })
            .collect();
        Some(Self {
            vars: names.to_vec(),
            clauses,
        })
    }

    /// Returns the index of the first clause that is false when every
    /// variable denotes the given bit mask inside the universe `full`.
    ///
    /// This is the evaluation rule shared by minterm patterns, block models
    /// and finite assignments: a term is `1` iff each of its inner clauses
    /// covers the whole universe.
    pub fn first_false_clause_in_masks(&self, values: &[u64], full: u64) -> Option<usize> {
        self.clauses
            .iter()
            .position(|c| !clause_holds_in_masks(c, values, full))
    }

    pub fn holds_in_masks(&self, values: &[u64], full: u64) -> bool {
        self.first_false_clause_in_masks(values, full).is_none()
    }
}

#[inline]
pub(crate) fn term_is_one_in_masks(term: &Term, values: &[u64], full: u64) -> bool {
    term.clauses().iter().all(|c| {
        let join = c.literals().iter().fold(0u64, |acc, l| {
            let v = values[l.var.index()];
            acc | if l.positive { v } else { !v & full }
        });
        join & full == full
    })
}

#[inline]
pub(crate) fn clause_holds_in_masks(clause: &OuterClause, values: &[u64], full: u64) -> bool {
    clause
        .literals()
        .iter()
        .any(|l| term_is_one_in_masks(&l.term, values, full) == l.positive)
}

/// Syntactic Horn classification of a normalized clausal formula.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct HornReport {
    /// Every outer clause has at most one positive outer literal.
    pub outer_horn: bool,
    /// Every inner clause of a positive outer literal has at most one
    /// positive inner literal.
    pub positive_inner_horn: bool,
    /// Every inner clause, of positive and negative literals alike, is Horn.
    pub all_inner_horn: bool,
    pub horn_horn: bool,
}

pub fn classify_horn(formula: &ClausalFormula) -> HornReport {
    let mut outer_horn = true;
    let mut positive_inner_horn = true;
    let mut negative_inner_horn = true;
    for clause in formula.clauses() {
        if clause.positive_count() > 1 {
            outer_horn = false;
        }
        for lit in clause.literals() {
            let horn = lit.term.clauses().iter().all(InnerClause::is_horn);
            if lit.positive {
                positive_inner_horn &= horn;
            } else {
                negative_inner_horn &= horn;
            }
        }
    }
    HornReport {
        outer_horn,
        positive_inner_horn,
        all_inner_horn: positive_inner_horn && negative_inner_horn,
        horn_horn: outer_horn && positive_inner_horn,
    }
}

/// Free-function form of [`ClausalFormula::normalize`].
pub fn normalize_clause_set(formula: &ClausalFormula) -> ClausalFormula {
    formula.normalize()
}

impl fmt::Display for ClausalFormula {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&crate::parse::render_clausal(self))
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn v(i: u32) -> Var {
        Var(i)
    }

    fn names(n: usize) -> Vec<String> {
        (0..n).map(|i| format!("v{i}")).collect()
    }

    #[test]
    fn inner_clause_dedups_and_detects_tautology() {
        let c = InnerClause::new([
            InnerLiteral::pos(v(0)),
            InnerLiteral::pos(v(0)),
            InnerLiteral::neg(v(1)),
        ]);
        assert_eq!(c.len(), 2);
        assert!(!c.is_tautology());
        let t = InnerClause::new([
            InnerLiteral::pos(v(0)),
            InnerLiteral::neg(v(0)),
            InnerLiteral::pos(v(1)),
        ]);
        assert!(t.is_tautology());
    }

    #[test]
    fn tautological_inner_clause_is_dropped_from_term() {
        let taut = InnerClause::new([
            InnerLiteral::pos(v(0)),
            InnerLiteral::neg(v(0)),
            InnerLiteral::pos(v(1)),
        ]);
        let term = Term::new([taut]);
        assert!(term.is_one());
    }

    #[test]
    fn normalization_drops_valid_clauses_and_false_literals() {
        let x = Term::new([InnerClause::new([InnerLiteral::pos(v(0))])]);
        let f = ClausalFormula::new(
            names(1),
            vec![
                // 1 = 1 makes the clause valid.
                OuterClause::new(vec![OuterLiteral::eq_one(Term::one()), OuterLiteral::ne_one(x.clone())]),
                // 1 != 1 is false and disappears from its clause.
                OuterClause::new(vec![OuterLiteral::ne_one(Term::one()), OuterLiteral::eq_one(x.clone())]),
                OuterClause::new(vec![OuterLiteral::eq_one(x.clone()), OuterLiteral::eq_one(x.clone())]),
            ],
        );
        let n = f.normalize();
        assert_eq!(n.clauses().len(), 1);
        assert_eq!(n.clauses()[0].literals(), &[OuterLiteral::eq_one(x)]);
    }

    #[test]
    fn normalization_is_idempotent_on_example() {
        let x = Term::new([InnerClause::new([InnerLiteral::pos(v(0)), InnerLiteral::neg(v(1))])]);
        let f = ClausalFormula::new(
            names(2),
            vec![
                OuterClause::new(vec![OuterLiteral::ne_one(x.clone()), OuterLiteral::eq_one(x.clone())]),
                OuterClause::unit(OuterLiteral::ne_one(x.clone())),
                OuterClause::unit(OuterLiteral::ne_one(x)),
            ],
        );
        let once = f.normalize();
        assert_eq!(once.clauses().len(), 1);
        assert_eq!(once.normalize(), once);
    }

    #[test]
    fn horn_report_counts_literals() {
        // {x, y} = 1 is not inner Horn.
        let xy = Term::new([InnerClause::new([InnerLiteral::pos(v(0)), InnerLiteral::pos(v(1))])]);
        let f = ClausalFormula::new(names(2), vec![OuterClause::unit(OuterLiteral::eq_one(xy.clone()))]);
        let r = classify_horn(&f);
        assert!(r.outer_horn && !r.positive_inner_horn && !r.horn_horn);

        // The same term under a negative literal is still Horn-Horn.
        let g = ClausalFormula::new(names(2), vec![OuterClause::unit(OuterLiteral::ne_one(xy))]);
        let r = classify_horn(&g);
        assert!(r.horn_horn && !r.all_inner_horn);

        let x = Term::new([InnerClause::new([InnerLiteral::pos(v(0))])]);
        let y = Term::new([InnerClause::new([InnerLiteral::pos(v(1))])]);
        let h = ClausalFormula::new(
            names(2),
            vec![OuterClause::new(vec![OuterLiteral::eq_one(x), OuterLiteral::eq_one(y)])],
        );
        assert!(!classify_horn(&h).outer_horn);
    }

    #[test]
    fn mask_evaluation_uses_full_universe() {
        // x = 1 over a two-point universe.
        let x = Term::new([InnerClause::new([InnerLiteral::pos(v(0))])]);
        let f = ClausalFormula::new(names(1), vec![OuterClause::unit(OuterLiteral::eq_one(x))]);
        assert!(f.holds_in_masks(&[0b11], 0b11));
        assert!(!f.holds_in_masks(&[0b01], 0b11));
    }
}
