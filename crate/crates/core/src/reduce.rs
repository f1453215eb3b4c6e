//! Rewriting relation definitions into Horn-Horn templates.
//!
//! The pipeline is: clausal form, inner-Horn splitting, strong reduction,
//! classification.
//!
//! Splitting replaces an inner clause `x1 | .. | xk | ~y..` (k ≥ 2) of a
//! positive literal `t = 1` by k literals `t_i = 1` in the same outer
//! clause, and splits an outer clause containing such a clause under a
//! negative literal `t != 1` into k clauses with `t_i != 1`, where `t_i`
//! keeps only `x_i` of the positive literals. This is not an equivalence,
//! but it preserves satisfaction for *core* assignments (pointwise images
//! under the map `e`), because a join of `e`-images is the top element
//! only if a single positive argument already reaches it.
//!
//! Strong reduction then drops outer literals one at a time while the
//! formula stays equivalent over the powerset algebra. On formulas whose
//! inner clauses are all Horn this is the same as preserving the satisfying
//! core assignments: `e` is injective and preserves every inner-Horn
//! literal in both directions, so two such formulas agree on all core
//! assignments iff they agree on all assignments.

use std::collections::BTreeMap;

use crate::error::{Error, Result};
use crate::formula::{classify_horn, ClausalFormula, InnerClause, InnerLiteral, OuterClause, OuterLiteral, Term};
use crate::instance::RelationDef;
use crate::oracle::{exact_entails, EXACT_VAR_CAP};
use crate::outer::Template;

/// Default arity limit for relations passed through strong reduction.
pub const DEFAULT_REDUCE_VAR_CAP: usize = 8;

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct ReduceConfig {
    pub var_cap: usize,
}

impl Default for ReduceConfig {
    fn default() -> Self {
        Self {
            var_cap: DEFAULT_REDUCE_VAR_CAP,
        }
    }
}

/// One rewrite, with coordinates into the formula it was applied to.
#[derive(Debug, Clone, PartialEq, Eq)]
pub enum RewriteStep {
    SplitPositive { clause: usize, literal: usize, inner: usize },
    SplitClause { clause: usize, literal: usize, inner: usize },
    RemoveLiteral { clause: usize, literal: usize },
}

impl std::fmt::Display for RewriteStep {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        match self {
            RewriteStep::SplitPositive { clause, literal, inner } => {
                write!(f, "split-positive clause={clause} literal={literal} inner={inner}")
            }
            RewriteStep::SplitClause { clause, literal, inner } => {
                write!(f, "split-clause clause={clause} literal={literal} inner={inner}")
            }
            RewriteStep::RemoveLiteral { clause, literal } => {
                write!(f, "remove-literal clause={clause} literal={literal}")
            }
        }
    }
}

/// `term` with inner clause `inner` restricted to the positive literal
/// `keep` plus all of its negative literals.
fn restrict(term: &Term, inner: usize, keep: InnerLiteral) -> Term {
    let c = &term.clauses()[inner];
    let narrowed = InnerClause::new(c.literals().iter().copied().filter(|l| !l.positive || *l == keep));
    Term::new(
        term.clauses()
            .iter()
            .enumerate()
            .map(|(i, d)| if i == inner { narrowed.clone() } else { d.clone() }),
    )
}

fn first_non_horn(phi: &ClausalFormula) -> Option<(usize, usize, usize)> {
    phi.clauses().iter().enumerate().find_map(|(ci, c)| {
        c.literals().iter().enumerate().find_map(|(li, l)| {
            l.term
                .clauses()
                .iter()
                .position(|d| !d.is_horn())
                .map(|ii| (ci, li, ii))
        })
    })
}

/// Splits non-Horn inner clauses until every inner clause is Horn.
pub fn inner_hornify(phi: &ClausalFormula) -> (ClausalFormula, Vec<RewriteStep>) {
    let mut phi = phi.normalize();
    let mut log = Vec::new();
    while let Some((ci, li, ii)) = first_non_horn(&phi) {
        let clause = &phi.clauses()[ci];
        let lit = &clause.literals()[li];
        let positives: Vec<InnerLiteral> = lit.term.clauses()[ii].literals().iter().copied().filter(|l| l.positive).collect();
        let pieces: Vec<Term> = positives.iter().map(|&p| restrict(&lit.term, ii, p)).collect();
        let others = || clause.literals().iter().enumerate().filter(|&(k, _)| k != li).map(|(_, l)| l.clone());
        let mut clauses: Vec<OuterClause> = phi.clauses()[..ci].to_vec();
        if lit.positive {
            log.push(RewriteStep::SplitPositive { clause: ci, literal: li, inner: ii });
            let mut lits: Vec<OuterLiteral> = others().collect();
            lits.extend(pieces.into_iter().map(OuterLiteral::eq_one));
            clauses.push(OuterClause::new(lits));
        } else {
            log.push(RewriteStep::SplitClause { clause: ci, literal: li, inner: ii });
            for t in pieces {
                let mut lits: Vec<OuterLiteral> = others().collect();
                lits.push(OuterLiteral::ne_one(t));
                clauses.push(OuterClause::new(lits));
            }
        }
        clauses.extend_from_slice(&phi.clauses()[ci + 1..]);
        phi = ClausalFormula::new(phi.vars().to_vec(), clauses).normalize();
    }
    (phi, log)
}

fn check_cap(phi: &ClausalFormula, cap: usize) -> Result<()> {
    let cap = cap.min(EXACT_VAR_CAP);
    if phi.num_vars() > cap {
        return Err(Error::CapExceeded { vars: phi.num_vars(), cap });
    }
    Ok(())
}

/// Removes outer literals while the formula stays equivalent, scanning by
/// clause index and then literal index and restarting after each removal.
pub fn strongly_reduce(phi: &ClausalFormula, config: ReduceConfig) -> Result<(ClausalFormula, Vec<RewriteStep>)> {
    check_cap(phi, config.var_cap)?;
    let mut phi = phi.normalize();
    let mut log = Vec::new();
    'restart: loop {
        for (ci, clause) in phi.clauses().iter().enumerate() {
            for li in 0..clause.len() {
                let mut lits = clause.literals().to_vec();
                lits.remove(li);
                let shorter = OuterClause::new(lits);
                let target = ClausalFormula::new(phi.vars().to_vec(), vec![shorter.clone()]);
                // Dropping a literal only strengthens the formula, so
                // equivalence is entailment of the shorter clause.
                if exact_entails(&phi, &target)? {
                    log.push(RewriteStep::RemoveLiteral { clause: ci, literal: li });
                    let mut clauses = phi.clauses().to_vec();
                    clauses[ci] = shorter;
                    phi = ClausalFormula::new(phi.vars().to_vec(), clauses).normalize();
                    continue 'restart;
                }
            }
        }
        return Ok((phi, log));
    }
}

#[derive(Debug, Clone)]
pub enum ReductionOutcome {
    HornHorn {
        template: Template,
        log: Vec<RewriteStep>,
    },
    /// The strongly reduced form still has a clause with two positive
    /// literals, so the relation is not preserved by `ei`.
    NotOuterHorn {
        reduced: ClausalFormula,
        clause: usize,
        log: Vec<RewriteStep>,
    },
}

impl ReductionOutcome {
    pub fn log(&self) -> &[RewriteStep] {
        match self {
            ReductionOutcome::HornHorn { log, .. } | ReductionOutcome::NotOuterHorn { log, .. } => log,
        }
    }
}

pub fn reduce_formula(phi: &ClausalFormula, config: ReduceConfig) -> Result<ReductionOutcome> {
    check_cap(phi, config.var_cap)?;
    let (split, mut log) = inner_hornify(phi);
    let (reduced, removals) = strongly_reduce(&split, config)?;
    log.extend(removals);
    let report = classify_horn(&reduced);
    if report.outer_horn {
        debug_assert!(report.all_inner_horn);
        Ok(ReductionOutcome::HornHorn {
            template: Template::certified(reduced),
            log,
        })
    } else {
        let clause = reduced
            .clauses()
            .iter()
            .position(|c| c.positive_count() > 1)
            .expect("not outer Horn");
        Ok(ReductionOutcome::NotOuterHorn { reduced, clause, log })
    }
}

pub fn reduce_relation(def: &RelationDef, config: ReduceConfig) -> Result<ReductionOutcome> {
    reduce_formula(&def.to_clausal()?, config)
}

/// Templates for every definition, or the first relation that is not
/// outer Horn after reduction.
pub fn reduce_language(defs: &[RelationDef], config: ReduceConfig) -> Result<BTreeMap<String, Template>> {
    let mut out = BTreeMap::new();
    for def in defs {
        match reduce_relation(def, config)? {
            ReductionOutcome::HornHorn { template, .. } => {
                out.insert(def.name.clone(), template);
            }
            ReductionOutcome::NotOuterHorn { reduced, clause, .. } => {
                let text = ClausalFormula::new(reduced.vars().to_vec(), vec![reduced.clauses()[clause].clone()]);
                return Err(Error::NotOuterHorn {
                    relation: def.name.clone(),
                    clause: text.to_string(),
                });
            }
        }
    }
    Ok(out)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::formula::to_clausal;
    use crate::oracle::oracle_equiv;
    use crate::parse::parse_formula;

    fn f(text: &str) -> ClausalFormula {
        to_clausal(&parse_formula(text).unwrap())
    }

    fn def(name: &str, params: &[&str], body: &str) -> RelationDef {
        RelationDef::new(name, params.iter().map(|s| s.to_string()).collect(), parse_formula(body).unwrap())
    }

    #[test]
    fn split_positive_join() {
        let (g, log) = inner_hornify(&f("(x|y) == 1"));
        assert_eq!(g.to_string(), "x == 1 or y == 1");
        assert_eq!(log, vec![RewriteStep::SplitPositive { clause: 0, literal: 0, inner: 0 }]);
    }

    #[test]
    fn split_clause_under_negative_literal() {
        let (g, _) = inner_hornify(&f("v == 1 or u == 1 or (x|y) != 1"));
        assert_eq!(g.clauses().len(), 2);
        assert!(g.clauses().iter().all(|c| c.len() == 3 && c.positive_count() == 2));
    }

    #[test]
    fn horn_input_is_a_fixpoint() {
        let phi = f("~x | y == 1 and x != y");
        let (g, log) = inner_hornify(&phi);
        assert_eq!(g, phi);
        assert!(log.is_empty());
    }

    #[test]
    fn strong_reduction_drops_redundant_literal() {
        // x ⊑ y holds, so the second clause reduces to x ⊑ y and merges.
        let phi = f("~x | y == 1 and (~x | y == 1 or x != 1)");
        let (g, log) = strongly_reduce(&phi, ReduceConfig::default()).unwrap();
        assert_eq!(g, f("~x | y == 1"));
        assert_eq!(log.len(), 1);
        assert!(oracle_equiv(&g, &phi).unwrap());
    }

    #[test]
    fn relation_verdicts() {
        let cfg = ReduceConfig::default();
        let subset = reduce_relation(&def("S", &["x", "y"], "~x | y == 1"), cfg).unwrap();
        let ReductionOutcome::HornHorn { template, .. } = subset else { panic!() };
        assert_eq!(template.formula(), &f("~x | y == 1"));
        let union = reduce_relation(&def("U", &["x", "y", "z"], "(x|y) == z"), cfg).unwrap();
        assert!(matches!(union, ReductionOutcome::NotOuterHorn { .. }));
        let e7 = def(
            "E7",
            &["x", "y", "u", "v"],
            "((x|y != 1) or ((u|v) == 1)) and (~x|y != 1) and (x|~y != 1)",
        );
        assert!(matches!(reduce_relation(&e7, cfg).unwrap(), ReductionOutcome::HornHorn { .. }));
    }

    #[test]
    fn language_failure_names_relation() {
        let defs = vec![def("Subset", &["x", "y"], "~x | y == 1"), def("Union", &["x", "y", "z"], "(x|y) == z")];
        match reduce_language(&defs, ReduceConfig::default()) {
            Err(Error::NotOuterHorn { relation, .. }) => assert_eq!(relation, "Union"),
            other => panic!("{other:?}"),
        }
    }

    #[test]
    fn cap_refusal() {
        let wide = def("W", &["a", "b", "c", "d", "e"], "a | b | c | d | e == 1");
        let r = reduce_relation(&wide, ReduceConfig { var_cap: 4 });
        assert!(matches!(r, Err(Error::CapExceeded { .. })));
    }
}
