//! Exact satisfiability without enumerating all patterns.
//!
//! Write `sat(t)` for the set of valuations at which `t` is 1, so that
//! `t = 1` holds under a pattern `b` iff `b ⊆ sat(t)`. If `b` satisfies a
//! formula, let `S` be the positive literals true under `b` and
//! `M = ⋂ { sat(t) : (t = 1) ∈ S }`. Then `b ⊆ M`, every literal of `S`
//! stays true under `M`, and every negative literal true under `b` stays
//! true under the larger pattern `M`. So a formula is satisfiable iff one
//! of the nonempty intersections of its positive literals' masks satisfies
//! it, and there are usually very few of those.

use std::collections::HashSet;

use fixedbitset::FixedBitSet;

use super::{common_vars, negate_clause, BlockModel};
use crate::error::{Error, Result};
use crate::formula::{ClausalFormula, Term};

/// Valuation sets are bitsets of `2^n` bits.
pub const EXACT_VAR_CAP: usize = 12;

struct Masks {
    clauses: Vec<Vec<(usize, bool)>>,
    masks: Vec<FixedBitSet>,
}

impl Masks {
    fn new(formula: &ClausalFormula) -> Self {
        let n = formula.num_vars();
        let mut masks: Vec<FixedBitSet> = Vec::new();
        let mut terms: Vec<&Term> = Vec::new();
        let clauses = formula
            .clauses()
            .iter()
            .map(|c| {
                c.literals()
                    .iter()
                    .map(|l| {
                        let id = terms.iter().position(|t| **t == l.term).unwrap_or_else(|| {
                            terms.push(&l.term);
                            masks.push(valuation_set(&l.term, n));
                            terms.len() - 1
                        });
                        (id, l.positive)
                    })
                    .collect()
            })
            .collect();
        Self { clauses, masks }
    }

    fn holds(&self, b: &FixedBitSet) -> bool {
        self.clauses
            .iter()
            .all(|c| c.iter().any(|&(id, positive)| b.is_subset(&self.masks[id]) == positive))
    }
}

fn valuation_set(term: &Term, n: usize) -> FixedBitSet {
    let mut set = FixedBitSet::with_capacity(1 << n);
    for w in 0..1usize << n {
        let value = term
            .clauses()
            .iter()
            .all(|c| c.literals().iter().any(|l| (w >> l.var.index() & 1 == 1) == l.positive));
        set.set(w, value);
    }
    set
}

fn check_cap(n: usize) -> Result<()> {
    if n > EXACT_VAR_CAP {
        return Err(Error::CapExceeded { vars: n, cap: EXACT_VAR_CAP });
    }
    Ok(())
}

fn find_support(formula: &ClausalFormula) -> Result<Option<FixedBitSet>> {
    let n = formula.num_vars();
    check_cap(n)?;
    let m = Masks::new(formula);
    let mut positives: Vec<usize> = m.clauses.iter().flatten().filter(|l| l.1).map(|l| l.0).collect();
    positives.sort_unstable();
    positives.dedup();
    let mut full = FixedBitSet::with_capacity(1 << n);
    full.insert_range(..);
    let mut seen = HashSet::from([full.clone()]);
    let mut stack = vec![full];
    while let Some(b) = stack.pop() {
        if m.holds(&b) {
            return Ok(Some(b));
        }
        for &p in &positives {
            let mut next = b.clone();
            next.intersect_with(&m.masks[p]);
            if next.count_ones(..) > 0 && seen.insert(next.clone()) {
                stack.push(next);
            }
        }
    }
    Ok(None)
}

/// Exact satisfiability for up to [`EXACT_VAR_CAP`] variables; a model has
/// one block per valuation of the satisfying support set.
pub fn exact_sat(formula: &ClausalFormula) -> Result<Option<BlockModel>> {
    let Some(b) = find_support(formula)? else {
        return Ok(None);
    };
    let regions: Vec<usize> = b.ones().collect();
    let entries: Vec<(String, Vec<usize>)> = formula
        .vars()
        .iter()
        .enumerate()
        .map(|(i, name)| {
            let blocks = regions.iter().enumerate().filter(|(_, &w)| w >> i & 1 == 1).map(|(j, _)| j).collect();
            (name.clone(), blocks)
        })
        .collect();
    Ok(Some(
        BlockModel::from_indices(regions.len(), entries.iter().map(|(n, v)| (n.clone(), v.as_slice())))
            .expect("indices in range"),
    ))
}

/// `phi` entails `psi`: for each clause `C` of `psi`, `phi ∧ ¬C` is
/// unsatisfiable.
pub fn exact_entails(phi: &ClausalFormula, psi: &ClausalFormula) -> Result<bool> {
    let (phi, psi) = common_vars(phi, psi);
    check_cap(phi.num_vars())?;
    for clause in psi.clauses() {
        let neg = negate_clause(phi.vars(), clause);
        let mut both = phi.clauses().to_vec();
        both.extend(neg.into_parts().1);
        if find_support(&ClausalFormula::new(phi.vars().to_vec(), both))?.is_some() {
            return Ok(false);
        }
    }
    Ok(true)
}

pub fn exact_equiv(phi: &ClausalFormula, psi: &ClausalFormula) -> Result<bool> {
    Ok(exact_entails(phi, psi)? && exact_entails(psi, phi)?)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::formula::to_clausal;
    use crate::oracle::{eval_block_model, oracle_sat};
    use crate::parse::parse_formula;

    fn f(text: &str) -> ClausalFormula {
        to_clausal(&parse_formula(text).unwrap())
    }

    #[test]
    fn agrees_with_enumeration_on_examples() {
        for text in [
            "(~x | ~y == 1) and ((x|y) == 1) and (x != 1) and (y != 1)",
            "x != x",
            "(x == 1) and (x != 1)",
            "(x == y or y == z) and x != y and y != z",
            "(x|y) == 1 and ~x == 1 and y != 1",
            "x & y != 0 and ~x | ~y == 1",
        ] {
            let phi = f(text);
            let exact = exact_sat(&phi).unwrap();
            assert_eq!(exact.is_some(), oracle_sat(&phi).unwrap().is_some(), "{text}");
            if let Some(m) = exact {
                assert!(eval_block_model(&phi, &m).unwrap());
            }
        }
    }

    #[test]
    fn eight_variables_are_fine() {
        let phi = f("a != b or c != d or e != g or ~h | k == 1");
        assert!(exact_sat(&phi).unwrap().is_some());
        let weaker = f("a != b or c != d or e != g or ~h | k == 1 or a == 1");
        assert!(exact_entails(&phi, &weaker).unwrap());
        assert!(!exact_entails(&weaker, &phi).unwrap());
    }
}
