//! Brute-force ground truth for set constraints.
//!
//! Key fact: for `n` variables over the powerset of an infinite set,
//! the truth value of a quantifier-free formula depends only on which of
//! the `2^n` minterm regions `x1^w1 ∩ ... ∩ xn^wn` are nonempty. Any
//! nonzero pattern of nonempty regions is realizable (split the universe
//! into that many nonempty classes), and under a pattern `b` a term `t`
//! equals the universe iff every region in `b` lies inside `t`, i.e. iff
//! `t` evaluates to 1 at every valuation `w` with `b_w = 1`. Satisfiability
//! over the powerset algebra is therefore decided by enumerating the
//! `2^(2^n) - 1` nonzero patterns, which is what [`Oracle::sat`] does.

mod block;
mod points;
mod support;

use crate::error::{Error, Result};
use crate::formula::{ClausalFormula, OuterClause, Term};

pub use block::{eval_block_model, first_false_clause, BlockModel};
pub use points::{brute_force_points, DEFAULT_POINT_BUDGET};
pub use support::{exact_entails, exact_equiv, exact_sat, EXACT_VAR_CAP};

pub const DEFAULT_VAR_CAP: usize = 4;
/// Patterns are stored in a `u64`, one bit per minterm.
pub const MAX_VAR_CAP: usize = 6;

/// The set of nonempty minterm regions of `n` variables. Bit `w` stands for
/// the valuation in which variable `i` is true iff bit `i` of `w` is set.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub struct MintermPattern {
    n: usize,
    bits: u64,
}

impl MintermPattern {
    pub fn new(n: usize, bits: u64) -> Result<Self> {
        if n > MAX_VAR_CAP {
            return Err(Error::CapExceeded { vars: n, cap: MAX_VAR_CAP });
        }
        if bits == 0 || bits & !full_mask(n) != 0 {
            return Err(Error::Precondition(format!(
                "pattern {bits:#b} is not a nonzero subset of the {} minterms",
                1u64 << n
            )));
        }
        Ok(Self { n, bits })
    }

    pub fn n(&self) -> usize {
        self.n
    }

    pub fn bits(&self) -> u64 {
        self.bits
    }

    pub fn contains(&self, minterm: usize) -> bool {
        self.bits >> minterm & 1 == 1
    }
}

/// Mask of all `2^n` minterms.
fn full_mask(n: usize) -> u64 {
    if n >= 6 {
        u64::MAX
    } else {
        (1u64 << (1 << n)) - 1
    }
}

/// `cols[i]` is the set of minterms in which variable `i` is true.
fn columns(n: usize) -> Vec<u64> {
    (0..n)
        .map(|i| (0..1usize << n).filter(|w| w >> i & 1 == 1).fold(0u64, |m, w| m | 1 << w))
        .collect()
}

/// Truth of `formula` under any assignment whose nonempty regions are `b`.
pub fn eval_pattern(formula: &ClausalFormula, b: &MintermPattern) -> Result<bool> {
    if formula.num_vars() != b.n {
        return Err(Error::DimensionMismatch {
            expected: formula.num_vars(),
            found: b.n,
        });
    }
    let values: Vec<u64> = columns(b.n).into_iter().map(|c| c & b.bits).collect();
    Ok(formula.holds_in_masks(&values, b.bits))
}

/// Converts a pattern into a block model: one block per nonempty region,
/// in increasing minterm order.
pub fn pattern_to_block_model(b: &MintermPattern, vars: &[String]) -> BlockModel {
    assert_eq!(vars.len(), b.n, "pattern and variable list disagree");
    let regions: Vec<usize> = (0..1usize << b.n).filter(|&w| b.contains(w)).collect();
    let entries: Vec<(String, Vec<usize>)> = vars
        .iter()
        .enumerate()
        .map(|(i, name)| {
            let blocks = regions
                .iter()
                .enumerate()
                .filter(|(_, &w)| w >> i & 1 == 1)
                .map(|(j, _)| j)
                .collect();
            (name.clone(), blocks)
        })
        .collect();
    BlockModel::from_indices(regions.len(), entries.iter().map(|(n, v)| (n.clone(), v.as_slice())))
        .expect("indices are in range by construction")
}

/// A formula compiled to per-literal minterm masks: `t = 1` holds under
/// pattern `b` iff `b ⊆ sat(t)`.
struct Compiled {
    clauses: Vec<Vec<(u64, bool)>>,
}

impl Compiled {
    fn new(formula: &ClausalFormula) -> Self {
        let n = formula.num_vars();
        let cols = columns(n);
        let full = full_mask(n);
        Self {
            clauses: formula
                .clauses()
                .iter()
                .map(|c| c.literals().iter().map(|l| (term_mask(&l.term, &cols, full), l.positive)).collect())
                .collect(),
        }
    }

    #[inline]
    fn holds(&self, b: u64) -> bool {
        self.clauses
            .iter()
            .all(|c| c.iter().any(|&(m, positive)| (b & !m == 0) == positive))
    }
}

fn term_mask(term: &Term, cols: &[u64], full: u64) -> u64 {
    term.clauses().iter().fold(full, |acc, c| {
        acc & c.literals().iter().fold(0u64, |j, l| {
            let col = cols[l.var.index()];
            j | if l.positive { col } else { !col & full }
        })
    })
}

/// Brute-force oracle with an explicit variable cap.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct Oracle {
    pub var_cap: usize,
}

impl Default for Oracle {
    fn default() -> Self {
        Self { var_cap: DEFAULT_VAR_CAP }
    }
}

impl Oracle {
    pub fn with_cap(var_cap: usize) -> Self {
        Self { var_cap }
    }

    fn check_cap(&self, n: usize) -> Result<()> {
        let cap = self.var_cap.min(MAX_VAR_CAP);
        if n > cap {
            return Err(Error::CapExceeded { vars: n, cap });
        }
        Ok(())
    }

    /// The lexicographically first satisfying pattern, or `None`.
    pub fn sat(&self, formula: &ClausalFormula) -> Result<Option<MintermPattern>> {
        let n = formula.num_vars();
        self.check_cap(n)?;
        let compiled = Compiled::new(formula);
        let full = full_mask(n);
        let hit = (1..=full).find(|&b| compiled.holds(b));
        Ok(hit.map(|bits| MintermPattern { n, bits }))
    }

    /// No pattern satisfies `phi` but falsifies `psi`.
    pub fn entails(&self, phi: &ClausalFormula, psi: &ClausalFormula) -> Result<bool> {
        let (phi, psi) = common_vars(phi, psi);
        self.check_cap(phi.num_vars())?;
        let (a, b) = (Compiled::new(&phi), Compiled::new(&psi));
        Ok((1..=full_mask(phi.num_vars())).all(|m| !a.holds(m) || b.holds(m)))
    }

    /// `phi` and `psi` agree on every nonzero pattern.
    pub fn equiv(&self, phi: &ClausalFormula, psi: &ClausalFormula) -> Result<bool> {
        let (phi, psi) = common_vars(phi, psi);
        self.check_cap(phi.num_vars())?;
        let (a, b) = (Compiled::new(&phi), Compiled::new(&psi));
        Ok((1..=full_mask(phi.num_vars())).all(|m| a.holds(m) == b.holds(m)))
    }
}

pub fn oracle_sat(formula: &ClausalFormula) -> Result<Option<MintermPattern>> {
    Oracle::default().sat(formula)
}

pub fn oracle_entails(phi: &ClausalFormula, psi: &ClausalFormula) -> Result<bool> {
    Oracle::default().entails(phi, psi)
}

pub fn oracle_equiv(phi: &ClausalFormula, psi: &ClausalFormula) -> Result<bool> {
    Oracle::default().equiv(phi, psi)
}

/// Re-expresses both formulas over the union of their variable lists
/// (`phi`'s variables first, in order).
pub(crate) fn common_vars(phi: &ClausalFormula, psi: &ClausalFormula) -> (ClausalFormula, ClausalFormula) {
    if phi.vars() == psi.vars() {
        return (phi.clone(), psi.clone());
    }
    let mut names = phi.vars().to_vec();
    for v in psi.vars() {
        if !names.contains(v) {
            names.push(v.clone());
        }
    }
    (
        phi.rebase(&names).expect("superset of variables"),
        psi.rebase(&names).expect("superset of variables"),
    )
}

/// The formula `¬C` as a conjunction of unit clauses.
pub(crate) fn negate_clause(vars: &[String], clause: &OuterClause) -> ClausalFormula {
    ClausalFormula::new(
        vars.to_vec(),
        clause.literals().iter().map(|l| OuterClause::unit(l.negated())).collect(),
    )
}

/// A finite assignment: each variable denotes a subset of the atoms
/// `0..atoms`, stored as a bit mask.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct FiniteAssignment {
    pub atoms: usize,
    pub values: Vec<u64>,
}

impl FiniteAssignment {
    pub fn new(atoms: usize, values: Vec<u64>) -> Self {
        assert!(atoms <= 64, "at most 64 atoms");
        let full = Self::full_of(atoms);
        assert!(values.iter().all(|v| v & !full == 0), "value outside the atom set");
        Self { atoms, values }
    }

    pub fn full_of(atoms: usize) -> u64 {
        if atoms == 64 {
            u64::MAX
        } else {
            (1u64 << atoms) - 1
        }
    }

    pub fn full(&self) -> u64 {
        Self::full_of(self.atoms)
    }

    /// Finite evaluation: `t = 1` iff `t` denotes the whole atom set.
    pub fn satisfies(&self, formula: &ClausalFormula) -> bool {
        formula.holds_in_masks(&self.values, self.full())
    }

    pub fn first_false_clause(&self, formula: &ClausalFormula) -> Option<usize> {
        formula.first_false_clause_in_masks(&self.values, self.full())
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::formula::to_clausal;
    use crate::parse::parse_formula;

    fn f(text: &str) -> ClausalFormula {
        to_clausal(&parse_formula(text).unwrap())
    }

    #[test]
    fn eval_pattern_examples() {
        let x = f("x == 1");
        assert!(eval_pattern(&x, &MintermPattern::new(1, 0b10).unwrap()).unwrap());
        assert!(!eval_pattern(&x, &MintermPattern::new(1, 0b11).unwrap()).unwrap());
        let taut = f("x == x");
        for b in 1..4 {
            assert!(eval_pattern(&taut, &MintermPattern::new(1, b).unwrap()).unwrap());
        }
        assert!(matches!(
            eval_pattern(&x, &MintermPattern::new(2, 1).unwrap()),
            Err(Error::DimensionMismatch { .. })
        ));
    }

    #[test]
    fn sat_examples() {
        let partition = f("(~x | ~y == 1) and ((x|y) == 1) and (x != 1) and (y != 1)");
        let b = oracle_sat(&partition).unwrap().unwrap();
        // Minterm 1 is x∩~y, minterm 2 is ~x∩y.
        assert_eq!(b.bits(), 0b0110);
        assert!(oracle_sat(&f("x != x")).unwrap().is_none());
        assert!(oracle_sat(&f("(x == 1) and (x != 1)")).unwrap().is_none());
    }

    #[test]
    fn equiv_examples() {
        assert!(oracle_equiv(&f("~x | y == 1"), &f("x & y == x")).unwrap());
        let p = f("(x|y) == 1");
        assert!(oracle_equiv(&p, &p).unwrap());
        assert!(!oracle_equiv(&p, &f("(x == 1) or (y == 1)")).unwrap());
        assert!(oracle_entails(&f("(x == 1) or (y == 1)"), &p).unwrap());
    }

    #[test]
    fn cap_is_enforced() {
        let big = f("a | b | c | d | e == 1");
        assert!(matches!(oracle_sat(&big), Err(Error::CapExceeded { vars: 5, cap: 4 })));
        assert!(Oracle::with_cap(5).sat(&big).unwrap().is_some());
    }

    #[test]
    fn pattern_to_block_model_examples() {
        let vars = vec!["x".to_string()];
        let m = pattern_to_block_model(&MintermPattern::new(1, 0b10).unwrap(), &vars);
        assert_eq!((m.blocks(), m.indices("x").unwrap()), (1, vec![0]));
        let m = pattern_to_block_model(&MintermPattern::new(1, 0b01).unwrap(), &vars);
        assert_eq!((m.blocks(), m.indices("x").unwrap()), (1, vec![]));
        let vars = vec!["x".to_string(), "y".to_string()];
        let m = pattern_to_block_model(&MintermPattern::new(2, 0b0010).unwrap(), &vars);
        assert_eq!(m.indices("x").unwrap(), vec![0]);
        assert_eq!(m.indices("y").unwrap(), Vec::<usize>::new());
    }
}
