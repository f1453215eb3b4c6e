//! Deciding whether a relation is preserved by `ei`.
//!
//! The verdict comes from the reduction pipeline: a relation whose strongly
//! reduced, inner-Horn form is not outer Horn is not preserved by `ei`, and
//! otherwise the Horn-Horn template is reported. A bounded search for a
//! concrete violation of the finite analog of `ei` runs as a guard.
//!
//! Finite analogs. For atom sets `A1`, `A2`, `finite_i` is the tagged
//! disjoint union `P(A1) x P(A2) -> P(A1 ⊎ A2)`. For an atom set `A`,
//! `finite_e` maps `P(A)` into `P(P(A))` by `g(x) = { z : z ≠ ∅, z ⊆ x }`
//! for `x ≠ A` and `g(A) = P(A)`. Values are bit masks; `finite_e` needs
//! `2^|A| ≤ 64`.

use std::fmt;

use fixedbitset::FixedBitSet;

use crate::error::{Error, Result};
use crate::formula::ClausalFormula;
use crate::instance::RelationDef;
use crate::oracle::{BlockModel, FiniteAssignment};
use crate::outer::Template;
use crate::reduce::{reduce_formula, ReduceConfig, ReductionOutcome, RewriteStep};

/// Tagged union: atoms of the left argument come first.
pub fn finite_i(u: u64, v: u64, left_atoms: usize) -> u64 {
    debug_assert!(left_atoms < 64 && u >> left_atoms == 0);
    u | v << left_atoms
}

/// `g(x)` as a mask over the `2^atoms` subsets of the atom set, where bit
/// `z` stands for the subset with mask `z`.
pub fn finite_e(x: u64, atoms: usize) -> u64 {
    assert!(atoms <= 6, "finite_e needs 2^atoms <= 64");
    let full = FiniteAssignment::full_of(atoms);
    let universe = FiniteAssignment::full_of(1 << atoms);
    if x == full {
        return universe;
    }
    let mut out = 0u64;
    // Enumerate the nonempty submasks of x.
    let mut z = x;
    while z != 0 {
        out |= 1 << z;
        z = (z - 1) & x;
    }
    out
}

pub const DEFAULT_SEARCH_ATOMS: usize = 1;
pub const DEFAULT_SEARCH_BUDGET: u64 = 20_000_000;

/// Two models `u`, `v` of `φ` whose composite `w = g(i(u, v))` falsifies
/// outer clause `clause`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Counterexample {
    pub u: FiniteAssignment,
    pub v: FiniteAssignment,
    pub w: FiniteAssignment,
    pub clause: usize,
}

impl Counterexample {
    /// Re-evaluates the three assignments against `phi`.
    pub fn replays(&self, phi: &ClausalFormula) -> bool {
        let atoms = self.u.atoms;
        let w = composite(&self.u, &self.v);
        self.u.satisfies(phi)
            && self.v.satisfies(phi)
            && self.v.atoms == atoms
            && w == self.w
            && w.first_false_clause(phi) == Some(self.clause)
    }

    pub fn report(&self, phi: &ClausalFormula) -> String {
        let mut out = String::new();
        let fmt_set = |m: u64, atoms: usize| {
            let items: Vec<String> = (0..atoms).filter(|a| m >> a & 1 == 1).map(|a| a.to_string()).collect();
            format!("{{{}}}", items.join(","))
        };
        let m = self.u.atoms;
        for (i, name) in phi.vars().iter().enumerate() {
            out.push_str(&format!(
                "{name}: u={} v={} w={}\n",
                fmt_set(self.u.values[i], m),
                fmt_set(self.v.values[i], m),
                fmt_set(self.w.values[i], self.w.atoms),
            ));
        }
        let clause = ClausalFormula::new(phi.vars().to_vec(), vec![phi.clauses()[self.clause].clone()]);
        out.push_str(&format!("falsified clause {}: {clause}\n", self.clause));
        out
    }
}

fn composite(u: &FiniteAssignment, v: &FiniteAssignment) -> FiniteAssignment {
    let m = u.atoms;
    let values = u
        .values
        .iter()
        .zip(&v.values)
        .map(|(&a, &b)| finite_e(finite_i(a, b, m), 2 * m))
        .collect();
    FiniteAssignment::new(1 << (2 * m), values)
}

/// What the guard search covered.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct SearchReport {
    pub atoms: usize,
    pub pairs_checked: u64,
}

/// Enumerates pairs of models of `phi` over `P(A)`, `|A| = atoms`, in
/// lexicographic order and returns the first pair whose `ei` composite
/// falsifies `phi`.
pub fn search_ei_counterexample(
    phi: &ClausalFormula,
    atoms: usize,
    budget: u64,
) -> Result<(Option<Counterexample>, SearchReport)> {
    if atoms == 0 || atoms > 3 {
        return Err(Error::Precondition(format!("atom budget {atoms} must be 1, 2 or 3")));
    }
    let n = phi.num_vars();
    let per_var = 1u64 << atoms;
    let total = per_var.checked_pow(n as u32).filter(|&t| t <= budget).ok_or(Error::BudgetExceeded { budget })?;
    let models: Vec<FiniteAssignment> = (0..total)
        .map(|code| {
            // Variable 0 is the most significant digit.
            let values = (0..n)
                .map(|i| code / per_var.pow((n - 1 - i) as u32) % per_var)
                .collect();
            FiniteAssignment::new(atoms, values)
        })
        .filter(|a| a.satisfies(phi))
        .collect();
    let mut report = SearchReport { atoms, pairs_checked: 0 };
    for u in &models {
        for v in &models {
            report.pairs_checked += 1;
            if report.pairs_checked > budget {
                return Err(Error::BudgetExceeded { budget });
            }
            let w = composite(u, v);
            if let Some(clause) = w.first_false_clause(phi) {
                let cex = Counterexample {
                    u: u.clone(),
                    v: v.clone(),
                    w,
                    clause,
                };
                return Ok((Some(cex), report));
            }
        }
    }
    Ok((None, report))
}

#[derive(Debug, Clone)]
pub enum OutReason {
    NotOuterHorn { reduced: ClausalFormula, clause: usize },
    Counterexample(Counterexample),
}

#[derive(Debug, Clone)]
pub enum MembershipVerdict {
    In {
        template: Template,
        log: Vec<RewriteStep>,
        search: SearchReport,
    },
    Out(OutReason),
}

impl MembershipVerdict {
    pub fn is_in(&self) -> bool {
        matches!(self, MembershipVerdict::In { .. })
    }
}

impl fmt::Display for MembershipVerdict {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            MembershipVerdict::In { template, search, .. } => write!(
                f,
                "IN template: {} (no ei violation among {} model pairs over {} atom(s))",
                template.formula(),
                search.pairs_checked,
                search.atoms
            ),
            MembershipVerdict::Out(OutReason::NotOuterHorn { reduced, clause }) => {
                let c = ClausalFormula::new(reduced.vars().to_vec(), vec![reduced.clauses()[*clause].clone()]);
                write!(f, "OUT not outer Horn after reduction: {reduced}; offending clause: {c}")
            }
            MembershipVerdict::Out(OutReason::Counterexample(c)) => {
                write!(f, "OUT ei violation at clause {}", c.clause)
            }
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct MembershipConfig {
    pub reduce: ReduceConfig,
    pub atoms: usize,
    pub budget: u64,
}

impl Default for MembershipConfig {
    fn default() -> Self {
        Self {
            reduce: ReduceConfig::default(),
            atoms: DEFAULT_SEARCH_ATOMS,
            budget: DEFAULT_SEARCH_BUDGET,
        }
    }
}

pub fn check_membership(def: &RelationDef, config: MembershipConfig) -> Result<MembershipVerdict> {
    check_formula_membership(&def.to_clausal()?, config)
}

pub fn check_formula_membership(phi: &ClausalFormula, config: MembershipConfig) -> Result<MembershipVerdict> {
    match reduce_formula(phi, config.reduce)? {
        ReductionOutcome::NotOuterHorn { reduced, clause, .. } => {
            Ok(MembershipVerdict::Out(OutReason::NotOuterHorn { reduced, clause }))
        }
        ReductionOutcome::HornHorn { template, log } => {
            let (cex, search) = search_ei_counterexample(phi, config.atoms, config.budget)?;
            if let Some(c) = cex {
                return Err(Error::Internal(format!(
                    "reduction produced a Horn-Horn template but ei is violated:\n{}",
                    c.report(phi)
                )));
            }
            Ok(MembershipVerdict::In { template, log, search })
        }
    }
}

/// The largest number of positive literals in an inner clause of the
/// definitions (at least 1).
pub fn max_inner_positives(defs: &[RelationDef]) -> Result<usize> {
    let mut k = 1;
    for d in defs {
        let phi = d.to_clausal()?;
        for c in phi.clauses() {
            for l in c.literals() {
                for ic in l.term.clauses() {
                    k = k.max(ic.positive_count());
                }
            }
        }
    }
    Ok(k)
}

pub const DEFAULT_LIFT_LIMIT: usize = 1 << 22;

/// Applies the finite `e` map to a block model, keeping only the subsets of
/// at most `k` blocks. Merges duplicate blocks first.
///
/// The result is a core assignment for every term whose inner clauses have
/// at most `k` positive literals: such a join of images is the whole
/// universe only if one positive argument already covers the meet of the
/// negated arguments, since a missing element can be assembled from one
/// witness block per positive argument. Models of a reduced template
/// therefore become models of the original definitions.
pub fn core_lift(model: &BlockModel, k: usize, limit: usize) -> Result<BlockModel> {
    let base = model.dedup_blocks();
    let s = base.blocks();
    let mut subsets: Vec<Vec<usize>> = vec![Vec::new()];
    let mut frontier: Vec<Vec<usize>> = vec![Vec::new()];
    for _ in 0..k.min(s) {
        let mut next = Vec::new();
        for z in &frontier {
            let start = z.last().map_or(0, |&j| j + 1);
            for j in start..s {
                let mut y = z.clone();
                y.push(j);
                next.push(y);
            }
            if subsets.len() + next.len() > limit {
                return Err(Error::BudgetExceeded { budget: limit as u64 });
            }
        }
        subsets.extend(next.iter().cloned());
        frontier = next;
    }
    let values = base
        .values()
        .iter()
        .map(|x| {
            let top = x.count_ones(..) == s;
            let mut set = FixedBitSet::with_capacity(subsets.len());
            for (i, z) in subsets.iter().enumerate() {
                if top || (!z.is_empty() && z.iter().all(|&j| x[j])) {
                    set.insert(i);
                }
            }
            set
        })
        .collect();
    Ok(BlockModel::new(subsets.len(), base.names().to_vec(), values))
}
