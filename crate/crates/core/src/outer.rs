//! Two-level resolution for Horn-Horn clause sets.
//!
//! Each pass collects `Ψ`, the inner clauses of all positive unit clauses,
//! rejects if unit propagation refutes `Ψ`, and otherwise deletes from
//! every negative literal `t != 1` the inner clauses `D` with `Ψ ⊨ D = 1`.
//! A negative literal that loses all its inner clauses is false and is
//! removed from its clause. Passes repeat while literals are removed; an
//! empty outer clause rejects. Every step preserves the set of models.
//!
//! `Ψ` only grows from pass to pass, so it is kept in one incremental
//! [`InnerState`] and every entailment query is a trial propagation that
//! is undone afterwards.
//!
//! On acceptance the surviving inner clauses `D_1..D_s` of negative
//! literals each give a two-valued model `α_j` of `Ψ` in which `D_j` is 0
//! (the closure of `Ψ` plus `y = 1` for the negative literals `~y` of
//! `D_j`). Block `j` of the witness follows `α_j`: a variable contains
//! block `j` iff `α_j` makes it 1.

use std::collections::BTreeMap;

use fixedbitset::FixedBitSet;

use crate::error::{Error, Result};
use crate::formula::{classify_horn, ClausalFormula, InnerClause, Var};
use crate::inner::InnerState;
use crate::instance::CspInstance;
use crate::oracle::{first_false_clause, BlockModel};

#[derive(Debug, Clone, Copy, Default, PartialEq, Eq)]
pub struct SolveStats {
    /// Passes of the main loop.
    pub iterations: usize,
    /// Entailment queries plus one propagation of `Ψ` per pass.
    pub inner_res_calls: usize,
    pub inner_clauses_removed: usize,
    pub literals_removed: usize,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub enum TraceEvent {
    /// Negative literal `literal` of outer clause `clause` lost all its
    /// inner clauses (indices into its term), each entailed by `Ψ`.
    LiteralRemoved {
        pass: usize,
        clause: usize,
        literal: usize,
        inner: Vec<usize>,
    },
    /// Unit propagation refuted `Ψ`: it emptied inner clause `inner` of
    /// the positive unit clause `clause` after propagating `propagated`.
    PsiRejected {
        pass: usize,
        clause: usize,
        inner: usize,
        propagated: Vec<Var>,
    },
    /// Outer clause `clause` has no literals left.
    EmptyClause { pass: usize, clause: usize },
}

#[derive(Debug, Clone)]
pub enum SolveOutcome {
    Sat { model: BlockModel, stats: SolveStats },
    Unsat { trace: Vec<TraceEvent>, stats: SolveStats },
}

impl SolveOutcome {
    pub fn is_sat(&self) -> bool {
        matches!(self, SolveOutcome::Sat { .. })
    }

    pub fn stats(&self) -> &SolveStats {
        match self {
            SolveOutcome::Sat { stats, .. } | SolveOutcome::Unsat { stats, .. } => stats,
        }
    }
}

/// A negative literal with surviving inner clauses.
struct NegLit {
    clause: usize,
    literal: usize,
    alive: usize,
    removed: Vec<usize>,
}

/// A surviving inner clause `D` of a negative literal. Its literals live in
/// a shared arena, positives first, so a pass streams through memory.
struct LiveClause {
    start: u32,
    positives: u32,
    len: u32,
    neg: u32,
    inner: u32,
}

impl LiveClause {
    fn split<'a>(&self, arena: &'a [Var]) -> (&'a [Var], &'a [Var]) {
        let lits = &arena[self.start as usize..(self.start + self.len) as usize];
        lits.split_at(self.positives as usize)
    }
}

/// Decides a Horn-Horn clause set.
pub fn outer_res(phi: &ClausalFormula) -> Result<SolveOutcome> {
    if let Some(clause) = phi.clauses().iter().position(|c| c.positive_count() > 1) {
        return Err(Error::NotHornHorn { clause });
    }
    if !classify_horn(phi).horn_horn {
        let clause = phi
            .clauses()
            .iter()
            .position(|c| {
                c.literals()
                    .iter()
                    .any(|l| l.positive && !l.term.clauses().iter().all(InnerClause::is_horn))
            })
            .unwrap_or(0);
        return Err(Error::NotHornHorn { clause });
    }

    let clauses = phi.clauses();
    let mut stats = SolveStats::default();
    let mut trace = Vec::new();
    let mut psi = InnerState::new(phi.num_vars());
    // Ψ clause index -> (outer clause, inner clause) for rejection traces.
    let mut psi_source: Vec<(usize, usize)> = Vec::new();
    let mut negatives_left: Vec<usize> = clauses
        .iter()
        .map(|c| c.literals().iter().filter(|l| !l.positive).count())
        .collect();
    let mut negs: Vec<NegLit> = Vec::new();
    let mut arena: Vec<Var> = Vec::new();
    let mut live: Vec<LiveClause> = Vec::new();
    for (ci, c) in clauses.iter().enumerate() {
        for (li, l) in c.literals().iter().enumerate().filter(|(_, l)| !l.positive) {
            let neg = negs.len() as u32;
            for (ii, d) in l.term.clauses().iter().enumerate() {
                let start = arena.len() as u32;
                arena.extend(d.positives());
                let positives = arena.len() as u32 - start;
                arena.extend(d.negatives());
                live.push(LiveClause {
                    start,
                    positives,
                    len: arena.len() as u32 - start,
                    neg,
                    inner: ii as u32,
                });
            }
            negs.push(NegLit {
                clause: ci,
                literal: li,
                alive: l.term.clauses().len(),
                removed: Vec::new(),
            });
        }
    }
    // A negative literal with term 1 has no inner clauses and is false.
    for n in negs.iter().filter(|n| n.alive == 0) {
        negatives_left[n.clause] -= 1;
        stats.literals_removed += 1;
        trace.push(TraceEvent::LiteralRemoved {
            pass: 1,
            clause: n.clause,
            literal: n.literal,
            inner: Vec::new(),
        });
    }

    let mut ready: Vec<usize> = (0..clauses.len()).filter(|&ci| negatives_left[ci] == 0).collect();
    loop {
        stats.iterations += 1;
        let pass = stats.iterations;
        // Clauses down to their positive literal (if any) since last pass.
        ready.sort_unstable();
        if let Some(&clause) = ready.iter().find(|&&ci| clauses[ci].positive_count() == 0) {
            trace.push(TraceEvent::EmptyClause { pass, clause });
            return Ok(SolveOutcome::Unsat { trace, stats });
        }
        for ci in ready.drain(..) {
            let term = &clauses[ci].literals().iter().find(|l| l.positive).expect("positive unit").term;
            for (ii, d) in term.clauses().iter().enumerate() {
                psi_source.push((ci, ii));
                psi.add_clause(d);
            }
        }
        stats.inner_res_calls += 1;
        if let Some(k) = psi.conflict() {
            let (clause, inner) = psi_source[k];
            trace.push(TraceEvent::PsiRejected {
                pass,
                clause,
                inner,
                propagated: psi.propagated().to_vec(),
            });
            return Ok(SolveOutcome::Unsat { trace, stats });
        }

        let mut repeat = false;
        live.retain(|d| {
            stats.inner_res_calls += 1;
            let (pos, neg) = d.split(&arena);
            if !psi.trial_split(pos, neg, |_| {}) {
                return true;
            }
            stats.inner_clauses_removed += 1;
            let n = &mut negs[d.neg as usize];
            n.removed.push(d.inner as usize);
            n.alive -= 1;
            if n.alive == 0 {
                negatives_left[n.clause] -= 1;
                if negatives_left[n.clause] == 0 {
                    ready.push(n.clause);
                }
                stats.literals_removed += 1;
                repeat = true;
                let mut inner = std::mem::take(&mut n.removed);
                inner.sort_unstable();
                trace.push(TraceEvent::LiteralRemoved {
                    pass,
                    clause: n.clause,
                    literal: n.literal,
                    inner,
                });
            }
            false
        });
        if !repeat {
            break;
        }
    }

    let model = build_model(phi, &mut psi, &live, &arena);
    if let Some(bad) = first_false_clause(phi, &model)? {
        return Err(Error::Internal(format!(
            "constructed model falsifies clause {bad} of an accepted formula"
        )));
    }
    Ok(SolveOutcome::Sat { model, stats })
}

fn build_model(phi: &ClausalFormula, psi: &mut InnerState, live: &[LiveClause], arena: &[Var]) -> BlockModel {
    let s = live.len().max(1);
    let n = phi.num_vars();
    let mut values = vec![FixedBitSet::with_capacity(s); n];
    for (i, v) in values.iter_mut().enumerate() {
        if psi.is_true(Var::new(i)) {
            v.insert_range(..);
        }
    }
    for (j, d) in live.iter().enumerate() {
        let (pos, neg) = d.split(arena);
        let entailed = psi.trial_split(pos, neg, |newly| {
            for v in newly {
                values[v.index()].insert(j);
            }
        });
        debug_assert!(!entailed, "surviving inner clauses are not entailed");
    }
    BlockModel::new(s, phi.vars().to_vec(), values)
}

/// Re-checks an UNSAT trace against `phi`: every removed inner clause must
/// be entailed by the positive units present at that point, removed
/// literals must lose all their inner clauses, and the trace must end in
/// an empty clause or a refutation of `Ψ`.
pub fn replay_unsat_trace(phi: &ClausalFormula, trace: &[TraceEvent]) -> Result<()> {
    let clauses = phi.clauses();
    let fail = |msg: String| Err(Error::Precondition(format!("trace replay: {msg}")));
    let mut present: Vec<Vec<bool>> = clauses.iter().map(|c| vec![true; c.len()]).collect();
    let mut psi = InnerState::new(phi.num_vars());
    let mut in_psi = vec![false; clauses.len()];
    let absorb = |psi: &mut InnerState, present: &[Vec<bool>], in_psi: &mut [bool], ci: usize| {
        let c = &clauses[ci];
        let live: Vec<usize> = (0..c.len()).filter(|&li| present[ci][li]).collect();
        if !in_psi[ci] && live.len() == 1 && c.literals()[live[0]].positive {
            in_psi[ci] = true;
            for d in c.literals()[live[0]].term.clauses() {
                psi.add_clause(d);
            }
        }
    };
    for ci in 0..clauses.len() {
        absorb(&mut psi, &present, &mut in_psi, ci);
    }
    let Some(last) = trace.last() else {
        return fail("empty trace".into());
    };
    if matches!(last, TraceEvent::LiteralRemoved { .. }) {
        return fail("trace does not end in a contradiction".into());
    }
    for event in trace {
        match event {
            TraceEvent::LiteralRemoved { clause, literal, inner, .. } => {
                let Some(lit) = clauses.get(*clause).and_then(|c| c.literals().get(*literal)) else {
                    return fail(format!("no literal {literal} in clause {clause}"));
                };
                if lit.positive || !present[*clause][*literal] {
                    return fail(format!("literal {literal} of clause {clause} is not a live negative literal"));
                }
                let all: Vec<usize> = (0..lit.term.clauses().len()).collect();
                if *inner != all {
                    return fail(format!("literal {literal} of clause {clause} keeps some inner clauses"));
                }
                if let Some(&ii) = inner.iter().find(|&&ii| !psi.entails(&lit.term.clauses()[ii])) {
                    return fail(format!("inner clause {ii} of literal {literal} in clause {clause} is not entailed"));
                }
                present[*clause][*literal] = false;
                absorb(&mut psi, &present, &mut in_psi, *clause);
            }
            TraceEvent::PsiRejected { .. } => {
                return if psi.conflict().is_some() {
                    Ok(())
                } else {
                    fail("positive units are not refuted by propagation".into())
                };
            }
            TraceEvent::EmptyClause { clause, .. } => {
                return if present.get(*clause).is_some_and(|p| p.iter().all(|&x| !x)) {
                    Ok(())
                } else {
                    fail(format!("clause {clause} still has literals"))
                };
            }
        }
    }
    unreachable!("the last event is terminal")
}

/// A per-relation Horn-Horn clause set the solver may rely on. Templates
/// come from the reduction pipeline, or from [`Template::raw_horn_horn`],
/// which only checks the syntax and is meant for hand-written clause sets.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Template {
    formula: ClausalFormula,
}

impl Template {
    pub(crate) fn certified(formula: ClausalFormula) -> Self {
        debug_assert!(classify_horn(&formula).horn_horn);
        Self { formula }
    }

    /// Accepts any Horn-Horn clause set as a template. Answers are only
    /// guaranteed when the relation is preserved by `ei`.
    pub fn raw_horn_horn(formula: ClausalFormula) -> Result<Self> {
        let formula = formula.normalize();
        if let Some(clause) = formula.clauses().iter().position(|c| {
            c.positive_count() > 1
                || c.literals()
                    .iter()
                    .any(|l| l.positive && !l.term.clauses().iter().all(InnerClause::is_horn))
        }) {
            return Err(Error::NotHornHorn { clause });
        }
        Ok(Self { formula })
    }

    pub fn formula(&self) -> &ClausalFormula {
        &self.formula
    }
}

/// Substitutes every constraint into its relation's template and decides
/// the resulting clause set. Returns the compiled clause set as well.
pub fn solve_instance(
    inst: &CspInstance,
    templates: &BTreeMap<String, Template>,
) -> Result<(ClausalFormula, SolveOutcome)> {
    let compiled = inst.compile_with(|name| templates.get(name).map(Template::formula))?;
    let outcome = outer_res(&compiled)?;
    Ok((compiled, outcome))
}
