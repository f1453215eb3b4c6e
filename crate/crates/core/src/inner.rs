//! Positive unit resolution on inner clauses.
//!
//! [`InnerState`] keeps, per clause, the number of negative literals whose
//! variable has not been propagated yet. Propagating `x` decrements the
//! counters of the clauses containing `~x`; a clause whose counter drops
//! to zero becomes a positive unit (its single positive literal is queued)
//! or, without positive literals, empty (reject). Clauses with two or more
//! positive literals never become unit or empty. Each literal is visited
//! at most once, so a full run is linear in the input size.
//!
//! On top of the plain algorithm the state supports *trial* propagation
//! with an undo log, which answers entailment queries against a growing
//! clause set without recomputing the closure from scratch.

use std::collections::VecDeque;

use crate::formula::{InnerClause, Var};

const NONE: u32 = u32::MAX;

/// A `{0, 1}`-valued assignment (every variable is empty or the universe).
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct TwoValuedAssignment {
    values: Vec<bool>,
}

impl TwoValuedAssignment {
    pub fn new(values: Vec<bool>) -> Self {
        Self { values }
    }

    pub fn get(&self, var: Var) -> bool {
        self.values[var.index()]
    }

    pub fn values(&self) -> &[bool] {
        &self.values
    }

    /// Two-valued evaluation of an inner clause.
    pub fn satisfies(&self, clause: &InnerClause) -> bool {
        clause.literals().iter().any(|l| self.get(l.var) == l.positive)
    }
}

/// Why a run rejected: the propagation sequence and the clause it emptied.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct InnerTrace {
    pub propagated: Vec<Var>,
    pub empty_clause: usize,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub enum InnerOutcome {
    Accept(TwoValuedAssignment),
    Reject(InnerTrace),
}

impl InnerOutcome {
    pub fn is_accept(&self) -> bool {
        matches!(self, InnerOutcome::Accept(_))
    }
}

/// Incremental unit-propagation state over a growing set of clauses.
#[derive(Debug, Clone)]
pub struct InnerState {
    remaining: Vec<u32>,
    positives: Vec<u32>,
    /// The positive variable of clauses with exactly one, else `NONE`.
    unit: Vec<u32>,
    neg_occ: Vec<Vec<u32>>,
    truth: Vec<bool>,
    /// Propagated variables in order; doubles as the FIFO queue.
    order: Vec<Var>,
    head: usize,
    conflict: Option<usize>,
    // Trial scratch.
    goal: Vec<bool>,
    decremented: Vec<u32>,
    scratch_pos: Vec<Var>,
    scratch_neg: Vec<Var>,
}

impl InnerState {
    pub fn new(num_vars: usize) -> Self {
        Self {
            remaining: Vec::new(),
            positives: Vec::new(),
            unit: Vec::new(),
            neg_occ: vec![Vec::new(); num_vars],
            truth: vec![false; num_vars],
            order: Vec::new(),
            head: 0,
            conflict: None,
            goal: vec![false; num_vars],
            decremented: Vec::new(),
            scratch_pos: Vec::new(),
            scratch_neg: Vec::new(),
        }
    }

    pub fn num_clauses(&self) -> usize {
        self.remaining.len()
    }

    /// The index of the clause emptied by propagation, if any.
    pub fn conflict(&self) -> Option<usize> {
        self.conflict
    }

    pub fn is_true(&self, var: Var) -> bool {
        self.truth[var.index()]
    }

    pub fn propagated(&self) -> &[Var] {
        &self.order
    }

    pub fn model(&self) -> TwoValuedAssignment {
        TwoValuedAssignment::new(self.truth.clone())
    }

    /// Adds a clause without propagating; returns its index.
    fn push(&mut self, clause: &InnerClause) -> usize {
        let id = self.remaining.len();
        let mut remaining = 0;
        let mut positives = 0;
        let mut unit = NONE;
        for l in clause.literals() {
            if l.positive {
                positives += 1;
                unit = l.var.0;
            } else {
                self.neg_occ[l.var.index()].push(id as u32);
                if !self.truth[l.var.index()] {
                    remaining += 1;
                }
            }
        }
        self.remaining.push(remaining);
        self.positives.push(positives);
        self.unit.push(if positives == 1 { unit } else { NONE });
        id
    }

    /// Handles a clause whose counter is zero.
    fn fire(&mut self, id: usize) {
        match self.positives[id] {
            0 => {
                if self.conflict.is_none() {
                    self.conflict = Some(id);
                }
            }
            1 => self.enqueue(Var(self.unit[id])),
            _ => {}
        }
    }

    fn enqueue(&mut self, var: Var) {
        if !self.truth[var.index()] {
            self.truth[var.index()] = true;
            self.order.push(var);
        }
    }

    /// Adds a clause and propagates to fixpoint. Returns `false` once the
    /// clause set is known to be unsatisfiable.
    pub fn add_clause(&mut self, clause: &InnerClause) -> bool {
        let id = self.push(clause);
        if self.conflict.is_none() && self.remaining[id] == 0 {
            self.fire(id);
        }
        self.propagate(false);
        self.conflict.is_none()
    }

    fn propagate(&mut self, trial: bool) {
        while self.conflict.is_none() && self.head < self.order.len() {
            let var = self.order[self.head];
            self.head += 1;
            if trial && self.goal[var.index()] {
                return;
            }
            for k in 0..self.neg_occ[var.index()].len() {
                let c = self.neg_occ[var.index()][k] as usize;
                self.remaining[c] -= 1;
                if trial {
                    self.decremented.push(c as u32);
                }
                if self.remaining[c] == 0 {
                    self.fire(c);
                    if self.conflict.is_some() {
                        return;
                    }
                }
            }
        }
    }

    /// Does the current clause set entail `⊔ clause = 1`? Equivalent to
    /// rejection of the clause set extended by `{~x}` for every positive
    /// `x` and `{y}` for every negative `~y` of `clause`. The state is left
    /// unchanged.
    pub fn entails(&mut self, clause: &InnerClause) -> bool {
        self.trial(clause, |_| {})
    }

    /// Runs the entailment trial for `clause`, handing the variables newly
    /// made true to `visit` before undoing them. Returns the verdict.
    pub fn trial(&mut self, clause: &InnerClause, visit: impl FnOnce(&[Var])) -> bool {
        let mut pos = std::mem::take(&mut self.scratch_pos);
        let mut neg = std::mem::take(&mut self.scratch_neg);
        pos.clear();
        neg.clear();
        pos.extend(clause.positives());
        neg.extend(clause.negatives());
        let entailed = self.trial_split(&pos, &neg, visit);
        self.scratch_pos = pos;
        self.scratch_neg = neg;
        entailed
    }

    /// [`InnerState::trial`] for the clause `⊔ positives ⊔ ~negatives`.
    pub fn trial_split(&mut self, positives: &[Var], negatives: &[Var], visit: impl FnOnce(&[Var])) -> bool {
        if self.conflict.is_some() {
            return true;
        }
        if positives.iter().any(|x| self.truth[x.index()]) {
            return true;
        }
        let mark = self.order.len();
        let head = self.head;
        debug_assert_eq!(head, mark, "base state is propagated");
        for x in positives {
            self.goal[x.index()] = true;
        }
        for &y in negatives {
            self.enqueue(y);
        }
        self.propagate(true);
        let entailed = self.conflict.is_some() || self.order[mark..].iter().any(|v| self.goal[v.index()]);
        visit(&self.order[mark..]);
        // Undo.
        for v in self.order.drain(mark..) {
            self.truth[v.index()] = false;
        }
        for c in self.decremented.drain(..) {
            self.remaining[c as usize] += 1;
        }
        for x in positives {
            self.goal[x.index()] = false;
        }
        self.head = head;
        self.conflict = None;
        entailed
    }
}

fn num_vars_of(clauses: &[InnerClause]) -> usize {
    clauses.iter().filter_map(InnerClause::max_var).map(|v| v.index() + 1).max().unwrap_or(0)
}

/// Positive unit resolution over `clauses` (variables `0..num_vars`, which
/// is widened to cover every variable mentioned). Clauses are seeded into
/// the FIFO queue in input order.
pub fn inner_res(num_vars: usize, clauses: &[InnerClause]) -> InnerOutcome {
    let n = num_vars.max(num_vars_of(clauses));
    let mut state = InnerState::new(n);
    for c in clauses {
        state.push(c);
    }
    let mut queue: VecDeque<usize> = (0..clauses.len()).filter(|&i| state.remaining[i] == 0).collect();
    while let Some(i) = queue.pop_front() {
        state.fire(i);
        if state.conflict.is_some() {
            break;
        }
    }
    state.propagate(false);
    match state.conflict {
        None => InnerOutcome::Accept(state.model()),
        Some(empty_clause) => InnerOutcome::Reject(InnerTrace {
            propagated: state.order.clone(),
            empty_clause,
        }),
    }
}

/// Whether `⊓ psi = 1` entails `⊔ query = 1`: runs [`inner_res`] on `psi`
/// plus `{~x}` for each positive `x` and `{y}` for each negative `~y` of
/// the query, and negates the verdict.
pub fn entails_clause(num_vars: usize, psi: &[InnerClause], query: &InnerClause) -> bool {
    let mut clauses = psi.to_vec();
    clauses.extend(query.literals().iter().map(|l| InnerClause::new([l.negated()])));
    !inner_res(num_vars, &clauses).is_accept()
}
