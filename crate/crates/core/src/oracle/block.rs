use std::collections::HashMap;

use fixedbitset::FixedBitSet;

use crate::error::{Error, Result};
use crate::formula::{ClausalFormula, OuterClause, Term};

/// A finite witness: `blocks` nonempty classes partitioning the universe,
/// and for each named variable the set of blocks whose union it denotes.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct BlockModel {
    blocks: usize,
    names: Vec<String>,
    values: Vec<FixedBitSet>,
}

impl BlockModel {
    /// # Panics
    /// If `blocks == 0`, the lengths differ, or a value has the wrong width.
    pub fn new(blocks: usize, names: Vec<String>, values: Vec<FixedBitSet>) -> Self {
        assert!(blocks >= 1, "a block model needs at least one block");
        assert_eq!(names.len(), values.len());
        assert!(values.iter().all(|v| v.len() == blocks));
        Self { blocks, names, values }
    }

    /// Builds a model from sorted-or-not block index lists.
    pub fn from_indices<'a>(
        blocks: usize,
        entries: impl IntoIterator<Item = (String, &'a [usize])>,
    ) -> Result<Self> {
        if blocks == 0 {
            return Err(Error::Witness("`blocks` must be at least 1".into()));
        }
        let mut names = Vec::new();
        let mut values = Vec::new();
        for (name, idx) in entries {
            let mut set = FixedBitSet::with_capacity(blocks);
            for &j in idx {
                if j >= blocks {
                    return Err(Error::Witness(format!(
                        "variable `{name}` uses block {j}, but there are only {blocks}"
                    )));
                }
                set.insert(j);
            }
            names.push(name);
            values.push(set);
        }
        Ok(Self::new(blocks, names, values))
    }

    /// Every variable empty, one block.
    pub fn empty(names: Vec<String>) -> Self {
        let values = names.iter().map(|_| FixedBitSet::with_capacity(1)).collect();
        Self::new(1, names, values)
    }

    pub fn blocks(&self) -> usize {
        self.blocks
    }

    pub fn names(&self) -> &[String] {
        &self.names
    }

    pub fn values(&self) -> &[FixedBitSet] {
        &self.values
    }

    pub fn get(&self, name: &str) -> Option<&FixedBitSet> {
        self.names.iter().position(|n| n == name).map(|i| &self.values[i])
    }

    pub fn indices(&self, name: &str) -> Option<Vec<usize>> {
        self.get(name).map(|s| s.ones().collect())
    }

    /// Looks up each of `vars` in the model, in order.
    pub(crate) fn select(&self, vars: &[String]) -> Result<Vec<&FixedBitSet>> {
        let index: HashMap<&str, usize> = self.names.iter().enumerate().map(|(i, n)| (n.as_str(), i)).collect();
        vars.iter()
            .map(|v| {
                index
                    .get(v.as_str())
                    .map(|&i| &self.values[i])
                    .ok_or_else(|| Error::MissingVariable(v.clone()))
            })
            .collect()
    }

    /// Merges blocks with identical membership across all variables. The
    /// result satisfies exactly the same formulas.
    pub fn dedup_blocks(&self) -> Self {
        let mut seen: HashMap<Vec<bool>, usize> = HashMap::new();
        let mut keep = Vec::new();
        for j in 0..self.blocks {
            let key: Vec<bool> = self.values.iter().map(|v| v[j]).collect();
            if !seen.contains_key(&key) {
                seen.insert(key, keep.len());
                keep.push(j);
            }
        }
        let values = self
            .values
            .iter()
            .map(|v| {
                let mut s = FixedBitSet::with_capacity(keep.len());
                for (k, &j) in keep.iter().enumerate() {
                    s.set(k, v[j]);
                }
                s
            })
            .collect();
        Self::new(keep.len(), self.names.clone(), values)
    }
}

/// Evaluates `formula` under `model`: each variable is the union of its
/// blocks, and `t = 1` holds iff `t` covers every block.
pub fn eval_block_model(formula: &ClausalFormula, model: &BlockModel) -> Result<bool> {
    Ok(first_false_clause(formula, model)?.is_none())
}

/// Index of the first clause of `formula` that `model` falsifies.
pub fn first_false_clause(formula: &ClausalFormula, model: &BlockModel) -> Result<Option<usize>> {
    let values = model.select(formula.vars())?;
    let s = model.blocks();
    if s <= 64 {
        let full = if s == 64 { u64::MAX } else { (1u64 << s) - 1 };
        let masks: Vec<u64> = values
            .iter()
            .map(|v| v.ones().fold(0u64, |m, j| m | 1 << j))
            .collect();
        return Ok(formula.first_false_clause_in_masks(&masks, full));
    }
    let mut scratch = FixedBitSet::with_capacity(s);
    Ok(formula
        .clauses()
        .iter()
        .position(|c| !clause_holds(c, &values, &mut scratch)))
}

fn clause_holds(clause: &OuterClause, values: &[&FixedBitSet], scratch: &mut FixedBitSet) -> bool {
    clause
        .literals()
        .iter()
        .any(|l| term_is_one(&l.term, values, scratch) == l.positive)
}

fn term_is_one(term: &Term, values: &[&FixedBitSet], scratch: &mut FixedBitSet) -> bool {
    let s = scratch.len();
    term.clauses().iter().all(|c| {
        scratch.clear();
        for l in c.literals() {
            let v = values[l.var.index()];
            if l.positive {
                scratch.union_with(v);
            } else {
                // Union with the complement of v.
                scratch.toggle_range(..);
                scratch.intersect_with(v);
                scratch.toggle_range(..);
            }
        }
        scratch.count_ones(..) == s
    })
}
