use std::collections::BTreeMap;

use super::BlockModel;
use crate::error::{Error, Result};
use crate::formula::ClausalFormula;
use crate::instance::CspInstance;

pub const DEFAULT_POINT_BUDGET: u64 = 50_000_000;

/// Searches every assignment of subsets of a `p`-point universe to the
/// instance variables (depth first, constraints checked as soon as their
/// arguments are assigned). Returns the first model as a block model with
/// `p` blocks. Values are tried from the full set downwards. `None` only
/// means there is no `p`-point model.
pub fn brute_force_points(inst: &CspInstance, p: usize, budget: u64) -> Result<Option<BlockModel>> {
    if p == 0 || p > 16 {
        return Err(Error::Precondition(format!("point count {p} must be in 1..=16")));
    }
    let templates: BTreeMap<&str, ClausalFormula> = inst
        .defs()
        .iter()
        .map(|d| Ok((d.name.as_str(), d.to_clausal()?)))
        .collect::<Result<_>>()?;
    let n = inst.vars().len();
    // Constraints become checkable at the position of their last argument.
    let mut ready: Vec<Vec<usize>> = vec![Vec::new(); n];
    for (i, c) in inst.constraints().iter().enumerate() {
        match c.args.iter().map(|a| a.index()).max() {
            Some(last) => ready[last].push(i),
            None => {
                let t = &templates[c.relation.as_str()];
                if !t.holds_in_masks(&[], full(p)) {
                    return Ok(None);
                }
            }
        }
    }
    let mut search = Search {
        inst,
        templates: &templates,
        ready: &ready,
        full: full(p),
        values: vec![0; n],
        nodes: 0,
        budget,
        args: Vec::new(),
    };
    if !search.dfs(0)? {
        return Ok(None);
    }
    let entries: Vec<(String, Vec<usize>)> = inst
        .vars()
        .iter()
        .zip(&search.values)
        .map(|(name, &m)| (name.clone(), (0..p).filter(|j| m >> j & 1 == 1).collect()))
        .collect();
    Ok(Some(
        BlockModel::from_indices(p, entries.iter().map(|(n, v)| (n.clone(), v.as_slice())))
            .expect("indices in range"),
    ))
}

fn full(p: usize) -> u64 {
    (1u64 << p) - 1
}

struct Search<'a> {
    inst: &'a CspInstance,
    templates: &'a BTreeMap<&'a str, ClausalFormula>,
    ready: &'a [Vec<usize>],
    full: u64,
    values: Vec<u64>,
    nodes: u64,
    budget: u64,
    args: Vec<u64>,
}

impl Search<'_> {
    fn dfs(&mut self, var: usize) -> Result<bool> {
        if var == self.values.len() {
            return Ok(true);
        }
        for value in (0..=self.full).rev() {
            self.nodes += 1;
            if self.nodes > self.budget {
                return Err(Error::BudgetExceeded { budget: self.budget });
            }
            self.values[var] = value;
            if self.consistent(var) && self.dfs(var + 1)? {
                return Ok(true);
            }
        }
        Ok(false)
    }

    fn consistent(&mut self, var: usize) -> bool {
        for &ci in &self.ready[var] {
            let c = &self.inst.constraints()[ci];
            self.args.clear();
            self.args.extend(c.args.iter().map(|a| self.values[a.index()]));
            if !self.templates[c.relation.as_str()].holds_in_masks(&self.args, self.full) {
                return false;
            }
        }
        true
    }
}
