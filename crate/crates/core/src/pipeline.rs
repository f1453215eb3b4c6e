//! End-to-end solving of an instance: templates, solver, witness.

use std::collections::BTreeMap;

use crate::error::{Error, Result};
use crate::formula::ClausalFormula;
use crate::instance::CspInstance;
use crate::membership::{core_lift, max_inner_positives, DEFAULT_LIFT_LIMIT};
use crate::oracle::{eval_block_model, BlockModel};
use crate::outer::{solve_instance, SolveOutcome, Template};
use crate::reduce::{reduce_language, ReduceConfig};

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum TemplateMode {
    /// Run every definition through the reduction pipeline.
    Reduced(ReduceConfig),
    /// Use each definition's own clausal form; it must be Horn-Horn.
    Raw,
}

impl Default for TemplateMode {
    fn default() -> Self {
        TemplateMode::Reduced(ReduceConfig::default())
    }
}

#[derive(Debug, Clone)]
pub struct Solution {
    /// The instance compiled with the templates, as handed to the solver.
    pub compiled: ClausalFormula,
    pub outcome: SolveOutcome,
    /// For SAT: a model of the instance under the original definitions.
    pub witness: Option<BlockModel>,
    /// Whether the solver's model had to be lifted to obtain `witness`.
    pub lifted: bool,
}

pub fn build_templates(inst: &CspInstance, mode: TemplateMode) -> Result<BTreeMap<String, Template>> {
    match mode {
        TemplateMode::Reduced(config) => reduce_language(inst.defs(), config),
        TemplateMode::Raw => inst
            .defs()
            .iter()
            .map(|d| Ok((d.name.clone(), Template::raw_horn_horn(d.to_clausal()?)?)))
            .collect(),
    }
}

pub fn solve_language_instance(inst: &CspInstance, mode: TemplateMode) -> Result<Solution> {
    let templates = build_templates(inst, mode)?;
    let (compiled, outcome) = solve_instance(inst, &templates)?;
    let SolveOutcome::Sat { model, .. } = &outcome else {
        return Ok(Solution {
            compiled,
            outcome,
            witness: None,
            lifted: false,
        });
    };
    let definitions = inst.compile_definitions()?;
    let (witness, lifted) = if eval_block_model(&definitions, model)? {
        (model.clone(), false)
    } else {
        let k = max_inner_positives(inst.defs())?;
        let lifted = core_lift(model, k, DEFAULT_LIFT_LIMIT)?;
        if !eval_block_model(&definitions, &lifted)? {
            return Err(Error::Internal("lifted model violates the relation definitions".into()));
        }
        (lifted, true)
    };
    Ok(Solution {
        compiled,
        outcome,
        witness: Some(witness),
        lifted,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::parse::parse_instance;

    #[test]
    fn witness_satisfies_definitions() {
        let inst = parse_instance(
            "rel S(x, y) := ~x | y == 1\nbuiltin Neq\nS(a, b)\nNeq(a, b)\n",
        )
        .unwrap();
        let sol = solve_language_instance(&inst, TemplateMode::default()).unwrap();
        assert!(sol.outcome.is_sat());
        let w = sol.witness.unwrap();
        assert!(eval_block_model(&inst.compile_definitions().unwrap(), &w).unwrap());
    }

    #[test]
    fn lift_kicks_in_for_reduced_templates() {
        let inst = parse_instance(
            "rel R(x, y, v, u) := (x & y != x) and (x & y != y) and (v == 1 or u == 1 or x | y != 1)\nR(a, b, c, d)\n",
        )
        .unwrap();
        let sol = solve_language_instance(&inst, TemplateMode::default()).unwrap();
        let w = sol.witness.unwrap();
        assert!(eval_block_model(&inst.compile_definitions().unwrap(), &w).unwrap());
    }

    #[test]
    fn raw_mode_refuses_non_horn_horn() {
        let inst = parse_instance("rel U(x, y) := (x | y) == 1\nU(a, b)\n").unwrap();
        assert!(matches!(
            solve_language_instance(&inst, TemplateMode::Raw),
            Err(Error::NotHornHorn { .. })
        ));
        assert!(matches!(
            solve_language_instance(&inst, TemplateMode::default()),
            Err(Error::NotOuterHorn { .. })
        ));
    }
}
