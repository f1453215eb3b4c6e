use std::collections::HashSet;

use crate::error::{Error, Result};

use super::{ClausalFormula, OuterClause, OuterLiteral, Var};

/// Instantiates a template whose variables are its parameters, renaming
/// parameter `i` to `args[i]`, and normalizes each resulting clause.
///
/// Repeated arguments are allowed; they can turn inner clauses into
/// tautologies (dropped) or duplicate literals (merged). The work is linear
/// in the template size.
pub fn substitute_clauses(template: &ClausalFormula, args: &[Var]) -> Result<Vec<OuterClause>> {
    if args.len() != template.num_vars() {
        return Err(Error::ArityMismatch {
            name: "template".into(),
            expected: template.num_vars(),
            found: args.len(),
        });
    }
    let rename = |v: Var| args[v.index()];
    let mut seen = HashSet::new();
    let mut out = Vec::with_capacity(template.clauses().len());
    for clause in template.clauses() {
        let renamed = OuterClause::new(
            clause
                .literals()
                .iter()
                .map(|l| OuterLiteral {
                    term: l.term.map_vars(&rename),
                    positive: l.positive,
                })
                .collect(),
        );
        if let Some(c) = renamed.normalized() {
            if seen.insert(c.clone()) {
                out.push(c);
            }
        }
    }
    Ok(out)
}

/// [`substitute_clauses`] packaged as a formula over `vars`.
pub fn substitute(template: &ClausalFormula, args: &[Var], vars: &[String]) -> Result<ClausalFormula> {
    if let Some(bad) = args.iter().find(|a| a.index() >= vars.len()) {
        return Err(Error::Precondition(format!(
            "argument variable {} outside the target variable list",
            bad.0
        )));
    }
    Ok(ClausalFormula::new(vars.to_vec(), substitute_clauses(template, args)?))
}
