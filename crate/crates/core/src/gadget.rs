//! Reduction from 3SAT to CSP over the language `{U, I, Neq}`.
//!
//! Variables `t` and `f` stand for true and false, with `t ≠ f` and
//! `t ⊓ f = f`, so some atom lies in `t` but not in `f`. Each propositional
//! variable `x` gets a pair with `x_t ⊔ x_f = t` and `x_t ⊓ x_f = f`; each
//! clause `l1 ∨ l2 ∨ l3` asks for `l1 ⊔ l2 ⊔ l3 = t`, split with one
//! auxiliary variable. A positive literal is `x_t`, a negative one `x_f`.

use fixedbitset::FixedBitSet;

use crate::error::{Error, Result};
use crate::formula::Var;
use crate::instance::{CspInstance, RelationDef};
use crate::oracle::{eval_block_model, BlockModel};
use crate::parse::ThreeSat;

#[derive(Debug, Clone)]
pub struct GadgetInstance {
    pub instance: CspInstance,
    pub t: Var,
    pub f: Var,
    /// `(x_t, x_f)` per propositional variable.
    pub pairs: Vec<(Var, Var)>,
    /// The auxiliary variable of each clause.
    pub clause_vars: Vec<Var>,
}

pub fn gadget_from_3sat(cnf: &ThreeSat) -> Result<GadgetInstance> {
    let mut inst = CspInstance::new();
    for name in ["U", "I", "Neq"] {
        inst.add_def(RelationDef::builtin(name).expect("builtin"))?;
    }
    let t = inst.var("t");
    let f = inst.var("f");
    let mut pairs = Vec::with_capacity(cnf.num_vars);
    let mut names = Vec::with_capacity(cnf.num_vars);
    for i in 1..=cnf.num_vars {
        let (xt, xf) = (format!("x{i}_t"), format!("x{i}_f"));
        pairs.push((inst.var(&xt), inst.var(&xf)));
        names.push((xt, xf));
    }
    let mut clause_vars = Vec::with_capacity(cnf.clauses.len());
    for j in 1..=cnf.clauses.len() {
        clause_vars.push(inst.var(&format!("u{j}")));
    }
    for (xt, xf) in &names {
        inst.add_constraint("U", &[xt, xf, "t"])?;
        inst.add_constraint("I", &[xt, xf, "f"])?;
    }
    let lit = |l: i32| {
        let (xt, xf) = &names[l.unsigned_abs() as usize - 1];
        if l > 0 {
            xt.clone()
        } else {
            xf.clone()
        }
    };
    for (j, clause) in cnf.clauses.iter().enumerate() {
        let u = format!("u{}", j + 1);
        let [a, b, c] = clause.map(lit);
        inst.add_constraint("U", &[&a, &b, &u])?;
        inst.add_constraint("U", &[&u, &c, "t"])?;
    }
    inst.add_constraint("Neq", &["t", "f"])?;
    inst.add_constraint("I", &["t", "f", "f"])?;
    Ok(GadgetInstance {
        instance: inst,
        t,
        f,
        pairs,
        clause_vars,
    })
}

/// A one-block model of the gadget from a satisfying assignment
/// (`alpha[i]` is the value of variable `i + 1`).
pub fn lift_boolean_model(g: &GadgetInstance, cnf: &ThreeSat, alpha: &[bool]) -> Result<BlockModel> {
    if alpha.len() != cnf.num_vars {
        return Err(Error::DimensionMismatch {
            expected: cnf.num_vars,
            found: alpha.len(),
        });
    }
    if let Some(j) = cnf.clauses.iter().position(|c| {
        !c.iter().any(|&l| alpha[l.unsigned_abs() as usize - 1] == (l > 0))
    }) {
        return Err(Error::UnsatisfyingAssignment(j));
    }
    let vars = g.instance.vars();
    let mut truth = vec![false; vars.len()];
    truth[g.t.index()] = true;
    for (i, &(xt, xf)) in g.pairs.iter().enumerate() {
        truth[xt.index()] = alpha[i];
        truth[xf.index()] = !alpha[i];
    }
    for (j, clause) in cnf.clauses.iter().enumerate() {
        let (a, b) = (lit_var(g, clause[0]), lit_var(g, clause[1]));
        truth[g.clause_vars[j].index()] = truth[a.index()] || truth[b.index()];
    }
    let values = truth
        .iter()
        .map(|&b| {
            let mut s = FixedBitSet::with_capacity(1);
            s.set(0, b);
            s
        })
        .collect();
    Ok(BlockModel::new(1, vars.to_vec(), values))
}

fn lit_var(g: &GadgetInstance, l: i32) -> Var {
    let (xt, xf) = g.pairs[l.unsigned_abs() as usize - 1];
    if l > 0 {
        xt
    } else {
        xf
    }
}

/// Reads a satisfying assignment off a model of the gadget: with `a` the
/// smallest block in `t` but not in `f`, variable `i` is true iff
/// `a ∈ x_i_t`.
pub fn extract_boolean_model(g: &GadgetInstance, model: &BlockModel) -> Result<Vec<bool>> {
    let definitions = g.instance.compile_definitions()?;
    if !eval_block_model(&definitions, model)? {
        return Err(Error::Precondition("not a model of the gadget instance".into()));
    }
    let vars = g.instance.vars();
    let get = |v: Var| model.get(&vars[v.index()]).ok_or_else(|| Error::MissingVariable(vars[v.index()].clone()));
    let (t, f) = (get(g.t)?, get(g.f)?);
    let a = t
        .ones()
        .find(|&a| !f[a])
        .ok_or_else(|| Error::Internal("model has t ⊑ f".into()))?;
    g.pairs.iter().map(|&(xt, _)| Ok(get(xt)?[a])).collect()
}
