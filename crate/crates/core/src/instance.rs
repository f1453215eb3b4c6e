//! Relation definitions and CSP instances.

use std::collections::{BTreeMap, HashMap};

use crate::error::{Error, Result, SourceSpan};
use crate::formula::{substitute_clauses, to_clausal_with_params, ClausalFormula, OuterClause, Var};
use crate::syntax::{SurfaceFormula, TermExpr};

/// A named relation `NAME(p1, ..., pk) := body`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct RelationDef {
    pub name: String,
    pub params: Vec<String>,
    pub body: SurfaceFormula,
    /// Built-in relations (`U`, `I`, `Neq`) render as `builtin NAME`.
    pub builtin: bool,
}

impl RelationDef {
    pub fn new(name: impl Into<String>, params: Vec<String>, body: SurfaceFormula) -> Self {
        Self {
            name: name.into(),
            params,
            body,
            builtin: false,
        }
    }

    pub fn arity(&self) -> usize {
        self.params.len()
    }

    /// The definition in normalized clausal form over its parameters.
    pub fn to_clausal(&self) -> Result<ClausalFormula> {
        to_clausal_with_params(&self.name, &self.params, &self.body)
    }

    /// `U(x,y,z) := (x | y) == z`, `I(x,y,z) := (x & y) == z` and
    /// `Neq(x,y) := x != y`.
    pub fn builtin(name: &str) -> Option<Self> {
        let v = TermExpr::var;
        let params = |names: &[&str]| names.iter().map(|s| s.to_string()).collect::<Vec<_>>();
        let (params, body) = match name {
            "U" => (params(&["x", "y", "z"]), SurfaceFormula::eq(v("x").join(v("y")), v("z"))),
            "I" => (params(&["x", "y", "z"]), SurfaceFormula::eq(v("x").meet(v("y")), v("z"))),
            "Neq" => (params(&["x", "y"]), SurfaceFormula::ne(v("x"), v("y"))),
            _ => return None,
        };
        Some(Self {
            name: name.to_string(),
            params,
            body,
            builtin: true,
        })
    }
}

/// One constraint `R(a1, ..., ak)`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Constraint {
    pub relation: String,
    pub args: Vec<Var>,
    pub span: SourceSpan,
}

/// Relation definitions, instance variables and constraints.
#[derive(Debug, Clone, PartialEq, Eq, Default)]
pub struct CspInstance {
    defs: Vec<RelationDef>,
    vars: Vec<String>,
    var_index: HashMap<String, Var>,
    constraints: Vec<Constraint>,
}

impl CspInstance {
    pub fn new() -> Self {
        Self::default()
    }

    pub fn add_def(&mut self, def: RelationDef) -> Result<()> {
        if self.def(&def.name).is_some() {
            return Err(Error::DuplicateRelation(def.name));
        }
        self.defs.push(def);
        Ok(())
    }

    /// Interns `name`, returning its variable.
    pub fn var(&mut self, name: &str) -> Var {
        if let Some(&v) = self.var_index.get(name) {
            return v;
        }
        let v = Var::new(self.vars.len());
        self.vars.push(name.to_string());
        self.var_index.insert(name.to_string(), v);
        v
    }

    pub fn lookup_var(&self, name: &str) -> Option<Var> {
        self.var_index.get(name).copied()
    }

    pub fn add_constraint(&mut self, relation: &str, args: &[&str]) -> Result<()> {
        let vars: Vec<Var> = args.iter().map(|a| self.var(a)).collect();
        self.push_constraint(relation, vars, SourceSpan::default())
    }

    pub fn push_constraint(&mut self, relation: &str, args: Vec<Var>, span: SourceSpan) -> Result<()> {
        let def = self
            .def(relation)
            .ok_or_else(|| Error::UnknownRelation(relation.to_string()))?;
        if def.arity() != args.len() {
            return Err(Error::ArityMismatch {
                name: relation.to_string(),
                expected: def.arity(),
                found: args.len(),
            });
        }
        debug_assert!(args.iter().all(|a| a.index() < self.vars.len()));
        self.constraints.push(Constraint {
            relation: relation.to_string(),
            args,
            span,
        });
        Ok(())
    }

    pub fn defs(&self) -> &[RelationDef] {
        &self.defs
    }

    pub fn def(&self, name: &str) -> Option<&RelationDef> {
        self.defs.iter().find(|d| d.name == name)
    }

    pub fn vars(&self) -> &[String] {
        &self.vars
    }

    pub fn constraints(&self) -> &[Constraint] {
        &self.constraints
    }

    /// Compiles the instance with the given per-relation templates (each a
    /// formula over the relation's parameters).
    pub fn compile_with<'a>(
        &self,
        mut template: impl FnMut(&str) -> Option<&'a ClausalFormula>,
    ) -> Result<ClausalFormula> {
        let mut clauses: Vec<OuterClause> = Vec::new();
        for c in &self.constraints {
            let t = template(&c.relation).ok_or_else(|| Error::MissingTemplate(c.relation.clone()))?;
            if t.num_vars() != c.args.len() {
                return Err(Error::ArityMismatch {
                    name: c.relation.clone(),
                    expected: t.num_vars(),
                    found: c.args.len(),
                });
            }
            clauses.extend(substitute_clauses(t, &c.args)?);
        }
        Ok(ClausalFormula::new(self.vars.clone(), clauses))
    }

    /// Compiles the instance with the relations' own definitions, i.e. the
    /// formula whose models are exactly the instance's solutions.
    pub fn compile_definitions(&self) -> Result<ClausalFormula> {
        let compiled: BTreeMap<&str, ClausalFormula> = self
            .defs
            .iter()
            .map(|d| Ok((d.name.as_str(), d.to_clausal()?)))
            .collect::<Result<_>>()?;
        self.compile_with(|name| compiled.get(name))
    }
}
