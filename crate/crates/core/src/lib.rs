//! Set constraint satisfaction over the powerset Boolean algebra.

pub mod error;
pub mod formula;
pub mod gadget;
pub mod inner;
pub mod instance;
pub mod membership;
pub mod oracle;
pub mod outer;
pub mod parse;
pub mod pipeline;
pub mod reduce;
pub mod syntax;
pub mod workload;

pub use error::{Error, Result, SourceSpan};
pub use formula::{
    classify_horn, normalize_clause_set, to_clausal, ClausalFormula, HornReport, InnerClause, InnerLiteral,
    OuterClause, OuterLiteral, Term, Var,
};
pub use instance::{Constraint, CspInstance, RelationDef};
pub use oracle::{eval_block_model, BlockModel, FiniteAssignment, MintermPattern, Oracle};
pub use syntax::{Atom, AtomOp, SurfaceFormula, TermExpr};
pub use inner::{entails_clause, inner_res, InnerOutcome, TwoValuedAssignment};
pub use outer::{outer_res, replay_unsat_trace, solve_instance, SolveOutcome, SolveStats, Template, TraceEvent};
pub use reduce::{
    inner_hornify, reduce_formula, reduce_language, reduce_relation, strongly_reduce, ReduceConfig, ReductionOutcome,
    RewriteStep,
};
pub use membership::{
    check_formula_membership, check_membership, core_lift, finite_e, finite_i, search_ei_counterexample,
    Counterexample, MembershipConfig, MembershipVerdict, OutReason, SearchReport,
};
pub use gadget::{extract_boolean_model, gadget_from_3sat, lift_boolean_model, GadgetInstance};
pub use pipeline::{build_templates, solve_language_instance, Solution, TemplateMode};
