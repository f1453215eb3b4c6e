use std::fmt;

use thiserror::Error;

/// Byte range plus 1-based line/column of the range start.
#[derive(Debug, Clone, Copy, Default)]
pub struct SourceSpan {
    pub begin: usize,
    pub end: usize,
    pub line: usize,
    pub column: usize,
}

impl SourceSpan {
    pub fn new(begin: usize, end: usize, line: usize, column: usize) -> Self {
        debug_assert!(begin <= end);
        Self {
            begin,
            end,
            line,
            column,
        }
    }
}

// Spans are diagnostics only; they never take part in structural equality.
impl PartialEq for SourceSpan {
    fn eq(&self, _other: &Self) -> bool {
        true
    }
}

impl Eq for SourceSpan {}

impl std::hash::Hash for SourceSpan {
    fn hash<H: std::hash::Hasher>(&self, _state: &mut H) {}
}

impl fmt::Display for SourceSpan {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}:{}", self.line, self.column)
    }
}

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum Error {
    #[error("syntax error at {span} (byte {}): {message}", span.begin)]
    Syntax { span: SourceSpan, message: String },

    #[error("unknown variable `{name}` in definition of `{relation}`")]
    UnknownVariable { relation: String, name: String },

    #[error("unknown relation `{0}`")]
    UnknownRelation(String),

    #[error("relation `{name}` expects {expected} arguments, got {found}")]
    ArityMismatch {
        name: String,
        expected: usize,
        found: usize,
    },

    #[error("relation `{0}` is defined more than once")]
    DuplicateRelation(String),

    #[error("DIMACS line {line}: {message}")]
    Dimacs { line: usize, message: String },

    #[error("invalid witness: {0}")]
    Witness(String),

    #[error("variable `{0}` has no value in the model")]
    MissingVariable(String),

    #[error("pattern has {found} variables but the formula has {expected}")]
    DimensionMismatch { expected: usize, found: usize },

    #[error("formula has {vars} variables, above the oracle cap of {cap}")]
    CapExceeded { vars: usize, cap: usize },

    #[error("search budget of {budget} exceeded")]
    BudgetExceeded { budget: u64 },

    #[error("outer clause {clause} violates the Horn-Horn precondition")]
    NotHornHorn { clause: usize },

    #[error("no template for relation `{0}`")]
    MissingTemplate(String),

    #[error("relation `{relation}` is not outer Horn after reduction (clause: {clause})")]
    NotOuterHorn { relation: String, clause: String },

    #[error("assignment does not satisfy clause {0}")]
    UnsatisfyingAssignment(usize),

    #[error("precondition violated: {0}")]
    Precondition(String),

    #[error("internal inconsistency: {0}")]
    Internal(String),
}

impl Error {
    /// True for refusals caused by configured limits rather than bad input.
    pub fn is_capability_refusal(&self) -> bool {
        matches!(
            self,
            Error::CapExceeded { .. }
                | Error::BudgetExceeded { .. }
                | Error::NotOuterHorn { .. }
                | Error::NotHornHorn { .. }
        )
    }
}

pub type Result<T, E = Error> = std::result::Result<T, E>;
