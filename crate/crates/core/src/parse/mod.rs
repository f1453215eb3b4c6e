//! Text formats: the formula grammar, instance files, DIMACS 3-CNF input and
//! JSON witness files.
//!
//! Formula grammar:
//!
//! ```text
//! formula := disj
//! disj    := conj ("or" conj)*
//! conj    := unit ("and" unit)*
//! unit    := "not" unit | "(" formula ")" | "true" | "false" | atom
//! atom    := term ("==" | "!=") term
//! term    := tmeet
//! tmeet   := tjoin ("&" tjoin)*
//! tjoin   := tunary ("|" tunary)*
//! tunary  := "~" tunary | "(" term ")" | "0" | "1" | ident
//! ```
//!
//! Note that `|` binds tighter than `&`. Instance files contain one item per
//! line: `rel NAME(p1, ..., pk) := formula`, `builtin NAME` (one of `U`,
//! `I`, `Neq`), `var v1 v2 ...`, and constraints `NAME(a1, ..., ak)`. A `#`
//! starts a comment.

mod dimacs;
mod lexer;
mod parser;
mod render;
mod witness;

use std::collections::HashSet;

pub use dimacs::{parse_dimacs_3sat, ThreeSat};
pub use render::{render_clausal, render_formula, render_instance, render_term, render_term_expr};
pub use witness::{decode_witness, encode_witness};

use crate::error::{Error, Result, SourceSpan};
use crate::instance::{CspInstance, RelationDef};
use crate::formula::Var;
use lexer::{tokenize, LineMap, Tok};
use parser::Parser;

pub fn parse_formula(text: &str) -> Result<crate::syntax::SurfaceFormula> {
    let lines = LineMap::new(text);
    let tokens = tokenize(text, 0, text.len(), &lines)?;
    let mut p = Parser::new(&tokens);
    let f = p.formula()?;
    p.expect_eof()?;
    Ok(f)
}

/// Parses raw bytes, reporting invalid UTF-8 as a syntax error.
pub fn parse_formula_bytes(bytes: &[u8]) -> Result<crate::syntax::SurfaceFormula> {
    parse_formula(utf8(bytes)?)
}

fn utf8(bytes: &[u8]) -> Result<&str> {
    std::str::from_utf8(bytes).map_err(|e| Error::Syntax {
        span: SourceSpan::new(e.valid_up_to(), e.valid_up_to() + 1, 0, 0),
        message: "input is not valid UTF-8".into(),
    })
}

pub fn parse_instance_bytes(bytes: &[u8]) -> Result<CspInstance> {
    parse_instance(utf8(bytes)?)
}

struct PendingConstraint {
    relation: String,
    args: Vec<String>,
    span: SourceSpan,
}

pub fn parse_instance(text: &str) -> Result<CspInstance> {
    let lines = LineMap::new(text);
    let mut inst = CspInstance::new();
    let mut pending = Vec::new();
    let mut offset = 0;
    for raw in text.split_inclusive('\n') {
        let begin = offset;
        offset += raw.len();
        let content = raw.split('#').next().unwrap_or("");
        let end = begin + content.len();
        let tokens = tokenize(text, begin, end, &lines)?;
        if tokens.len() == 1 {
            continue;
        }
        let mut p = Parser::new(&tokens);
        match p.peek().clone() {
            Tok::Ident(kw) if kw == "rel" && matches!(tokens[1].tok, Tok::Ident(_)) && tokens[2].tok == Tok::LParen => {
                p.bump();
                let def = relation_def(&mut p)?;
                let span = tokens[1].span;
                inst.add_def(def).map_err(|e| at(span, e))?;
            }
            Tok::Ident(kw) if kw == "builtin" && tokens[1].tok != Tok::LParen => {
                p.bump();
                while *p.peek() != Tok::Eof {
                    let (name, span) = p.expect_ident()?;
                    let def = RelationDef::builtin(&name).ok_or_else(|| Error::Syntax {
                        span,
                        message: format!("`{name}` is not a built-in relation (expected U, I or Neq)"),
                    })?;
                    inst.add_def(def).map_err(|e| at(span, e))?;
                    if *p.peek() == Tok::Comma {
                        p.bump();
                    }
                }
            }
            Tok::Ident(kw) if kw == "var" && tokens[1].tok != Tok::LParen => {
                p.bump();
                while *p.peek() != Tok::Eof {
                    let (name, _) = p.expect_ident()?;
                    inst.var(&name);
                    if *p.peek() == Tok::Comma {
                        p.bump();
                    }
                }
            }
            Tok::Ident(_) => {
                let (relation, span) = p.expect_ident()?;
                p.expect(Tok::LParen)?;
                let args = ident_list(&mut p)?;
                p.expect(Tok::RParen)?;
                p.expect_eof()?;
                for a in &args {
                    inst.var(a);
                }
                pending.push(PendingConstraint { relation, args, span });
            }
            other => return p.error(format!("expected `rel`, `builtin`, `var` or a constraint, found {}", other.describe())),
        }
    }
    for c in pending {
        let args: Vec<Var> = c
            .args
            .iter()
            .map(|a| inst.lookup_var(a).expect("interned while parsing"))
            .collect();
        inst.push_constraint(&c.relation, args, c.span).map_err(|e| at(c.span, e))?;
    }
    Ok(inst)
}

fn at(span: SourceSpan, err: Error) -> Error {
    match err {
        Error::Syntax { .. } => err,
        other => Error::Syntax {
            span,
            message: other.to_string(),
        },
    }
}

fn ident_list(p: &mut Parser<'_>) -> Result<Vec<String>> {
    let mut out = Vec::new();
    if *p.peek() == Tok::RParen {
        return Ok(out);
    }
    loop {
        out.push(p.expect_ident()?.0);
        if *p.peek() == Tok::Comma {
            p.bump();
        } else {
            return Ok(out);
        }
    }
}

fn relation_def(p: &mut Parser<'_>) -> Result<RelationDef> {
    let (name, _) = p.expect_ident()?;
    p.expect(Tok::LParen)?;
    let params_span = p.span();
    let params = ident_list(p)?;
    p.expect(Tok::RParen)?;
    let mut seen = HashSet::new();
    if let Some(dup) = params.iter().find(|x| !seen.insert(x.as_str())) {
        return Err(Error::Syntax {
            span: params_span,
            message: format!("parameter `{dup}` listed twice in `{name}`"),
        });
    }
    p.expect(Tok::Assign)?;
    let body_span = p.span();
    let body = p.formula()?;
    p.expect_eof()?;
    if let Some(free) = body.var_names().into_iter().find(|v| !params.contains(v)) {
        return Err(Error::Syntax {
            span: body_span,
            message: Error::UnknownVariable { relation: name, name: free }.to_string(),
        });
    }
    Ok(RelationDef::new(name, params, body))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::syntax::{AtomOp, SurfaceFormula, TermExpr};

    #[test]
    fn atom_with_join() {
        let f = parse_formula("~x | y == 1").unwrap();
        let SurfaceFormula::Atom(a) = f else { panic!("not an atom") };
        assert_eq!(a.lhs, TermExpr::var("x").not().join(TermExpr::var("y")));
        assert_eq!(a.op, AtomOp::Eq);
        assert_eq!(a.rhs, TermExpr::One);
    }

    #[test]
    fn or_of_parenthesized_atoms() {
        let f = parse_formula("(x == y) or (u != 1)").unwrap();
        assert!(matches!(f, SurfaceFormula::Or(_, _)));
    }

    #[test]
    fn parenthesized_term_on_the_left() {
        let f = parse_formula("((x | y)) & z == 1").unwrap();
        let SurfaceFormula::Atom(a) = f else { panic!() };
        assert_eq!(a.lhs, TermExpr::var("x").join(TermExpr::var("y")).meet(TermExpr::var("z")));
    }

    #[test]
    fn pipe_binds_tighter_than_amp() {
        let SurfaceFormula::Atom(a) = parse_formula("a & b | c == 1").unwrap() else { panic!() };
        assert_eq!(a.lhs, TermExpr::var("a").meet(TermExpr::var("b").join(TermExpr::var("c"))));
    }

    #[test]
    fn dangling_meet_reports_operator_offset() {
        match parse_formula("x &") {
            Err(Error::Syntax { span, .. }) => assert_eq!(span.begin, 2),
            other => panic!("expected syntax error, got {other:?}"),
        }
    }

    #[test]
    fn unknown_token() {
        assert!(matches!(parse_formula("x == 2"), Err(Error::Syntax { .. })));
        assert!(matches!(parse_formula("x + y == 1"), Err(Error::Syntax { .. })));
    }

    #[test]
    fn deep_nesting_is_rejected_not_overflowed() {
        let text = format!("{}x{} == 1", "(".repeat(5000), ")".repeat(5000));
        assert!(parse_formula(&text).is_err());
        let text = format!("{}x == 1", "not ".repeat(5000));
        assert!(parse_formula(&text).is_err());
    }

    #[test]
    fn instance_with_one_constraint() {
        let inst = parse_instance("rel S(x,y) := ~x | y == 1\nS(a,b)\n").unwrap();
        assert_eq!(inst.constraints().len(), 1);
        assert_eq!(inst.vars(), &["a".to_string(), "b".to_string()]);
    }

    #[test]
    fn instance_arity_error() {
        let err = parse_instance("rel S(x,y) := ~x | y == 1\nS(a)\n").unwrap_err();
        let Error::Syntax { span, message } = err else { panic!() };
        assert_eq!(span.line, 2);
        assert!(message.contains("expects 2"));
    }

    #[test]
    fn instance_errors() {
        assert!(parse_instance("T(a)\n").is_err());
        assert!(parse_instance("rel S(x) := x == 1\nrel S(y) := y == 1\n").is_err());
        assert!(parse_instance("rel S(x) := y == 1\n").is_err());
        assert!(parse_instance("rel S(x, x) := x == 1\n").is_err());
        assert!(parse_instance("builtin Foo\n").is_err());
    }

    #[test]
    fn empty_constraint_section() {
        let inst = parse_instance("# only a definition\nrel S(x,y) := ~x | y == 1\n").unwrap();
        assert!(inst.constraints().is_empty());
    }

    #[test]
    fn builtins_comments_and_vars() {
        let text = "builtin U I Neq   # the hardness relations\nvar t f\nNeq(t, f)\nI(t, f, f)\n";
        let inst = parse_instance(text).unwrap();
        assert_eq!(inst.defs().len(), 3);
        assert!(inst.defs().iter().all(|d| d.builtin));
        assert_eq!(inst.constraints().len(), 2);
    }

    #[test]
    fn relation_named_like_a_keyword_is_a_constraint() {
        let inst = parse_instance("rel var(x) := x == 1\nvar(a)\n").unwrap();
        assert_eq!(inst.constraints().len(), 1);
    }

    #[test]
    fn invalid_utf8_is_a_diagnostic() {
        assert!(parse_formula_bytes(&[0xff, 0xfe]).is_err());
    }
}
