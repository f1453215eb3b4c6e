use crate::formula::{ClausalFormula, InnerClause, OuterLiteral, Term};
use crate::instance::CspInstance;
use crate::syntax::{SurfaceFormula, TermExpr};

pub fn render_term_expr(term: &TermExpr) -> String {
    let mut out = String::new();
    write_meet(term, &mut out);
    out
}

fn write_meet(term: &TermExpr, out: &mut String) {
    match term {
        TermExpr::Meet(a, b) => {
            match **a {
                TermExpr::Meet(..) => write_meet(a, out),
                _ => write_meet_operand(a, out, true),
            }
            out.push_str(" & ");
            match **b {
                TermExpr::Meet(..) => paren(b, out),
                _ => write_meet_operand(b, out, true),
            }
        }
        _ => write_meet_operand(term, out, false),
    }
}

// Joins inside a meet get parentheses for readability even though `|`
// already binds tighter.
fn write_meet_operand(term: &TermExpr, out: &mut String, in_meet: bool) {
    match term {
        TermExpr::Join(..) if in_meet => paren(term, out),
        _ => write_join(term, out),
    }
}

fn write_join(term: &TermExpr, out: &mut String) {
    match term {
        TermExpr::Join(a, b) => {
            write_join(a, out);
            out.push_str(" | ");
            write_unary(b, out);
        }
        _ => write_unary(term, out),
    }
}

fn write_unary(term: &TermExpr, out: &mut String) {
    match term {
        TermExpr::Zero => out.push('0'),
        TermExpr::One => out.push('1'),
        TermExpr::Var(name) => out.push_str(name),
        TermExpr::Not(t) => {
            out.push('~');
            write_unary(t, out);
        }
        TermExpr::Meet(..) | TermExpr::Join(..) => paren(term, out),
    }
}

fn paren(term: &TermExpr, out: &mut String) {
    out.push('(');
    write_meet(term, out);
    out.push(')');
}

pub fn render_formula(formula: &SurfaceFormula) -> String {
    let mut out = String::new();
    write_or(formula, &mut out);
    out
}

fn write_or(f: &SurfaceFormula, out: &mut String) {
    match f {
        SurfaceFormula::Or(a, b) => {
            write_or(a, out);
            out.push_str(" or ");
            match **b {
                SurfaceFormula::Or(..) => formula_paren(b, out),
                _ => write_and(b, out),
            }
        }
        _ => write_and(f, out),
    }
}

fn write_and(f: &SurfaceFormula, out: &mut String) {
    match f {
        SurfaceFormula::And(a, b) => {
            write_and(a, out);
            out.push_str(" and ");
            match **b {
                SurfaceFormula::Or(..) | SurfaceFormula::And(..) => formula_paren(b, out),
                _ => write_unit(b, out),
            }
        }
        SurfaceFormula::Or(..) => formula_paren(f, out),
        _ => write_unit(f, out),
    }
}

fn write_unit(f: &SurfaceFormula, out: &mut String) {
    match f {
        SurfaceFormula::True => out.push_str("true"),
        SurfaceFormula::False => out.push_str("false"),
        SurfaceFormula::Atom(a) => {
            write_meet(&a.lhs, out);
            out.push(' ');
            out.push_str(a.op.symbol());
            out.push(' ');
            write_meet(&a.rhs, out);
        }
        SurfaceFormula::Not(g) => {
            out.push_str("not ");
            match **g {
                SurfaceFormula::True | SurfaceFormula::False | SurfaceFormula::Not(_) => write_unit(g, out),
                _ => formula_paren(g, out),
            }
        }
        SurfaceFormula::And(..) | SurfaceFormula::Or(..) => formula_paren(f, out),
    }
}

fn formula_paren(f: &SurfaceFormula, out: &mut String) {
    out.push('(');
    write_or(f, out);
    out.push(')');
}

fn inner_clause(clause: &InnerClause, vars: &[String], out: &mut String) {
    if clause.is_empty() {
        out.push('0');
        return;
    }
    for (i, lit) in clause.literals().iter().enumerate() {
        if i > 0 {
            out.push_str(" | ");
        }
        if !lit.positive {
            out.push('~');
        }
        out.push_str(&vars[lit.var.index()]);
    }
}

/// Renders an inner-CNF term; multi-literal clauses are parenthesized when
/// the term has more than one clause.
pub fn render_term(term: &Term, vars: &[String]) -> String {
    let mut out = String::new();
    write_term(term, vars, &mut out);
    out
}

fn write_term(term: &Term, vars: &[String], out: &mut String) {
    if term.is_one() {
        out.push('1');
        return;
    }
    let many = term.clauses().len() > 1;
    for (i, c) in term.clauses().iter().enumerate() {
        if i > 0 {
            out.push_str(" & ");
        }
        let wrap = many && c.len() > 1;
        if wrap {
            out.push('(');
        }
        inner_clause(c, vars, out);
        if wrap {
            out.push(')');
        }
    }
}

fn write_literal(lit: &OuterLiteral, vars: &[String], out: &mut String) {
    write_term(&lit.term, vars, out);
    out.push_str(if lit.positive { " == 1" } else { " != 1" });
}

/// Renders a clausal formula in the formula grammar: `true` for the empty
/// conjunction and `false` for an empty clause.
pub fn render_clausal(formula: &ClausalFormula) -> String {
    if formula.is_true() {
        return "true".into();
    }
    let mut out = String::new();
    let many = formula.clauses().len() > 1;
    for (i, clause) in formula.clauses().iter().enumerate() {
        if i > 0 {
            out.push_str(" and ");
        }
        if clause.is_empty() {
            out.push_str("false");
            continue;
        }
        let wrap = many && clause.len() > 1;
        if wrap {
            out.push('(');
        }
        for (j, lit) in clause.literals().iter().enumerate() {
            if j > 0 {
                out.push_str(" or ");
            }
            write_literal(lit, formula.vars(), &mut out);
        }
        if wrap {
            out.push(')');
        }
    }
    out
}

/// Renders an instance file: definitions, the variable list, constraints.
pub fn render_instance(inst: &CspInstance) -> String {
    let mut out = String::new();
    for def in inst.defs() {
        if def.builtin {
            out.push_str(&format!("builtin {}\n", def.name));
        } else {
            out.push_str(&format!(
                "rel {}({}) := {}\n",
                def.name,
                def.params.join(", "),
                render_formula(&def.body)
            ));
        }
    }
    if !inst.vars().is_empty() {
        out.push_str("var ");
        out.push_str(&inst.vars().join(" "));
        out.push('\n');
    }
    for c in inst.constraints() {
        let args: Vec<&str> = c.args.iter().map(|a| inst.vars()[a.index()].as_str()).collect();
        out.push_str(&format!("{}({})\n", c.relation, args.join(", ")));
    }
    out
}
