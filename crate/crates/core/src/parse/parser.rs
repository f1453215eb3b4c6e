use crate::error::{Error, Result, SourceSpan};
use crate::syntax::{Atom, AtomOp, SurfaceFormula, TermExpr};

use super::lexer::{Tok, Token};

const MAX_DEPTH: usize = 200;

/// Recursive-descent parser over a token slice ending in `Eof`.
pub(crate) struct Parser<'t> {
    tokens: &'t [Token],
    pos: usize,
    depth: usize,
    /// Index of the matching `)` for each `(`.
    matching: Vec<Option<usize>>,
}

impl<'t> Parser<'t> {
    pub(crate) fn new(tokens: &'t [Token]) -> Self {
        let mut matching = vec![None; tokens.len()];
        let mut stack = Vec::new();
        for (i, t) in tokens.iter().enumerate() {
            match t.tok {
                Tok::LParen => stack.push(i),
                Tok::RParen => {
                    if let Some(open) = stack.pop() {
                        matching[open] = Some(i);
                    }
                }
                _ => {}
            }
        }
        Self {
            tokens,
            pos: 0,
            depth: 0,
            matching,
        }
    }

    pub(crate) fn peek(&self) -> &Tok {
        &self.tokens[self.pos].tok
    }

    pub(crate) fn span(&self) -> SourceSpan {
        self.tokens[self.pos].span
    }

    pub(crate) fn bump(&mut self) -> &Token {
        let t = &self.tokens[self.pos];
        if self.pos + 1 < self.tokens.len() {
            self.pos += 1;
        }
        t
    }

    pub(crate) fn error<T>(&self, message: impl Into<String>) -> Result<T> {
        Err(Error::Syntax {
            span: self.span(),
            message: message.into(),
        })
    }

    pub(crate) fn expect(&mut self, tok: Tok) -> Result<SourceSpan> {
        if *self.peek() == tok {
            Ok(self.bump().span)
        } else {
            self.error(format!("expected {}, found {}", tok.describe(), self.peek().describe()))
        }
    }

    pub(crate) fn expect_ident(&mut self) -> Result<(String, SourceSpan)> {
        match self.peek().clone() {
            Tok::Ident(name) => {
                let span = self.bump().span;
                Ok((name, span))
            }
            other => self.error(format!("expected identifier, found {}", other.describe())),
        }
    }

    pub(crate) fn expect_eof(&mut self) -> Result<()> {
        if *self.peek() == Tok::Eof {
            Ok(())
        } else {
            self.error(format!("unexpected {}", self.peek().describe()))
        }
    }

    fn enter(&mut self) -> Result<()> {
        self.depth += 1;
        if self.depth > MAX_DEPTH {
            return self.error(format!("nesting deeper than {MAX_DEPTH}"));
        }
        Ok(())
    }

    fn leave(&mut self) {
        self.depth -= 1;
    }

    pub(crate) fn formula(&mut self) -> Result<SurfaceFormula> {
        self.enter()?;
        let mut left = self.conjunction()?;
        while *self.peek() == Tok::Or {
            let op = self.bump().span;
            let right = self.operand_after(op, "or", Self::conjunction)?;
            left = left.or(right);
        }
        self.leave();
        Ok(left)
    }

    fn conjunction(&mut self) -> Result<SurfaceFormula> {
        let mut left = self.unit()?;
        while *self.peek() == Tok::And {
            let op = self.bump().span;
            let right = self.operand_after(op, "and", Self::unit)?;
            left = left.and(right);
        }
        Ok(left)
    }

    /// Parses the right operand of a binary operator, reporting a missing
    /// operand at the operator itself.
    fn operand_after<T>(
        &mut self,
        op: SourceSpan,
        symbol: &str,
        parse: impl FnOnce(&mut Self) -> Result<T>,
    ) -> Result<T> {
        if matches!(self.peek(), Tok::Eof | Tok::RParen) {
            return Err(Error::Syntax {
                span: op,
                message: format!("missing operand after `{symbol}`"),
            });
        }
        parse(self)
    }

    fn unit(&mut self) -> Result<SurfaceFormula> {
        self.enter()?;
        let out = match self.peek() {
            Tok::Not => {
                let op = self.bump().span;
                self.operand_after(op, "not", Self::unit)?.not()
            }
            Tok::True => {
                self.bump();
                SurfaceFormula::True
            }
            Tok::False => {
                self.bump();
                SurfaceFormula::False
            }
            Tok::LParen if self.paren_encloses_formula() => {
                self.bump();
                let inner = self.formula()?;
                self.expect(Tok::RParen)?;
                inner
            }
            _ => SurfaceFormula::Atom(self.atom()?),
        };
        self.leave();
        Ok(out)
    }

    /// A `(` at unit position opens a formula unless the group is the left
    /// operand of a term operator or comparison, as in `(x | y) == 1`.
    fn paren_encloses_formula(&self) -> bool {
        match self.matching[self.pos] {
            Some(close) => !matches!(
                self.tokens.get(close + 1).map(|t| &t.tok),
                Some(Tok::EqEq | Tok::NotEq | Tok::Amp | Tok::Pipe)
            ),
            None => true,
        }
    }

    fn atom(&mut self) -> Result<Atom> {
        let begin = self.span();
        let lhs = self.term()?;
        let op = match self.peek() {
            Tok::EqEq => AtomOp::Eq,
            Tok::NotEq => AtomOp::Ne,
            other => return self.error(format!("expected `==` or `!=`, found {}", other.describe())),
        };
        let op_span = self.bump().span;
        let rhs = self.operand_after(op_span, op.symbol(), Self::term)?;
        let end = self.tokens[self.pos.saturating_sub(1)].span.end;
        Ok(Atom {
            lhs,
            op,
            rhs,
            span: SourceSpan::new(begin.begin, end.max(begin.begin), begin.line, begin.column),
        })
    }

    pub(crate) fn term(&mut self) -> Result<TermExpr> {
        self.enter()?;
        let mut left = self.join()?;
        while *self.peek() == Tok::Amp {
            let op = self.bump().span;
            let right = self.operand_after(op, "&", Self::join)?;
            left = left.meet(right);
        }
        self.leave();
        Ok(left)
    }

    fn join(&mut self) -> Result<TermExpr> {
        let mut left = self.term_unary()?;
        while *self.peek() == Tok::Pipe {
            let op = self.bump().span;
            let right = self.operand_after(op, "|", Self::term_unary)?;
            left = left.join(right);
        }
        Ok(left)
    }

    fn term_unary(&mut self) -> Result<TermExpr> {
        self.enter()?;
        let out = match self.peek().clone() {
            Tok::Tilde => {
                let op = self.bump().span;
                self.operand_after(op, "~", Self::term_unary)?.not()
            }
            Tok::LParen => {
                self.bump();
                let t = self.term()?;
                self.expect(Tok::RParen)?;
                t
            }
            Tok::Zero => {
                self.bump();
                TermExpr::Zero
            }
            Tok::One => {
                self.bump();
                TermExpr::One
            }
            Tok::Ident(name) => {
                self.bump();
                TermExpr::Var(name)
            }
            other => return self.error(format!("expected a term, found {}", other.describe())),
        };
        self.leave();
        Ok(out)
    }
}
