//! Recursive-descent parser.
//!
//! ```text
//! expr   := term (("+" | "-") term)*
//! term   := factor (("*" | "/") factor)*
//! factor := "-" factor | power
//! power  := atom ("^" factor)?
//! atom   := Number | Ident | Ident "(" expr ")" | "(" expr ")"
//! ```
//!
//! `^` is right-associative and binds tighter than unary minus.

use super::ast::{BinOp, Expr, Func, Var};
use super::lexer::{Token, TokenKind};
use super::ExprError;

struct Parser<'a> {
    tokens: &'a [Token],
    pos: usize,
    end_offset: usize,
}

impl<'a> Parser<'a> {
    fn peek(&self) -> Option<&'a Token> {
        self.tokens.get(self.pos)
    }

    fn peek_kind(&self) -> Option<TokenKind> {
        self.peek().map(|t| t.kind)
    }

    fn offset(&self) -> usize {
        self.peek().map_or(self.end_offset, |t| t.offset)
    }

    fn error(&self, expected: &str) -> ExprError {
        ExprError::Parse {
            offset: self.offset(),
            expected: expected.to_string(),
        }
    }

    fn expect(&mut self, kind: TokenKind, expected: &str) -> Result<(), ExprError> {
        if self.peek_kind() == Some(kind) {
            self.pos += 1;
            Ok(())
        } else {
            Err(self.error(expected))
        }
    }

    fn expr(&mut self) -> Result<Expr, ExprError> {
        let mut lhs = self.term()?;
        loop {
            let op = match self.peek_kind() {
                Some(TokenKind::Plus) => BinOp::Add,
                Some(TokenKind::Minus) => BinOp::Sub,
                _ => return Ok(lhs),
            };
            self.pos += 1;
            let rhs = self.term()?;
            lhs = Expr::binary(op, lhs, rhs);
        }
    }

    fn term(&mut self) -> Result<Expr, ExprError> {
        let mut lhs = self.factor()?;
        loop {
            let op = match self.peek_kind() {
                Some(TokenKind::Star) => BinOp::Mul,
                Some(TokenKind::Slash) => BinOp::Div,
                _ => return Ok(lhs),
            };
            self.pos += 1;
            let rhs = self.factor()?;
            lhs = Expr::binary(op, lhs, rhs);
        }
    }

    fn factor(&mut self) -> Result<Expr, ExprError> {
        if self.peek_kind() == Some(TokenKind::Minus) {
            self.pos += 1;
            let inner = self.factor()?;
            return Ok(Expr::Neg(Box::new(inner)));
        }
        self.power()
    }

    fn power(&mut self) -> Result<Expr, ExprError> {
        let base = self.atom()?;
        if self.peek_kind() == Some(TokenKind::Caret) {
            self.pos += 1;
            let exponent = self.factor()?;
            return Ok(Expr::binary(BinOp::Pow, base, exponent));
        }
        Ok(base)
    }

    fn atom(&mut self) -> Result<Expr, ExprError> {
        let Some(tok) = self.peek() else {
            return Err(self.error("expression"));
        };
        match tok.kind {
            TokenKind::Number => {
                self.pos += 1;
                let x = tok
                    .number()
                    .ok_or(ExprError::Lex { offset: tok.offset })?;
                Ok(Expr::Constant(x))
            }
            TokenKind::Ident => {
                self.pos += 1;
                if self.peek_kind() == Some(TokenKind::LParen) {
                    let func = Func::from_name(&tok.lexeme).ok_or_else(|| {
                        ExprError::UnknownFunction {
                            name: tok.lexeme.clone(),
                            offset: tok.offset,
                        }
                    })?;
                    self.pos += 1;
                    let arg = self.expr()?;
                    self.expect(TokenKind::RParen, "')'")?;
                    return Ok(Expr::Call(func, Box::new(arg)));
                }
                Ok(match Var::from_name(&tok.lexeme) {
                    Some(v) => Expr::Variable(v),
                    None => Expr::NamedConst(tok.lexeme.clone()),
                })
            }
            TokenKind::LParen => {
                self.pos += 1;
                let inner = self.expr()?;
                self.expect(TokenKind::RParen, "')'")?;
                Ok(inner)
            }
            _ => Err(self.error("expression")),
        }
    }
}

/// Parses a complete token stream into an expression tree.
pub fn parse(tokens: &[Token]) -> Result<Expr, ExprError> {
    let end_offset = tokens
        .last()
        .map_or(0, |t| t.offset + t.lexeme.len());
    let mut p = Parser {
        tokens,
        pos: 0,
        end_offset,
    };
    let e = p.expr()?;
    if p.pos != tokens.len() {
        return Err(p.error("operator or end of input"));
    }
    Ok(e)
}
