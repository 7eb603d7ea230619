//! A small arithmetic expression language for user-defined immersions.
//!
//! Expressions range over the chart coordinates `u`, `v`, `z`, numeric
//! literals, named constants (`pi`, `e` and user-supplied ones such as
//! `c1`) and the unary functions `sin cos tan exp log sqrt sinh cosh tanh
//! atan abs`.

mod ast;
mod eval;
mod lexer;
mod parser;

use thiserror::Error;

pub use ast::{BinOp, Expr, Func, Var};
pub use eval::{apply_binary, apply_func, eval, Env};
pub use lexer::{tokenize, Token, TokenKind};
pub use parser::parse;

#[derive(Debug, Clone, PartialEq, Error)]
pub enum ExprError {
    #[error("unexpected character at offset {offset}")]
    Lex { offset: usize },
    #[error("parse error at offset {offset}: expected {expected}")]
    Parse { offset: usize, expected: String },
    #[error("unknown function `{name}` at offset {offset}")]
    UnknownFunction { name: String, offset: usize },
    #[error("unbound name `{name}`")]
    UnboundName { name: String },
    #[error("evaluation error: {reason}")]
    Eval { reason: String },
}

impl ExprError {
    pub fn kind(&self) -> &'static str {
        match self {
            ExprError::Lex { .. } => "LexError",
            ExprError::Parse { .. } => "ParseError",
            ExprError::UnknownFunction { .. } => "UnknownFunction",
            ExprError::UnboundName { .. } => "UnboundName",
            ExprError::Eval { .. } => "EvalError",
        }
    }
}

/// Tokenizes and parses `src`.
pub fn parse_str(src: &str) -> Result<Expr, ExprError> {
    parse(&tokenize(src)?)
}
