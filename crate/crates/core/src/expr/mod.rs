//! Path-expression syntax: abstract syntax tree, parser, printer and the
//! domain/range signature checker.

mod ast;
mod format;
mod lexer;
mod parser;
mod signature;

use std::fmt;

pub use ast::{PathExpr, Pattern, Scalar, Term};
pub use format::{format, format_pattern};
pub use parser::{parse, parse_pattern, parse_program};
pub use signature::{check_signatures, ClassPair, SignatureReport, Violation};

/// A syntax error at a byte offset into the source.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct ParseError {
    pub offset: usize,
    pub message: String,
}

impl ParseError {
    pub(crate) fn new(offset: usize, message: impl Into<String>) -> Self {
        ParseError {
            offset,
            message: message.into(),
        }
    }
}

impl fmt::Display for ParseError {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "syntax error at offset {}: {}", self.offset, self.message)
    }
}

impl std::error::Error for ParseError {}
