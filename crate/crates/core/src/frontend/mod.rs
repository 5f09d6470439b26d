//! Problem files, command-line interface and machine-readable reports.

pub mod cli;
mod lexer;
mod parser;
mod report;

pub use parser::{parse_formula, parse_polynomial, parse_problem, print_problem};
pub use report::{Report, SolverEcho, REPORT_SCHEMA, SCHEMA_VERSION};

/// A syntax or declaration error with a 1-based source position.
#[derive(Debug, Clone, PartialEq, Eq, thiserror::Error)]
#[error("{line}:{col}: {message}")]
pub struct ParseError {
    pub line: usize,
    pub col: usize,
    pub message: String,
}

impl ParseError {
    pub(crate) fn at(pos: lexer::Pos, message: impl Into<String>) -> Self {
        ParseError {
            line: pos.line,
            col: pos.col,
            message: message.into(),
        }
    }
}
