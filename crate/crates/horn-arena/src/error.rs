//! Error types shared across the format pipeline.

use crate::lexer::Position;

/// Why a benchmark failed to parse. Every variant carries the source
/// location and maps to a stable machine-readable reason code so that
/// rejected files can be reported instead of silently dropped.
#[derive(Debug, Clone, thiserror::Error)]
pub enum ParseError {
    #[error("{pos}: lexical error: {msg}")]
    Lexical { pos: Position, msg: String },
    #[error("{pos}: syntax error: {msg}")]
    Syntax { pos: Position, msg: String },
    #[error("{pos}: sort error: {msg}")]
    Sort { pos: Position, msg: String },
    #[error("{pos}: unknown command `{name}`")]
    UnknownCommand { pos: Position, name: String },
}

impl ParseError {
    pub fn position(&self) -> Position {
        match self {
            ParseError::Lexical { pos, .. }
            | ParseError::Syntax { pos, .. }
            | ParseError::Sort { pos, .. }
            | ParseError::UnknownCommand { pos, .. } => *pos,
        }
    }

    pub fn reason_code(&self) -> &'static str {
        match self {
            ParseError::Lexical { .. } => "lexical-error",
            ParseError::Syntax { .. } => "syntax-error",
            ParseError::Sort { .. } => "sort-error",
            ParseError::UnknownCommand { .. } => "unknown-command",
        }
    }
}

/// Raised by `normalize` when a clause contains a construct the
/// CHC-COMP profile cannot rewrite away.
#[derive(Debug, Clone, thiserror::Error)]
#[error("clause {clause_index}: not normalizable: {msg}")]
pub struct NormalizeError {
    pub clause_index: usize,
    pub msg: String,
}
