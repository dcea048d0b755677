//! Lexing, parsing, include resolution and type checking of MiniQt.

pub mod ast;
pub mod include;
pub mod lexer;
pub mod parser;
pub mod pretty;
pub mod typeck;
pub mod typed;

use std::path::PathBuf;

use thiserror::Error;

use crate::config::VerifierConfig;
use crate::loc::SourceLocation;

pub use include::resolve_includes;
pub use lexer::{tokenize, Token, TokenKind};
pub use parser::parse;
pub use typeck::{typecheck, typecheck_with, TypeckOptions};
pub use typed::{SemType, TypedAst};

#[derive(Debug, Error, Clone, PartialEq)]
pub enum FrontendError {
    #[error("{loc}: lexical error: {message}")]
    Lex {
        loc: SourceLocation,
        message: String,
    },
    #[error("{loc}: parse error: expected {expected}, found {found}")]
    Parse {
        loc: SourceLocation,
        expected: String,
        found: String,
    },
    #[error("include <{name}> not found in search path {search_path:?}")]
    IncludeNotFound {
        name: String,
        search_path: Vec<PathBuf>,
    },
    #[error("{}: {message}", path.display())]
    Io { path: PathBuf, message: String },
    #[error("{loc}: type error: {message}")]
    Type {
        loc: SourceLocation,
        message: String,
    },
    #[error("{loc}: undefined symbol `{name}`")]
    UndefinedSymbol { loc: SourceLocation, name: String },
}

impl FrontendError {
    pub fn loc(&self) -> Option<&SourceLocation> {
        match self {
            FrontendError::Lex { loc, .. }
            | FrontendError::Parse { loc, .. }
            | FrontendError::Type { loc, .. }
            | FrontendError::UndefinedSymbol { loc, .. } => Some(loc),
            _ => None,
        }
    }
}

/// Runs the whole frontend on one source text.
pub fn load_source(
    source: &str,
    file: &str,
    config: &VerifierConfig,
) -> Result<TypedAst, FrontendError> {
    let tokens = tokenize(source, file)?;
    let program = parse(&tokens)?;
    let program = resolve_includes(program, config)?;
    typecheck(&program, config)
}

/// Reads `path` and runs the frontend on it.
pub fn load_file(
    path: &std::path::Path,
    config: &VerifierConfig,
) -> Result<TypedAst, FrontendError> {
    let text = std::fs::read_to_string(path).map_err(|e| FrontendError::Io {
        path: path.to_path_buf(),
        message: e.to_string(),
    })?;
    load_source(&text, &path.display().to_string(), config)
}
