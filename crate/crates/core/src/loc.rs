use std::fmt;
use std::sync::Arc;

use serde::Serialize;

/// A position in a source file. Lines and columns are 1-based.
#[derive(Clone, Debug, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize)]
pub struct SourceLocation {
    pub file: Arc<str>,
    pub line: u32,
    pub column: u32,
}

impl SourceLocation {
    pub fn new(file: impl Into<Arc<str>>, line: u32, column: u32) -> Self {
        let file = file.into();
        debug_assert!(!file.is_empty() && line >= 1 && column >= 1);
        SourceLocation { file, line, column }
    }

    /// Location used for synthesized nodes that have no source text.
    pub fn builtin() -> Self {
        SourceLocation::new("<builtin>", 1, 1)
    }

    /// `file:line`, the form used in counterexample output.
    pub fn file_line(&self) -> String {
        format!("{}:{}", self.file, self.line)
    }
}

impl fmt::Display for SourceLocation {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}:{}:{}", self.file, self.line, self.column)
    }
}
