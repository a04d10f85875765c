use std::fmt;

use thiserror::Error;

/// Parse failure in one of the text formats. `line` is 1-based; 0 means the
/// problem concerns the file as a whole.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct FormatError {
    pub line: usize,
    pub message: String,
}

impl FormatError {
    pub fn at(line: usize, message: impl Into<String>) -> Self {
        FormatError { line, message: message.into() }
    }
}

impl fmt::Display for FormatError {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.line == 0 {
            f.write_str(&self.message)
        } else {
            write!(f, "line {}: {}", self.line, self.message)
        }
    }
}

impl std::error::Error for FormatError {}

#[derive(Debug, Error)]
pub enum ExperimentError {
    #[error("config: {0}")]
    Config(String),
    #[error("cell {cell} (p={p}, secondary={secondary}): graph generation failed: {source}")]
    Generation {
        cell: usize,
        p: f64,
        secondary: f64,
        #[source]
        source: walk2vec_core::Error,
    },
    #[error("cell {cell} (p={p}, secondary={secondary}): {source}")]
    Numerical {
        cell: usize,
        p: f64,
        secondary: f64,
        #[source]
        source: walk2vec_core::Error,
    },
}

/// Process exit codes used by the command-line tool.
pub mod exit {
    pub const OK: i32 = 0;
    pub const OTHER: i32 = 1;
    pub const CONFIG: i32 = 2;
    pub const GENERATION: i32 = 3;
    pub const NUMERICAL: i32 = 4;
}

impl ExperimentError {
    pub fn exit_code(&self) -> i32 {
        match self {
            ExperimentError::Config(_) => exit::CONFIG,
            ExperimentError::Generation { .. } => exit::GENERATION,
            ExperimentError::Numerical { .. } => exit::NUMERICAL,
        }
    }
}
