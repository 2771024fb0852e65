use std::path::PathBuf;

use thiserror::Error;

pub type Result<T, E = Error> = std::result::Result<T, E>;

/// A single schema problem found while validating an input file.
#[derive(Debug, Clone, PartialEq)]
pub struct SchemaIssue {
    /// Dotted path of the offending field, e.g. `ship.speed`.
    pub field: String,
    /// 1-based line in the source file, when it could be located.
    pub line: Option<usize>,
    pub message: String,
}

impl std::fmt::Display for SchemaIssue {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        match self.line {
            Some(line) => write!(f, "line {line}: field `{}`: {}", self.field, self.message),
            None => write!(f, "field `{}`: {}", self.field, self.message),
        }
    }
}

#[derive(Debug, Error)]
pub enum Error {
    #[error("invalid input: {0}")]
    InvalidInput(String),

    #[error("point ({x}, {y}) lies outside the environment grid")]
    OutOfDomain { x: f64, y: f64 },

    #[error("migration rule violated: {0}")]
    RuleViolation(String),

    #[error(
        "{count} obstacles lie between the endpoints but the bypass cap is {cap}; \
         enumerating 2^{count} bypass classes is refused"
    )]
    TooManyObstacles { count: usize, cap: usize },

    #[error("instance needs {bits} bits but exhaustive search is limited to {max}")]
    InstanceTooLarge { bits: usize, max: usize },

    #[error("{}: {} schema problem(s):\n{}", path.display(), issues.len(), render_issues(issues))]
    Schema { path: PathBuf, issues: Vec<SchemaIssue> },

    #[error("{}: {source}", path.display())]
    Io {
        path: PathBuf,
        #[source]
        source: std::io::Error,
    },

    #[error("internal error: {0}")]
    Internal(String),
}

fn render_issues(issues: &[SchemaIssue]) -> String {
    issues.iter().map(|i| format!("  - {i}")).collect::<Vec<_>>().join("\n")
}

impl Error {
    pub(crate) fn invalid(msg: impl Into<String>) -> Self {
        Error::InvalidInput(msg.into())
    }
}
