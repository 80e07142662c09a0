use std::path::PathBuf;

/// Failures that end a command, each mapped to a process exit code.
#[derive(Debug, thiserror::Error)]
pub enum CliError {
    #[error("cannot read {path}: {source}")]
    UnreadableInput {
        path: PathBuf,
        source: std::io::Error,
    },

    #[error("{path} is not a valid image: {reason}")]
    MalformedImage { path: PathBuf, reason: String },

    #[error("cannot write {path}: {source}")]
    UnwritableOutput {
        path: PathBuf,
        source: std::io::Error,
    },

    #[error("infeasible page spec: {0}")]
    InfeasibleSpec(String),

    #[error("schema mismatch: {0}")]
    SchemaMismatch(String),

    #[error("{0}")]
    Usage(String),
}

impl CliError {
    pub fn exit_code(&self) -> i32 {
        match self {
            CliError::UnreadableInput { .. } | CliError::Usage(_) => 2,
            CliError::MalformedImage { .. } => 3,
            CliError::UnwritableOutput { .. } => 4,
            CliError::InfeasibleSpec(_) => 5,
            CliError::SchemaMismatch(_) => 6,
        }
    }

    pub fn kind(&self) -> &'static str {
        match self {
            CliError::UnreadableInput { .. } => "unreadable_input",
            CliError::MalformedImage { .. } => "malformed_image",
            CliError::UnwritableOutput { .. } => "unwritable_output",
            CliError::InfeasibleSpec(_) => "infeasible_spec",
            CliError::SchemaMismatch(_) => "schema_mismatch",
            CliError::Usage(_) => "usage",
        }
    }

    /// Single-line JSON diagnostic for the error stream.
    pub fn to_json_line(&self) -> String {
        serde_json::json!({
            "error": self.kind(),
            "code": self.exit_code(),
            "message": self.to_string(),
        })
        .to_string()
    }
}
