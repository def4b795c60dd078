use serde::Serialize;
use thiserror::Error;

use tensor_chromatic::constructors::GraphError;
use tensor_chromatic::format::ParseError;
use tensor_chromatic::invariants::InvariantError;
use tensor_chromatic::oracles::OracleError;
use tensor_chromatic::tensor::TensorError;

#[derive(Debug, Error)]
pub enum CliError {
    #[error("cannot read {path}: {source}")]
    Io { path: String, source: std::io::Error },
    #[error("{path}: {source}")]
    Parse { path: String, source: ParseError },
    #[error("{0}")]
    Usage(String),
    #[error(transparent)]
    Invariant(#[from] InvariantError),
    #[error(transparent)]
    Graph(#[from] GraphError),
    #[error(transparent)]
    Oracle(#[from] OracleError),
    #[error(transparent)]
    Tensor(#[from] TensorError),
    #[error("engine and oracle disagree")]
    Mismatch,
}

/// Coarse error class, reported alongside the message.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(rename_all = "snake_case")]
pub enum ErrorKind {
    Parse,
    Precondition,
    Instability,
    Limits,
    Mismatch,
}

impl ErrorKind {
    pub fn exit_code(self) -> i32 {
        match self {
            ErrorKind::Mismatch => 1,
            ErrorKind::Parse => 2,
            ErrorKind::Precondition => 3,
            ErrorKind::Instability | ErrorKind::Limits => 4,
        }
    }
}

fn graph_kind(e: &GraphError) -> ErrorKind {
    match e {
        GraphError::VertexOutOfRange { .. } => ErrorKind::Parse,
        _ => ErrorKind::Precondition,
    }
}

fn tensor_kind(e: &TensorError) -> ErrorKind {
    match e {
        TensorError::EmptyContraction | TensorError::DependentBasis => ErrorKind::Precondition,
        _ => ErrorKind::Parse,
    }
}

impl CliError {
    pub fn kind(&self) -> ErrorKind {
        match self {
            CliError::Io { .. } | CliError::Usage(_) => ErrorKind::Parse,
            CliError::Parse { source, .. } => match source {
                ParseError::Tensor(t) => tensor_kind(t),
                ParseError::Graph(g) => graph_kind(g),
                _ => ErrorKind::Parse,
            },
            CliError::Invariant(e) => match e {
                InvariantError::Tensor(t) => tensor_kind(t),
                InvariantError::Precondition(_) | InvariantError::Degenerate { .. } => ErrorKind::Precondition,
                InvariantError::BadConditions(_) | InvariantError::BadConfig(_) => ErrorKind::Parse,
                InvariantError::Unstable { .. } => ErrorKind::Instability,
                InvariantError::LimitExceeded { .. } | InvariantError::Resource(_) => ErrorKind::Limits,
            },
            CliError::Graph(g) => graph_kind(g),
            CliError::Oracle(o) => match o {
                OracleError::Graph(g) => graph_kind(g),
                OracleError::TooManyColumns(_) => ErrorKind::Limits,
                _ => ErrorKind::Precondition,
            },
            CliError::Tensor(t) => tensor_kind(t),
            CliError::Mismatch => ErrorKind::Mismatch,
        }
    }

    /// Short machine-friendly tag; loops are singled out because they make
    /// every count vanish.
    pub fn tag(&self) -> &'static str {
        let is_loop = matches!(
            self,
            CliError::Graph(GraphError::Loop(_)) | CliError::Oracle(OracleError::Graph(GraphError::Loop(_)))
        );
        if is_loop {
            return "loop";
        }
        match self.kind() {
            ErrorKind::Parse => "parse",
            ErrorKind::Precondition => "precondition",
            ErrorKind::Instability => "instability",
            ErrorKind::Limits => "limits",
            ErrorKind::Mismatch => "mismatch",
        }
    }
}
