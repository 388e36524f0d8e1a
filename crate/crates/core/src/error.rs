use std::path::PathBuf;

use thiserror::Error;

/// Constraint that made a PAC plan infeasible.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum BindingConstraint {
    /// No PAC on the grid reaches the requested eavesdropper SEP.
    MinEveSep,
    /// The eavesdropper target is reachable, but never together with the
    /// legitimate SEP ceiling.
    MaxLegSep,
}

impl std::fmt::Display for BindingConstraint {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        match self {
            BindingConstraint::MinEveSep => f.write_str("min-eve-sep"),
            BindingConstraint::MaxLegSep => f.write_str("max-leg-sep"),
        }
    }
}

#[derive(Debug, Error)]
pub enum Error {
    #[error("power allocation coefficient {0} outside (0, 0.5)")]
    InvalidPac(f64),
    #[error("invalid parameter: {0}")]
    InvalidParameter(String),
    #[error("length mismatch: expected {expected}, got {actual}")]
    LengthMismatch { expected: usize, actual: usize },
    #[error("shape mismatch: {0}")]
    ShapeMismatch(String),
    #[error("empty payload for knowledge-base item")]
    EmptyPayload,
    #[error("duplicate knowledge-base id {0:?}")]
    DuplicateId(String),
    #[error("knowledge base is empty")]
    EmptyKnowledgeBase,
    #[error("infeasible plan: {constraint} cannot be met (best achievable {best:.6})")]
    Infeasible {
        constraint: BindingConstraint,
        best: f64,
    },
    #[error("image format: {0}")]
    Format(String),
    #[error("{path}: {source}")]
    Io {
        path: PathBuf,
        #[source]
        source: std::io::Error,
    },
}

pub type Result<T> = std::result::Result<T, Error>;
