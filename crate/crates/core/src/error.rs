use thiserror::Error;

use crate::temporal_graph::{NodeId, Time};

pub type Result<T, E = Error> = std::result::Result<T, E>;

#[derive(Debug, Error, Clone, PartialEq)]
pub enum Error {
    #[error("invalid graph: {0}")]
    InvalidGraph(String),

    #[error("parse error on line {line}: {message}")]
    Parse { line: usize, message: String },

    #[error("unknown edge {u}-{v} with label {label}")]
    UnknownEdge { u: NodeId, v: NodeId, label: Time },

    #[error("seed ({node}, {time}) outside V x [0, {lifetime}]")]
    SeedOutOfRange { node: NodeId, time: Time, lifetime: Time },

    #[error("node {0} appears infected more than once in the log")]
    DuplicateInfection(NodeId),

    #[error("invalid parameter: {0}")]
    InvalidParameter(String),

    #[error("round submitted {given} seeds but at most {allowed} are allowed")]
    TooManySeeds { given: usize, allowed: usize },

    #[error("round budget of {0} rounds exhausted")]
    RoundBudgetExhausted(usize),

    #[error("feedback contradicts prior knowledge: {0}")]
    InconsistentFeedback(String),

    #[error("adversary graph is inconsistent with round {round}: {reason}")]
    AdversaryInconsistent { round: usize, reason: String },

    #[error("unsupported: {0}")]
    Unsupported(String),

    #[error("i/o error: {0}")]
    Io(String),
}

impl From<std::io::Error> for Error {
    fn from(err: std::io::Error) -> Self {
        Error::Io(err.to_string())
    }
}

impl From<csv::Error> for Error {
    fn from(err: csv::Error) -> Self {
        Error::Io(err.to_string())
    }
}
