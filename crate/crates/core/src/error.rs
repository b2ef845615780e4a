use thiserror::Error;

use crate::graph::{EdgeId, VertexId};

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum Error {
    #[error("unknown edge {0}")]
    UnknownEdge(EdgeId),
    #[error("unknown vertex {0}")]
    UnknownVertex(VertexId),
    #[error("edge {edge} is not incident with vertex {vertex}")]
    NotIncident { vertex: VertexId, edge: EdgeId },
    #[error("expected two distinct edges, got {0} twice")]
    SameEdge(EdgeId),

    #[error("edge set is not a cut: the graph stays connected")]
    CutDoesNotDisconnect,
    #[error("removing the cut leaves {0} components, expected 2")]
    CutComponents(usize),
    #[error("cut has {0} edges, expected 2 or 3")]
    CutSize(usize),
    #[error("graph is a single circuit; degree-two suppression has no anchor vertex")]
    IsCircuit,

    #[error("edge set is not an even subgraph")]
    NotEven,
    #[error("no circuit through edge {0} inside the allowed edges")]
    NoCircuit(EdgeId),
    #[error("four-flow is not nowhere-zero on its host")]
    NotNowhereZero,
    #[error("four-flow violates conservation")]
    NotAFlow,
    #[error("cycle space dimension {dimension} exceeds the enumeration cap {cap}")]
    DimensionTooLarge { dimension: usize, cap: usize },
    #[error("search budget exhausted after {nodes} nodes")]
    BudgetExceeded { nodes: u64 },

    #[error("invalid contraction sequence: {0}")]
    InvalidSequence(String),
    #[error("precondition violated: {0}")]
    Precondition(String),
    #[error("certificate failed verification: {0}")]
    Verification(String),
    #[error("glue pairing mismatch: {0}")]
    Pairing(String),

    #[error("parse error on line {line}: {message}")]
    Parse { line: usize, message: String },

    #[error("{stage}: {source}")]
    Stage { stage: &'static str, source: Box<Error> },
}

impl Error {
    pub(crate) fn precondition(msg: impl Into<String>) -> Self {
        Error::Precondition(msg.into())
    }

    /// Whether the failure is a search budget running out somewhere inside.
    pub fn is_budget(&self) -> bool {
        match self {
            Error::BudgetExceeded { .. } => true,
            Error::Stage { source, .. } => source.is_budget(),
            _ => false,
        }
    }
}

pub type Result<T> = std::result::Result<T, Error>;

/// Labels an error with the pipeline stage it surfaced from.
pub(crate) trait StageExt<T> {
    fn stage(self, stage: &'static str) -> Result<T>;
}

impl<T> StageExt<T> for Result<T> {
    fn stage(self, stage: &'static str) -> Result<T> {
        self.map_err(|e| Error::Stage { stage, source: Box::new(e) })
    }
}
