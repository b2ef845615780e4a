//! Cycle double covers of graphs that contain a prescribed non-separating
//! cycle, with nowhere-zero Z2×Z2 flows, small-circuit contraction, and
//! exhaustive oracles that certify every result.

pub mod budget;
pub mod cdc;
pub mod cycle_space;
pub mod degeneracy;
pub mod edge_set;
pub mod error;
pub mod flow;
pub mod generators;
pub mod graph;
pub mod io;
pub mod oracle;
pub mod record;
pub mod surgery;

pub use budget::SearchBudget;
pub use cdc::{CdcCertificate, HistInstance};
pub use edge_set::EdgeSet;
pub use error::{Error, Result};
pub use flow::FourFlow;
pub use graph::{EdgeId, MultiGraph, VertexId};
