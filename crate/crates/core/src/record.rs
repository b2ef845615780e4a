//! Versioned JSON records for certificates, flows and contraction traces.
//!
//! Every record carries the hash of its host graph so that it cannot be
//! checked against the wrong graph by accident.

use serde::{Deserialize, Serialize};
use sha2::{Digest, Sha256};

use crate::cdc::CdcCertificate;
use crate::degeneracy::{ContractionSequence, Endpoint, Stage};
use crate::edge_set::EdgeSet;
use crate::error::{Error, Result};
use crate::flow::FourFlow;
use crate::graph::MultiGraph;

pub const RECORD_VERSION: u32 = 1;

/// SHA-256 over the vertex ids and the `(id, u, v)` edge triples (with
/// `u <= v`), both in increasing id order.
pub fn host_hash(g: &MultiGraph) -> String {
    let mut h = Sha256::new();
    h.update(b"vertices");
    for v in g.vertices() {
        h.update(v.0.to_le_bytes());
    }
    h.update(b"edges");
    for (e, u, v) in g.edges() {
        h.update(e.0.to_le_bytes());
        h.update(u.0.min(v.0).to_le_bytes());
        h.update(u.0.max(v.0).to_le_bytes());
    }
    hex::encode(h.finalize())
}

fn check_header(kind: &str, expected: &str, version: u32, hash: &str, g: &MultiGraph) -> Result<()> {
    if kind != expected {
        return Err(Error::precondition(format!("expected a {expected} record, got {kind}")));
    }
    if version != RECORD_VERSION {
        return Err(Error::precondition(format!("unsupported record version {version}")));
    }
    if hash != host_hash(g) {
        return Err(Error::precondition("record was made for a different graph"));
    }
    Ok(())
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct CertificateRecord {
    pub kind: String,
    pub version: u32,
    pub host_hash: String,
    pub members: Vec<EdgeSet>,
    pub prescribed: Option<usize>,
    pub trace: Vec<String>,
}

impl CertificateRecord {
    pub const KIND: &'static str = "cdc-certificate";

    pub fn new(g: &MultiGraph, cert: &CdcCertificate) -> Self {
        CertificateRecord {
            kind: Self::KIND.into(),
            version: RECORD_VERSION,
            host_hash: host_hash(g),
            members: cert.members.clone(),
            prescribed: cert.prescribed,
            trace: cert.trace.clone(),
        }
    }

    /// The certificate, after checking that the record belongs to `g`.
    pub fn certificate_for(&self, g: &MultiGraph) -> Result<CdcCertificate> {
        check_header(&self.kind, Self::KIND, self.version, &self.host_hash, g)?;
        Ok(self.certificate())
    }

    /// The certificate without any host check.
    pub fn certificate(&self) -> CdcCertificate {
        CdcCertificate { members: self.members.clone(), prescribed: self.prescribed, trace: self.trace.clone() }
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct FlowRecord {
    pub kind: String,
    pub version: u32,
    pub host_hash: String,
    pub x: EdgeSet,
    pub y: EdgeSet,
}

impl FlowRecord {
    pub const KIND: &'static str = "z2xz2-flow";

    pub fn new(g: &MultiGraph, f: &FourFlow) -> Self {
        FlowRecord { kind: Self::KIND.into(), version: RECORD_VERSION, host_hash: host_hash(g), x: f.x.clone(), y: f.y.clone() }
    }

    pub fn flow_for(&self, g: &MultiGraph) -> Result<FourFlow> {
        check_header(&self.kind, Self::KIND, self.version, &self.host_hash, g)?;
        Ok(FourFlow::new(self.x.clone(), self.y.clone()))
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct SequenceRecord {
    pub kind: String,
    pub version: u32,
    pub host_hash: String,
    pub stages: Vec<Stage>,
    pub endpoint: Option<Endpoint>,
}

impl SequenceRecord {
    pub const KIND: &'static str = "contraction-sequence";

    pub fn new(seq: &ContractionSequence, endpoint: Option<Endpoint>) -> Self {
        SequenceRecord {
            kind: Self::KIND.into(),
            version: RECORD_VERSION,
            host_hash: host_hash(seq.start()),
            stages: seq.stages.clone(),
            endpoint,
        }
    }

    /// Replays the recorded circuits on `g`.
    pub fn replay_on(&self, g: &MultiGraph, k: usize) -> Result<ContractionSequence> {
        check_header(&self.kind, Self::KIND, self.version, &self.host_hash, g)?;
        let circuits: Vec<EdgeSet> = self.stages.iter().map(|s| s.circuit.clone()).collect();
        ContractionSequence::replay(g, &circuits, k)
    }
}
