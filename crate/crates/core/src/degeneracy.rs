//! Small contraction sequences and the K1 / Petersen endpoint classification.
//!
//! A small circuit has length at most four and meets the tracked vertex set
//! `U`. Contracting it replaces its vertices by one new vertex `v_C`, and `U`
//! becomes `{v_C} ∪ (U − V(C))`.

use std::collections::{BTreeMap, BTreeSet};

use serde::{Deserialize, Serialize};

use crate::edge_set::EdgeSet;
use crate::error::{Error, Result};
use crate::flow::circuit_walk;
use crate::graph::{is_petersen, EdgeId, MultiGraph, VertexId};
use crate::surgery::contract_edges;

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct Stage {
    pub circuit: EdgeSet,
    pub length: usize,
    /// Vertex standing for the contracted circuit in the next graph.
    pub new_vertex: VertexId,
    /// Vertices of the circuit, in the graph before contraction.
    pub absorbed: BTreeSet<VertexId>,
}

/// A replayable record of circuit contractions.
///
/// `graphs[i]` is the graph before stage `i`, so `graphs` has one more entry
/// than `stages`; `u_trace` follows `graphs`.
#[derive(Clone, Debug)]
pub struct ContractionSequence {
    pub graphs: Vec<MultiGraph>,
    pub stages: Vec<Stage>,
    pub u_trace: Vec<BTreeSet<VertexId>>,
}

impl ContractionSequence {
    fn empty(g: &MultiGraph, u: BTreeSet<VertexId>) -> Self {
        ContractionSequence { graphs: vec![g.clone()], stages: Vec::new(), u_trace: vec![u] }
    }

    pub fn start(&self) -> &MultiGraph {
        &self.graphs[0]
    }

    pub fn end(&self) -> &MultiGraph {
        self.graphs.last().unwrap()
    }

    pub fn final_u(&self) -> &BTreeSet<VertexId> {
        self.u_trace.last().unwrap()
    }

    /// Contracts `circuit` in the current end graph and records the stage.
    fn push(&mut self, circuit: EdgeSet) -> Result<()> {
        let g = self.end();
        let (verts, _) = circuit_walk(g, &circuit)?;
        let c = contract_edges(g, &circuit)?;
        let absorbed: BTreeSet<VertexId> = verts.into_iter().collect();
        let new_vertex = c.image[absorbed.first().unwrap()];
        let mut u: BTreeSet<VertexId> = self.final_u().difference(&absorbed).copied().collect();
        u.insert(new_vertex);
        self.stages.push(Stage { length: circuit.len(), circuit, new_vertex, absorbed });
        self.graphs.push(c.graph);
        self.u_trace.push(u);
        Ok(())
    }

    /// Greedy maximal sequence of small circuits meeting `u`.
    pub fn greedy(g: &MultiGraph, u: &BTreeSet<VertexId>, k: usize) -> Self {
        let mut seq = Self::empty(g, u.clone());
        while let Some(circuit) = least_small_circuit(seq.end(), seq.final_u(), k) {
            seq.push(circuit).expect("found circuits are circuits of the current graph");
        }
        seq
    }

    /// Keeps contracting the least circuit of length at most `k` anywhere in
    /// the graph until none is left.
    pub fn complete_greedily(&mut self, k: usize) {
        loop {
            let all = self.end().vertex_set();
            let Some(circuit) = least_small_circuit(self.end(), &all, k) else { break };
            self.push(circuit).expect("found circuits are circuits of the current graph");
        }
    }

    /// Re-applies a list of circuit contractions, starting from `g` with an
    /// empty tracked set. Each circuit must be a circuit of length at most
    /// `k` in the graph current at its stage.
    pub fn replay(g: &MultiGraph, circuits: &[EdgeSet], k: usize) -> Result<Self> {
        Self::replay_tracking(g, &BTreeSet::new(), circuits, k)
    }

    pub fn replay_tracking(
        g: &MultiGraph,
        u: &BTreeSet<VertexId>,
        circuits: &[EdgeSet],
        k: usize,
    ) -> Result<Self> {
        let mut seq = Self::empty(g, u.clone());
        for (i, c) in circuits.iter().enumerate() {
            if c.len() > k {
                return Err(Error::InvalidSequence(format!("stage {i}: circuit of length {} exceeds {k}", c.len())));
            }
            seq.push(c.clone()).map_err(|e| Error::InvalidSequence(format!("stage {i}: {e}")))?;
        }
        Ok(seq)
    }

    /// Whether replaying the recorded circuits from the start reproduces
    /// every snapshot edge for edge.
    pub fn replays_soundly(&self) -> bool {
        let circuits: Vec<EdgeSet> = self.stages.iter().map(|s| s.circuit.clone()).collect();
        let k = self.stages.iter().map(|s| s.length).max().unwrap_or(0);
        match Self::replay_tracking(self.start(), &self.u_trace[0], &circuits, k) {
            Ok(again) => again.graphs == self.graphs && again.u_trace == self.u_trace,
            Err(_) => false,
        }
    }

    /// Every vertex of the end graph mapped to the start vertices it absorbs.
    pub fn provenance(&self) -> BTreeMap<VertexId, BTreeSet<VertexId>> {
        let mut prov: BTreeMap<VertexId, BTreeSet<VertexId>> =
            self.start().vertices().map(|v| (v, BTreeSet::from([v]))).collect();
        for stage in &self.stages {
            let mut merged = BTreeSet::new();
            for v in &stage.absorbed {
                merged.extend(prov.remove(v).unwrap_or_default());
            }
            prov.insert(stage.new_vertex, merged);
        }
        prov
    }

    /// Sequence trace as `(circuit edge ids, absorbed vertex ids)` pairs.
    pub fn trace(&self) -> Vec<(Vec<u32>, Vec<u32>)> {
        self.stages
            .iter()
            .map(|s| (s.circuit.iter().map(|e| e.0).collect(), s.absorbed.iter().map(|v| v.0).collect()))
            .collect()
    }
}

/// The least small circuit meeting `u`: shortest first, then the
/// lexicographically least sorted list of edge ids.
pub(crate) fn least_small_circuit(g: &MultiGraph, u: &BTreeSet<VertexId>, k: usize) -> Option<EdgeSet> {
    for len in 1..=k {
        let mut best: Option<Vec<EdgeId>> = None;
        for &start in u {
            if !g.has_vertex(start) {
                continue;
            }
            let mut path_v = vec![start];
            let mut path_e = Vec::new();
            circuits_from(g, start, len, &mut path_v, &mut path_e, &mut |mut c| {
                c.sort();
                if best.as_ref().is_none_or(|b| c < *b) {
                    best = Some(c);
                }
            });
        }
        if let Some(b) = best {
            return Some(b.into_iter().collect());
        }
    }
    None
}

fn circuits_from(
    g: &MultiGraph,
    start: VertexId,
    len: usize,
    path_v: &mut Vec<VertexId>,
    path_e: &mut Vec<EdgeId>,
    found: &mut impl FnMut(Vec<EdgeId>),
) {
    let v = *path_v.last().unwrap();
    for &e in g.incident(v) {
        if path_e.contains(&e) {
            continue;
        }
        let w = g.other_end(e, v).unwrap();
        if path_e.len() + 1 == len {
            if w == start {
                let mut c = path_e.clone();
                c.push(e);
                found(c);
            }
        } else if w != start && !path_v.contains(&w) {
            path_v.push(w);
            path_e.push(e);
            circuits_from(g, start, len, path_v, path_e, found);
            path_v.pop();
            path_e.pop();
        }
    }
}

/// Maximal sequence of contractions of small circuits meeting `u`.
pub fn maximal_small_contraction(g: &MultiGraph, u: &BTreeSet<VertexId>, k: usize) -> ContractionSequence {
    ContractionSequence::greedy(g, u, k)
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub enum Endpoint {
    K1,
    Petersen,
    Other,
}

#[derive(Clone, Debug)]
pub struct DegeneracyVerdict {
    pub kind: Endpoint,
    pub sequence: ContractionSequence,
    pub final_u: BTreeSet<VertexId>,
}

pub fn endpoint_of(g: &MultiGraph) -> Endpoint {
    if g.vertex_count() == 1 && g.edge_count() == 0 {
        Endpoint::K1
    } else if is_petersen(g) {
        Endpoint::Petersen
    } else {
        Endpoint::Other
    }
}

/// Checks the admission conditions of [`classify_degeneracy`]: `|u| ≤ 3`,
/// `u ⊆ V(g)`, `g` 2-edge-connected, `g − u` a forest, and every vertex
/// outside `u` of degree at least three.
pub fn check_degeneracy_instance(g: &MultiGraph, u: &BTreeSet<VertexId>) -> Result<()> {
    if u.len() > 3 {
        return Err(Error::precondition(format!("|U| = {} exceeds 3", u.len())));
    }
    if let Some(v) = u.iter().find(|v| !g.has_vertex(**v)) {
        return Err(Error::UnknownVertex(*v));
    }
    if !g.is_two_edge_connected() {
        return Err(Error::precondition("graph is not 2-edge-connected"));
    }
    if let Some(v) = g.vertices().find(|v| !u.contains(v) && g.degree(*v) < 3) {
        return Err(Error::precondition(format!("{v} lies outside U with degree {}", g.degree(v))));
    }
    let outside: EdgeSet = g
        .edges()
        .filter(|(_, a, b)| !u.contains(a) && !u.contains(b))
        .map(|(e, _, _)| e)
        .collect();
    if !g.is_acyclic_on(&outside) {
        return Err(Error::precondition("graph minus U contains a cycle"));
    }
    Ok(())
}

/// Runs the greedy small contraction with circuits of length at most four
/// and classifies where it stops.
pub fn classify_degeneracy(g: &MultiGraph, u: &BTreeSet<VertexId>) -> Result<DegeneracyVerdict> {
    check_degeneracy_instance(g, u)?;
    let sequence = maximal_small_contraction(g, u, 4);
    let kind = endpoint_of(sequence.end());
    let final_u = sequence.final_u().clone();
    Ok(DegeneracyVerdict { kind, sequence, final_u })
}
