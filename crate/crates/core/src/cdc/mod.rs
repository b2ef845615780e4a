//! Cycle double covers and the constructions that produce them.

mod builder;
mod pipeline;

pub use builder::{
    five_cdc_from_flow, five_cdc_with_removable_set, four_cdc_containing, girth_cdc_recursive,
    girth_cdc_recursive_with_base, glue_cdcs, petersen_base_cdc, three_cdc,
};
pub use pipeline::{decomposition_cdc, reduce_to_hist_instance, tree_cycle_cdc, HistReduction};

use std::collections::BTreeSet;

use serde::{Deserialize, Serialize};

use crate::cycle_space::{edge_components, is_even_subgraph};
use crate::edge_set::EdgeSet;
use crate::error::{Error, Result};
use crate::graph::{MultiGraph, VertexId};
use crate::oracle::verify_cdc;

/// A multiset of even subgraphs, optionally with a distinguished member.
///
/// Empty members are never stored; an absent or empty prescribed cycle is
/// `prescribed == None`.
#[derive(Clone, Debug, Default, PartialEq, Eq, Serialize, Deserialize)]
pub struct CdcCertificate {
    pub members: Vec<EdgeSet>,
    pub prescribed: Option<usize>,
    /// How the members were produced, outermost step last.
    pub trace: Vec<String>,
}

impl CdcCertificate {
    /// Builds a certificate with `prescribed` (when non-empty) as member 0.
    pub fn new(prescribed: Option<EdgeSet>, others: impl IntoIterator<Item = EdgeSet>) -> Self {
        let mut members = Vec::new();
        let mut index = None;
        if let Some(c) = prescribed.filter(|c| !c.is_empty()) {
            members.push(c);
            index = Some(0);
        }
        members.extend(others.into_iter().filter(|m| !m.is_empty()));
        CdcCertificate { members, prescribed: index, trace: Vec::new() }
    }

    pub fn with_step(mut self, step: impl Into<String>) -> Self {
        self.trace.push(step.into());
        self
    }

    pub fn len(&self) -> usize {
        self.members.len()
    }

    pub fn is_empty(&self) -> bool {
        self.members.is_empty()
    }

    /// The prescribed member, or the empty set when there is none.
    pub fn prescribed_cycle(&self) -> EdgeSet {
        self.prescribed.map(|i| self.members[i].clone()).unwrap_or_default()
    }

    /// Members other than the prescribed one.
    pub fn others(&self) -> impl Iterator<Item = &EdgeSet> + '_ {
        self.members.iter().enumerate().filter(move |(i, _)| Some(*i) != self.prescribed).map(|(_, m)| m)
    }

    /// Maps every member through `f`, dropping members that become empty.
    pub(crate) fn map_members(&self, mut f: impl FnMut(&EdgeSet) -> EdgeSet) -> CdcCertificate {
        let prescribed = self.prescribed.map(|i| f(&self.members[i]));
        let others: Vec<EdgeSet> = self.others().map(&mut f).collect();
        let mut out = CdcCertificate::new(prescribed, others);
        out.trace = self.trace.clone();
        out
    }
}

/// Runs the verifier and checks that the prescribed member equals `c`.
pub(crate) fn ensure_verified(g: &MultiGraph, cert: &CdcCertificate, c: &EdgeSet) -> Result<()> {
    verify_cdc(g, cert).map_err(|v| Error::Verification(v.to_string()))?;
    if cert.prescribed_cycle() != *c {
        return Err(Error::Verification("prescribed member differs from the requested cycle".into()));
    }
    Ok(())
}

/// A graph split into a tree and a cycle.
///
/// The cycle is any even subgraph; the tree must be connected and acyclic and
/// must reach every vertex not on the cycle. Vertices of the cycle may lie
/// off the tree (they are split away by the pipeline).
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct HistInstance {
    pub graph: MultiGraph,
    pub tree: EdgeSet,
    pub cycle: EdgeSet,
    /// Edge sets of the connected components of `cycle`.
    pub components: Vec<EdgeSet>,
}

impl HistInstance {
    pub fn new(graph: MultiGraph, tree: EdgeSet, cycle: EdgeSet) -> Result<Self> {
        graph.check_edges(&tree)?;
        graph.check_edges(&cycle)?;
        let components = edge_components(&graph, &cycle);
        let inst = HistInstance { graph, tree, cycle, components };
        inst.validate()?;
        Ok(inst)
    }

    /// Vertices touched by the tree; a lone vertex of the cycle when the tree is empty.
    pub fn tree_vertices(&self) -> BTreeSet<VertexId> {
        tree_vertices(&self.graph, &self.tree, &self.cycle)
    }

    pub fn validate(&self) -> Result<()> {
        let g = &self.graph;
        if !self.tree.is_disjoint(&self.cycle) || self.tree.union(&self.cycle) != g.edge_set() {
            return Err(Error::precondition("tree and cycle do not partition the edges"));
        }
        if !is_even_subgraph(g, &self.cycle) {
            return Err(Error::NotEven);
        }
        if !g.is_acyclic_on(&self.tree) {
            return Err(Error::precondition("tree contains a cycle"));
        }
        let tv = self.tree_vertices();
        let on_cycle: BTreeSet<VertexId> =
            self.cycle.iter().flat_map(|e| {
                let (u, v) = g.endpoints(e).unwrap();
                [u, v]
            }).collect();
        if let Some(v) = g.vertices().find(|v| !tv.contains(v) && !on_cycle.contains(v)) {
            return Err(Error::precondition(format!("{v} lies on neither the tree nor the cycle")));
        }
        let tree_comps = g.components_of(&self.tree).into_iter().filter(|c| c.iter().any(|v| tv.contains(v))).count();
        if tree_comps > 1 {
            return Err(Error::precondition("tree is disconnected"));
        }
        Ok(())
    }
}

pub(crate) fn tree_vertices(g: &MultiGraph, tree: &EdgeSet, cycle: &EdgeSet) -> BTreeSet<VertexId> {
    let mut out: BTreeSet<VertexId> = tree
        .iter()
        .flat_map(|e| {
            let (u, v) = g.endpoints(e).unwrap();
            [u, v]
        })
        .collect();
    if out.is_empty() {
        let lone = cycle.first().map(|e| g.endpoints(e).unwrap().0.min(g.endpoints(e).unwrap().1));
        out.extend(lone.or_else(|| g.vertices().next()));
    }
    out
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::generators;
    use crate::graph::EdgeId;

    fn ids(v: &[u32]) -> EdgeSet {
        v.iter().map(|&i| EdgeId(i)).collect()
    }

    #[test]
    fn new_puts_prescribed_first_and_drops_empties() {
        let c = CdcCertificate::new(Some(ids(&[1])), [EdgeSet::new(), ids(&[2]), ids(&[1])]);
        assert_eq!(c.members, vec![ids(&[1]), ids(&[2]), ids(&[1])]);
        assert_eq!(c.prescribed, Some(0));
        let c = CdcCertificate::new(Some(EdgeSet::new()), [ids(&[2])]);
        assert_eq!(c.prescribed, None);
        assert_eq!(c.prescribed_cycle(), EdgeSet::new());
    }

    #[test]
    fn hist_validation() {
        let (q, inst) = generators::q_triangles();
        assert_eq!(inst.components.len(), 3);
        assert!(inst.validate().is_ok());
        assert!(HistInstance::new(q.clone(), inst.tree.clone(), EdgeSet::new()).is_err());
        let k4 = generators::k4();
        // star at vertex 3 plus triangle 0,1,2
        let ok = HistInstance::new(k4.clone(), ids(&[2, 4, 5]), ids(&[0, 1, 3])).unwrap();
        assert_eq!(ok.components.len(), 1);
        assert!(HistInstance::new(k4.clone(), ids(&[0, 1, 3]), ids(&[2, 4, 5])).is_err());
    }
}
