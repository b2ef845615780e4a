//! Even subgraphs as vectors over GF(2).

use std::collections::{BTreeMap, BTreeSet, VecDeque};

use crate::edge_set::EdgeSet;
use crate::error::{Error, Result};
use crate::graph::{EdgeId, MultiGraph, VertexId};

/// True iff every vertex has even degree in `f` (loops contribute 2).
pub fn is_even_subgraph(g: &MultiGraph, f: &EdgeSet) -> bool {
    if g.check_edges(f).is_err() {
        return false;
    }
    let mut odd: BTreeSet<VertexId> = BTreeSet::new();
    for e in f {
        let (u, v) = g.endpoints(e).unwrap();
        if u != v {
            for w in [u, v] {
                if !odd.insert(w) {
                    odd.remove(&w);
                }
            }
        }
    }
    odd.is_empty()
}

/// Splits an even subgraph into the edge sets of its connected components.
pub fn cycle_components(g: &MultiGraph, f: &EdgeSet) -> Result<Vec<EdgeSet>> {
    g.check_edges(f)?;
    if !is_even_subgraph(g, f) {
        return Err(Error::NotEven);
    }
    Ok(edge_components(g, f))
}

/// Edge sets of the connected components of the subgraph spanned by `f`,
/// ordered by least edge id.
pub(crate) fn edge_components(g: &MultiGraph, f: &EdgeSet) -> Vec<EdgeSet> {
    let mut remaining = f.clone();
    let mut out = Vec::new();
    while let Some(seed) = remaining.first() {
        let mut comp = EdgeSet::new();
        let (a, _) = g.endpoints(seed).unwrap();
        let mut seen = BTreeSet::from([a]);
        let mut queue = VecDeque::from([a]);
        while let Some(v) = queue.pop_front() {
            for &e in g.incident(v) {
                if !f.contains(e) {
                    continue;
                }
                comp.insert(e);
                let w = g.other_end(e, v).unwrap();
                if seen.insert(w) {
                    queue.push_back(w);
                }
            }
        }
        remaining.difference_with(&comp);
        out.push(comp);
    }
    out
}

/// Shortest path from `from` to `to` using only edges in `allowed`.
pub(crate) fn shortest_path(
    g: &MultiGraph,
    from: VertexId,
    to: VertexId,
    allowed: &EdgeSet,
) -> Option<EdgeSet> {
    let mut pred: BTreeMap<VertexId, Option<EdgeId>> = BTreeMap::from([(from, None)]);
    let mut queue = VecDeque::from([from]);
    while let Some(v) = queue.pop_front() {
        if v == to {
            break;
        }
        for &e in g.incident(v) {
            if !allowed.contains(e) {
                continue;
            }
            let w = g.other_end(e, v).unwrap();
            if let std::collections::btree_map::Entry::Vacant(slot) = pred.entry(w) {
                slot.insert(Some(e));
                queue.push_back(w);
            }
        }
    }
    pred.get(&to)?;
    let mut path = EdgeSet::new();
    let mut cur = to;
    while let Some(Some(e)) = pred.get(&cur) {
        path.insert(*e);
        cur = g.other_end(*e, cur).unwrap();
    }
    Some(path)
}

/// A circuit through `e` whose other edges all lie in `allowed`: `e` plus a
/// shortest path between its endpoints in `allowed − {e}`. A loop is its own circuit.
pub fn circuit_through_edge(g: &MultiGraph, e: EdgeId, allowed: &EdgeSet) -> Result<EdgeSet> {
    let (u, v) = g.endpoints(e)?;
    if u == v {
        return Ok([e].into_iter().collect());
    }
    let mut usable = allowed.clone();
    usable.remove(e);
    // Loops never lie on a path between distinct vertices.
    let mut path = shortest_path(g, u, v, &usable).ok_or(Error::NoCircuit(e))?;
    path.insert(e);
    Ok(path)
}

/// Spanning forest plus fundamental circuits.
#[derive(Clone, Debug)]
pub struct CycleBasis {
    pub tree: EdgeSet,
    pub fundamental: Vec<EdgeSet>,
    /// The non-tree edge generating each fundamental circuit.
    pub generators: Vec<EdgeId>,
}

impl CycleBasis {
    pub fn dimension(&self) -> usize {
        self.fundamental.len()
    }

    /// Expresses an even subgraph in the basis: the indices of fundamental
    /// circuits whose symmetric difference is `f`.
    pub fn coordinates(&self, f: &EdgeSet) -> Vec<usize> {
        self.generators
            .iter()
            .enumerate()
            .filter(|(_, &e)| f.contains(e))
            .map(|(i, _)| i)
            .collect()
    }

    /// Even subgraphs in Gray-code order, starting with the empty set.
    pub fn even_subgraphs(&self) -> GrayCode<'_> {
        GrayCode { basis: &self.fundamental, step: 0, current: EdgeSet::new() }
    }
}

/// Breadth-first spanning forest (roots and neighbours in ascending id order)
/// with one fundamental circuit per non-tree edge.
pub fn basis(g: &MultiGraph) -> CycleBasis {
    let mut parent: BTreeMap<VertexId, Option<EdgeId>> = BTreeMap::new();
    let mut tree = EdgeSet::new();
    for root in g.vertices() {
        if parent.contains_key(&root) {
            continue;
        }
        parent.insert(root, None);
        let mut queue = VecDeque::from([root]);
        while let Some(v) = queue.pop_front() {
            let mut inc = g.incident(v).to_vec();
            inc.sort();
            for e in inc {
                let w = g.other_end(e, v).unwrap();
                if !parent.contains_key(&w) {
                    parent.insert(w, Some(e));
                    tree.insert(e);
                    queue.push_back(w);
                }
            }
        }
    }
    let path_to_root = |mut v: VertexId| -> Vec<EdgeId> {
        let mut p = Vec::new();
        while let Some(Some(e)) = parent.get(&v) {
            p.push(*e);
            v = g.other_end(*e, v).unwrap();
        }
        p
    };
    let mut fundamental = Vec::new();
    let mut generators = Vec::new();
    for (e, u, v) in g.edges() {
        if tree.contains(e) {
            continue;
        }
        let mut c: EdgeSet = [e].into_iter().collect();
        for t in path_to_root(u).into_iter().chain(path_to_root(v)) {
            c.toggle(t);
        }
        fundamental.push(c);
        generators.push(e);
    }
    CycleBasis { tree, fundamental, generators }
}

/// Enumerates the span of a list of edge sets in Gray-code order: each step
/// applies a single symmetric difference.
pub struct GrayCode<'a> {
    basis: &'a [EdgeSet],
    step: u64,
    current: EdgeSet,
}

impl<'a> GrayCode<'a> {
    pub fn new(basis: &'a [EdgeSet]) -> Self {
        GrayCode { basis, step: 0, current: EdgeSet::new() }
    }
}

impl Iterator for GrayCode<'_> {
    type Item = EdgeSet;

    fn next(&mut self) -> Option<EdgeSet> {
        let total = 1u64.checked_shl(self.basis.len() as u32).unwrap_or(0);
        if self.basis.len() >= 64 || self.step >= total {
            return None;
        }
        if self.step > 0 {
            let flip = self.step.trailing_zeros() as usize;
            self.current.xor_with(&self.basis[flip]);
        }
        self.step += 1;
        Some(self.current.clone())
    }

    fn size_hint(&self) -> (usize, Option<usize>) {
        let total = 1usize.checked_shl(self.basis.len() as u32).unwrap_or(usize::MAX);
        let left = total.saturating_sub(self.step as usize);
        (left, Some(left))
    }
}
