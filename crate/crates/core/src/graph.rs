//! Multigraphs with stable vertex and edge identities.
//!
//! Loops and parallel edges are first-class. Ids come from monotone counters
//! that travel with the graph, so every graph derived by deletion or
//! contraction keeps the ids of surviving edges and never reuses an id.

use std::collections::{BTreeMap, BTreeSet, VecDeque};
use std::fmt;

use serde::{Deserialize, Serialize};

use crate::edge_set::EdgeSet;
use crate::error::{Error, Result};

#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize, Deserialize)]
#[serde(transparent)]
pub struct VertexId(pub u32);

#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize, Deserialize)]
#[serde(transparent)]
pub struct EdgeId(pub u32);

impl EdgeId {
    #[inline]
    pub fn index(self) -> usize {
        self.0 as usize
    }
}

impl VertexId {
    #[inline]
    pub fn index(self) -> usize {
        self.0 as usize
    }
}

impl fmt::Display for VertexId {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "v{}", self.0)
    }
}

impl fmt::Display for EdgeId {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "e{}", self.0)
    }
}

#[derive(Clone, Debug, Default)]
pub struct MultiGraph {
    // Incidence lists; a loop is listed once at its vertex.
    vertices: BTreeMap<VertexId, Vec<EdgeId>>,
    edges: BTreeMap<EdgeId, (VertexId, VertexId)>,
    next_vertex: u32,
    next_edge: u32,
}

/// Two graphs are equal when they have the same vertex ids and the same edge
/// ids with the same endpoints. Id counters and incidence order are ignored.
impl PartialEq for MultiGraph {
    fn eq(&self, other: &Self) -> bool {
        self.vertices.keys().eq(other.vertices.keys())
            && self.edges.len() == other.edges.len()
            && self.edges.iter().zip(&other.edges).all(|((e, (a, b)), (f, (c, d)))| {
                e == f && ((a, b) == (c, d) || (a, b) == (d, c))
            })
    }
}

impl Eq for MultiGraph {}

impl MultiGraph {
    pub fn new() -> Self {
        Self::default()
    }

    /// A graph on `n` vertices `0..n` with edges given by index pairs, ids in order.
    pub fn from_edges(n: u32, edges: &[(u32, u32)]) -> Self {
        let mut g = MultiGraph::new();
        for _ in 0..n {
            g.add_vertex();
        }
        for &(u, v) in edges {
            g.add_edge(VertexId(u), VertexId(v)).expect("vertex ids below n");
        }
        g
    }

    pub fn add_vertex(&mut self) -> VertexId {
        let v = VertexId(self.next_vertex);
        self.next_vertex += 1;
        self.vertices.insert(v, Vec::new());
        v
    }

    /// Inserts a vertex with a caller-chosen id (used by parsers).
    pub fn ensure_vertex(&mut self, v: VertexId) {
        self.vertices.entry(v).or_default();
        self.next_vertex = self.next_vertex.max(v.0 + 1);
    }

    pub fn add_edge(&mut self, u: VertexId, v: VertexId) -> Result<EdgeId> {
        for w in [u, v] {
            if !self.vertices.contains_key(&w) {
                return Err(Error::UnknownVertex(w));
            }
        }
        let e = EdgeId(self.next_edge);
        self.next_edge += 1;
        self.insert_edge_unchecked(e, u, v);
        Ok(e)
    }

    fn insert_edge_unchecked(&mut self, e: EdgeId, u: VertexId, v: VertexId) {
        self.edges.insert(e, (u, v));
        self.vertices.get_mut(&u).unwrap().push(e);
        if u != v {
            self.vertices.get_mut(&v).unwrap().push(e);
        }
    }

    pub fn remove_edge(&mut self, e: EdgeId) -> Result<(VertexId, VertexId)> {
        let (u, v) = self.edges.remove(&e).ok_or(Error::UnknownEdge(e))?;
        for w in [u, v] {
            let inc = self.vertices.get_mut(&w).unwrap();
            if let Some(pos) = inc.iter().position(|&x| x == e) {
                inc.remove(pos);
            }
        }
        Ok((u, v))
    }

    /// Removes a vertex together with its incident edges.
    pub fn remove_vertex(&mut self, v: VertexId) -> Result<()> {
        let inc = self.vertices.get(&v).ok_or(Error::UnknownVertex(v))?.clone();
        for e in inc {
            self.remove_edge(e)?;
        }
        self.vertices.remove(&v);
        Ok(())
    }

    pub fn vertex_count(&self) -> usize {
        self.vertices.len()
    }

    pub fn edge_count(&self) -> usize {
        self.edges.len()
    }

    pub fn vertices(&self) -> impl Iterator<Item = VertexId> + '_ {
        self.vertices.keys().copied()
    }

    pub fn edges(&self) -> impl Iterator<Item = (EdgeId, VertexId, VertexId)> + '_ {
        self.edges.iter().map(|(&e, &(u, v))| (e, u, v))
    }

    pub fn edge_ids(&self) -> impl Iterator<Item = EdgeId> + '_ {
        self.edges.keys().copied()
    }

    pub fn edge_set(&self) -> EdgeSet {
        self.edges.keys().copied().collect()
    }

    pub fn vertex_set(&self) -> BTreeSet<VertexId> {
        self.vertices.keys().copied().collect()
    }

    pub fn has_vertex(&self, v: VertexId) -> bool {
        self.vertices.contains_key(&v)
    }

    pub fn has_edge(&self, e: EdgeId) -> bool {
        self.edges.contains_key(&e)
    }

    pub fn endpoints(&self, e: EdgeId) -> Result<(VertexId, VertexId)> {
        self.edges.get(&e).copied().ok_or(Error::UnknownEdge(e))
    }

    pub fn is_loop(&self, e: EdgeId) -> bool {
        self.edges.get(&e).is_some_and(|(u, v)| u == v)
    }

    /// The endpoint of `e` that is not `v` (or `v` itself for a loop).
    pub fn other_end(&self, e: EdgeId, v: VertexId) -> Result<VertexId> {
        let (a, b) = self.endpoints(e)?;
        if a == v {
            Ok(b)
        } else if b == v {
            Ok(a)
        } else {
            Err(Error::NotIncident { vertex: v, edge: e })
        }
    }

    pub fn incident(&self, v: VertexId) -> &[EdgeId] {
        self.vertices.get(&v).map(Vec::as_slice).unwrap_or(&[])
    }

    /// Degree with loops counted twice.
    pub fn degree(&self, v: VertexId) -> usize {
        self.incident(v).iter().map(|&e| if self.is_loop(e) { 2 } else { 1 }).sum()
    }

    /// Degree of `v` in the spanning subgraph with edge set `f`.
    pub fn degree_in(&self, v: VertexId, f: &EdgeSet) -> usize {
        self.incident(v)
            .iter()
            .filter(|&&e| f.contains(e))
            .map(|&e| if self.is_loop(e) { 2 } else { 1 })
            .sum()
    }

    pub fn max_vertex_id(&self) -> u32 {
        self.next_vertex
    }

    pub fn max_edge_id(&self) -> u32 {
        self.next_edge
    }

    pub(crate) fn counters(&self) -> (u32, u32) {
        (self.next_vertex, self.next_edge)
    }

    pub(crate) fn bump_counters(&mut self, next_vertex: u32, next_edge: u32) {
        self.next_vertex = self.next_vertex.max(next_vertex);
        self.next_edge = self.next_edge.max(next_edge);
    }

    /// Inserts an edge with a fixed id, for derived graphs that keep ids.
    pub(crate) fn insert_edge_with_id(&mut self, e: EdgeId, u: VertexId, v: VertexId) {
        self.ensure_vertex(u);
        self.ensure_vertex(v);
        self.insert_edge_unchecked(e, u, v);
        self.next_edge = self.next_edge.max(e.0 + 1);
    }

    /// Checks that every id in `f` names an edge of this graph.
    pub fn check_edges(&self, f: &EdgeSet) -> Result<()> {
        match f.iter().find(|&e| !self.has_edge(e)) {
            Some(e) => Err(Error::UnknownEdge(e)),
            None => Ok(()),
        }
    }

    /// Spanning subgraph keeping only the edges in `keep`. All vertices stay.
    pub fn spanning_subgraph(&self, keep: &EdgeSet) -> MultiGraph {
        let mut h = MultiGraph {
            vertices: self.vertices.keys().map(|&v| (v, Vec::new())).collect(),
            edges: BTreeMap::new(),
            next_vertex: self.next_vertex,
            next_edge: self.next_edge,
        };
        for (e, u, v) in self.edges() {
            if keep.contains(e) {
                h.insert_edge_unchecked(e, u, v);
            }
        }
        h
    }

    /// Deletes the edges of `f`, keeping every vertex.
    pub fn delete_edges(&self, f: &EdgeSet) -> MultiGraph {
        self.spanning_subgraph(&self.edge_set().difference(f))
    }

    /// Vertex sets of connected components of the spanning subgraph on `f`.
    pub fn components_of(&self, f: &EdgeSet) -> Vec<BTreeSet<VertexId>> {
        let mut seen = BTreeSet::new();
        let mut out = Vec::new();
        for start in self.vertices() {
            if !seen.insert(start) {
                continue;
            }
            let mut comp = BTreeSet::from([start]);
            let mut queue = VecDeque::from([start]);
            while let Some(v) = queue.pop_front() {
                for &e in self.incident(v) {
                    if !f.contains(e) {
                        continue;
                    }
                    let w = self.other_end(e, v).unwrap();
                    if seen.insert(w) {
                        comp.insert(w);
                        queue.push_back(w);
                    }
                }
            }
            out.push(comp);
        }
        out
    }

    pub fn components(&self) -> Vec<BTreeSet<VertexId>> {
        self.components_of(&self.edge_set())
    }

    pub fn is_connected(&self) -> bool {
        self.vertex_count() <= 1 || self.components().len() == 1
    }

    /// Whether the spanning subgraph on `f` is connected (all vertices count).
    pub fn is_connected_on(&self, f: &EdgeSet) -> bool {
        self.vertex_count() <= 1 || self.components_of(f).len() == 1
    }

    /// Bridges of the graph. Loops and edges with a parallel twin are never bridges.
    pub fn bridges(&self) -> EdgeSet {
        let mut disc: BTreeMap<VertexId, usize> = BTreeMap::new();
        let mut low: BTreeMap<VertexId, usize> = BTreeMap::new();
        let mut bridges = EdgeSet::new();
        let mut time = 0;
        for root in self.vertices() {
            if disc.contains_key(&root) {
                continue;
            }
            // Iterative DFS; the parent edge (not parent vertex) is skipped so
            // parallel edges are handled.
            let mut stack: Vec<(VertexId, Option<EdgeId>, usize)> = vec![(root, None, 0)];
            disc.insert(root, time);
            low.insert(root, time);
            time += 1;
            while let Some(&mut (v, parent_edge, ref mut next)) = stack.last_mut() {
                let inc = self.incident(v);
                if *next < inc.len() {
                    let e = inc[*next];
                    *next += 1;
                    if Some(e) == parent_edge || self.is_loop(e) {
                        continue;
                    }
                    let w = self.other_end(e, v).unwrap();
                    if let Some(&dw) = disc.get(&w) {
                        let lv = low[&v].min(dw);
                        low.insert(v, lv);
                    } else {
                        disc.insert(w, time);
                        low.insert(w, time);
                        time += 1;
                        stack.push((w, Some(e), 0));
                    }
                } else {
                    stack.pop();
                    if let (Some(pe), Some(&(p, _, _))) = (parent_edge, stack.last()) {
                        let lv = low[&v];
                        if lv > disc[&p] {
                            bridges.insert(pe);
                        }
                        let lp = low[&p].min(lv);
                        low.insert(p, lp);
                    }
                }
            }
        }
        bridges
    }

    pub fn is_two_edge_connected(&self) -> bool {
        self.is_connected() && self.bridges().is_empty()
    }

    /// Whether the edges of `f` form a forest (loops count as cycles).
    pub fn is_acyclic_on(&self, f: &EdgeSet) -> bool {
        let mut uf = UnionFind::new(self.max_vertex_id() as usize);
        for e in f {
            let Ok((u, v)) = self.endpoints(e) else { return false };
            if !uf.union(u.index(), v.index()) {
                return false;
            }
        }
        true
    }

    /// Whether `f` is the edge set of a spanning tree.
    pub fn is_spanning_tree(&self, f: &EdgeSet) -> bool {
        self.vertex_count() > 0
            && f.len() + 1 == self.vertex_count()
            && self.is_acyclic_on(f)
            && self.is_connected_on(f)
    }

    pub fn is_simple(&self) -> bool {
        let mut seen = BTreeSet::new();
        self.edges().all(|(_, u, v)| u != v && seen.insert((u.min(v), u.max(v))))
    }

    pub fn is_regular(&self, d: usize) -> bool {
        self.vertices().all(|v| self.degree(v) == d)
    }

    /// Length of a shortest circuit (loops have length 1, digons 2); `None` if acyclic.
    pub fn girth(&self) -> Option<usize> {
        let mut best: Option<usize> = None;
        if self.edges().any(|(_, u, v)| u == v) {
            return Some(1);
        }
        let mut pairs = BTreeSet::new();
        for (_, u, v) in self.edges() {
            if !pairs.insert((u.min(v), u.max(v))) {
                return Some(2);
            }
        }
        // BFS from every vertex; a non-tree edge closes a circuit of length
        // at most dist(u) + dist(w) + 1, and the minimum over roots is exact.
        for root in self.vertices() {
            let mut dist: BTreeMap<VertexId, (usize, Option<EdgeId>)> = BTreeMap::new();
            dist.insert(root, (0, None));
            let mut queue = VecDeque::from([root]);
            while let Some(v) = queue.pop_front() {
                let (dv, pe) = dist[&v];
                for &e in self.incident(v) {
                    if Some(e) == pe {
                        continue;
                    }
                    let w = self.other_end(e, v).unwrap();
                    match dist.get(&w) {
                        None => {
                            dist.insert(w, (dv + 1, Some(e)));
                            queue.push_back(w);
                        }
                        Some(&(dw, _)) => {
                            let len = dv + dw + 1;
                            best = Some(best.map_or(len, |b| b.min(len)));
                        }
                    }
                }
            }
        }
        best
    }

    /// A dense snapshot for hot loops: vertex ids mapped to `0..n`.
    pub fn dense(&self) -> DenseGraph {
        let index: BTreeMap<VertexId, usize> =
            self.vertices().enumerate().map(|(i, v)| (v, i)).collect();
        let edges = self.edges().map(|(e, u, v)| (e, index[&u], index[&v])).collect();
        DenseGraph { n: index.len(), edges }
    }
}

/// Edge list over dense vertex indices.
#[derive(Clone, Debug)]
pub struct DenseGraph {
    pub n: usize,
    pub edges: Vec<(EdgeId, usize, usize)>,
}

impl DenseGraph {
    /// Whether deleting `removed` leaves the graph connected (all vertices count).
    pub fn connected_without(&self, removed: &EdgeSet) -> bool {
        if self.n <= 1 {
            return true;
        }
        let mut uf = UnionFind::new(self.n);
        let mut parts = self.n;
        for &(e, u, v) in &self.edges {
            if !removed.contains(e) && uf.union(u, v) {
                parts -= 1;
                if parts == 1 {
                    return true;
                }
            }
        }
        parts == 1
    }

    /// Whether the edges of `f` form a forest.
    pub fn acyclic_on(&self, f: &EdgeSet) -> bool {
        let mut uf = UnionFind::new(self.n);
        self.edges.iter().filter(|(e, _, _)| f.contains(*e)).all(|&(_, u, v)| uf.union(u, v))
    }
}

pub(crate) struct UnionFind {
    parent: Vec<usize>,
}

impl UnionFind {
    pub(crate) fn new(n: usize) -> Self {
        UnionFind { parent: (0..n).collect() }
    }

    pub(crate) fn find(&mut self, mut x: usize) -> usize {
        while self.parent[x] != x {
            self.parent[x] = self.parent[self.parent[x]];
            x = self.parent[x];
        }
        x
    }

    /// Returns false when `a` and `b` were already joined.
    pub(crate) fn union(&mut self, a: usize, b: usize) -> bool {
        let (ra, rb) = (self.find(a), self.find(b));
        if ra == rb {
            return false;
        }
        self.parent[ra.max(rb)] = ra.min(rb);
        true
    }
}

/// True iff `g` is the Petersen graph.
///
/// Uses the cage characterization: the Petersen graph is the unique simple
/// cubic graph on ten vertices with girth five, so no isomorphism test is needed.
pub fn is_petersen(g: &MultiGraph) -> bool {
    g.vertex_count() == 10
        && g.edge_count() == 15
        && g.is_simple()
        && g.is_regular(3)
        && g.girth() == Some(5)
}

/// A vertex bijection `a → b` preserving edge multiplicities, by backtracking
/// over degree-compatible candidates. Meant for small graphs.
pub fn find_isomorphism(a: &MultiGraph, b: &MultiGraph) -> Option<BTreeMap<VertexId, VertexId>> {
    if a.vertex_count() != b.vertex_count() || a.edge_count() != b.edge_count() {
        return None;
    }
    let multiplicity = |g: &MultiGraph| {
        let mut m: BTreeMap<(VertexId, VertexId), usize> = BTreeMap::new();
        for (_, u, v) in g.edges() {
            *m.entry((u.min(v), u.max(v))).or_default() += 1;
        }
        m
    };
    let (ma, mb) = (multiplicity(a), multiplicity(b));
    let count = |m: &BTreeMap<(VertexId, VertexId), usize>, u: VertexId, v: VertexId| {
        m.get(&(u.min(v), u.max(v))).copied().unwrap_or(0)
    };
    // Visit `a` in BFS order so each vertex has mapped neighbours to check against.
    let mut order: Vec<VertexId> = Vec::new();
    let mut seen = BTreeSet::new();
    for root in a.vertices() {
        if !seen.insert(root) {
            continue;
        }
        let mut queue = VecDeque::from([root]);
        while let Some(v) = queue.pop_front() {
            order.push(v);
            for &e in a.incident(v) {
                let w = a.other_end(e, v).unwrap();
                if seen.insert(w) {
                    queue.push_back(w);
                }
            }
        }
    }
    let targets: Vec<VertexId> = b.vertices().collect();
    let mut phi: BTreeMap<VertexId, VertexId> = BTreeMap::new();
    let mut used: BTreeSet<VertexId> = BTreeSet::new();

    fn extend(
        i: usize,
        order: &[VertexId],
        targets: &[VertexId],
        phi: &mut BTreeMap<VertexId, VertexId>,
        used: &mut BTreeSet<VertexId>,
        fits: &dyn Fn(&BTreeMap<VertexId, VertexId>, VertexId, VertexId) -> bool,
    ) -> bool {
        let Some(&v) = order.get(i) else { return true };
        for &t in targets {
            if used.contains(&t) || !fits(phi, v, t) {
                continue;
            }
            phi.insert(v, t);
            used.insert(t);
            if extend(i + 1, order, targets, phi, used, fits) {
                return true;
            }
            phi.remove(&v);
            used.remove(&t);
        }
        false
    }

    let fits = |phi: &BTreeMap<VertexId, VertexId>, v: VertexId, t: VertexId| {
        a.degree(v) == b.degree(t)
            && count(&ma, v, v) == count(&mb, t, t)
            && phi.iter().all(|(&x, &y)| count(&ma, v, x) == count(&mb, t, y))
    };
    extend(0, &order, &targets, &mut phi, &mut used, &fits).then_some(phi)
}

/// True iff `g − c` (edges deleted, vertices kept) is connected.
pub fn is_non_separating(g: &MultiGraph, c: &EdgeSet) -> Result<bool> {
    g.check_edges(c)?;
    Ok(g.is_connected_on(&g.edge_set().difference(c)))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::generators;

    #[test]
    fn loops_count_twice() {
        let mut g = MultiGraph::from_edges(2, &[(0, 1)]);
        g.add_edge(VertexId(0), VertexId(0)).unwrap();
        assert_eq!(g.degree(VertexId(0)), 3);
        assert_eq!(g.degree(VertexId(1)), 1);
    }

    #[test]
    fn removing_edges_keeps_ids() {
        let mut g = generators::k4();
        g.remove_edge(EdgeId(2)).unwrap();
        let e = g.add_edge(VertexId(0), VertexId(1)).unwrap();
        assert_eq!(e, EdgeId(6));
        assert!(!g.has_edge(EdgeId(2)));
        assert_eq!(g.remove_edge(EdgeId(2)), Err(Error::UnknownEdge(EdgeId(2))));
    }

    #[test]
    fn bridges_respect_parallel_edges() {
        // digon 0=1, bridge 1-2, triangle 2,3,4
        let g = MultiGraph::from_edges(5, &[(0, 1), (0, 1), (1, 2), (2, 3), (3, 4), (4, 2)]);
        assert_eq!(g.bridges().to_vec(), vec![EdgeId(2)]);
        assert!(!g.is_two_edge_connected());
        assert!(generators::theta().is_two_edge_connected());
        assert!(generators::petersen().is_two_edge_connected());
    }

    #[test]
    fn girth_of_small_graphs() {
        assert_eq!(generators::petersen().girth(), Some(5));
        assert_eq!(generators::k4().girth(), Some(3));
        assert_eq!(generators::theta().girth(), Some(2));
        assert_eq!(generators::circuit(7).girth(), Some(7));
        assert_eq!(MultiGraph::from_edges(3, &[(0, 1), (1, 2)]).girth(), None);
    }

    #[test]
    fn petersen_recognition() {
        assert!(is_petersen(&generators::petersen()));
        let (q, _) = generators::q_triangles();
        assert!(!is_petersen(&q));
        assert!(!is_petersen(&generators::k4()));
        // the 5-prism is cubic on 10 vertices but has girth 4
        let prism = MultiGraph::from_edges(
            10,
            &[
                (0, 1), (1, 2), (2, 3), (3, 4), (4, 0),
                (5, 6), (6, 7), (7, 8), (8, 9), (9, 5),
                (0, 5), (1, 6), (2, 7), (3, 8), (4, 9),
            ],
        );
        assert!(!is_petersen(&prism));
    }

    #[test]
    fn isomorphism_search() {
        let p = generators::petersen();
        let (q, _) = generators::q_triangles();
        let c = crate::surgery::contract_edges(&q, &generators::q_triangles().1.cycle).unwrap();
        let phi = find_isomorphism(&p, &c.graph).unwrap();
        for (_, u, v) in p.edges() {
            assert!(c.graph.incident(phi[&u]).iter().any(|&e| c.graph.other_end(e, phi[&u]).unwrap() == phi[&v]));
        }
        assert!(find_isomorphism(&p, &generators::k4_of_petersen_minus_v()).is_none());
        assert!(find_isomorphism(&generators::theta(), &MultiGraph::from_edges(2, &[(0, 1), (0, 1), (1, 0)])).is_some());
    }

    #[test]
    fn non_separating_examples() {
        let p = generators::petersen();
        // outer 5-circuit plus inner pentagram is a 2-factor
        let two_factor: EdgeSet = generators::petersen_two_factor(&p);
        assert!(!is_non_separating(&p, &two_factor).unwrap());
        assert!(is_non_separating(&p, &EdgeSet::new()).unwrap());
        assert!(is_non_separating(&p, &[EdgeId(99)].into_iter().collect()).is_err());
    }
}
