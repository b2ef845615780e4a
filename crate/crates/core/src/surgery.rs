//! Graph surgeries: contraction, cut splitting, splitting away, and
//! suppression of degree-two vertices.

use std::collections::{BTreeMap, BTreeSet};

use crate::edge_set::EdgeSet;
use crate::error::{Error, Result};
use crate::graph::{EdgeId, MultiGraph, UnionFind, VertexId};

/// Result of contracting an edge set.
#[derive(Clone, Debug)]
pub struct Contraction {
    pub graph: MultiGraph,
    /// Every vertex of the contracted graph mapped to the original vertices it absorbs.
    pub provenance: BTreeMap<VertexId, BTreeSet<VertexId>>,
    /// Every original vertex mapped to its image.
    pub image: BTreeMap<VertexId, VertexId>,
    /// Edges of the original graph that survive, with unchanged ids.
    pub surviving: EdgeSet,
}

/// Contracts every connected component of the subgraph spanned by `f` to a
/// single vertex. Components with at least two vertices get a fresh vertex id;
/// a single vertex whose `f`-edges are loops keeps its id and loses the loops.
/// Edges outside `f` survive with their ids, possibly as loops.
pub fn contract_edges(g: &MultiGraph, f: &EdgeSet) -> Result<Contraction> {
    g.check_edges(f)?;
    let mut uf = UnionFind::new(g.max_vertex_id() as usize);
    for e in f {
        let (u, v) = g.endpoints(e)?;
        uf.union(u.index(), v.index());
    }
    let mut classes: BTreeMap<usize, BTreeSet<VertexId>> = BTreeMap::new();
    for v in g.vertices() {
        classes.entry(uf.find(v.index())).or_default().insert(v);
    }

    let (mut next_vertex, next_edge) = g.counters();
    let mut out = MultiGraph::new();
    let mut provenance = BTreeMap::new();
    let mut image = BTreeMap::new();
    // Classes are keyed by their least member, so fresh ids follow a fixed order.
    for members in classes.into_values() {
        let rep = if members.len() == 1 {
            *members.first().unwrap()
        } else {
            let v = VertexId(next_vertex);
            next_vertex += 1;
            v
        };
        out.ensure_vertex(rep);
        for &m in &members {
            image.insert(m, rep);
        }
        provenance.insert(rep, members);
    }
    let mut surviving = EdgeSet::new();
    for (e, u, v) in g.edges() {
        if !f.contains(e) {
            out.insert_edge_with_id(e, image[&u], image[&v]);
            surviving.insert(e);
        }
    }
    out.bump_counters(next_vertex, next_edge);
    Ok(Contraction { graph: out, provenance, image, surviving })
}

/// The two contractions on either side of a 2- or 3-edge cut.
#[derive(Clone, Debug)]
pub struct CutSplit {
    /// The original graph with the second component contracted to `hub2`.
    pub side1: MultiGraph,
    /// The original graph with the first component contracted to `hub1`.
    pub side2: MultiGraph,
    pub cut: EdgeSet,
    /// Vertex of `side2` standing for the first component.
    pub hub1: VertexId,
    /// Vertex of `side1` standing for the second component.
    pub hub2: VertexId,
    pub component1: BTreeSet<VertexId>,
    pub component2: BTreeSet<VertexId>,
}

impl CutSplit {
    /// Rebuilds the original graph from the two sides. Vertex and edge ids
    /// away from the hubs are preserved, so the result equals the input of
    /// [`split_along_cut`] edge for edge.
    pub fn reassemble(&self) -> MultiGraph {
        let mut g = MultiGraph::new();
        for v in self.component1.iter().chain(&self.component2) {
            g.ensure_vertex(*v);
        }
        for (e, u, v) in self.side1.edges() {
            if !self.cut.contains(e) {
                g.insert_edge_with_id(e, u, v);
            }
        }
        for (e, u, v) in self.side2.edges() {
            if self.cut.contains(e) {
                let a = self.side1.other_end(e, self.hub2).unwrap();
                let b = if u == self.hub1 { v } else { u };
                g.insert_edge_with_id(e, a, b);
            } else {
                g.insert_edge_with_id(e, u, v);
            }
        }
        let (nv1, ne1) = self.side1.counters();
        let (nv2, ne2) = self.side2.counters();
        g.bump_counters(nv1.max(nv2), ne1.max(ne2));
        g
    }
}

/// Splits `g` along an edge cut of size 2 or 3 whose removal leaves exactly
/// two components. The component holding the least vertex id is the first.
pub fn split_along_cut(g: &MultiGraph, cut: &EdgeSet) -> Result<CutSplit> {
    g.check_edges(cut)?;
    if !(2..=3).contains(&cut.len()) {
        return Err(Error::CutSize(cut.len()));
    }
    let comps = g.components_of(&g.edge_set().difference(cut));
    match comps.len() {
        1 => return Err(Error::CutDoesNotDisconnect),
        2 => {}
        n => return Err(Error::CutComponents(n)),
    }
    let (c1, c2) = (comps[0].clone(), comps[1].clone());
    split_with_components(g, cut, c1, c2)
}

pub(crate) fn split_with_components(
    g: &MultiGraph,
    cut: &EdgeSet,
    c1: BTreeSet<VertexId>,
    c2: BTreeSet<VertexId>,
) -> Result<CutSplit> {
    let inside = |comp: &BTreeSet<VertexId>| -> EdgeSet {
        g.edges()
            .filter(|(_, u, v)| comp.contains(u) && comp.contains(v))
            .map(|(e, _, _)| e)
            .collect()
    };
    let for_side1 = contract_edges(g, &inside(&c2))?;
    let for_side2 = contract_edges(g, &inside(&c1))?;
    let hub2 = for_side1.image[c2.first().unwrap()];
    let hub1 = for_side2.image[c1.first().unwrap()];
    Ok(CutSplit {
        side1: for_side1.graph,
        side2: for_side2.graph,
        cut: cut.clone(),
        hub1,
        hub2,
        component1: c1,
        component2: c2,
    })
}

/// Replaces the edges `a = xv` and `b = vy` by one new edge `xy`.
/// Returns the new graph and the id of the new edge.
pub fn split_away(g: &MultiGraph, v: VertexId, a: EdgeId, b: EdgeId) -> Result<(MultiGraph, EdgeId)> {
    if a == b {
        return Err(Error::SameEdge(a));
    }
    if !g.has_vertex(v) {
        return Err(Error::UnknownVertex(v));
    }
    let x = g.other_end(a, v)?;
    let y = g.other_end(b, v)?;
    let mut h = g.clone();
    h.remove_edge(a)?;
    h.remove_edge(b)?;
    let e = h.add_edge(x, y)?;
    Ok((h, e))
}

/// Output of [`suppress_degree_two`].
#[derive(Clone, Debug)]
pub struct Suppression {
    pub graph: MultiGraph,
    /// New edges mapped to the original path they replace, in path order.
    pub paths: BTreeMap<EdgeId, Vec<EdgeId>>,
    pub removed_vertices: BTreeSet<VertexId>,
}

impl Suppression {
    /// Re-inflates an edge set of the reduced graph to the original graph.
    pub fn expand(&self, f: &EdgeSet) -> EdgeSet {
        let mut out = EdgeSet::new();
        for e in f {
            match self.paths.get(&e) {
                Some(path) => out.extend(path.iter().copied()),
                None => {
                    out.insert(e);
                }
            }
        }
        out
    }

    /// Maps an edge set of the original graph to the reduced graph. Each
    /// suppressed path must lie entirely inside or entirely outside `f`.
    pub fn restrict(&self, f: &EdgeSet) -> Result<EdgeSet> {
        let mut out = EdgeSet::new();
        let mut absorbed = EdgeSet::new();
        for (&new, path) in &self.paths {
            absorbed.extend(path.iter().copied());
            let hits = path.iter().filter(|&&e| f.contains(e)).count();
            if hits == path.len() {
                out.insert(new);
            } else if hits != 0 {
                return Err(Error::precondition(format!(
                    "edge set splits the suppressed path behind {new}"
                )));
            }
        }
        out.union_with(&f.difference(&absorbed));
        Ok(out)
    }
}

/// Replaces every maximal path through degree-two vertices by a single edge.
pub fn suppress_degree_two(g: &MultiGraph) -> Result<Suppression> {
    let is_inner = |v: VertexId| g.degree(v) == 2 && g.incident(v).len() == 2;
    let mut h = g.clone();
    let mut paths = BTreeMap::new();
    let mut removed = BTreeSet::new();
    let mut used = EdgeSet::new();

    for anchor in g.vertices().filter(|&v| !is_inner(v)) {
        for &start in g.incident(anchor) {
            if used.contains(start) {
                continue;
            }
            let mut path = vec![start];
            let mut cur = g.other_end(start, anchor)?;
            let mut last = start;
            while is_inner(cur) && cur != anchor {
                let inc = g.incident(cur);
                let next = if inc[0] == last { inc[1] } else { inc[0] };
                removed.insert(cur);
                path.push(next);
                last = next;
                cur = g.other_end(next, cur)?;
            }
            for &e in &path {
                used.insert(e);
            }
            if path.len() > 1 {
                for &e in &path {
                    h.remove_edge(e)?;
                }
                let new = h.add_edge(anchor, cur)?;
                paths.insert(new, path);
            }
        }
    }
    // Degree-two vertices never reached from an anchor form circuit components.
    if g.vertices().any(|v| is_inner(v) && !removed.contains(&v)) {
        return Err(Error::IsCircuit);
    }
    for &v in &removed {
        h.remove_vertex(v)?;
    }
    Ok(Suppression { graph: h, paths, removed_vertices: removed })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::generators;
    use crate::graph::is_petersen;

    fn ids(v: &[u32]) -> EdgeSet {
        v.iter().map(|&i| EdgeId(i)).collect()
    }

    #[test]
    fn contract_triangle_edge_gives_digon() {
        let g = generators::circuit(3);
        let c = contract_edges(&g, &ids(&[0])).unwrap();
        assert_eq!(c.graph.vertex_count(), 2);
        assert_eq!(c.graph.edge_count(), 2);
        let (a, b) = c.graph.endpoints(EdgeId(1)).unwrap();
        let (x, y) = c.graph.endpoints(EdgeId(2)).unwrap();
        assert_eq!((a.min(b), a.max(b)), (x.min(y), x.max(y)));
        let merged = c.image[&VertexId(0)];
        assert_eq!(c.provenance[&merged], BTreeSet::from([VertexId(0), VertexId(1)]));
        assert_eq!(merged, VertexId(3));
    }

    #[test]
    fn contract_nothing_is_identity() {
        let g = generators::petersen();
        let c = contract_edges(&g, &EdgeSet::new()).unwrap();
        assert_eq!(c.graph, g);
        assert!(c.image.iter().all(|(a, b)| a == b));
    }

    #[test]
    fn contract_unknown_edge() {
        let g = generators::k4();
        assert_eq!(contract_edges(&g, &ids(&[40])).err(), Some(Error::UnknownEdge(EdgeId(40))));
    }

    #[test]
    fn contracting_q_triangles_restores_petersen() {
        let (q, inst) = generators::q_triangles();
        let c = contract_edges(&q, &inst.cycle).unwrap();
        assert!(is_petersen(&c.graph));
        // contracting one triangle gives a degree-3 vertex
        let first = &inst.components[0];
        let one = contract_edges(&q, first).unwrap();
        let v = one.image[&q.endpoints(first.first().unwrap()).unwrap().0];
        assert_eq!(one.graph.degree(v), 3);
    }

    #[test]
    fn contraction_turns_chords_into_loops() {
        // triangle with a doubled edge; contract the triangle
        let g = MultiGraph::from_edges(3, &[(0, 1), (1, 2), (2, 0), (0, 1)]);
        let c = contract_edges(&g, &ids(&[0, 1, 2])).unwrap();
        assert_eq!(c.graph.vertex_count(), 1);
        assert!(c.graph.is_loop(EdgeId(3)));
    }

    #[test]
    fn theta_three_cut() {
        let g = generators::theta();
        let s = split_along_cut(&g, &g.edge_set()).unwrap();
        assert_eq!(s.side1.vertex_count(), 2);
        assert_eq!(s.side2.vertex_count(), 2);
        assert_eq!(s.side1.edge_count(), 3);
        assert_eq!(s.side1.degree(s.hub2), 3);
        assert_eq!(s.side2.degree(s.hub1), 3);
        assert_eq!(s.reassemble(), g);
    }

    #[test]
    fn two_triangles_two_cut() {
        let g = MultiGraph::from_edges(
            6,
            &[(0, 1), (1, 2), (2, 0), (3, 4), (4, 5), (5, 3), (0, 3), (1, 4)],
        );
        let s = split_along_cut(&g, &ids(&[6, 7])).unwrap();
        assert_eq!(s.side1.vertex_count(), 4);
        assert_eq!(s.side1.degree(s.hub2), 2);
        assert_eq!(s.side2.degree(s.hub1), 2);
        assert_eq!(s.reassemble(), g);
    }

    #[test]
    fn split_errors() {
        let g = generators::k4();
        assert_eq!(split_along_cut(&g, &ids(&[0])).err(), Some(Error::CutSize(1)));
        assert_eq!(split_along_cut(&g, &ids(&[0, 5])).err(), Some(Error::CutDoesNotDisconnect));
        // path 0-1-2 plus an isolated vertex: deleting both edges leaves 4 components
        let p = MultiGraph::from_edges(4, &[(0, 1), (1, 2)]);
        assert_eq!(split_along_cut(&p, &ids(&[0, 1])).err(), Some(Error::CutComponents(4)));
    }

    #[test]
    fn split_away_figure_eight() {
        // two triangles sharing vertex 0
        let g = MultiGraph::from_edges(5, &[(0, 1), (1, 2), (2, 0), (0, 3), (3, 4), (4, 0)]);
        let (h, e) = split_away(&g, VertexId(0), EdgeId(2), EdgeId(0)).unwrap();
        assert_eq!(h.degree(VertexId(0)), 2);
        assert_eq!(h.endpoints(e).unwrap(), (VertexId(2), VertexId(1)));
        assert_eq!(h.components().len(), 2);
    }

    #[test]
    fn split_away_degree_two_isolates() {
        let g = generators::circuit(4);
        let v = VertexId(1);
        let inc = g.incident(v).to_vec();
        let (h, _) = split_away(&g, v, inc[0], inc[1]).unwrap();
        assert_eq!(h.degree(v), 0);
        assert_eq!(h.edge_count(), 3);
    }

    #[test]
    fn split_away_errors() {
        let g = generators::k4();
        assert_eq!(split_away(&g, VertexId(0), EdgeId(0), EdgeId(0)).err(), Some(Error::SameEdge(EdgeId(0))));
        assert!(matches!(split_away(&g, VertexId(0), EdgeId(0), EdgeId(5)), Err(Error::NotIncident { .. })));
    }

    #[test]
    fn suppress_subdivided_triangle() {
        // triangle 0,1,2 with 0-1 subdivided by vertex 3, plus a pendant to keep anchors
        let g = MultiGraph::from_edges(4, &[(0, 3), (3, 1), (1, 2), (2, 0)]);
        // every vertex has degree 2 here, so this is a circuit
        assert_eq!(suppress_degree_two(&g).err(), Some(Error::IsCircuit));

        let k4 = generators::k4();
        let mut g = k4.clone();
        let (u, v) = g.endpoints(EdgeId(0)).unwrap();
        g.remove_edge(EdgeId(0)).unwrap();
        let w = g.add_vertex();
        let a = g.add_edge(u, w).unwrap();
        let b = g.add_edge(w, v).unwrap();
        let s = suppress_degree_two(&g).unwrap();
        assert_eq!(s.graph.vertex_count(), 4);
        assert_eq!(s.graph.edge_count(), 6);
        let (&new, path) = s.paths.iter().next().unwrap();
        assert_eq!(path, &vec![a, b]);
        let all = s.graph.edge_set();
        assert_eq!(s.expand(&all), g.edge_set());
        assert!(s.expand(&ids(&[new.0])).contains(a));
    }

    #[test]
    fn suppress_without_degree_two_is_identity() {
        let g = generators::petersen();
        let s = suppress_degree_two(&g).unwrap();
        assert_eq!(s.graph, g);
        assert!(s.paths.is_empty());
    }
}
