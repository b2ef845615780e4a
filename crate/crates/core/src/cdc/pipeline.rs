use std::collections::{BTreeMap, BTreeSet, VecDeque};

use crate::budget::SearchBudget;
use crate::cycle_space::{edge_components, is_even_subgraph};
use crate::degeneracy::{classify_degeneracy, Endpoint};
use crate::edge_set::EdgeSet;
use crate::error::{Error, Result, StageExt};
use crate::flow::{find_nz4f, nz4f_via_degeneracy};
use crate::graph::{is_non_separating, EdgeId, MultiGraph, VertexId};
use crate::surgery::{contract_edges, split_away, suppress_degree_two};

use super::{ensure_verified, five_cdc_from_flow, girth_cdc_recursive, tree_vertices, CdcCertificate, HistInstance};

/// Cover of a tree-plus-cycle graph containing the cycle.
///
/// Degree-two vertices are suppressed and cycle vertices off the tree are
/// split away. The cycle is then contracted and the result classified: if
/// it contracts to K1 the cover has at most five members; if it stops at the
/// Petersen graph a direct flow search is tried first, and otherwise the
/// blob recursion yields six members.
pub fn tree_cycle_cdc(inst: &HistInstance) -> Result<CdcCertificate> {
    inst.validate()?;
    let g = &inst.graph;
    if inst.components.len() > 3 {
        return Err(Error::precondition(format!("cycle has {} components, at most 3 allowed", inst.components.len())));
    }
    if !g.is_two_edge_connected() {
        return Err(Error::precondition("graph is not 2-edge-connected"));
    }
    if g.edge_count() == 0 {
        return Ok(CdcCertificate::new(None, []));
    }
    let sup = match suppress_degree_two(g) {
        Ok(s) => s,
        Err(Error::IsCircuit) => {
            // A 2-edge-connected graph with all degrees two is one circuit,
            // which a tree-plus-cycle split can only assign to the cycle.
            let cert = CdcCertificate::new(Some(inst.cycle.clone()), [g.edge_set()]).with_step("circuit covered twice");
            ensure_verified(g, &cert, &inst.cycle)?;
            return Ok(cert);
        }
        Err(e) => return Err(e),
    };
    let tree1 = sup.restrict(&inst.tree)?;
    let cycle1 = sup.restrict(&inst.cycle)?;
    let (g2, cycle2, splits) = split_cycle_off_tree(&sup.graph, &tree1, &cycle1).stage("splitting away")?;

    let contraction = contract_edges(&g2, &cycle2)?;
    let u: BTreeSet<VertexId> = edge_components(&g2, &cycle2)
        .iter()
        .map(|k| contraction.image[&g2.endpoints(k.first().unwrap()).unwrap().0])
        .collect();
    let verdict = classify_degeneracy(&contraction.graph, &u).stage("degeneracy classification")?;
    let budget = SearchBudget::default();
    let cert = match verdict.kind {
        Endpoint::K1 => {
            let flow = nz4f_via_degeneracy(&contraction.graph, &verdict.sequence).stage("flow through contractions")?;
            five_cdc_from_flow(&g2, &cycle2, &flow)?
        }
        Endpoint::Petersen => match find_nz4f(&contraction.graph, &budget).stage("flow search")? {
            Some(flow) => five_cdc_from_flow(&g2, &cycle2, &flow)?,
            None => girth_cdc_recursive(&g2, &cycle2, &verdict).stage("blob recursion")?,
        },
        Endpoint::Other => {
            return Err(Error::Verification(
                "contraction of a valid instance ends neither at K1 nor at the Petersen graph".into(),
            ))
        }
    };
    let cert = cert.map_members(|m| sup.expand(&expand_splits(m, &splits))).with_step("pulled back through preprocessing");
    ensure_verified(g, &cert, &inst.cycle)?;
    Ok(cert)
}

/// Removes cycle vertices that the tree misses. At each such vertex the
/// two edges entering and leaving it along an Euler circuit of its cycle
/// component are split away, which keeps the component a closed trail.
/// Returns the new graph and cycle, and each new edge's pair of parents.
fn split_cycle_off_tree(
    g: &MultiGraph,
    tree: &EdgeSet,
    cycle: &EdgeSet,
) -> Result<(MultiGraph, EdgeSet, BTreeMap<EdgeId, (EdgeId, EdgeId)>)> {
    let on_tree = tree_vertices(g, tree, cycle);
    let mut h = g.clone();
    let mut cyc = cycle.clone();
    let mut splits = BTreeMap::new();
    let offenders: Vec<VertexId> = g.vertices().filter(|v| !on_tree.contains(v)).collect();
    for v in offenders {
        while !h.incident(v).is_empty() {
            let trail = euler_circuit(&h, &cyc, v);
            let (a, b) = (*trail.last().unwrap(), trail[0]);
            let (next, e) = split_away(&h, v, a, b)?;
            h = next;
            cyc.remove(a);
            cyc.remove(b);
            cyc.insert(e);
            splits.insert(e, (a, b));
        }
        h.remove_vertex(v)?;
    }
    Ok((h, cyc, splits))
}

/// Closed trail through every `edges`-edge of the component of `start`,
/// beginning and ending at `start`; neighbours are taken by least edge id.
fn euler_circuit(g: &MultiGraph, edges: &EdgeSet, start: VertexId) -> Vec<EdgeId> {
    let mut used = EdgeSet::new();
    let mut stack: Vec<(VertexId, Option<EdgeId>)> = vec![(start, None)];
    let mut out = Vec::new();
    while let Some(&(v, via)) = stack.last() {
        let next = g.incident(v).iter().copied().filter(|&e| edges.contains(e) && !used.contains(e)).min();
        match next {
            Some(e) => {
                used.insert(e);
                stack.push((g.other_end(e, v).unwrap(), Some(e)));
            }
            None => {
                stack.pop();
                out.extend(via);
            }
        }
    }
    out.reverse();
    out
}

fn expand_splits(m: &EdgeSet, splits: &BTreeMap<EdgeId, (EdgeId, EdgeId)>) -> EdgeSet {
    let mut out = EdgeSet::new();
    let mut stack: Vec<EdgeId> = m.iter().collect();
    while let Some(e) = stack.pop() {
        match splits.get(&e) {
            Some(&(a, b)) => stack.extend([a, b]),
            None => {
                out.insert(e);
            }
        }
    }
    out
}

/// An edge `uv` replaced by the path `u-a`, `a=b` (two parallel edges), `b-v`.
#[derive(Clone, Debug)]
struct Gadget {
    original: EdgeId,
    entry: EdgeId,
    exit: EdgeId,
    digon: [EdgeId; 2],
}

fn insert_gadgets(g: &MultiGraph, edges: &EdgeSet) -> Result<(MultiGraph, Vec<Gadget>)> {
    let mut h = g.clone();
    let mut gadgets = Vec::new();
    for e in edges {
        let (u, v) = h.remove_edge(e)?;
        let a = h.add_vertex();
        let b = h.add_vertex();
        let entry = h.add_edge(u, a)?;
        let d1 = h.add_edge(a, b)?;
        let d2 = h.add_edge(a, b)?;
        let exit = h.add_edge(b, v)?;
        gadgets.push(Gadget { original: e, entry, exit, digon: [d1, d2] });
    }
    Ok((h, gadgets))
}

/// A member of the gadget graph read back on the original graph: a member
/// through a gadget enters and leaves it, so it uses the original edge.
fn fold_gadgets(m: &EdgeSet, gadgets: &[Gadget]) -> EdgeSet {
    let mut out = m.clone();
    for gd in gadgets {
        if out.contains(gd.entry) {
            out.insert(gd.original);
        }
        for e in [gd.entry, gd.exit, gd.digon[0], gd.digon[1]] {
            out.remove(e);
        }
    }
    out
}

/// Reduction of a graph with a non-separating cycle to a tree-plus-cycle
/// instance, with the map carrying covers back.
#[derive(Clone, Debug)]
pub struct HistReduction {
    pub original: MultiGraph,
    pub cycle: EdgeSet,
    pub instance: HistInstance,
    /// Even components of the non-tree leftover, folded into the instance cycle.
    pub leftover: EdgeSet,
    gadgets: Vec<Gadget>,
}

impl HistReduction {
    /// Turns a cover of the instance graph containing the instance cycle into
    /// a cover of the original graph containing the original cycle. The
    /// instance cycle reads back as `cycle ∪ leftover`, which is split into
    /// its two even parts.
    pub fn pull_back(&self, cert: &CdcCertificate) -> Result<CdcCertificate> {
        ensure_verified(&self.instance.graph, cert, &self.instance.cycle)?;
        let folded = cert.map_members(|m| fold_gadgets(m, &self.gadgets));
        let head = folded.prescribed_cycle();
        if head != self.cycle.union(&self.leftover) {
            return Err(Error::Verification("instance cycle does not fold back to cycle plus leftover".into()));
        }
        let mut out = CdcCertificate::new(Some(self.cycle.clone()), std::iter::once(self.leftover.clone()).chain(folded.others().cloned()));
        out.trace = folded.trace;
        let out = out.with_step("pulled back through the tree reduction");
        ensure_verified(&self.original, &out, &self.cycle)?;
        Ok(out)
    }

    pub fn gadget_count(&self) -> usize {
        self.gadgets.len()
    }
}

/// Builds a tree-plus-cycle instance from a non-separating cycle.
///
/// A breadth-first spanning tree `T` of `g − c` leaves some edges over. Even
/// components of the leftover join the cycle; every other leftover edge `uv`
/// becomes `u-a, a=b, b-v` with `ua, bv` added to the tree and the digon
/// `a=b` added to the cycle.
pub fn reduce_to_hist_instance(g: &MultiGraph, c: &EdgeSet) -> Result<HistReduction> {
    g.check_edges(c)?;
    if !is_even_subgraph(g, c) {
        return Err(Error::NotEven);
    }
    if !g.is_two_edge_connected() {
        return Err(Error::precondition("graph is not 2-edge-connected"));
    }
    if !is_non_separating(g, c)? {
        return Err(Error::precondition("cycle separates the graph"));
    }
    let rest = g.edge_set().difference(c);
    let tree = bfs_tree(g, &rest);
    let left = rest.difference(&tree);
    let mut leftover = EdgeSet::new();
    let mut paths = EdgeSet::new();
    for comp in edge_components(g, &left) {
        if is_even_subgraph(g, &comp) {
            leftover.union_with(&comp);
        } else {
            paths.union_with(&comp);
        }
    }
    let (h, gadgets) = insert_gadgets(g, &paths)?;
    let mut tree2 = tree;
    let mut cycle2 = c.union(&leftover);
    for gd in &gadgets {
        tree2.extend([gd.entry, gd.exit]);
        cycle2.extend(gd.digon);
    }
    let instance = HistInstance::new(h, tree2, cycle2)?;
    Ok(HistReduction { original: g.clone(), cycle: c.clone(), instance, leftover, gadgets })
}

/// Breadth-first spanning forest of the subgraph on `allowed`, least edge ids first.
fn bfs_tree(g: &MultiGraph, allowed: &EdgeSet) -> EdgeSet {
    let mut tree = EdgeSet::new();
    let mut seen = BTreeSet::new();
    for root in g.vertices() {
        if !seen.insert(root) {
            continue;
        }
        let mut queue = VecDeque::from([root]);
        while let Some(v) = queue.pop_front() {
            let mut inc: Vec<EdgeId> = g.incident(v).iter().copied().filter(|&e| allowed.contains(e)).collect();
            inc.sort();
            for e in inc {
                let w = g.other_end(e, v).unwrap();
                if seen.insert(w) {
                    tree.insert(e);
                    queue.push_back(w);
                }
            }
        }
    }
    tree
}

/// Cover containing the union of `circuits` for a decomposition of `g` into
/// a spanning tree, at least one circuit, and extra edges, with at most
/// three circuits and extra edges together. Each extra edge is replaced by
/// a digon gadget whose digon joins the cycle.
pub fn decomposition_cdc(g: &MultiGraph, tree: &EdgeSet, circuits: &[EdgeSet], extra: &EdgeSet) -> Result<CdcCertificate> {
    if circuits.is_empty() {
        return Err(Error::precondition("at least one circuit is required"));
    }
    if circuits.len() + extra.len() > 3 {
        return Err(Error::precondition("more than three circuits and extra edges"));
    }
    if !g.is_spanning_tree(tree) {
        return Err(Error::precondition("tree is not a spanning tree"));
    }
    let mut cycle = EdgeSet::new();
    let mut total = tree.len() + extra.len();
    for k in circuits {
        g.check_edges(k)?;
        let comps = edge_components(g, k);
        if comps.len() != 1 || !g.vertices().all(|v| matches!(g.degree_in(v, k), 0 | 2)) {
            return Err(Error::precondition("a listed circuit is not a circuit"));
        }
        cycle.union_with(k);
        total += k.len();
    }
    g.check_edges(extra)?;
    let parts = tree.union(&cycle).union(extra);
    if total != g.edge_count() || parts != g.edge_set() {
        return Err(Error::precondition("tree, circuits and extra edges do not partition the edges"));
    }
    let (h, gadgets) = insert_gadgets(g, extra)?;
    let mut tree2 = tree.clone();
    let mut cycle2 = cycle.clone();
    for gd in &gadgets {
        tree2.extend([gd.entry, gd.exit]);
        cycle2.extend(gd.digon);
    }
    let inst = HistInstance::new(h, tree2, cycle2)?;
    let inner = tree_cycle_cdc(&inst)?;
    let cert = inner.map_members(|m| fold_gadgets(m, &gadgets)).with_step("pulled back through edge gadgets");
    ensure_verified(g, &cert, &cycle)?;
    Ok(cert)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::generators;
    use crate::oracle::{find_tree_cycle_decomposition, verify_cdc};

    #[test]
    fn petersen_hist_gives_five() {
        let p = generators::petersen();
        let inst = find_tree_cycle_decomposition(&p, 3, &SearchBudget::default()).unwrap().unwrap();
        assert_eq!(inst.components.len(), 1);
        let s = tree_cycle_cdc(&inst).unwrap();
        assert!(s.len() <= 5);
        assert_eq!(s.prescribed_cycle(), inst.cycle);
    }

    #[test]
    fn q_gives_six() {
        let (_, inst) = generators::q_triangles();
        let s = tree_cycle_cdc(&inst).unwrap();
        assert_eq!(s.len(), 6);
        assert_eq!(s.prescribed_cycle(), inst.cycle);
    }

    #[test]
    fn k4_star_and_triangle() {
        let k4 = generators::k4();
        let tri: EdgeSet = [EdgeId(0), EdgeId(1), EdgeId(3)].into_iter().collect();
        let inst = HistInstance::new(k4.clone(), k4.edge_set().difference(&tri), tri.clone()).unwrap();
        let s = tree_cycle_cdc(&inst).unwrap();
        assert!(verify_cdc(&k4, &s).is_ok());
        assert!(s.len() <= 5);
    }

    #[test]
    fn circuit_host() {
        let c = generators::circuit(4);
        let inst = HistInstance::new(c.clone(), EdgeSet::new(), c.edge_set()).unwrap();
        let s = tree_cycle_cdc(&inst).unwrap();
        assert_eq!(s.members, vec![c.edge_set(), c.edge_set()]);
    }

    #[test]
    fn cycle_vertex_off_the_tree_is_split_away() {
        // vertex 0 carries two digons, to 1 and to 2, and is off the tree 1-2
        let g = MultiGraph::from_edges(3, &[(0, 1), (0, 1), (0, 2), (0, 2), (1, 2)]);
        let tree: EdgeSet = [EdgeId(4)].into_iter().collect();
        let cycle = g.edge_set().difference(&tree);
        let inst = HistInstance::new(g.clone(), tree, cycle.clone()).unwrap();
        assert_eq!(inst.components.len(), 1);
        let s = tree_cycle_cdc(&inst).unwrap();
        assert!(verify_cdc(&g, &s).is_ok());
        assert_eq!(s.prescribed_cycle(), cycle);
    }

    #[test]
    fn euler_circuit_keeps_figure_eight_connected() {
        let g = MultiGraph::from_edges(5, &[(0, 1), (1, 2), (2, 0), (0, 3), (3, 4), (4, 0)]);
        let trail = euler_circuit(&g, &g.edge_set(), VertexId(0));
        assert_eq!(trail.len(), 6);
        let (a, b) = (*trail.last().unwrap(), trail[0]);
        // the closing pair uses one edge of each triangle
        let first_triangle = |e: EdgeId| e.0 < 3;
        assert_ne!(first_triangle(a), first_triangle(b));
    }

    #[test]
    fn reduction_identity_when_complement_is_a_tree() {
        let p = generators::petersen();
        let inst = find_tree_cycle_decomposition(&p, 1, &SearchBudget::default()).unwrap().unwrap();
        let r = reduce_to_hist_instance(&p, &inst.cycle).unwrap();
        assert_eq!(r.gadget_count(), 0);
        assert!(r.leftover.is_empty());
        assert_eq!(r.instance.graph, p);
        let back = r.pull_back(&tree_cycle_cdc(&r.instance).unwrap()).unwrap();
        assert_eq!(back.prescribed_cycle(), inst.cycle);
    }

    #[test]
    fn reduction_with_empty_cycle_uses_gadgets() {
        // K4 minus nothing, c = ∅: the BFS tree leaves three edges forming a triangle
        let k4 = generators::k4();
        let r = reduce_to_hist_instance(&k4, &EdgeSet::new()).unwrap();
        assert_eq!(r.gadget_count(), 0);
        assert_eq!(r.leftover.len(), 3);
        let back = r.pull_back(&tree_cycle_cdc(&r.instance).unwrap()).unwrap();
        assert!(verify_cdc(&k4, &back).is_ok());
        assert_eq!(back.prescribed, None);
    }

    #[test]
    fn reduction_with_a_path_leftover() {
        // prism: two triangles joined by a matching; c = one triangle
        let g = MultiGraph::from_edges(6, &[(0, 1), (1, 2), (2, 0), (3, 4), (4, 5), (5, 3), (0, 3), (1, 4), (2, 5)]);
        let c: EdgeSet = [EdgeId(0), EdgeId(1), EdgeId(2)].into_iter().collect();
        let r = reduce_to_hist_instance(&g, &c).unwrap();
        assert!(r.gadget_count() > 0);
        let back = r.pull_back(&tree_cycle_cdc(&r.instance).unwrap()).unwrap();
        assert!(verify_cdc(&g, &back).is_ok());
        assert_eq!(back.prescribed_cycle(), c);
    }

    #[test]
    fn decomposition_with_extra_edges() {
        // K4: star at vertex 1 plus the triangle 0,2,3
        let k4 = generators::k4();
        let tree: EdgeSet = [EdgeId(0), EdgeId(3), EdgeId(4)].into_iter().collect();
        let circuit: EdgeSet = [EdgeId(1), EdgeId(2), EdgeId(5)].into_iter().collect();
        let s = decomposition_cdc(&k4, &tree, &[circuit.clone()], &EdgeSet::new()).unwrap();
        assert_eq!(s.prescribed_cycle(), circuit);

        // prism: tree 3-4-5 with the matching, triangle 0,1,2, extra edge 5-3
        let g = MultiGraph::from_edges(6, &[(0, 1), (1, 2), (2, 0), (3, 4), (4, 5), (5, 3), (0, 3), (1, 4), (2, 5)]);
        let tree: EdgeSet = [3, 4, 6, 7, 8].into_iter().map(EdgeId).collect();
        let circuit: EdgeSet = [0, 1, 2].into_iter().map(EdgeId).collect();
        let s = decomposition_cdc(&g, &tree, &[circuit.clone()], &[EdgeId(5)].into_iter().collect()).unwrap();
        assert!(verify_cdc(&g, &s).is_ok());
        assert_eq!(s.prescribed_cycle(), circuit);

        let (q, inst) = generators::q_triangles();
        // moving a tree edge into the extra set leaves a non-spanning tree
        let e = inst.tree.first().unwrap();
        let mut tree = inst.tree.clone();
        tree.remove(e);
        assert!(decomposition_cdc(&q, &tree, &inst.components, &[e].into_iter().collect()).is_err());
    }
}
