//! Z2×Z2-flows stored as pairs of even subgraphs.
//!
//! The value of edge `e` is the pair `(e ∈ x, e ∈ y)`. Conservation over the
//! Klein group is exactly "both `x` and `y` are even", and the flow is
//! nowhere-zero iff `x ∪ y` is the whole edge set.

use std::collections::BTreeMap;
use std::ops::ControlFlow;

use serde::{Deserialize, Serialize};

use crate::budget::{Meter, SearchBudget};
use crate::cycle_space::{basis, is_even_subgraph, CycleBasis};
use crate::degeneracy::ContractionSequence;
use crate::edge_set::EdgeSet;
use crate::error::{Error, Result};
use crate::graph::{EdgeId, MultiGraph, VertexId};
use crate::surgery::contract_edges;

#[derive(Clone, Debug, Default, PartialEq, Eq, Serialize, Deserialize)]
pub struct FourFlow {
    pub x: EdgeSet,
    pub y: EdgeSet,
}

/// Outcome of [`verify_flow`].
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct FlowReport {
    /// Both components are even subgraphs.
    pub ok: bool,
    pub support: EdgeSet,
    pub nowhere_zero: bool,
}

impl FourFlow {
    pub fn new(x: EdgeSet, y: EdgeSet) -> Self {
        FourFlow { x, y }
    }

    pub fn support(&self) -> EdgeSet {
        self.x.union(&self.y)
    }

    /// Group element on `e` encoded as `x-bit | y-bit << 1`.
    #[inline]
    pub fn value(&self, e: EdgeId) -> u8 {
        self.x.contains(e) as u8 | (self.y.contains(e) as u8) << 1
    }

    pub fn set_value(&mut self, e: EdgeId, value: u8) {
        if value & 1 != 0 { self.x.insert(e) } else { self.x.remove(e) };
        if value & 2 != 0 { self.y.insert(e) } else { self.y.remove(e) };
    }

    /// Keeps only the values on `keep`. Restricting to the surviving edges
    /// of a contraction pushes a flow down to the contracted graph.
    pub fn restrict(&self, keep: &EdgeSet) -> FourFlow {
        FourFlow { x: self.x.intersection(keep), y: self.y.intersection(keep) }
    }
}

/// Checks conservation and reports the support.
pub fn verify_flow(g: &MultiGraph, fl: &FourFlow) -> Result<FlowReport> {
    g.check_edges(&fl.x)?;
    g.check_edges(&fl.y)?;
    let support = fl.support();
    let ok = is_even_subgraph(g, &fl.x) && is_even_subgraph(g, &fl.y);
    let nowhere_zero = support.len() == g.edge_count();
    Ok(FlowReport { ok, support, nowhere_zero })
}

pub(crate) fn is_nowhere_zero(g: &MultiGraph, fl: &FourFlow) -> Result<bool> {
    let r = verify_flow(g, fl)?;
    Ok(r.ok && r.nowhere_zero)
}

/// Cycle-space dimension up to which [`find_nz4f`] enumerates `(x, y)`
/// pairs directly; above it the inner search is done by linear algebra.
pub const PAIR_ENUMERATION_DIMENSION: usize = 10;

/// Exhaustive search for a nowhere-zero four-flow.
///
/// `Ok(None)` is definitive: the whole space of even-subgraph pairs was
/// covered. Up to [`PAIR_ENUMERATION_DIMENSION`] every pair is visited in
/// Gray-code order; beyond it the outer subgraph `x` is enumerated and the
/// existence of a matching `y ⊇ E − x` is decided by GF(2) elimination.
pub fn find_nz4f(g: &MultiGraph, budget: &SearchBudget) -> Result<Option<FourFlow>> {
    let b = basis(g);
    budget.check_dimension(b.dimension())?;
    if b.dimension() <= PAIR_ENUMERATION_DIMENSION {
        find_by_pairs(g, &b, budget)
    } else {
        let mut found = None;
        for_each_nowhere_zero_flow(g, budget, |fl| {
            found = Some(fl);
            ControlFlow::Break(())
        })?;
        Ok(found)
    }
}

fn find_by_pairs(g: &MultiGraph, b: &CycleBasis, budget: &SearchBudget) -> Result<Option<FourFlow>> {
    let all = g.edge_set();
    let total = 1u64 << b.dimension();
    let mut meter = budget.meter();
    let mut x = EdgeSet::new();
    for i in 0..total {
        if i > 0 {
            x.xor_with(&b.fundamental[i.trailing_zeros() as usize]);
        }
        let mut y = EdgeSet::new();
        for j in 0..total {
            if j > 0 {
                y.xor_with(&b.fundamental[j.trailing_zeros() as usize]);
            }
            meter.tick()?;
            if x.union(&y) == all {
                return Ok(Some(FourFlow::new(x, y)));
            }
        }
    }
    Ok(None)
}

/// Linear system over GF(2) in at most 63 unknowns, rows as bit masks.
#[derive(Default)]
struct Gf2System {
    // pivot column -> (row mask, rhs); kept fully reduced
    pivots: BTreeMap<u32, (u64, bool)>,
    inconsistent: bool,
}

impl Gf2System {
    fn add(&mut self, mut row: u64, mut rhs: bool) {
        if self.inconsistent {
            return;
        }
        for (&col, &(prow, prhs)) in &self.pivots {
            if row >> col & 1 == 1 {
                row ^= prow;
                rhs ^= prhs;
            }
        }
        if row == 0 {
            if rhs {
                self.inconsistent = true;
            }
            return;
        }
        let col = row.trailing_zeros();
        for (prow, prhs) in self.pivots.values_mut() {
            if *prow >> col & 1 == 1 {
                *prow ^= row;
                *prhs ^= rhs;
            }
        }
        self.pivots.insert(col, (row, rhs));
    }

    /// A particular solution (free variables zero) and a null-space basis.
    fn solutions(&self, unknowns: usize) -> Option<(u64, Vec<u64>)> {
        if self.inconsistent {
            return None;
        }
        let mut particular = 0u64;
        for (&col, &(_, rhs)) in &self.pivots {
            if rhs {
                particular |= 1 << col;
            }
        }
        let mut null = Vec::new();
        for free in 0..unknowns as u32 {
            if self.pivots.contains_key(&free) {
                continue;
            }
            let mut v = 1u64 << free;
            for (&col, &(row, _)) in &self.pivots {
                if row >> free & 1 == 1 {
                    v |= 1 << col;
                }
            }
            null.push(v);
        }
        Some((particular, null))
    }
}

fn combine(b: &CycleBasis, coeffs: u64) -> EdgeSet {
    let mut out = EdgeSet::new();
    let mut c = coeffs;
    while c != 0 {
        out.xor_with(&b.fundamental[c.trailing_zeros() as usize]);
        c &= c - 1;
    }
    out
}

/// Visits every nowhere-zero four-flow of `g` in a fixed order: `x` in
/// Gray-code order over the cycle basis, then each `y` completing it.
/// Stops early when the visitor breaks.
pub fn for_each_nowhere_zero_flow<F>(g: &MultiGraph, budget: &SearchBudget, mut visit: F) -> Result<()>
where
    F: FnMut(FourFlow) -> ControlFlow<()>,
{
    let b = basis(g);
    let d = b.dimension();
    budget.check_dimension(d)?;
    // coefficient row of each edge: which fundamental circuits contain it
    let rows: Vec<(EdgeId, u64)> = g
        .edge_ids()
        .map(|e| {
            let mask = b
                .fundamental
                .iter()
                .enumerate()
                .filter(|(_, f)| f.contains(e))
                .fold(0u64, |m, (i, _)| m | 1 << i);
            (e, mask)
        })
        .collect();
    let mut meter = budget.meter();
    let mut x = EdgeSet::new();
    for i in 0..(1u64 << d) {
        if i > 0 {
            x.xor_with(&b.fundamental[i.trailing_zeros() as usize]);
        }
        meter.tick()?;
        let mut sys = Gf2System::default();
        for &(e, mask) in &rows {
            if !x.contains(e) {
                sys.add(mask, true);
            }
        }
        let Some((particular, null)) = sys.solutions(d) else { continue };
        let mut coeffs = particular;
        for j in 0..(1u64 << null.len()) {
            if j > 0 {
                coeffs ^= null[j.trailing_zeros() as usize];
                meter.tick()?;
            }
            if visit(FourFlow::new(x.clone(), combine(&b, coeffs))).is_break() {
                return Ok(());
            }
        }
    }
    Ok(())
}

/// Lifts a nowhere-zero flow of `g / E(c)` to a flow of `g` whose support
/// contains every edge outside `c`.
///
/// Values on surviving edges are pulled back unchanged. The resulting vertex
/// imbalances cancel within each component of `c`, and are routed to the
/// component root along a breadth-first spanning tree, leaves first. Only
/// edges of `c` are changed.
pub fn flow_with_support(g: &MultiGraph, c: &EdgeSet, contracted: &FourFlow) -> Result<FourFlow> {
    g.check_edges(c)?;
    let contraction = contract_edges(g, c)?;
    if !is_nowhere_zero(&contraction.graph, contracted)? {
        return Err(Error::NotNowhereZero);
    }
    let mut flow = contracted.restrict(&contraction.surviving);
    let mut imbalance = imbalances(g, &flow, c);

    for comp in g.components_of(c) {
        if comp.len() == 1 {
            continue;
        }
        let root = *comp.first().unwrap();
        let mut order = vec![root];
        let mut parent: BTreeMap<VertexId, EdgeId> = BTreeMap::new();
        let mut k = 0;
        while k < order.len() {
            let v = order[k];
            k += 1;
            let mut inc: Vec<EdgeId> = g.incident(v).iter().copied().filter(|&e| c.contains(e)).collect();
            inc.sort();
            for e in inc {
                let w = g.other_end(e, v)?;
                if w != root && !parent.contains_key(&w) {
                    parent.insert(w, e);
                    order.push(w);
                }
            }
        }
        for &v in order.iter().rev() {
            let Some(&pe) = parent.get(&v) else { continue };
            let b = imbalance.remove(&v).unwrap_or(0);
            if b != 0 {
                flow.set_value(pe, b);
                let p = g.other_end(pe, v)?;
                *imbalance.entry(p).or_insert(0) ^= b;
            }
        }
        if imbalance.get(&root).copied().unwrap_or(0) != 0 {
            return Err(Error::NotAFlow);
        }
    }
    debug_assert!(verify_flow(g, &flow)?.ok);
    Ok(flow)
}

/// Z2×Z2 imbalance at every vertex from the edges outside `skip`.
fn imbalances(g: &MultiGraph, flow: &FourFlow, skip: &EdgeSet) -> BTreeMap<VertexId, u8> {
    let mut imb = BTreeMap::new();
    for (e, u, v) in g.edges() {
        if skip.contains(e) || u == v {
            continue;
        }
        let val = flow.value(e);
        *imb.entry(u).or_insert(0) ^= val;
        *imb.entry(v).or_insert(0) ^= val;
    }
    imb
}

/// Walks a circuit: vertices `v_1..v_m` and edges `e_1..e_m` with `e_i`
/// joining `v_i` and `v_{i+1}` (indices mod m).
pub(crate) fn circuit_walk(g: &MultiGraph, circuit: &EdgeSet) -> Result<(Vec<VertexId>, Vec<EdgeId>)> {
    g.check_edges(circuit)?;
    let not_circuit = || Error::precondition("edge set is not a circuit");
    let first = circuit.first().ok_or_else(not_circuit)?;
    let (start, mut cur) = g.endpoints(first)?;
    let mut verts = vec![start];
    let mut edges = vec![first];
    let mut last = first;
    while cur != start {
        verts.push(cur);
        let next: Vec<EdgeId> =
            g.incident(cur).iter().copied().filter(|&e| e != last && circuit.contains(e)).collect();
        if next.len() != 1 {
            return Err(not_circuit());
        }
        last = next[0];
        edges.push(last);
        cur = g.other_end(last, cur)?;
    }
    let distinct: std::collections::BTreeSet<_> = verts.iter().collect();
    if edges.len() != circuit.len() || distinct.len() != verts.len() {
        return Err(not_circuit());
    }
    Ok((verts, edges))
}

/// Candidate order for the free circuit value; `(1,1)` first so a free loop
/// lands in both supports.
const LIFT_ORDER: [u8; 4] = [3, 1, 2, 0];

/// Extends a nowhere-zero flow of `g / E(circuit)` across a circuit of
/// length at most four.
///
/// Around the circuit `e_i = e_{i-1} + b_i` where `b_i` is the imbalance at
/// `v_i`, so the circuit values form a one-parameter family. The first of the
/// four members with no zero value is returned; `None` when all four vanish
/// somewhere, which can only happen on a 4-circuit.
pub fn lift_through_circuit(g: &MultiGraph, circuit: &EdgeSet, parent: &FourFlow) -> Result<Option<FourFlow>> {
    let (verts, edges) = circuit_walk(g, circuit)?;
    if edges.len() > 4 {
        return Err(Error::precondition(format!("circuit of length {} exceeds four", edges.len())));
    }
    let contraction = contract_edges(g, circuit)?;
    if !is_nowhere_zero(&contraction.graph, parent)? {
        return Err(Error::NotNowhereZero);
    }
    let base = parent.restrict(&contraction.surviving);
    let imb = imbalances(g, &base, circuit);
    // Conservation at verts[i] gives edges[i] = edges[i-1] + b(verts[i]);
    // anchoring the last edge at t makes edges[i] = t + (b_0 + .. + b_i).
    let m = edges.len();
    let mut offsets = vec![0u8; m];
    let mut acc = 0u8;
    for i in 0..m {
        acc ^= imb.get(&verts[i]).copied().unwrap_or(0);
        offsets[i] = acc;
    }
    if offsets[m - 1] != 0 {
        return Err(Error::NotAFlow);
    }
    for t in LIFT_ORDER {
        if offsets.iter().all(|&o| o ^ t != 0) {
            let mut flow = base.clone();
            for (i, &e) in edges.iter().enumerate() {
                flow.set_value(e, offsets[i] ^ t);
            }
            return Ok(Some(flow));
        }
    }
    Ok(None)
}

/// Nowhere-zero four-flow of a graph that contracts to K1 through circuits
/// of length at most four.
///
/// The sequence is walked backwards from the single vertex, lifting across
/// each contracted circuit. When a 4-circuit admits no local lift the flows
/// of the parent stage are re-enumerated until one lifts.
pub fn nz4f_via_degeneracy(g: &MultiGraph, seq: &ContractionSequence) -> Result<FourFlow> {
    nz4f_via_degeneracy_with_budget(g, seq, &SearchBudget::default())
}

pub fn nz4f_via_degeneracy_with_budget(
    g: &MultiGraph,
    seq: &ContractionSequence,
    budget: &SearchBudget,
) -> Result<FourFlow> {
    if seq.start() != g {
        return Err(Error::InvalidSequence("sequence does not start at the given graph".into()));
    }
    let end = seq.end();
    if end.vertex_count() != 1 || end.edge_count() != 0 {
        return Err(Error::InvalidSequence("sequence does not end at K1".into()));
    }
    let mut flow = FourFlow::default();
    for i in (0..seq.stages.len()).rev() {
        let host = &seq.graphs[i];
        let stage = &seq.stages[i];
        if stage.length > 4 {
            return Err(Error::InvalidSequence(format!("stage {i} contracts a circuit of length {}", stage.length)));
        }
        if let Some(lifted) = lift_through_circuit(host, &stage.circuit, &flow)? {
            flow = lifted;
            continue;
        }
        let mut found = None;
        let mut meter: Meter = budget.meter();
        let mut failure = None;
        for_each_nowhere_zero_flow(&seq.graphs[i + 1], budget, |candidate| {
            if let Err(e) = meter.tick() {
                failure = Some(e);
                return ControlFlow::Break(());
            }
            match lift_through_circuit(host, &stage.circuit, &candidate) {
                Ok(Some(lifted)) => {
                    found = Some(lifted);
                    ControlFlow::Break(())
                }
                Ok(None) => ControlFlow::Continue(()),
                Err(e) => {
                    failure = Some(e);
                    ControlFlow::Break(())
                }
            }
        })?;
        if let Some(e) = failure {
            return Err(Error::Stage { stage: "flow backtracking", source: Box::new(e) });
        }
        flow = found.ok_or_else(|| {
            Error::InvalidSequence(format!("no parent flow lifts across stage {i}"))
        })?;
    }
    debug_assert!(is_nowhere_zero(g, &flow)?);
    Ok(flow)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::degeneracy::ContractionSequence;
    use crate::generators;
    use crate::graph::MultiGraph;

    fn ids(v: &[u32]) -> EdgeSet {
        v.iter().map(|&i| EdgeId(i)).collect()
    }

    /// Independent oracle: tries all 4^m edge labelings.
    fn brute_force_nz4f(g: &MultiGraph) -> bool {
        let edges: Vec<(EdgeId, VertexId, VertexId)> = g.edges().collect();
        let m = edges.len();
        'outer: for code in 0u64..(1 << (2 * m)) {
            let mut imb: BTreeMap<VertexId, u8> = BTreeMap::new();
            for (i, &(_, u, v)) in edges.iter().enumerate() {
                let val = (code >> (2 * i) & 3) as u8;
                if val == 0 {
                    continue 'outer;
                }
                *imb.entry(u).or_insert(0) ^= val;
                *imb.entry(v).or_insert(0) ^= val;
            }
            if imb.values().all(|&b| b == 0) {
                return true;
            }
        }
        false
    }

    #[test]
    fn verify_examples() {
        let theta = generators::theta();
        let r = verify_flow(&theta, &FourFlow::new(ids(&[0, 1]), ids(&[1, 2]))).unwrap();
        assert!(r.ok && r.nowhere_zero);
        let k4 = generators::k4();
        let tri = ids(&[0, 1, 3]);
        let r = verify_flow(&k4, &FourFlow::new(tri.clone(), tri.clone())).unwrap();
        assert!(r.ok && !r.nowhere_zero);
        assert_eq!(r.support, tri);
        assert!(!verify_flow(&k4, &FourFlow::new(ids(&[0]), EdgeSet::new())).unwrap().ok);
        assert_eq!(verify_flow(&k4, &FourFlow::new(ids(&[17]), EdgeSet::new())).err(), Some(Error::UnknownEdge(EdgeId(17))));
    }

    #[test]
    fn petersen_has_no_flow_and_k4_does() {
        assert_eq!(find_nz4f(&generators::petersen(), &SearchBudget::default()).unwrap(), None);
        let k4 = generators::k4();
        let fl = find_nz4f(&k4, &SearchBudget::default()).unwrap().unwrap();
        assert!(is_nowhere_zero(&k4, &fl).unwrap());
        let c = generators::circuit(6);
        let fl = find_nz4f(&c, &SearchBudget::default()).unwrap().unwrap();
        assert!(is_nowhere_zero(&c, &fl).unwrap());
    }

    #[test]
    fn budget_is_not_a_negative() {
        let err = find_nz4f(&generators::petersen(), &SearchBudget::nodes(100)).unwrap_err();
        assert!(err.is_budget());
    }

    #[test]
    fn pair_and_elimination_routes_agree() {
        use rand::{Rng, SeedableRng};
        let mut rng = rand_chacha::ChaCha8Rng::seed_from_u64(7);
        for _ in 0..60 {
            let n = rng.gen_range(2..7u32);
            let m = rng.gen_range(1..11);
            let es: Vec<(u32, u32)> = (0..m).map(|_| (rng.gen_range(0..n), rng.gen_range(0..n))).collect();
            let g = MultiGraph::from_edges(n, &es);
            let b = basis(&g);
            let pairs = find_by_pairs(&g, &b, &SearchBudget::default()).unwrap().is_some();
            let mut elim = false;
            for_each_nowhere_zero_flow(&g, &SearchBudget::default(), |fl| {
                assert!(is_nowhere_zero(&g, &fl).unwrap());
                elim = true;
                ControlFlow::Break(())
            })
            .unwrap();
            assert_eq!(pairs, elim, "{es:?}");
            if m <= 8 {
                assert_eq!(pairs, brute_force_nz4f(&g), "{es:?}");
            }
        }
    }

    #[test]
    fn enumeration_counts_match_brute_force() {
        // K4 nowhere-zero Z2×Z2 flows: count by brute force, compare with the enumerator
        let k4 = generators::k4();
        let mut count = 0;
        for_each_nowhere_zero_flow(&k4, &SearchBudget::default(), |_| {
            count += 1;
            ControlFlow::Continue(())
        })
        .unwrap();
        let edges: Vec<_> = k4.edges().collect();
        let mut brute = 0;
        'outer: for code in 0u32..(1 << 12) {
            let mut imb = [0u8; 4];
            for (i, &(_, u, v)) in edges.iter().enumerate() {
                let val = (code >> (2 * i) & 3) as u8;
                if val == 0 {
                    continue 'outer;
                }
                imb[u.index()] ^= val;
                imb[v.index()] ^= val;
            }
            if imb.iter().all(|&b| b == 0) {
                brute += 1;
            }
        }
        assert_eq!(count, brute);
        assert_eq!(brute, 6);
    }

    #[test]
    fn support_flow_with_empty_c_is_unchanged() {
        let theta = generators::theta();
        let fl = FourFlow::new(ids(&[0, 1]), ids(&[1, 2]));
        assert_eq!(flow_with_support(&theta, &EdgeSet::new(), &fl).unwrap(), fl);
    }

    #[test]
    fn support_flow_on_theta() {
        // contracting {e0, e1} leaves a single vertex with loop e2
        let theta = generators::theta();
        let contracted = FourFlow::new(ids(&[2]), ids(&[2]));
        let fl = flow_with_support(&theta, &ids(&[0, 1]), &contracted).unwrap();
        let r = verify_flow(&theta, &fl).unwrap();
        assert!(r.ok);
        assert!(r.support.contains(EdgeId(2)));
        // hand check: e2 carries (1,1) into each vertex, so the tree edge e0 must carry (1,1)
        assert_eq!(fl.value(EdgeId(0)), 3);
        assert_eq!(fl.value(EdgeId(1)), 0);
    }

    #[test]
    fn support_flow_rejects_zero_values() {
        let theta = generators::theta();
        let bad = FourFlow::new(EdgeSet::new(), EdgeSet::new());
        assert_eq!(flow_with_support(&theta, &ids(&[0, 1]), &bad).err(), Some(Error::NotNowhereZero));
    }

    #[test]
    fn lift_loop_and_digon() {
        let mut g = MultiGraph::from_edges(1, &[]);
        let l = g.add_edge(VertexId(0), VertexId(0)).unwrap();
        let lifted = lift_through_circuit(&g, &[l].into_iter().collect(), &FourFlow::default()).unwrap().unwrap();
        assert_eq!(lifted.value(l), 3);

        // digon hanging between a theta: both endpoints balanced by symmetric edges
        let g = MultiGraph::from_edges(2, &[(0, 1), (0, 1)]);
        let lifted = lift_through_circuit(&g, &g.edge_set(), &FourFlow::default()).unwrap().unwrap();
        assert_eq!(lifted.value(EdgeId(0)), lifted.value(EdgeId(1)));
        assert_ne!(lifted.value(EdgeId(0)), 0);
    }

    /// Brute-force witness: a 4-circuit whose imbalances make every member of
    /// the lifting family vanish somewhere.
    #[test]
    fn four_circuit_lift_can_fail() {
        // 4-circuit a,b,c,d plus hub h joined to all four; K1-side flow on the
        // contracted graph: the four spokes become parallel edges between v_C and h.
        let g = MultiGraph::from_edges(5, &[(0, 1), (1, 2), (2, 3), (3, 0), (0, 4), (1, 4), (2, 4), (3, 4)]);
        let circuit = ids(&[0, 1, 2, 3]);
        let contracted = contract_edges(&g, &circuit).unwrap();
        let mut failing = 0;
        let mut lifting = 0;
        for_each_nowhere_zero_flow(&contracted.graph, &SearchBudget::default(), |fl| {
            match lift_through_circuit(&g, &circuit, &fl).unwrap() {
                Some(l) => {
                    assert!(is_nowhere_zero(&g, &l).unwrap());
                    lifting += 1;
                }
                None => failing += 1,
            }
            ControlFlow::Continue(())
        })
        .unwrap();
        assert!(failing > 0, "expected a non-liftable parent flow");
        assert!(lifting > 0);
    }

    #[test]
    fn degeneracy_lift_on_k4() {
        let k4 = generators::k4();
        // triangle 0,1,3 (vertices 0,1,2), then the triangle of parallel edges... via replay
        let seq = ContractionSequence::greedy(&k4, &k4.vertex_set(), 4);
        assert_eq!(seq.end().vertex_count(), 1);
        let fl = nz4f_via_degeneracy(&k4, &seq).unwrap();
        assert!(is_nowhere_zero(&k4, &fl).unwrap());
    }

    #[test]
    fn degeneracy_lift_on_short_circuit() {
        for n in 1..=4 {
            let c = generators::circuit(n);
            let seq = ContractionSequence::replay(&c, &[c.edge_set()], 4).unwrap();
            let fl = nz4f_via_degeneracy(&c, &seq).unwrap();
            assert_eq!(fl.support(), c.edge_set());
        }
    }

    #[test]
    fn degeneracy_lift_recovers_from_failed_four_circuit() {
        let g = MultiGraph::from_edges(5, &[(0, 1), (1, 2), (2, 3), (3, 0), (0, 4), (1, 4), (2, 4), (3, 4)]);
        let seq = ContractionSequence::greedy(&g, &g.vertex_set(), 4);
        let fl = nz4f_via_degeneracy(&g, &seq).unwrap();
        assert!(is_nowhere_zero(&g, &fl).unwrap());
    }

    #[test]
    fn contraction_preserves_flows() {
        let k4 = generators::k4();
        let fl = find_nz4f(&k4, &SearchBudget::default()).unwrap().unwrap();
        for f in [ids(&[0]), ids(&[0, 1, 3]), ids(&[2, 5])] {
            let c = contract_edges(&k4, &f).unwrap();
            assert!(verify_flow(&c.graph, &fl.restrict(&c.surviving)).unwrap().ok);
        }
    }
}
