use std::collections::{BTreeMap, BTreeSet};
use std::sync::OnceLock;

use crate::budget::SearchBudget;
use crate::cycle_space::{circuit_through_edge, is_even_subgraph};
use crate::degeneracy::{endpoint_of, ContractionSequence, DegeneracyVerdict, Endpoint};
use crate::edge_set::EdgeSet;
use crate::error::{Error, Result, StageExt};
use crate::flow::{find_nz4f, flow_with_support, is_nowhere_zero, nz4f_via_degeneracy, FourFlow};
use crate::generators;
use crate::graph::{find_isomorphism, is_non_separating, MultiGraph, VertexId};
use crate::oracle::{find_kcdc_containing, verify_cdc};
use crate::surgery::{contract_edges, split_with_components, CutSplit};

use super::{ensure_verified, CdcCertificate};

/// `{x, y, x △ y}` for a nowhere-zero flow `(x, y)`.
pub fn three_cdc(g: &MultiGraph, fl: &FourFlow) -> Result<CdcCertificate> {
    if !is_nowhere_zero(g, fl)? {
        return Err(Error::NotNowhereZero);
    }
    let cert = CdcCertificate::new(None, [fl.x.clone(), fl.y.clone(), fl.x.symmetric_difference(&fl.y)])
        .with_step("three cycles from a four-flow");
    ensure_verified(g, &cert, &EdgeSet::new())?;
    Ok(cert)
}

/// `{c, x △ c, y △ c, x △ y △ c}` for a nowhere-zero flow `(x, y)` and an
/// even subgraph `c`. An edge with flow value `(a, b)` lies in
/// `[e∈c] + (a⊕[e∈c]) + (b⊕[e∈c]) + (a⊕b⊕[e∈c])` members, which is 2 for
/// every nonzero `(a, b)`.
pub fn four_cdc_containing(g: &MultiGraph, c: &EdgeSet, fl: &FourFlow) -> Result<CdcCertificate> {
    g.check_edges(c)?;
    if !is_even_subgraph(g, c) {
        return Err(Error::NotEven);
    }
    if !is_nowhere_zero(g, fl)? {
        return Err(Error::NotNowhereZero);
    }
    let xy = fl.x.symmetric_difference(&fl.y);
    let cert = CdcCertificate::new(
        Some(c.clone()),
        [fl.x.symmetric_difference(c), fl.y.symmetric_difference(c), xy.symmetric_difference(c)],
    )
    .with_step("four cycles around a prescribed cycle");
    ensure_verified(g, &cert, c)?;
    Ok(cert)
}

/// Five-member cover containing a non-separating cycle `c`, given a
/// nowhere-zero flow of `g / E(c)`.
///
/// The flow is lifted to `f` with `supp(f) ⊇ E − c`. Each unsupported edge
/// `e` closes a circuit `C_e` through `E − c`; `J1` is their symmetric
/// difference and `J2 = c △ J1 ⊆ supp(f)`. A four-member cover of
/// `g − (E − supp f)` containing `J2` then trades `J2` for `J1` and `c`.
pub fn five_cdc_from_flow(g: &MultiGraph, c: &EdgeSet, contracted_flow: &FourFlow) -> Result<CdcCertificate> {
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
    let f = flow_with_support(g, c, contracted_flow).stage("lifting the contracted flow")?;
    let support = f.support();
    let e0 = g.edge_set().difference(&support);
    if !e0.is_subset(c) {
        return Err(Error::Verification("lifted flow vanishes outside the cycle".into()));
    }
    let outside = g.edge_set().difference(c);
    let mut j1 = EdgeSet::new();
    for e in &e0 {
        let mut allowed = outside.clone();
        allowed.insert(e);
        j1.xor_with(&circuit_through_edge(g, e, &allowed).stage("closing a circuit through an unsupported edge")?);
    }
    if j1.intersection(c) != e0 {
        return Err(Error::Verification("J1 meets the cycle outside the unsupported edges".into()));
    }
    let j2 = c.symmetric_difference(&j1);
    if !j2.is_subset(&support) {
        return Err(Error::Verification("J2 leaves the support of the lifted flow".into()));
    }
    let reduced = g.delete_edges(&e0);
    let s1 = four_cdc_containing(&reduced, &j2, &f).stage("four-member cover of the supported subgraph")?;
    let mut cert = CdcCertificate::new(Some(c.clone()), s1.others().cloned().chain([j1]));
    cert.trace = s1.trace;
    let cert = cert.with_step("five-member cover via a lifted flow");
    ensure_verified(g, &cert, c)?;
    Ok(cert)
}

/// Five-member cover containing `c` when `g − m` has a nowhere-zero flow for
/// some `m ⊆ c`. The flow of `g − m`, restricted to `E − c`, is a flow of
/// `g / E(c)`.
pub fn five_cdc_with_removable_set(
    g: &MultiGraph,
    c: &EdgeSet,
    m: &EdgeSet,
    budget: &SearchBudget,
) -> Result<CdcCertificate> {
    g.check_edges(m)?;
    if !m.is_subset(c) {
        return Err(Error::precondition("removable set is not inside the cycle"));
    }
    let flow = find_nz4f(&g.delete_edges(m), budget)
        .stage("flow search on the graph minus the removable set")?
        .ok_or_else(|| Error::precondition("graph minus the removable set has no nowhere-zero four-flow"))?;
    let contracted = flow.restrict(&g.edge_set().difference(c));
    five_cdc_from_flow(g, c, &contracted)
}

/// Glues covers of the two sides of a 2- or 3-edge cut.
///
/// Every member meets the cut in 0 or 2 edges, so crossing members of the two
/// sides can be matched by the pair of cut edges they use. The prescribed
/// cycles are merged, and the remaining members are paired up with empty
/// padding on the shorter side.
pub fn glue_cdcs(split: &CutSplit, s1: &CdcCertificate, s2: &CdcCertificate) -> Result<CdcCertificate> {
    verify_cdc(&split.side1, s1).map_err(|v| Error::Verification(format!("first side: {v}")))?;
    verify_cdc(&split.side2, s2).map_err(|v| Error::Verification(format!("second side: {v}")))?;
    let c1 = s1.prescribed_cycle();
    let c2 = s2.prescribed_cycle();
    let touches = |g: &MultiGraph, f: &EdgeSet, hub: VertexId| {
        f.iter().any(|e| g.endpoints(e).is_ok_and(|(u, v)| u == hub || v == hub))
    };
    if touches(&split.side1, &c1, split.hub2) || touches(&split.side2, &c2, split.hub1) {
        return Err(Error::precondition("a prescribed cycle passes through a hub vertex"));
    }

    let classify = |s: &CdcCertificate| -> Result<(Vec<(EdgeSet, EdgeSet)>, Vec<EdgeSet>)> {
        let mut crossing = Vec::new();
        let mut rest = Vec::new();
        for m in s.others() {
            let meet = m.intersection(&split.cut);
            match meet.len() {
                0 => rest.push(m.clone()),
                2 => crossing.push((meet, m.clone())),
                n => return Err(Error::Pairing(format!("member meets the cut in {n} edges"))),
            }
        }
        Ok((crossing, rest))
    };
    let (cross1, rest1) = classify(s1)?;
    let (mut cross2, rest2) = classify(s2)?;
    if cross1.len() != cross2.len() {
        return Err(Error::Pairing(format!("{} crossing members against {}", cross1.len(), cross2.len())));
    }
    let mut members = Vec::new();
    for (pair, m) in cross1 {
        let pos = cross2
            .iter()
            .position(|(p, _)| *p == pair)
            .ok_or_else(|| Error::Pairing(format!("no partner for cut pair {pair:?}")))?;
        let (_, partner) = cross2.swap_remove(pos);
        members.push(m.union(&partner));
    }
    let n = rest1.len().max(rest2.len());
    for i in 0..n {
        let a = rest1.get(i).cloned().unwrap_or_default();
        let b = rest2.get(i).cloned().unwrap_or_default();
        members.push(a.union(&b));
    }
    let prescribed = c1.union(&c2);
    let mut cert = CdcCertificate::new(Some(prescribed.clone()), members);
    cert.trace = s1.trace.iter().chain(&s2.trace).cloned().collect();
    let cert = cert.with_step(format!("glued across a {}-edge cut", split.cut.len()));
    ensure_verified(&split.reassemble(), &cert, &prescribed)?;
    Ok(cert)
}

/// Supplies a cover of the endpoint graph of a contraction sequence.
pub type BaseCover<'a> = &'a dyn Fn(&MultiGraph) -> Result<CdcCertificate>;

/// A 5-member cover of a graph isomorphic to the Petersen graph.
///
/// The cover of the canonical Petersen graph is found once by exhaustive
/// search and transported along an isomorphism.
pub fn petersen_base_cdc(h: &MultiGraph) -> Result<CdcCertificate> {
    static BASE: OnceLock<(MultiGraph, CdcCertificate)> = OnceLock::new();
    let (p, base) = BASE.get_or_init(|| {
        let p = generators::petersen();
        let cert = find_kcdc_containing(&p, &EdgeSet::new(), 5, &SearchBudget::default())
            .expect("exhaustive search on the Petersen graph cannot fail")
            .expect("the Petersen graph has a 5-member cycle double cover");
        (p, cert)
    });
    let phi = find_isomorphism(p, h).ok_or_else(|| Error::precondition("graph is not the Petersen graph"))?;
    let mut edge_map = BTreeMap::new();
    let mut used = EdgeSet::new();
    for (e, u, v) in p.edges() {
        let (a, b) = (phi[&u], phi[&v]);
        let image = h
            .incident(a)
            .iter()
            .copied()
            .find(|&f| !used.contains(f) && h.other_end(f, a).is_ok_and(|w| w == b))
            .ok_or_else(|| Error::Verification("isomorphism does not carry edges".into()))?;
        used.insert(image);
        edge_map.insert(e, image);
    }
    let cert = base.map_members(|m| m.iter().map(|e| edge_map[&e]).collect()).with_step("Petersen base cover");
    ensure_verified(h, &cert, &EdgeSet::new())?;
    Ok(cert)
}

/// Cover containing `c` when `g / E(c)` contracts to the Petersen graph.
/// The result has six members.
pub fn girth_cdc_recursive(g: &MultiGraph, c: &EdgeSet, verdict: &DegeneracyVerdict) -> Result<CdcCertificate> {
    if verdict.kind != Endpoint::Petersen {
        return Err(Error::precondition("contraction does not end at the Petersen graph"));
    }
    girth_cdc_recursive_with_base(g, c, &verdict.sequence, &petersen_base_cdc)
}

/// Cover containing `c` when `seq` contracts `g / E(c)` to a graph `H` with
/// maximum degree at most three, given a cover of `H` from `base`.
///
/// Vertices of `H` standing for more than one piece of `g` ("blobs") are
/// peeled one at a time: contracting the blob gives a smaller instance of
/// the same problem, contracting everything else gives a graph whose blob
/// side contracts to a single vertex through circuits of length at most
/// four, and the two covers are glued across the cut around the blob.
/// With a `k`-member base cover the result has `max(k + 1, 5)` members.
pub fn girth_cdc_recursive_with_base(
    g: &MultiGraph,
    c: &EdgeSet,
    seq: &ContractionSequence,
    base: BaseCover<'_>,
) -> Result<CdcCertificate> {
    g.check_edges(c)?;
    if !is_even_subgraph(g, c) {
        return Err(Error::NotEven);
    }
    if !is_non_separating(g, c)? {
        return Err(Error::precondition("cycle separates the graph"));
    }
    let contraction = contract_edges(g, c)?;
    if seq.start() != &contraction.graph {
        return Err(Error::InvalidSequence("sequence does not start at the contracted graph".into()));
    }
    let blobs: BTreeMap<VertexId, BTreeSet<VertexId>> = seq
        .provenance()
        .into_iter()
        .map(|(h, starts)| (h, starts.iter().flat_map(|s| contraction.provenance[s].iter().copied()).collect()))
        .collect();
    let circuits: Vec<EdgeSet> = seq.stages.iter().map(|s| s.circuit.clone()).collect();
    let peel = Peeler { circuits: &circuits, base };
    let cert = peel.solve(g, c, blobs)?;
    ensure_verified(g, &cert, c)?;
    Ok(cert)
}

struct Peeler<'a> {
    circuits: &'a [EdgeSet],
    base: BaseCover<'a>,
}

fn internal_edges(g: &MultiGraph, w: &BTreeSet<VertexId>) -> EdgeSet {
    g.edges().filter(|(_, u, v)| w.contains(u) && w.contains(v)).map(|(e, _, _)| e).collect()
}

impl Peeler<'_> {
    fn solve(&self, g: &MultiGraph, c: &EdgeSet, blobs: BTreeMap<VertexId, BTreeSet<VertexId>>) -> Result<CdcCertificate> {
        let big = blobs.iter().find(|(_, w)| !internal_edges(g, w).is_empty()).map(|(h, w)| (*h, w.clone()));
        let Some((h, w)) = big else {
            if !c.is_empty() {
                return Err(Error::Verification("cycle edges survive after every blob is contracted".into()));
            }
            return (self.base)(g).stage("cover of the contraction endpoint");
        };
        let internal = internal_edges(g, &w);
        let cut: EdgeSet = g
            .edges()
            .filter(|(_, u, v)| w.contains(u) != w.contains(v))
            .map(|(e, _, _)| e)
            .collect();
        let outside: BTreeSet<VertexId> = g.vertices().filter(|v| !w.contains(v)).collect();
        let split = split_with_components(g, &cut, outside, w.clone())?;
        if split.side2.vertex_count() != w.len() + 1 {
            return Err(Error::InvalidSequence("the graph outside a blob is disconnected".into()));
        }

        let c_outer = c.difference(&internal);
        let mut outer_blobs = blobs;
        outer_blobs.insert(h, BTreeSet::from([split.hub2]));
        let s_outer = self.solve(&split.side1, &c_outer, outer_blobs)?;

        let c_inner = c.intersection(&internal);
        let s_inner = self.blob_cover(&split.side2, &c_inner, &internal).stage("cover of a blob side")?;
        glue_cdcs(&split, &s_outer, &s_inner)
    }

    /// Five-member cover of the blob side. Its contraction reaches K1 by
    /// replaying the blob's own circuits and then folding the cut edges.
    fn blob_cover(&self, side: &MultiGraph, c: &EdgeSet, internal: &EdgeSet) -> Result<CdcCertificate> {
        let contracted = contract_edges(side, c)?;
        let own: Vec<EdgeSet> = self.circuits.iter().filter(|k| k.is_subset(internal)).cloned().collect();
        let mut seq = ContractionSequence::replay(&contracted.graph, &own, 4)?;
        seq.complete_greedily(4);
        if endpoint_of(seq.end()) != Endpoint::K1 {
            return Err(Error::InvalidSequence("blob side does not contract to K1".into()));
        }
        let flow = nz4f_via_degeneracy(&contracted.graph, &seq)?;
        five_cdc_from_flow(side, c, &flow)
    }
}
