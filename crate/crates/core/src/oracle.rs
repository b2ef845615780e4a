//! Ground truth: certificate verification and exhaustive searches.

use std::fmt;

use crate::budget::SearchBudget;
use crate::cdc::{CdcCertificate, HistInstance};
use crate::cycle_space::{basis, is_even_subgraph, GrayCode};
use crate::edge_set::EdgeSet;
use crate::error::{Error, Result};
use crate::graph::{EdgeId, MultiGraph, VertexId};

/// First defect found by [`verify_cdc`].
#[derive(Clone, Debug, PartialEq, Eq)]
pub enum CdcViolation {
    ForeignEdge { member: usize, edge: EdgeId },
    OddMember { member: usize, vertex: VertexId },
    Coverage { edge: EdgeId, count: usize },
    PrescribedOutOfRange(usize),
}

impl fmt::Display for CdcViolation {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            CdcViolation::ForeignEdge { member, edge } => write!(f, "member {member} uses unknown edge {edge}"),
            CdcViolation::OddMember { member, vertex } => write!(f, "member {member} has odd degree at {vertex}"),
            CdcViolation::Coverage { edge, count } => write!(f, "edge {edge} is covered {count} times"),
            CdcViolation::PrescribedOutOfRange(i) => write!(f, "prescribed index {i} is out of range"),
        }
    }
}

/// Checks that every member is an even subgraph of `g` and every edge lies
/// in exactly two members.
pub fn verify_cdc(g: &MultiGraph, s: &CdcCertificate) -> std::result::Result<(), CdcViolation> {
    if let Some(i) = s.prescribed.filter(|&i| i >= s.members.len()) {
        return Err(CdcViolation::PrescribedOutOfRange(i));
    }
    for (i, m) in s.members.iter().enumerate() {
        if let Some(edge) = m.iter().find(|&e| !g.has_edge(e)) {
            return Err(CdcViolation::ForeignEdge { member: i, edge });
        }
        for v in g.vertices() {
            if g.degree_in(v, m) % 2 == 1 {
                return Err(CdcViolation::OddMember { member: i, vertex: v });
            }
        }
    }
    for e in g.edge_ids() {
        let count = s.members.iter().filter(|m| m.contains(e)).count();
        if count != 2 {
            return Err(CdcViolation::Coverage { edge: e, count });
        }
    }
    Ok(())
}

/// Nonempty even subgraphs of `g` in Gray-code order.
fn nonempty_even_subgraphs(g: &MultiGraph, budget: &SearchBudget) -> Result<Vec<EdgeSet>> {
    let b = basis(g);
    budget.check_dimension(b.dimension())?;
    Ok(GrayCode::new(&b.fundamental).filter(|f| !f.is_empty()).collect())
}

/// Exhaustive search for a cover with at most `k` members containing `c`
/// (with `c = ∅`, any cover with at most `k` members).
///
/// Members are chosen so that the least edge still needing coverage is
/// always covered next; a candidate fits when it only uses edges with spare
/// coverage. `Ok(None)` means the whole tree was searched.
pub fn find_kcdc_containing(
    g: &MultiGraph,
    c: &EdgeSet,
    k: usize,
    budget: &SearchBudget,
) -> Result<Option<CdcCertificate>> {
    g.check_edges(c)?;
    if !is_even_subgraph(g, c) {
        return Err(Error::NotEven);
    }
    let slots = if c.is_empty() { k } else { k.saturating_sub(1) };
    if k == 0 {
        return Ok((g.edge_count() == 0).then(CdcCertificate::default));
    }
    let candidates = nonempty_even_subgraphs(g, budget)?;
    // candidates containing each edge, in candidate order
    let max_id = g.max_edge_id() as usize;
    let mut by_edge: Vec<Vec<usize>> = vec![Vec::new(); max_id];
    for (i, f) in candidates.iter().enumerate() {
        for e in f {
            by_edge[e.index()].push(i);
        }
    }
    let all = g.edge_set();
    // need1: edges covered fewer than two times; need2: edges not covered yet
    let need1 = all.clone();
    let need2 = all.difference(c);
    let mut search = KcdcSearch { candidates: &candidates, by_edge: &by_edge, chosen: Vec::new(), meter: budget.meter() };
    if search.run(need1, need2, slots, None)? {
        let members = search.chosen.iter().map(|&i| candidates[i].clone());
        let cert = CdcCertificate::new(Some(c.clone()), members).with_step("exhaustive search");
        Ok(Some(cert))
    } else {
        Ok(None)
    }
}

struct KcdcSearch<'a> {
    candidates: &'a [EdgeSet],
    by_edge: &'a [Vec<usize>],
    chosen: Vec<usize>,
    meter: crate::budget::Meter,
}

impl KcdcSearch<'_> {
    /// `last` is the branching edge and candidate of the previous level, so
    /// repeated branching on one edge picks candidates in nondecreasing order.
    fn run(&mut self, need1: EdgeSet, need2: EdgeSet, slots: usize, last: Option<(EdgeId, usize)>) -> Result<bool> {
        let Some(e) = need1.first() else { return Ok(true) };
        if slots == 0 {
            return Ok(false);
        }
        // an uncovered edge needs two more members
        if slots == 1 && !need2.is_empty() {
            return Ok(false);
        }
        self.meter.tick()?;
        let floor = match last {
            Some((le, li)) if le == e => li,
            _ => 0,
        };
        for &i in &self.by_edge[e.index()] {
            if i < floor {
                continue;
            }
            let f = &self.candidates[i];
            if !f.is_subset(&need1) {
                continue;
            }
            // edges in f that were already covered once are now done
            let mut n1 = need1.clone();
            n1.difference_with(&f.difference(&need2));
            let n2 = need2.difference(f);
            self.chosen.push(i);
            if self.run(n1, n2, slots - 1, Some((e, i)))? {
                return Ok(true);
            }
            self.chosen.pop();
        }
        Ok(false)
    }
}

/// Whether `f` is 2-regular on its support (every degree 0 or 2).
fn is_two_regular(g: &MultiGraph, f: &EdgeSet) -> bool {
    g.vertices().all(|v| matches!(g.degree_in(v, f), 0 | 2))
}

/// Every split of `g` into a spanning tree and a 2-regular subgraph with at
/// most `max_components` components, in Gray-code order of the cycle.
pub fn tree_cycle_decompositions(
    g: &MultiGraph,
    max_components: usize,
    budget: &SearchBudget,
) -> Result<Vec<HistInstance>> {
    let mut out = Vec::new();
    scan_decompositions(g, max_components, budget, |inst| {
        out.push(inst);
        false
    })?;
    Ok(out)
}

/// The first split found by [`tree_cycle_decompositions`].
pub fn find_tree_cycle_decomposition(
    g: &MultiGraph,
    max_components: usize,
    budget: &SearchBudget,
) -> Result<Option<HistInstance>> {
    let mut found = None;
    scan_decompositions(g, max_components, budget, |inst| {
        found = Some(inst);
        true
    })?;
    Ok(found)
}

fn scan_decompositions(
    g: &MultiGraph,
    max_components: usize,
    budget: &SearchBudget,
    mut hit: impl FnMut(HistInstance) -> bool,
) -> Result<()> {
    if !g.is_connected() {
        return Err(Error::precondition("graph is disconnected"));
    }
    let b = basis(g);
    budget.check_dimension(b.dimension())?;
    let target = g.edge_count() + 1 - g.vertex_count();
    let dense = g.dense();
    let mut meter = budget.meter();
    for f in GrayCode::new(&b.fundamental) {
        meter.tick()?;
        if f.len() != target || !is_two_regular(g, &f) || !dense.connected_without(&f) {
            continue;
        }
        let tree = g.edge_set().difference(&f);
        let inst = HistInstance::new(g.clone(), tree, f)?;
        if inst.components.len() <= max_components && hit(inst) {
            break;
        }
    }
    Ok(())
}

/// Every even subgraph whose removal leaves `g` connected, in Gray-code order.
pub fn enumerate_non_separating_cycles<'a>(
    g: &'a MultiGraph,
    budget: &SearchBudget,
) -> Result<impl Iterator<Item = EdgeSet> + 'a> {
    let b = basis(g);
    budget.check_dimension(b.dimension())?;
    let dense = g.dense();
    let generators = b.fundamental;
    let mut code = 0u64;
    let total = 1u64 << generators.len();
    let mut current = EdgeSet::new();
    Ok(std::iter::from_fn(move || {
        while code < total {
            if code > 0 {
                current.xor_with(&generators[code.trailing_zeros() as usize]);
            }
            code += 1;
            if dense.connected_without(&current) {
                return Some(current.clone());
            }
        }
        None
    }))
}
