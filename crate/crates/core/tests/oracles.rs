//! Exhaustive searches checked against brute force written from scratch here.

use cdc_core::cdc::{four_cdc_containing, tree_cycle_cdc};
use cdc_core::flow::{find_nz4f, verify_flow};
use cdc_core::generators;
use cdc_core::graph::is_non_separating;
use cdc_core::io::read_graphs;
use cdc_core::oracle::{
    enumerate_non_separating_cycles, find_kcdc_containing, find_tree_cycle_decomposition, tree_cycle_decompositions,
    verify_cdc,
};
use cdc_core::{EdgeId, EdgeSet, MultiGraph, SearchBudget};
use proptest::prelude::*;

fn edge_list(g: &MultiGraph) -> Vec<(EdgeId, usize, usize)> {
    g.edges().map(|(e, u, v)| (e, u.index(), v.index())).collect()
}

fn vertex_slots(g: &MultiGraph) -> usize {
    g.vertices().map(|v| v.index() + 1).max().unwrap_or(0)
}

/// Parity of every vertex degree within the chosen edges (bit i of `mask`
/// selects the i-th edge in id order).
fn even_mask(g: &MultiGraph, mask: u64) -> bool {
    let mut deg = vec![0usize; vertex_slots(g)];
    for (i, (_, u, v)) in edge_list(g).into_iter().enumerate() {
        if mask >> i & 1 == 1 {
            deg[u] += 1;
            deg[v] += 1;
        }
    }
    deg.iter().all(|d| d % 2 == 0)
}

fn mask_to_set(g: &MultiGraph, mask: u64) -> EdgeSet {
    edge_list(g).into_iter().enumerate().filter(|(i, _)| mask >> i & 1 == 1).map(|(_, (e, _, _))| e).collect()
}

/// Connected after deleting the chosen edges, by repeated relaxation.
fn connected_without(g: &MultiGraph, mask: u64) -> bool {
    let n = vertex_slots(g);
    let present: Vec<bool> = (0..n).map(|i| g.vertices().any(|v| v.index() == i)).collect();
    let Some(start) = present.iter().position(|&p| p) else { return true };
    let mut reach = vec![false; n];
    reach[start] = true;
    let edges = edge_list(g);
    loop {
        let mut changed = false;
        for (i, &(_, u, v)) in edges.iter().enumerate() {
            if mask >> i & 1 == 0 && reach[u] != reach[v] {
                reach[u] = true;
                reach[v] = true;
                changed = true;
            }
        }
        if !changed {
            break;
        }
    }
    (0..n).all(|i| !present[i] || reach[i])
}

/// Tries all 4^m edge labellings with values in Z2 x Z2.
fn brute_force_flow_exists(g: &MultiGraph) -> bool {
    let edges = edge_list(g);
    let m = edges.len() as u32;
    let n = vertex_slots(g);
    'label: for code in 0..4u64.pow(m) {
        let mut sum = vec![0u8; n];
        for (i, &(_, u, v)) in edges.iter().enumerate() {
            let val = (code >> (2 * i) & 3) as u8;
            if val == 0 {
                continue 'label;
            }
            sum[u] ^= val;
            sum[v] ^= val;
        }
        if sum.iter().all(|&s| s == 0) {
            return true;
        }
    }
    false
}

fn small_multigraph() -> impl Strategy<Value = MultiGraph> {
    (1u32..6).prop_flat_map(|n| {
        proptest::collection::vec((0..n, 0..n), 0..9).prop_map(move |pairs| MultiGraph::from_edges(n, &pairs))
    })
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(300))]

    #[test]
    fn flow_search_matches_brute_force(g in small_multigraph()) {
        let found = find_nz4f(&g, &SearchBudget::default()).unwrap();
        prop_assert_eq!(found.is_some(), brute_force_flow_exists(&g));
        if let Some(fl) = found {
            let r = verify_flow(&g, &fl).unwrap();
            prop_assert!(r.ok && r.nowhere_zero);
        }
    }

    #[test]
    fn non_separating_cycles_match_filter(g in small_multigraph()) {
        let m = g.edge_count();
        let mut expected: Vec<EdgeSet> = (0..1u64 << m)
            .filter(|&mask| even_mask(&g, mask) && connected_without(&g, mask))
            .map(|mask| mask_to_set(&g, mask))
            .collect();
        let mut got: Vec<EdgeSet> = enumerate_non_separating_cycles(&g, &SearchBudget::default()).unwrap().collect();
        for c in &got {
            prop_assert!(is_non_separating(&g, c).unwrap());
        }
        expected.sort();
        got.sort();
        prop_assert_eq!(got, expected);
    }

    #[test]
    fn three_covers_exist_exactly_with_flows(g in small_multigraph()) {
        let flow = find_nz4f(&g, &SearchBudget::default()).unwrap().is_some();
        let cover = find_kcdc_containing(&g, &EdgeSet::new(), 3, &SearchBudget::default()).unwrap();
        prop_assert_eq!(flow, cover.is_some());
        if let Some(s) = cover {
            prop_assert!(verify_cdc(&g, &s).is_ok());
        }
    }

    /// Whenever a construction gives a k-member cover containing c, the
    /// exhaustive search with bound k succeeds too.
    #[test]
    fn oracle_finds_what_constructions_find(g in small_multigraph(), pick in any::<u64>()) {
        if let Some(fl) = find_nz4f(&g, &SearchBudget::default()).unwrap() {
            let evens: Vec<u64> = (0..1u64 << g.edge_count()).filter(|&m| even_mask(&g, m)).collect();
            let c = mask_to_set(&g, evens[(pick % evens.len() as u64) as usize]);
            let built = four_cdc_containing(&g, &c, &fl).unwrap();
            let k = built.len();
            let found = find_kcdc_containing(&g, &c, k, &SearchBudget::default()).unwrap();
            prop_assert!(found.is_some());
            prop_assert_eq!(found.unwrap().prescribed_cycle(), c);
        }
    }
}

#[test]
fn decompositions_match_filter_on_small_cubic_graphs() {
    let text = include_str!("data/cubic_le10.g6");
    for g in read_graphs(text).unwrap().into_iter().filter(|g| g.vertex_count() <= 8) {
        let m = g.edge_count();
        let target = m + 1 - g.vertex_count();
        let expected = (0..1u64 << m)
            .filter(|&mask| {
                mask.count_ones() as usize == target
                    && connected_without(&g, mask)
                    && g.vertices().all(|v| {
                        let f = mask_to_set(&g, mask);
                        matches!(g.degree_in(v, &f), 0 | 2)
                    })
            })
            .count();
        let got = tree_cycle_decompositions(&g, usize::MAX, &SearchBudget::default()).unwrap();
        assert_eq!(got.len(), expected);
        for inst in &got {
            assert!(g.is_spanning_tree(&inst.tree));
        }
    }
}

#[test]
fn named_decompositions() {
    let p = generators::petersen();
    let inst = find_tree_cycle_decomposition(&p, 3, &SearchBudget::default()).unwrap().unwrap();
    assert_eq!(inst.components.len(), 1);
    assert!(is_non_separating(&p, &inst.cycle).unwrap());
    let (q, triangles) = generators::q_triangles();
    let first = find_tree_cycle_decomposition(&q, 3, &SearchBudget::default()).unwrap().unwrap();
    assert!(first.components.len() <= 3);
    assert!(tree_cycle_decompositions(&q, 3, &SearchBudget::default()).unwrap().contains(&triangles));
}

#[test]
fn petersen_five_cover_and_q_six_cover() {
    let p = generators::petersen();
    let s = find_kcdc_containing(&p, &EdgeSet::new(), 5, &SearchBudget::default()).unwrap().unwrap();
    assert!(verify_cdc(&p, &s).is_ok());
    let (q, inst) = generators::q_triangles();
    let six = find_kcdc_containing(&q, &inst.cycle, 6, &SearchBudget::default()).unwrap().unwrap();
    assert!(verify_cdc(&q, &six).is_ok());
    assert_eq!(six.prescribed_cycle(), inst.cycle);
    let built = tree_cycle_cdc(&inst).unwrap();
    assert_eq!(built.len(), six.len());
}

#[test]
fn budgets_never_masquerade_as_negatives() {
    let (q, inst) = generators::q_triangles();
    let tight = SearchBudget::nodes(10);
    let err = find_kcdc_containing(&q, &inst.cycle, 5, &tight).unwrap_err();
    assert!(err.is_budget());
    let capped = SearchBudget { max_dimension: 5, ..SearchBudget::default() };
    assert!(find_nz4f(&q, &capped).is_err());
    assert!(enumerate_non_separating_cycles(&q, &capped).is_err());
}
