//! Named instances and random instance families.

use std::collections::BTreeSet;

use rand::seq::SliceRandom;
use rand::Rng;

use crate::cdc::HistInstance;
use crate::cycle_space::{basis, GrayCode};
use crate::edge_set::EdgeSet;
use crate::graph::{EdgeId, MultiGraph, VertexId};

/// The Petersen graph.
///
/// Vertices 0, 1, 2 are the three pairwise non-adjacent vertices u1, u2, u3
/// whose removal leaves a tree; 3 is the centre w0 of that tree, with paths
/// 4-5, 6-7, 8-9 hanging off it.
pub fn petersen() -> MultiGraph {
    MultiGraph::from_edges(
        10,
        &[
            (3, 4), (4, 5), (3, 6), (6, 7), (3, 8), (8, 9),
            (5, 0), (5, 1), (7, 1), (7, 2), (9, 2), (9, 0),
            (4, 2), (6, 0), (8, 1),
        ],
    )
}

/// Replaces each listed cubic vertex by a triangle. Old edge ids are kept;
/// returns the triangles in the order of `vs`.
pub fn expand_triangles(g: &MultiGraph, vs: &[VertexId]) -> (MultiGraph, Vec<EdgeSet>) {
    let mut h = g.clone();
    let mut triangles = Vec::new();
    for &v in vs {
        let inc: Vec<EdgeId> = h.incident(v).to_vec();
        assert!(inc.len() == 3 && inc.iter().all(|&e| !h.is_loop(e)), "{v} is not a loopless cubic vertex");
        let corners: Vec<VertexId> = (0..3).map(|_| h.add_vertex()).collect();
        for (&e, &corner) in inc.iter().zip(&corners) {
            let w = h.other_end(e, v).unwrap();
            h.remove_edge(e).unwrap();
            h.insert_edge_with_id(e, corner, w);
        }
        h.remove_vertex(v).unwrap();
        let tri = (0..3).map(|i| h.add_edge(corners[i], corners[(i + 1) % 3]).unwrap()).collect();
        triangles.push(tri);
    }
    (h, triangles)
}

/// The Petersen graph with u1, u2, u3 blown up into triangles, together with
/// its split into a spanning tree and the three triangles.
pub fn q_triangles() -> (MultiGraph, HistInstance) {
    let (q, triangles) = expand_triangles(&petersen(), &[VertexId(0), VertexId(1), VertexId(2)]);
    let mut cycle = EdgeSet::new();
    for t in &triangles {
        cycle.union_with(t);
    }
    let tree = q.edge_set().difference(&cycle);
    let inst = HistInstance::new(q.clone(), tree, cycle).expect("tree plus triangles");
    (q, inst)
}

/// Four copies of the Petersen graph minus a vertex, arranged like K4: each
/// pair of copies is joined by one edge between degree-2 vertices.
pub fn k4_of_petersen_minus_v() -> MultiGraph {
    let p = petersen();
    let mut g = MultiGraph::new();
    let mut stubs = Vec::new();
    for _ in 0..4 {
        let base = g.max_vertex_id();
        let map = |v: VertexId| VertexId(base + if v.0 < 3 { v.0 } else { v.0 - 1 });
        for _ in 0..9 {
            g.add_vertex();
        }
        for (_, u, v) in p.edges() {
            if u != VertexId(3) && v != VertexId(3) {
                g.add_edge(map(u), map(v)).unwrap();
            }
        }
        stubs.push([4, 6, 8].map(|v| map(VertexId(v))).to_vec());
    }
    for i in 0..4 {
        for j in i + 1..4 {
            let a = stubs[i].remove(0);
            let b = stubs[j].remove(0);
            g.add_edge(a, b).unwrap();
        }
    }
    g
}

/// Two vertices joined by three parallel edges.
pub fn theta() -> MultiGraph {
    MultiGraph::from_edges(2, &[(0, 1), (0, 1), (0, 1)])
}

/// K4 with edges in lexicographic order of their endpoints.
pub fn k4() -> MultiGraph {
    MultiGraph::from_edges(4, &[(0, 1), (0, 2), (0, 3), (1, 2), (1, 3), (2, 3)])
}

/// The circuit of length `n`; `n = 1` is a loop and `n = 2` a digon.
pub fn circuit(n: u32) -> MultiGraph {
    assert!(n >= 1);
    MultiGraph::from_edges(n, &(0..n).map(|i| (i, (i + 1) % n)).collect::<Vec<_>>())
}

/// Some 2-factor of a cubic graph (the first in Gray-code order).
pub fn petersen_two_factor(g: &MultiGraph) -> EdgeSet {
    let b = basis(g);
    GrayCode::new(&b.fundamental)
        .find(|f| g.vertices().all(|v| g.degree_in(v, f) == 2))
        .expect("graph has a 2-factor")
}

/// A uniformly configured random connected simple cubic graph on `n` vertices
/// (`n` even, at least 4), by rejection from the pairing model.
pub fn random_cubic<R: Rng>(n: u32, rng: &mut R) -> MultiGraph {
    assert!(n >= 4 && n % 2 == 0);
    loop {
        let mut points: Vec<u32> = (0..3 * n).map(|p| p / 3).collect();
        points.shuffle(rng);
        let pairs: Vec<(u32, u32)> = points.chunks(2).map(|c| (c[0], c[1])).collect();
        let g = MultiGraph::from_edges(n, &pairs);
        if g.is_simple() && g.is_connected() {
            return g;
        }
    }
}

/// A random 2-edge-connected cubic graph that is simple and connected.
pub fn random_bridgeless_cubic<R: Rng>(n: u32, rng: &mut R) -> MultiGraph {
    loop {
        let g = random_cubic(n, rng);
        if g.is_two_edge_connected() {
            return g;
        }
    }
}

/// Grows a graph from a single vertex by `steps` inverse circuit
/// contractions: a vertex is replaced by a circuit of length 1 to 4 and its
/// edges are spread over the circuit.
///
/// Returns the graph and the circuits in the order that contracts it back to
/// a single vertex.
pub fn random_reverse_expansion<R: Rng>(steps: usize, rng: &mut R) -> (MultiGraph, Vec<EdgeSet>) {
    let mut g = MultiGraph::new();
    g.add_vertex();
    let mut circuits = Vec::with_capacity(steps);
    for _ in 0..steps {
        let vs: Vec<VertexId> = g.vertices().collect();
        let v = *vs.choose(rng).unwrap();
        let len = rng.gen_range(1..=4);
        let mut ring = vec![v];
        ring.extend((1..len).map(|_| g.add_vertex()));
        let inc: Vec<EdgeId> = g.incident(v).to_vec();
        for e in inc {
            let (a, b) = g.endpoints(e).unwrap();
            g.remove_edge(e).unwrap();
            let a = if a == v { *ring.choose(rng).unwrap() } else { a };
            let b = if b == v { *ring.choose(rng).unwrap() } else { b };
            g.insert_edge_with_id(e, a, b);
        }
        let circuit: EdgeSet = (0..len).map(|i| g.add_edge(ring[i], ring[(i + 1) % len]).unwrap()).collect();
        circuits.push(circuit);
    }
    circuits.reverse();
    (g, circuits)
}

/// A random candidate (G, U) for degeneracy classification: a random forest
/// whose vertices are wired to |U| = `u_size` extra vertices until every
/// forest vertex has degree at least 3, plus random edges and loops at U.
/// When `u_size == 3`, one time in four the host is instead the Petersen
/// graph with U = {u1, u2, u3} and random extra edges at U.
///
/// The result is not checked; callers filter with
/// [`check_degeneracy_instance`](crate::degeneracy::check_degeneracy_instance).
pub fn random_degeneracy_candidate<R: Rng>(
    u_size: usize,
    forest_size: u32,
    rng: &mut R,
) -> (MultiGraph, BTreeSet<VertexId>) {
    assert!((1..=3).contains(&u_size));
    let (mut g, u, forest) = if u_size == 3 && rng.gen_ratio(1, 4) {
        let p = petersen();
        let forest: Vec<VertexId> = (3..10).map(VertexId).collect();
        (p, (0..3).map(VertexId).collect::<Vec<_>>(), forest)
    } else {
        let mut g = MultiGraph::new();
        let forest: Vec<VertexId> = (0..forest_size).map(|_| g.add_vertex()).collect();
        for i in 1..forest.len() {
            // occasionally skip an edge so the forest has several trees
            if rng.gen_ratio(1, 6) {
                continue;
            }
            let j = rng.gen_range(0..i);
            g.add_edge(forest[i], forest[j]).unwrap();
        }
        let u: Vec<VertexId> = (0..u_size).map(|_| g.add_vertex()).collect();
        for &x in &forest {
            let want = 3 + usize::from(rng.gen_ratio(1, 4));
            while g.degree(x) < want {
                let t = *u.choose(rng).unwrap();
                g.add_edge(x, t).unwrap();
            }
        }
        (g, u, forest)
    };
    for _ in 0..rng.gen_range(0..=2) {
        let a = *u.choose(rng).unwrap();
        let b = if rng.gen_bool(0.5) { *u.choose(rng).unwrap() } else { *forest.choose(rng).unwrap() };
        g.add_edge(a, b).unwrap();
    }
    (g, u.into_iter().collect())
}
