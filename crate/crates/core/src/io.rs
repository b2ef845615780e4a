//! Text formats: graph6, sparse6 and a plain edge list for multigraphs.
//!
//! graph6 and sparse6 follow the nauty conventions byte for byte. The edge
//! list has one `u v` pair per line (repeats are parallel edges, `u u` is a
//! loop); `#` starts a comment, and a line holding a single number fixes the
//! vertex count. Edge ids are assigned in line order.

use crate::error::{Error, Result};
use crate::graph::{MultiGraph, VertexId};

fn parse_err(line: usize, message: impl Into<String>) -> Error {
    Error::Parse { line, message: message.into() }
}

/// Vertex ids must be `0..n` for the nauty formats.
fn dense_index(g: &MultiGraph) -> Result<u32> {
    let n = g.vertex_count() as u32;
    match g.vertices().find(|v| v.0 >= n) {
        Some(v) => Err(Error::precondition(format!("vertex ids are not 0..{n} (found {v})"))),
        None => Ok(n),
    }
}

fn encode_size(n: u32, out: &mut Vec<u8>) {
    if n <= 62 {
        out.push(n as u8 + 63);
    } else if n <= 258_047 {
        out.push(126);
        out.extend((0..3).rev().map(|i| ((n >> (6 * i)) & 63) as u8 + 63));
    } else {
        out.extend([126, 126]);
        out.extend((0..6).rev().map(|i| ((n as u64 >> (6 * i)) & 63) as u8 + 63));
    }
}

/// Reads the size prefix from bytes already shifted down by 63; returns `(n, rest)`.
fn decode_size(bytes: &[u8], line: usize) -> Result<(u32, &[u8])> {
    let short = || parse_err(line, "truncated size field");
    let word = |bs: &[u8]| bs.iter().fold(0u64, |acc, &b| (acc << 6) | u64::from(b));
    match bytes {
        [] => Err(short()),
        [63, 63, rest @ ..] => {
            let digits = rest.get(..6).ok_or_else(short)?;
            let n = u32::try_from(word(digits)).map_err(|_| parse_err(line, "graph too large"))?;
            Ok((n, &rest[6..]))
        }
        [63, rest @ ..] => {
            let digits = rest.get(..3).ok_or_else(short)?;
            Ok((word(digits) as u32, &rest[3..]))
        }
        [b, rest @ ..] => Ok((u32::from(*b), rest)),
    }
}

fn six_bit_bytes(s: &str, line: usize) -> Result<Vec<u8>> {
    s.bytes()
        .map(|b| {
            if (63..=126).contains(&b) {
                Ok(b - 63)
            } else {
                Err(parse_err(line, format!("byte {b:#04x} outside the printable range")))
            }
        })
        .collect()
}

fn pack_bits(bits: &[bool], out: &mut Vec<u8>) {
    for chunk in bits.chunks(6) {
        let v = chunk.iter().enumerate().fold(0u8, |acc, (i, &b)| acc | (u8::from(b) << (5 - i)));
        out.push(v + 63);
    }
}

/// graph6 encoding of a simple graph with vertex ids `0..n`.
pub fn to_graph6(g: &MultiGraph) -> Result<String> {
    let n = dense_index(g)?;
    if !g.is_simple() {
        return Err(Error::precondition("graph6 needs a simple graph; use sparse6"));
    }
    let mut adj = vec![false; (n as usize) * (n as usize)];
    for (_, u, v) in g.edges() {
        adj[u.index() * n as usize + v.index()] = true;
        adj[v.index() * n as usize + u.index()] = true;
    }
    let mut bits = Vec::new();
    for j in 1..n as usize {
        for i in 0..j {
            bits.push(adj[i * n as usize + j]);
        }
    }
    let mut out = Vec::new();
    encode_size(n, &mut out);
    pack_bits(&bits, &mut out);
    Ok(String::from_utf8(out).expect("ascii"))
}

/// Decodes one graph6 line (an optional `>>graph6<<` header is accepted).
pub fn from_graph6(s: &str) -> Result<MultiGraph> {
    graph6_line(s.trim(), 1)
}

fn graph6_line(s: &str, line: usize) -> Result<MultiGraph> {
    let s = s.strip_prefix(">>graph6<<").unwrap_or(s);
    let bytes = six_bit_bytes(s, line)?;
    let (n, data) = decode_size(&bytes, line)?;
    let pairs = (n as u64) * (n as u64).saturating_sub(1) / 2;
    if (data.len() as u64) != pairs.div_ceil(6) {
        return Err(parse_err(line, format!("expected {} data bytes for {n} vertices, got {}", pairs.div_ceil(6), data.len())));
    }
    let mut edges = Vec::new();
    let mut k = 0usize;
    for j in 1..n {
        for i in 0..j {
            if (data[k / 6] >> (5 - k % 6)) & 1 == 1 {
                edges.push((i, j));
            }
            k += 1;
        }
    }
    Ok(MultiGraph::from_edges(n, &edges))
}

fn sparse6_width(n: u32) -> u32 {
    let mut k = 1;
    while (1u64 << k) < u64::from(n) {
        k += 1;
    }
    k
}

/// sparse6 encoding; loops and parallel edges are allowed.
pub fn to_sparse6(g: &MultiGraph) -> Result<String> {
    let n = dense_index(g)?;
    let k = sparse6_width(n);
    let mut edges: Vec<(u32, u32)> = g.edges().map(|(_, u, v)| (u.0.max(v.0), u.0.min(v.0))).collect();
    edges.sort_unstable();
    let mut bits = Vec::new();
    let push = |bits: &mut Vec<bool>, b: bool, x: u32| {
        bits.push(b);
        bits.extend((0..k).rev().map(|i| (x >> i) & 1 == 1));
    };
    let mut cur = 0;
    for (v, u) in edges {
        if v == cur {
            push(&mut bits, false, u);
        } else if v == cur + 1 {
            cur = v;
            push(&mut bits, true, u);
        } else {
            cur = v;
            push(&mut bits, true, v);
            push(&mut bits, false, u);
        }
    }
    let pad = (6 - bits.len() % 6) % 6;
    // avoid the padding being read as an extra edge to vertex n - 1
    if k < 6 && n == 1 << k && pad >= k as usize && cur + 1 < n {
        bits.push(false);
    }
    let pad = (6 - bits.len() % 6) % 6;
    bits.extend(std::iter::repeat_n(true, pad));
    let mut out = vec![b':'];
    encode_size(n, &mut out);
    pack_bits(&bits, &mut out);
    Ok(String::from_utf8(out).expect("ascii"))
}

/// Decodes one sparse6 line (an optional `>>sparse6<<` header is accepted).
pub fn from_sparse6(s: &str) -> Result<MultiGraph> {
    sparse6_line(s.trim(), 1)
}

fn sparse6_line(s: &str, line: usize) -> Result<MultiGraph> {
    let s = s.strip_prefix(">>sparse6<<").unwrap_or(s);
    let s = s.strip_prefix(':').ok_or_else(|| parse_err(line, "sparse6 lines start with ':'"))?;
    let bytes = six_bit_bytes(s, line)?;
    let (n, data) = decode_size(&bytes, line)?;
    let k = sparse6_width(n) as usize;
    let bits: Vec<bool> = data.iter().flat_map(|&d| (0..6).rev().map(move |i| (d >> i) & 1 == 1)).collect();
    let mut edges = Vec::new();
    let mut v: u64 = 0;
    let mut pos = 0;
    while pos + 1 + k <= bits.len() {
        let b = bits[pos];
        let x = bits[pos + 1..pos + 1 + k].iter().fold(0u64, |acc, &bit| (acc << 1) | u64::from(bit));
        pos += 1 + k;
        if b {
            v += 1;
        }
        if x >= u64::from(n) || v >= u64::from(n) {
            break;
        }
        if x > v {
            v = x;
        } else {
            edges.push((x as u32, v as u32));
        }
    }
    Ok(MultiGraph::from_edges(n, &edges))
}

/// Edge-list text with a vertex-count line, one `u v` line per edge in id order.
///
/// Vertex ids are written as they are, so the count line is one more than
/// the largest id; gaps become isolated vertices when read back.
pub fn to_edge_list(g: &MultiGraph) -> String {
    let n = g.vertices().last().map_or(0, |v| v.0 + 1);
    let mut out = format!("{n}\n");
    for (_, u, v) in g.edges() {
        out.push_str(&format!("{} {}\n", u.0, v.0));
    }
    out
}

pub fn from_edge_list(text: &str) -> Result<MultiGraph> {
    let mut declared: Option<u32> = None;
    let mut edges = Vec::new();
    for (i, raw) in text.lines().enumerate() {
        let line = i + 1;
        let body = raw.split('#').next().unwrap().trim();
        if body.is_empty() {
            continue;
        }
        let nums: Vec<u32> = body
            .split_whitespace()
            .map(|t| t.parse().map_err(|_| parse_err(line, format!("not a vertex id: {t:?}"))))
            .collect::<Result<_>>()?;
        match nums[..] {
            [n] if declared.is_none() && edges.is_empty() => declared = Some(n),
            [u, v] => edges.push((u, v, line)),
            _ => return Err(parse_err(line, "expected \"u v\"")),
        }
    }
    let top = edges.iter().map(|&(u, v, _)| u.max(v) + 1).max().unwrap_or(0);
    let n = declared.unwrap_or(top);
    if let Some(&(u, v, line)) = edges.iter().find(|&&(u, v, _)| u.max(v) >= n) {
        return Err(parse_err(line, format!("edge {u} {v} exceeds the declared {n} vertices")));
    }
    let mut g = MultiGraph::new();
    for v in 0..n {
        g.ensure_vertex(VertexId(v));
    }
    for (u, v, _) in edges {
        g.add_edge(VertexId(u), VertexId(v))?;
    }
    Ok(g)
}

/// Text format of a graph file.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Format {
    Graph6,
    Sparse6,
    EdgeList,
}

/// Guesses the format from the first non-blank line.
pub fn detect_format(text: &str) -> Format {
    let first = text.lines().map(str::trim).find(|l| !l.is_empty()).unwrap_or("");
    if first.starts_with(">>sparse6<<") || first.starts_with(':') {
        Format::Sparse6
    } else if first.starts_with(">>graph6<<") || (!first.is_empty() && first.bytes().all(|b| (63..=126).contains(&b))) {
        Format::Graph6
    } else {
        Format::EdgeList
    }
}

/// Reads every graph in `text`: one per line for graph6/sparse6, a single
/// graph for an edge list.
pub fn read_graphs(text: &str) -> Result<Vec<MultiGraph>> {
    let fmt = detect_format(text);
    if fmt == Format::EdgeList {
        return Ok(vec![from_edge_list(text)?]);
    }
    text.lines()
        .enumerate()
        .filter(|(_, l)| !l.trim().is_empty())
        .map(|(i, l)| match fmt {
            Format::Graph6 => graph6_line(l.trim(), i + 1),
            _ => sparse6_line(l.trim(), i + 1),
        })
        .collect()
}

/// Reads exactly one graph.
pub fn read_graph(text: &str) -> Result<MultiGraph> {
    let mut all = read_graphs(text)?;
    match all.len() {
        1 => Ok(all.pop().unwrap()),
        n => Err(parse_err(1, format!("expected one graph, found {n}"))),
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::generators;
    use proptest::prelude::*;

    fn edge_multiset(g: &MultiGraph) -> Vec<(u32, u32)> {
        let mut v: Vec<(u32, u32)> = g.edges().map(|(_, a, b)| (a.0.min(b.0), a.0.max(b.0))).collect();
        v.sort_unstable();
        v
    }

    #[test]
    fn known_encodings() {
        // strings produced by networkx.to_graph6_bytes / to_sparse6_bytes
        assert_eq!(to_graph6(&generators::k4()).unwrap(), "C~");
        assert_eq!(to_graph6(&generators::petersen()).unwrap(), "I?NKbDOgG");
        assert!(crate::graph::is_petersen(&from_graph6(">>graph6<<I?NKbDOgG").unwrap()));
        assert_eq!(to_sparse6(&generators::k4()).unwrap(), ":CcKI");
        let theta = from_sparse6(":Ab").unwrap();
        assert_eq!(edge_multiset(&theta), vec![(0, 1), (0, 1)]);
    }

    #[test]
    fn sparse6_keeps_loops_and_parallels() {
        let g = MultiGraph::from_edges(3, &[(0, 0), (0, 1), (0, 1), (1, 2), (2, 2), (2, 0)]);
        let back = from_sparse6(&to_sparse6(&g).unwrap()).unwrap();
        assert_eq!(edge_multiset(&back), edge_multiset(&g));
    }

    #[test]
    fn edge_list_round_trip_and_errors() {
        let (q, _) = generators::q_triangles();
        // q has vertex ids 3..=18 after expansion; renumbering is not needed
        let back = from_edge_list(&to_edge_list(&q)).unwrap();
        assert_eq!(edge_multiset(&back), edge_multiset(&q));
        assert_eq!(back.edge_count(), 24);
        let g = from_edge_list("# loop and digon\n2\n0 0\n0 1\n1 0 # again\n").unwrap();
        assert_eq!(g.edge_count(), 3);
        assert!(matches!(from_edge_list("0 1\n1 x\n"), Err(Error::Parse { line: 2, .. })));
        assert!(matches!(from_edge_list("2\n0 5\n"), Err(Error::Parse { line: 2, .. })));
        assert!(matches!(from_edge_list("0 1 2\n"), Err(Error::Parse { line: 1, .. })));
    }

    #[test]
    fn detection() {
        assert_eq!(detect_format("C~\nC~\n"), Format::Graph6);
        assert_eq!(detect_format(":CcKI\n"), Format::Sparse6);
        assert_eq!(detect_format("4\n0 1\n"), Format::EdgeList);
        assert_eq!(read_graphs("C~\n\nC~\n").unwrap().len(), 2);
        assert!(matches!(from_graph6("C~~"), Err(Error::Parse { .. })));
    }

    proptest! {
        #[test]
        fn nauty_formats_round_trip(n in 1u32..70, raw in proptest::collection::vec((0u32..70, 0u32..70), 0..80)) {
            let pairs: Vec<(u32, u32)> = raw.into_iter().map(|(a, b)| (a % n, b % n)).collect();
            let multi = MultiGraph::from_edges(n, &pairs);
            let back = from_sparse6(&to_sparse6(&multi).unwrap()).unwrap();
            prop_assert_eq!(back.vertex_count(), n as usize);
            prop_assert_eq!(edge_multiset(&back), edge_multiset(&multi));

            let mut simple: Vec<(u32, u32)> = pairs.iter().filter(|(a, b)| a != b).map(|&(a, b)| (a.min(b), a.max(b))).collect();
            simple.sort_unstable();
            simple.dedup();
            let g = MultiGraph::from_edges(n, &simple);
            let back = from_graph6(&to_graph6(&g).unwrap()).unwrap();
            prop_assert_eq!(edge_multiset(&back), edge_multiset(&g));
        }
    }
}
