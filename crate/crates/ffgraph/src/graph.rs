//! Validated feedforward graph representation.
//!
//! Nodes are the ordered set `0..n`; every edge `(a, b)` must satisfy
//! `a <= b`, so the adjacency matrix (receiver row, sender column) is lower
//! triangular. The final node `n - 1` is the designated sink. Graphs are
//! immutable after construction and store sorted, deduplicated adjacency in
//! CSR form in both directions, which keeps one metric step at `O(m)`.

use serde::{Deserialize, Serialize};
use thiserror::Error;

/// Index of a node; valid values lie in `[0, n)` for the owning graph.
pub type NodeId = u32;

#[derive(Debug, Error, PartialEq, Eq)]
pub enum GraphError {
    #[error("edge ({src}, {dst}) goes backwards")]
    BackwardEdge { src: NodeId, dst: NodeId },
    #[error("node index {index} out of range for a graph of {n} nodes")]
    OutOfRange { index: u64, n: usize },
    #[error("a graph needs at least one node")]
    EmptyGraph,
    #[error("line {line}: {reason}")]
    Parse { line: usize, reason: String },
}

/// Directed graph over ordered nodes `0..n` whose edges all point forwards.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct FeedforwardGraph {
    n: usize,
    out_starts: Vec<usize>,
    out_targets: Vec<NodeId>,
    in_starts: Vec<usize>,
    in_sources: Vec<NodeId>,
}

/// Structural findings reported by [`FeedforwardGraph::validate`].
///
/// A node counts as a sink when its outgoing edges are a subset of its own
/// self-edge. A well-formed generator output has exactly one sink, `n - 1`.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct ValidationReport {
    pub is_feedforward: bool,
    pub has_all_self_edges: bool,
    pub sinks: Vec<NodeId>,
    pub unique_sink: bool,
    pub zero_indegree_nodes: Vec<NodeId>,
}

impl FeedforwardGraph {
    /// Builds a graph from an edge list. Duplicate edges are removed and
    /// adjacency ends up sorted; the only rejected inputs are out-of-range
    /// endpoints and backward edges.
    pub fn new(n: usize, edges: Vec<(NodeId, NodeId)>) -> Result<Self, GraphError> {
        if n == 0 {
            return Err(GraphError::EmptyGraph);
        }
        for &(src, dst) in &edges {
            if src as usize >= n || dst as usize >= n {
                let index = u64::from(src.max(dst));
                return Err(GraphError::OutOfRange { index, n });
            }
            if src > dst {
                return Err(GraphError::BackwardEdge { src, dst });
            }
        }
        let mut edges = edges;
        if !edges.windows(2).all(|w| w[0] < w[1]) {
            edges.sort_unstable();
            edges.dedup();
        }

        let mut out_starts = vec![0usize; n + 1];
        let mut in_starts = vec![0usize; n + 1];
        for &(src, dst) in &edges {
            out_starts[src as usize + 1] += 1;
            in_starts[dst as usize + 1] += 1;
        }
        for i in 0..n {
            out_starts[i + 1] += out_starts[i];
            in_starts[i + 1] += in_starts[i];
        }
        let mut out_targets = vec![0 as NodeId; edges.len()];
        let mut in_sources = vec![0 as NodeId; edges.len()];
        let mut out_fill = out_starts.clone();
        let mut in_fill = in_starts.clone();
        // Edges are sorted by (src, dst), so both CSR sides fill in sorted order.
        for &(src, dst) in &edges {
            out_targets[out_fill[src as usize]] = dst;
            out_fill[src as usize] += 1;
            in_sources[in_fill[dst as usize]] = src;
            in_fill[dst as usize] += 1;
        }
        Ok(Self {
            n,
            out_starts,
            out_targets,
            in_starts,
            in_sources,
        })
    }

    pub fn n(&self) -> usize {
        self.n
    }

    pub fn edge_count(&self) -> usize {
        self.out_targets.len()
    }

    /// The designated sink vertex, `n - 1`.
    pub fn sink(&self) -> NodeId {
        (self.n - 1) as NodeId
    }

    /// Sorted successors of `i`, including `i` itself when the self-edge exists.
    ///
    /// Panics if `i >= n`.
    pub fn out_neighbors(&self, i: NodeId) -> &[NodeId] {
        let i = i as usize;
        &self.out_targets[self.out_starts[i]..self.out_starts[i + 1]]
    }

    /// Sorted predecessors of `i`. Panics if `i >= n`.
    pub fn in_neighbors(&self, i: NodeId) -> &[NodeId] {
        let i = i as usize;
        &self.in_sources[self.in_starts[i]..self.in_starts[i + 1]]
    }

    /// Number of incoming edges at `i`, counting the self-edge when present.
    pub fn in_degree(&self, i: NodeId) -> usize {
        self.in_neighbors(i).len()
    }

    /// Number of outgoing edges at `i`, counting the self-edge when present.
    pub fn out_degree(&self, i: NodeId) -> usize {
        self.out_neighbors(i).len()
    }

    pub fn has_edge(&self, src: NodeId, dst: NodeId) -> bool {
        self.out_neighbors(src).binary_search(&dst).is_ok()
    }

    /// Edges in canonical lexicographic order.
    pub fn edges(&self) -> impl Iterator<Item = (NodeId, NodeId)> + '_ {
        (0..self.n as NodeId)
            .flat_map(move |src| self.out_neighbors(src).iter().map(move |&dst| (src, dst)))
    }

    /// Scans the graph for the structural properties the metrics rely on.
    pub fn validate(&self) -> ValidationReport {
        let mut sinks = Vec::new();
        let mut zero_indegree_nodes = Vec::new();
        let mut has_all_self_edges = true;
        for i in 0..self.n as NodeId {
            let out = self.out_neighbors(i);
            if out.iter().all(|&j| j == i) {
                sinks.push(i);
            }
            if !self.has_edge(i, i) {
                has_all_self_edges = false;
            }
            if self.in_degree(i) == 0 {
                zero_indegree_nodes.push(i);
            }
        }
        let unique_sink = sinks == [self.sink()];
        ValidationReport {
            is_feedforward: true,
            has_all_self_edges,
            sinks,
            unique_sink,
            zero_indegree_nodes,
        }
    }

    /// Canonical text form: a `"n m"` header followed by one `"src dst"`
    /// line per edge in lexicographic order.
    pub fn to_text(&self) -> String {
        let mut out = String::with_capacity(8 + 8 * self.edge_count());
        out.push_str(&format!("{} {}\n", self.n, self.edge_count()));
        for (src, dst) in self.edges() {
            out.push_str(&format!("{src} {dst}\n"));
        }
        out
    }

    /// Parses the text form produced by [`Self::to_text`]. Errors carry the
    /// 1-based line number of the offending input.
    pub fn from_text(text: &str) -> Result<Self, GraphError> {
        let parse_err = |line: usize, reason: String| GraphError::Parse { line, reason };
        let mut lines = text.lines().enumerate();
        let (_, header) = lines
            .next()
            .ok_or_else(|| parse_err(1, "missing \"n m\" header".into()))?;
        let mut parts = header.split_whitespace();
        let n: usize = parts
            .next()
            .and_then(|s| s.parse().ok())
            .ok_or_else(|| parse_err(1, format!("bad node count in header {header:?}")))?;
        let m: usize = parts
            .next()
            .and_then(|s| s.parse().ok())
            .ok_or_else(|| parse_err(1, format!("bad edge count in header {header:?}")))?;
        if parts.next().is_some() {
            return Err(parse_err(1, format!("trailing content in header {header:?}")));
        }
        if n == 0 {
            return Err(parse_err(1, "a graph needs at least one node".into()));
        }

        let mut edges = Vec::with_capacity(m);
        for (idx, raw) in lines {
            let line_no = idx + 1;
            if raw.trim().is_empty() {
                continue;
            }
            let mut parts = raw.split_whitespace();
            let src: u64 = parts
                .next()
                .and_then(|s| s.parse().ok())
                .ok_or_else(|| parse_err(line_no, format!("bad edge line {raw:?}")))?;
            let dst: u64 = parts
                .next()
                .and_then(|s| s.parse().ok())
                .ok_or_else(|| parse_err(line_no, format!("bad edge line {raw:?}")))?;
            if parts.next().is_some() {
                return Err(parse_err(line_no, format!("trailing content in edge line {raw:?}")));
            }
            if src >= n as u64 || dst >= n as u64 {
                return Err(parse_err(
                    line_no,
                    format!("node index {} out of range for n = {n}", src.max(dst)),
                ));
            }
            if src > dst {
                return Err(parse_err(line_no, format!("edge ({src}, {dst}) goes backwards")));
            }
            edges.push((src as NodeId, dst as NodeId));
        }
        if edges.len() != m {
            return Err(parse_err(
                1,
                format!("header promises {m} edges but the body has {}", edges.len()),
            ));
        }
        Self::new(n, edges)
    }

    /// Renders the adjacency matrix as a binary PGM (P5, maxval 255).
    /// Pixel (row `i`, column `j`) is dark iff the edge `(j, i)` exists, so
    /// the image follows the lower-triangular adjacency convention.
    pub fn to_pgm(&self) -> Vec<u8> {
        let n = self.n;
        let mut bytes = format!("P5\n{n} {n}\n255\n").into_bytes();
        let offset = bytes.len();
        bytes.resize(offset + n * n, 255);
        for i in 0..self.n as NodeId {
            let row = offset + i as usize * n;
            for &j in self.in_neighbors(i) {
                bytes[row + j as usize] = 0;
            }
        }
        bytes
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn line3() -> FeedforwardGraph {
        FeedforwardGraph::new(3, vec![(0, 0), (0, 1), (1, 1), (1, 2), (2, 2)]).unwrap()
    }

    fn fully_connected(n: usize) -> FeedforwardGraph {
        let mut edges = Vec::new();
        for a in 0..n as NodeId {
            for b in a..n as NodeId {
                edges.push((a, b));
            }
        }
        FeedforwardGraph::new(n, edges).unwrap()
    }

    #[test]
    fn builds_line_graph() {
        let g = line3();
        assert_eq!(g.n(), 3);
        assert_eq!(g.edge_count(), 5);
        assert_eq!(g.out_neighbors(0), &[0, 1]);
        assert_eq!(g.in_neighbors(2), &[1, 2]);
    }

    #[test]
    fn rejects_backward_edge() {
        let err = FeedforwardGraph::new(2, vec![(1, 0)]).unwrap_err();
        assert_eq!(err, GraphError::BackwardEdge { src: 1, dst: 0 });
    }

    #[test]
    fn rejects_out_of_range() {
        let err = FeedforwardGraph::new(2, vec![(0, 5)]).unwrap_err();
        assert_eq!(err, GraphError::OutOfRange { index: 5, n: 2 });
    }

    #[test]
    fn fully_connected_degrees() {
        let g = fully_connected(4);
        for i in 0..4u32 {
            assert_eq!(g.in_degree(i), i as usize + 1);
            assert_eq!(g.out_degree(i), 4 - i as usize);
        }
        let g5 = fully_connected(5);
        assert_eq!(g5.in_degree(2), 3);
        assert_eq!(g5.out_degree(2), 3);
    }

    #[test]
    fn duplicate_edges_are_removed() {
        let g = FeedforwardGraph::new(2, vec![(0, 1), (0, 1), (1, 1), (0, 0)]).unwrap();
        assert_eq!(g.edge_count(), 3);
        assert_eq!(g.edges().collect::<Vec<_>>(), vec![(0, 0), (0, 1), (1, 1)]);
    }

    #[test]
    fn validate_fully_connected() {
        let rep = fully_connected(4).validate();
        assert!(rep.unique_sink);
        assert!(rep.has_all_self_edges);
        assert_eq!(rep.sinks, vec![3]);
        assert!(rep.zero_indegree_nodes.is_empty());
    }

    #[test]
    fn validate_extra_sinks() {
        let g = FeedforwardGraph::new(3, vec![(0, 0), (1, 1), (2, 2), (0, 2)]).unwrap();
        let rep = g.validate();
        assert_eq!(rep.sinks, vec![1, 2]);
        assert!(!rep.unique_sink);
    }

    #[test]
    fn validate_missing_self_edge() {
        let g = FeedforwardGraph::new(3, vec![(0, 1), (1, 1), (1, 2), (2, 2)]).unwrap();
        assert!(!g.validate().has_all_self_edges);
        assert!(g.validate().unique_sink);
    }

    #[test]
    fn star_degrees() {
        let g =
            FeedforwardGraph::new(4, vec![(0, 0), (1, 1), (2, 2), (3, 3), (0, 3), (1, 3), (2, 3)])
                .unwrap();
        assert_eq!(g.in_degree(0), 1);
        assert_eq!(g.out_degree(0), 2);
    }

    #[test]
    fn text_round_trip() {
        let g = FeedforwardGraph::new(2, vec![(0, 0), (0, 1), (1, 1)]).unwrap();
        let text = g.to_text();
        assert_eq!(text, "2 3\n0 0\n0 1\n1 1\n");
        assert_eq!(FeedforwardGraph::from_text(&text).unwrap(), g);
    }

    #[test]
    fn parse_backward_edge_reports_line() {
        let err = FeedforwardGraph::from_text("3 1\n2 0\n").unwrap_err();
        match err {
            GraphError::Parse { line, reason } => {
                assert_eq!(line, 2);
                assert!(reason.contains("backwards"), "{reason}");
            }
            other => panic!("unexpected error {other:?}"),
        }
    }

    #[test]
    fn parse_single_node_graph() {
        let g = FeedforwardGraph::from_text("1 1\n0 0\n").unwrap();
        assert_eq!(g.n(), 1);
        assert_eq!(g.edge_count(), 1);
    }

    #[test]
    fn parse_edge_count_mismatch() {
        let err = FeedforwardGraph::from_text("2 2\n0 0\n").unwrap_err();
        assert!(matches!(err, GraphError::Parse { .. }));
    }

    #[test]
    fn pgm_conventions() {
        let fc = fully_connected(4).to_pgm();
        let header = b"P5\n4 4\n255\n";
        assert_eq!(&fc[..header.len()], header);
        let pixels = &fc[header.len()..];
        for i in 0..4 {
            for j in 0..4 {
                let expected = if j <= i { 0 } else { 255 };
                assert_eq!(pixels[i * 4 + j], expected, "pixel ({i}, {j})");
            }
        }

        let identity =
            FeedforwardGraph::new(4, vec![(0, 0), (1, 1), (2, 2), (3, 3)]).unwrap().to_pgm();
        let pixels = &identity[header.len()..];
        for i in 0..4 {
            for j in 0..4 {
                let expected = if i == j { 0 } else { 255 };
                assert_eq!(pixels[i * 4 + j], expected);
            }
        }

        let line = FeedforwardGraph::new(
            4,
            vec![(0, 0), (0, 1), (1, 1), (1, 2), (2, 2), (2, 3), (3, 3)],
        )
        .unwrap()
        .to_pgm();
        let pixels = &line[header.len()..];
        for i in 0..4usize {
            for j in 0..4usize {
                let expected = if i == j || (i > 0 && j == i - 1) { 0 } else { 255 };
                assert_eq!(pixels[i * 4 + j], expected);
            }
        }
    }

    #[test]
    fn transpose_consistency() {
        let g = line3();
        for i in 0..3u32 {
            for j in 0..3u32 {
                let fwd = g.in_neighbors(i).contains(&j);
                let bwd = g.out_neighbors(j).contains(&i);
                assert_eq!(fwd, bwd);
            }
        }
    }
}
