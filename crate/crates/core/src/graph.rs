//! Simple connected undirected graphs, edge-list I/O and subdivision.

use std::collections::{HashMap, HashSet, VecDeque};
use std::fmt::Write as _;

use crate::error::{Error, Result};

/// Default upper bound on the vertex count produced by [`iterate_subdivide`].
pub const DEFAULT_VERTEX_CAP: u64 = 10_000_000;

/// A simple connected undirected graph.
///
/// Edges are stored as `(min, max)` pairs in lexicographic order; neighbor
/// lists are sorted. Values are immutable once constructed.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Graph {
    vertex_count: usize,
    edges: Vec<(usize, usize)>,
    adjacency: Vec<Vec<usize>>,
}

/// Structural data derived from a [`Graph`].
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct GraphMeta {
    pub circuit_rank: u64,
    pub has_odd_cycle: bool,
    pub is_bipartite: bool,
}

impl Graph {
    /// Builds a validated graph on vertices `0..vertex_count`.
    pub fn new(vertex_count: usize, edges: impl IntoIterator<Item = (usize, usize)>) -> Result<Self> {
        let mut seen = HashSet::new();
        let mut list = Vec::new();
        for (i, (u, v)) in edges.into_iter().enumerate() {
            for w in [u, v] {
                if w >= vertex_count {
                    return Err(Error::VertexOutOfRange { vertex: w, vertex_count });
                }
            }
            if u == v {
                return Err(Error::SelfLoop { line: i + 1, vertex: u });
            }
            let e = (u.min(v), u.max(v));
            if !seen.insert(e) {
                return Err(Error::DuplicateEdge { line: i + 1, u, v });
            }
            list.push(e);
        }
        Self::from_checked_edges(vertex_count, list)
    }

    // Edges must already be simple, normalized and in range.
    fn from_checked_edges(vertex_count: usize, mut edges: Vec<(usize, usize)>) -> Result<Self> {
        if edges.is_empty() {
            return Err(Error::EmptyGraph);
        }
        edges.sort_unstable();
        let mut adjacency = vec![Vec::new(); vertex_count];
        for &(u, v) in &edges {
            adjacency[u].push(v);
            adjacency[v].push(u);
        }
        for nbrs in &mut adjacency {
            nbrs.sort_unstable();
        }
        let g = Graph { vertex_count, edges, adjacency };
        let reached = g.bfs_order(0).len();
        if reached != vertex_count {
            return Err(Error::Disconnected { reached, total: vertex_count });
        }
        Ok(g)
    }

    pub fn complete(n: usize) -> Result<Self> {
        Self::new(n, (0..n).flat_map(|u| (u + 1..n).map(move |v| (u, v))))
    }

    pub fn cycle(n: usize) -> Result<Self> {
        Self::new(n, (0..n).map(|u| (u, (u + 1) % n)))
    }

    pub fn path(n: usize) -> Result<Self> {
        Self::new(n, (1..n).map(|u| (u - 1, u)))
    }

    pub fn star(leaves: usize) -> Result<Self> {
        Self::new(leaves + 1, (1..=leaves).map(|v| (0, v)))
    }

    pub fn complete_bipartite(a: usize, b: usize) -> Result<Self> {
        Self::new(a + b, (0..a).flat_map(|u| (a..a + b).map(move |v| (u, v))))
    }

    pub fn vertex_count(&self) -> usize {
        self.vertex_count
    }

    pub fn edge_count(&self) -> usize {
        self.edges.len()
    }

    /// Edges as `(min, max)` pairs in lexicographic order.
    pub fn edges(&self) -> &[(usize, usize)] {
        &self.edges
    }

    pub fn neighbors(&self, v: usize) -> &[usize] {
        &self.adjacency[v]
    }

    pub fn degree(&self, v: usize) -> usize {
        self.adjacency[v].len()
    }

    pub fn degrees(&self) -> Vec<usize> {
        self.adjacency.iter().map(Vec::len).collect()
    }

    fn bfs_order(&self, start: usize) -> Vec<usize> {
        let mut seen = vec![false; self.vertex_count];
        let mut order = Vec::with_capacity(self.vertex_count);
        let mut queue = VecDeque::from([start]);
        seen[start] = true;
        while let Some(u) = queue.pop_front() {
            order.push(u);
            for &w in &self.adjacency[u] {
                if !seen[w] {
                    seen[w] = true;
                    queue.push_back(w);
                }
            }
        }
        order
    }

    /// Two-colors the graph by BFS; `None` if an odd cycle exists.
    pub fn bipartition(&self) -> Option<Vec<bool>> {
        let mut color: Vec<Option<bool>> = vec![None; self.vertex_count];
        color[0] = Some(false);
        for u in self.bfs_order(0) {
            let cu = color[u].expect("bfs visits colored vertices");
            for &w in &self.adjacency[u] {
                match color[w] {
                    None => color[w] = Some(!cu),
                    Some(cw) if cw == cu => return None,
                    Some(_) => {}
                }
            }
        }
        Some(color.into_iter().map(|c| c.unwrap_or(false)).collect())
    }

    /// Serializes as an edge list, one `u v` line per edge in sorted order.
    pub fn to_edge_list(&self) -> String {
        let mut out = format!("# vertices {} edges {}\n", self.vertex_count, self.edges.len());
        for &(u, v) in &self.edges {
            let _ = writeln!(out, "{u} {v}");
        }
        out
    }
}

/// Parses the edge-list text format.
///
/// Blank lines and lines starting with `#` are skipped. If the ids used are
/// exactly `0..N` they are kept; otherwise they are compacted to `0..N` in
/// order of first appearance.
pub fn parse_edge_list(text: &str) -> Result<Graph> {
    let mut raw = Vec::new();
    for (idx, line) in text.lines().enumerate() {
        let lineno = idx + 1;
        let body = line.trim();
        if body.is_empty() || body.starts_with('#') {
            continue;
        }
        let mut fields = body.split_whitespace();
        let mut next_id = || -> Result<usize> {
            let tok = fields.next().ok_or_else(|| Error::Parse {
                line: lineno,
                message: format!("expected two vertex ids, got {body:?}"),
            })?;
            tok.parse::<usize>().map_err(|_| Error::Parse {
                line: lineno,
                message: format!("invalid vertex id {tok:?}"),
            })
        };
        let u = next_id()?;
        let v = next_id()?;
        if let Some(extra) = fields.next() {
            return Err(Error::Parse { line: lineno, message: format!("unexpected token {extra:?}") });
        }
        if u == v {
            return Err(Error::SelfLoop { line: lineno, vertex: u });
        }
        raw.push((lineno, u, v));
    }

    let mut order: Vec<usize> = Vec::new();
    let mut index: HashMap<usize, usize> = HashMap::new();
    for &(_, u, v) in &raw {
        for w in [u, v] {
            index.entry(w).or_insert_with(|| {
                order.push(w);
                order.len() - 1
            });
        }
    }
    let n = order.len();
    let dense = order.iter().all(|&w| w < n);

    let mut seen = HashSet::new();
    let mut edges = Vec::with_capacity(raw.len());
    for &(lineno, u, v) in &raw {
        let (a, b) = if dense { (u, v) } else { (index[&u], index[&v]) };
        let e = (a.min(b), a.max(b));
        if !seen.insert(e) {
            return Err(Error::DuplicateEdge { line: lineno, u, v });
        }
        edges.push(e);
    }
    Graph::from_checked_edges(n, edges)
}

/// Inserts a new vertex in the middle of every edge.
///
/// Original vertices keep their ids; the vertex inserted on the `k`-th edge
/// (in sorted edge order) gets id `N + k`.
pub fn subdivide(g: &Graph) -> Graph {
    let n = g.vertex_count;
    let mut edges = Vec::with_capacity(2 * g.edges.len());
    for (k, &(u, v)) in g.edges.iter().enumerate() {
        edges.push((u, n + k));
        edges.push((v, n + k));
    }
    Graph::from_checked_edges(n + g.edges.len(), edges).expect("subdivision of a valid graph is valid")
}

/// Vertex and edge counts of `s^n(G)`: `(N_0 + (2^n - 1) E_0, 2^n E_0)`.
///
/// `None` on `u64` overflow.
pub fn subdivision_counts(vertex_count: u64, edge_count: u64, n: u32) -> Option<(u64, u64)> {
    let scale = 1u64.checked_shl(n).filter(|_| n < 64)?;
    let edges = edge_count.checked_mul(scale)?;
    let vertices = vertex_count.checked_add(edge_count.checked_mul(scale - 1)?)?;
    Some((vertices, edges))
}

/// Builds `s^n(g)`, refusing if the result would exceed `vertex_cap` vertices.
pub fn iterate_subdivide(g: &Graph, n: u32, vertex_cap: u64) -> Result<Graph> {
    let required = subdivision_counts(g.vertex_count as u64, g.edge_count() as u64, n)
        .map(|(v, _)| v as u128)
        .unwrap_or(u128::MAX);
    if required > vertex_cap as u128 {
        return Err(Error::ResourceLimit {
            what: format!("subdivision level {n}"),
            required,
            cap: vertex_cap as u128,
        });
    }
    let mut cur = g.clone();
    for _ in 0..n {
        cur = subdivide(&cur);
    }
    Ok(cur)
}

pub fn analyze(g: &Graph) -> GraphMeta {
    let is_bipartite = g.bipartition().is_some();
    GraphMeta {
        circuit_rank: (g.edge_count() + 1 - g.vertex_count()) as u64,
        has_odd_cycle: !is_bipartite,
        is_bipartite,
    }
}
