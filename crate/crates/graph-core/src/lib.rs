//! Labeled simple graphs with sparse vertex identifiers.
//!
//! Vertices are stored by dense index `0..n`; every value that a protocol
//! would see uses the sparse `id` instead.

mod bits;
pub mod io;
pub mod oracle;

pub use bits::BitMatrix;

use std::collections::VecDeque;
use thiserror::Error;

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct GraphConfig {
    /// Size of the label alphabet.
    pub lambda: u32,
    /// Bound on `|weight(v)|`.
    pub max_weight: i64,
    /// Identifiers must lie in `[1, n^c]`.
    pub id_exponent: u32,
}

impl Default for GraphConfig {
    fn default() -> Self {
        GraphConfig { lambda: 2, max_weight: 8, id_exponent: 2 }
    }
}

impl GraphConfig {
    pub fn id_bound(&self, n: usize) -> u64 {
        (n.max(1) as u64).saturating_pow(self.id_exponent)
    }
}

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum GraphError {
    #[error("self-loop at vertex {0}")]
    Loop(usize),
    #[error("edge ({0},{1}) listed twice")]
    DuplicateEdge(usize, usize),
    #[error("edge endpoint {0} out of range for n={1}")]
    VertexOutOfRange(usize, usize),
    #[error("identifier {0} used twice")]
    DuplicateId(u64),
    #[error("identifier {id} outside [1, {bound}]")]
    IdOutOfRange { id: u64, bound: u64 },
    #[error("label {label} at vertex {vertex} is not below {lambda}")]
    LabelOutOfRange { vertex: usize, label: u32, lambda: u32 },
    #[error("weight {weight} at vertex {vertex} exceeds {max}")]
    WeightOutOfRange { vertex: usize, weight: i64, max: i64 },
    #[error("{field} has length {got}, expected {expected}")]
    LengthMismatch { field: &'static str, expected: usize, got: usize },
    #[error("malformed graph file: {0}")]
    Format(String),
}

/// A simple undirected graph with identifiers, labels and optional
/// per-vertex weight and selection bit.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct LabeledGraph {
    ids: Vec<u64>,
    labels: Vec<u32>,
    adj: Vec<Vec<usize>>,
    weights: Option<Vec<i64>>,
    sel: Option<Vec<bool>>,
    by_id: Vec<(u64, usize)>,
}

impl LabeledGraph {
    pub fn new(ids: Vec<u64>, labels: Vec<u32>, edges: &[(usize, usize)]) -> Result<Self, GraphError> {
        let n = ids.len();
        if labels.len() != n {
            return Err(GraphError::LengthMismatch { field: "labels", expected: n, got: labels.len() });
        }
        let mut by_id: Vec<(u64, usize)> = ids.iter().copied().zip(0..).collect();
        by_id.sort_unstable();
        for w in by_id.windows(2) {
            if w[0].0 == w[1].0 {
                return Err(GraphError::DuplicateId(w[0].0));
            }
        }
        let mut adj = vec![Vec::new(); n];
        for &(u, v) in edges {
            if u >= n {
                return Err(GraphError::VertexOutOfRange(u, n));
            }
            if v >= n {
                return Err(GraphError::VertexOutOfRange(v, n));
            }
            if u == v {
                return Err(GraphError::Loop(u));
            }
            adj[u].push(v);
            adj[v].push(u);
        }
        for (u, row) in adj.iter_mut().enumerate() {
            row.sort_unstable();
            if let Some(w) = row.windows(2).find(|w| w[0] == w[1]) {
                return Err(GraphError::DuplicateEdge(u.min(w[0]), u.max(w[0])));
            }
        }
        Ok(LabeledGraph { ids, labels, adj, weights: None, sel: None, by_id })
    }

    /// Graph with ids `1..=n` and all labels zero.
    pub fn unlabeled(n: usize, edges: &[(usize, usize)]) -> Result<Self, GraphError> {
        Self::new((1..=n as u64).collect(), vec![0; n], edges)
    }

    pub fn with_weights(mut self, weights: Vec<i64>) -> Result<Self, GraphError> {
        if weights.len() != self.n() {
            return Err(GraphError::LengthMismatch { field: "weights", expected: self.n(), got: weights.len() });
        }
        self.weights = Some(weights);
        Ok(self)
    }

    pub fn with_sel(mut self, sel: Vec<bool>) -> Result<Self, GraphError> {
        if sel.len() != self.n() {
            return Err(GraphError::LengthMismatch { field: "sel", expected: self.n(), got: sel.len() });
        }
        self.sel = Some(sel);
        Ok(self)
    }

    pub fn without_sel(mut self) -> Self {
        self.sel = None;
        self
    }

    /// Same graph under a different injective id assignment.
    pub fn with_ids(&self, ids: Vec<u64>) -> Result<Self, GraphError> {
        let mut g = Self::new(ids, self.labels.clone(), &self.edges())?;
        g.weights = self.weights.clone();
        g.sel = self.sel.clone();
        Ok(g)
    }

    /// Checks the configurable bounds on ids, labels and weights.
    pub fn check(&self, cfg: &GraphConfig) -> Result<(), GraphError> {
        let bound = cfg.id_bound(self.n());
        for &id in &self.ids {
            if id == 0 || id > bound {
                return Err(GraphError::IdOutOfRange { id, bound });
            }
        }
        for (vertex, &label) in self.labels.iter().enumerate() {
            if label >= cfg.lambda {
                return Err(GraphError::LabelOutOfRange { vertex, label, lambda: cfg.lambda });
            }
        }
        if let Some(ws) = &self.weights {
            for (vertex, &weight) in ws.iter().enumerate() {
                if weight.abs() > cfg.max_weight {
                    return Err(GraphError::WeightOutOfRange { vertex, weight, max: cfg.max_weight });
                }
            }
        }
        Ok(())
    }

    pub fn n(&self) -> usize {
        self.ids.len()
    }

    pub fn id(&self, v: usize) -> u64 {
        self.ids[v]
    }

    pub fn ids(&self) -> &[u64] {
        &self.ids
    }

    pub fn label(&self, v: usize) -> u32 {
        self.labels[v]
    }

    pub fn labels(&self) -> &[u32] {
        &self.labels
    }

    pub fn neighbors(&self, v: usize) -> &[usize] {
        &self.adj[v]
    }

    pub fn degree(&self, v: usize) -> usize {
        self.adj[v].len()
    }

    pub fn has_edge(&self, u: usize, v: usize) -> bool {
        self.adj[u].binary_search(&v).is_ok()
    }

    pub fn index_of(&self, id: u64) -> Option<usize> {
        self.by_id.binary_search_by_key(&id, |&(i, _)| i).ok().map(|p| self.by_id[p].1)
    }

    /// Edges `(u, v)` with `u < v`, sorted lexicographically.
    pub fn edges(&self) -> Vec<(usize, usize)> {
        let mut out = Vec::new();
        for (u, row) in self.adj.iter().enumerate() {
            out.extend(row.iter().filter(|&&v| v > u).map(|&v| (u, v)));
        }
        out
    }

    pub fn edge_count(&self) -> usize {
        self.adj.iter().map(Vec::len).sum::<usize>() / 2
    }

    pub fn weights(&self) -> Option<&[i64]> {
        self.weights.as_deref()
    }

    /// Weight of `v`, 1 when the graph carries no weights.
    pub fn weight(&self, v: usize) -> i64 {
        self.weights.as_ref().map_or(1, |w| w[v])
    }

    pub fn sel(&self) -> Option<&[bool]> {
        self.sel.as_deref()
    }

    pub fn selected(&self, v: usize) -> bool {
        self.sel.as_ref().is_some_and(|s| s[v])
    }

    pub fn adjacency_matrix(&self) -> BitMatrix {
        let mut m = BitMatrix::new(self.n());
        for (u, row) in self.adj.iter().enumerate() {
            for &v in row {
                m.set(u, v);
            }
        }
        m
    }

    /// Vertices grouped by connected component, each sorted, components
    /// ordered by their smallest index.
    pub fn components(&self) -> Vec<Vec<usize>> {
        let n = self.n();
        let mut seen = vec![false; n];
        let mut out = Vec::new();
        for s in 0..n {
            if seen[s] {
                continue;
            }
            seen[s] = true;
            let mut comp = vec![s];
            let mut queue = VecDeque::from([s]);
            while let Some(u) = queue.pop_front() {
                for &v in &self.adj[u] {
                    if !seen[v] {
                        seen[v] = true;
                        comp.push(v);
                        queue.push_back(v);
                    }
                }
            }
            comp.sort_unstable();
            out.push(comp);
        }
        out
    }

    /// BFS from `root` inside the vertex set `allowed`; returns parent and
    /// distance per vertex (`None` outside the reached set).
    pub fn bfs_within(&self, root: usize, allowed: &[bool]) -> (Vec<Option<usize>>, Vec<Option<u32>>) {
        let n = self.n();
        let mut parent = vec![None; n];
        let mut dist = vec![None; n];
        dist[root] = Some(0);
        let mut queue = VecDeque::from([root]);
        while let Some(u) = queue.pop_front() {
            let du = dist[u].unwrap_or(0);
            for &v in &self.adj[u] {
                if allowed[v] && dist[v].is_none() {
                    dist[v] = Some(du + 1);
                    parent[v] = Some(u);
                    queue.push_back(v);
                }
            }
        }
        (parent, dist)
    }
}

pub fn is_connected(g: &LabeledGraph) -> bool {
    g.n() <= 1 || g.components().len() == 1
}

/// A vertex's output after one verification round.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, serde::Serialize, serde::Deserialize)]
pub enum Verdict {
    Accept,
    /// Rejected; the payload is the first condition that failed.
    Reject(u8),
}

impl Verdict {
    pub fn accepts(self) -> bool {
        self == Verdict::Accept
    }

    pub fn condition(self) -> Option<u8> {
        match self {
            Verdict::Accept => None,
            Verdict::Reject(c) => Some(c),
        }
    }
}
