//! Node-weighted undirected graphs and their JSON file format.

use nalgebra::DMatrix;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

/// Undirected simple graph with non-negative node weights and optional
/// non-negative edge weights (default 1).
#[derive(Debug, Clone, PartialEq)]
pub struct WeightedGraph {
    weights: Vec<f64>,
    /// `(i, j, w)` with `i < j`, sorted.
    edges: Vec<(usize, usize, f64)>,
    neighbors: Vec<Vec<usize>>,
    adjacent: Vec<bool>,
}

impl WeightedGraph {
    pub fn new(weights: Vec<f64>, edges: impl IntoIterator<Item = (usize, usize)>) -> Result<Self> {
        Self::with_edge_weights(weights, edges.into_iter().map(|(i, j)| (i, j, 1.0)))
    }

    pub fn with_edge_weights(weights: Vec<f64>, edges: impl IntoIterator<Item = (usize, usize, f64)>) -> Result<Self> {
        let n = weights.len();
        if n == 0 {
            return Err(Error::validation("graph must have at least one node"));
        }
        if let Some((i, w)) = weights.iter().enumerate().find(|(_, w)| !w.is_finite() || **w < 0.0) {
            return Err(Error::validation(format!("node {i} has invalid weight {w}")));
        }
        let mut list = Vec::new();
        for (a, b, w) in edges {
            if a == b {
                return Err(Error::validation(format!("self-loop on node {a}")));
            }
            if a >= n || b >= n {
                return Err(Error::validation(format!("edge ({a},{b}) references a node ≥ {n}")));
            }
            if !w.is_finite() || w < 0.0 {
                return Err(Error::validation(format!("edge ({a},{b}) has invalid weight {w}")));
            }
            list.push((a.min(b), a.max(b), w));
        }
        list.sort_by_key(|x| (x.0, x.1));
        if let Some(w) = list.windows(2).find(|w| (w[0].0, w[0].1) == (w[1].0, w[1].1)) {
            return Err(Error::validation(format!("duplicate edge ({},{})", w[0].0, w[0].1)));
        }
        let mut neighbors = vec![Vec::new(); n];
        let mut adjacent = vec![false; n * n];
        for &(a, b, _) in &list {
            neighbors[a].push(b);
            neighbors[b].push(a);
            adjacent[a * n + b] = true;
            adjacent[b * n + a] = true;
        }
        for nb in &mut neighbors {
            nb.sort_unstable();
        }
        Ok(Self { weights, edges: list, neighbors, adjacent })
    }

    pub fn node_count(&self) -> usize {
        self.weights.len()
    }

    pub fn weights(&self) -> &[f64] {
        &self.weights
    }

    pub fn weight(&self, node: usize) -> f64 {
        self.weights[node]
    }

    pub fn edges(&self) -> &[(usize, usize, f64)] {
        &self.edges
    }

    pub fn edge_count(&self) -> usize {
        self.edges.len()
    }

    pub fn has_edge(&self, a: usize, b: usize) -> bool {
        self.adjacent[a * self.node_count() + b]
    }

    pub fn neighbors(&self, node: usize) -> &[usize] {
        &self.neighbors[node]
    }

    pub fn degree(&self, node: usize) -> usize {
        self.neighbors[node].len()
    }

    /// Weighted adjacency matrix (zero diagonal).
    pub fn adjacency_matrix(&self) -> DMatrix<f64> {
        let n = self.node_count();
        let mut a = DMatrix::zeros(n, n);
        for &(i, j, w) in &self.edges {
            a[(i, j)] = w;
            a[(j, i)] = w;
        }
        a
    }

    /// True when every pair of `nodes` is adjacent. Duplicates are not allowed.
    pub fn is_clique(&self, nodes: &[usize]) -> bool {
        nodes
            .iter()
            .enumerate()
            .all(|(k, &a)| a < self.node_count() && nodes[k + 1..].iter().all(|&b| a != b && self.has_edge(a, b)))
    }

    pub fn total_weight(&self, nodes: &[usize]) -> f64 {
        nodes.iter().map(|&v| self.weights[v]).sum()
    }

    pub fn from_json(text: &str) -> Result<Self> {
        let file: GraphFile = serde_json::from_str(text).map_err(|e| Error::validation(format!("graph JSON: {e}")))?;
        file.into_graph()
    }

    pub fn to_json(&self) -> String {
        serde_json::to_string_pretty(&GraphFile::from(self)).expect("graph serializes")
    }
}

/// `{"nodes": [{"id": 0, "weight": 1.0}, ...], "edges": [[0, 1], ...]}`.
/// An edge may carry a weight as a third element.
#[derive(Debug, Clone, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct GraphFile {
    pub nodes: Vec<NodeEntry>,
    pub edges: Vec<EdgeEntry>,
}

#[derive(Debug, Clone, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct NodeEntry {
    pub id: usize,
    pub weight: f64,
}

#[derive(Debug, Clone, Serialize, Deserialize)]
#[serde(untagged)]
pub enum EdgeEntry {
    Plain(usize, usize),
    Weighted(usize, usize, f64),
}

impl GraphFile {
    pub fn into_graph(mut self) -> Result<WeightedGraph> {
        self.nodes.sort_by_key(|n| n.id);
        for (k, node) in self.nodes.iter().enumerate() {
            if node.id != k {
                return Err(Error::validation(format!(
                    "nodes[].id must be dense from 0; expected id {k}, found {}",
                    node.id
                )));
            }
        }
        let weights = self.nodes.iter().map(|n| n.weight).collect();
        let edges = self.edges.into_iter().map(|e| match e {
            EdgeEntry::Plain(a, b) => (a, b, 1.0),
            EdgeEntry::Weighted(a, b, w) => (a, b, w),
        });
        WeightedGraph::with_edge_weights(weights, edges)
    }
}

impl From<&WeightedGraph> for GraphFile {
    fn from(g: &WeightedGraph) -> Self {
        GraphFile {
            nodes: g.weights.iter().enumerate().map(|(id, &weight)| NodeEntry { id, weight }).collect(),
            edges: g
                .edges
                .iter()
                .map(|&(a, b, w)| if w == 1.0 { EdgeEntry::Plain(a, b) } else { EdgeEntry::Weighted(a, b, w) })
                .collect(),
        }
    }
}
