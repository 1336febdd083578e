//! Clique post-processing of sampled node subsets.

mod exact;
mod heuristics;
mod pipeline;

pub use exact::{bron_kerbosch, max_weight_clique, BRON_KERBOSCH_GUARD};
pub use heuristics::{greedy_shrink, local_search};
pub use pipeline::{gbs_solve, run_pipeline, CliqueEntry, CliqueReport, GbsSettings, PipelineParams, ReportParams};

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::graph::WeightedGraph;
use crate::simulator::PhotonPattern;

/// A complete induced subgraph with its summed node weight.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Clique {
    nodes: Vec<usize>,
    weight: f64,
}

impl Clique {
    /// Sorts and checks `nodes` against `g`.
    pub fn new(g: &WeightedGraph, mut nodes: Vec<usize>) -> Result<Self> {
        nodes.sort_unstable();
        nodes.dedup();
        check_nodes(g, &nodes)?;
        if !g.is_clique(&nodes) {
            return Err(Error::validation(format!("{nodes:?} is not a clique")));
        }
        Ok(Self::from_sorted(g, nodes))
    }

    pub fn empty() -> Self {
        Self { nodes: Vec::new(), weight: 0.0 }
    }

    pub(crate) fn from_sorted(g: &WeightedGraph, nodes: Vec<usize>) -> Self {
        let weight = g.total_weight(&nodes);
        Self { nodes, weight }
    }

    pub fn nodes(&self) -> &[usize] {
        &self.nodes
    }

    pub fn weight(&self) -> f64 {
        self.weight
    }

    pub fn len(&self) -> usize {
        self.nodes.len()
    }

    pub fn is_empty(&self) -> bool {
        self.nodes.is_empty()
    }
}

pub(crate) fn check_nodes(g: &WeightedGraph, nodes: &[usize]) -> Result<()> {
    match nodes.iter().find(|&&v| v >= g.node_count()) {
        Some(v) => Err(Error::validation(format!("node {v} outside graph of {} nodes", g.node_count()))),
        None => Ok(()),
    }
}

/// Modes holding one photon. Patterns with a multi-photon mode are rejected.
pub fn pattern_to_subgraph(n: &PhotonPattern) -> Result<Vec<usize>> {
    if !n.is_collision_free() {
        return Err(Error::validation("pattern has a multi-photon mode; clique search needs collision-free samples"));
    }
    Ok(n.occupied())
}
