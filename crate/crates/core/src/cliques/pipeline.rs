use std::collections::BTreeMap;

use rand::seq::index;
use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use super::{greedy_shrink, local_search, pattern_to_subgraph, Clique};
use crate::encoding::{auto_encode, KernelMode, DEFAULT_TARGET_MAX_EIG};
use crate::error::{Error, Result};
use crate::graph::WeightedGraph;
use crate::seeding::{derive, rng, Stream};
use crate::simulator::{prepare_state, sample_window, PhotonPattern, SampleWindow};

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct PipelineParams {
    pub min_photons: usize,
    pub iterations: usize,
    pub seed: u64,
}

impl Default for PipelineParams {
    fn default() -> Self {
        Self { min_photons: 5, iterations: 30, seed: 0 }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct CliqueEntry {
    pub nodes: Vec<usize>,
    pub weight: f64,
    pub freq_gbs: f64,
    pub freq_uniform: f64,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ReportParams {
    pub min_photons: usize,
    pub iterations: usize,
    pub seed: u64,
    pub samples_total: usize,
    pub samples_used: usize,
}

/// Cliques reached from sampled and uniformly drawn seeds, heaviest first.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct CliqueReport {
    pub cliques: Vec<CliqueEntry>,
    pub params: ReportParams,
}

impl CliqueReport {
    /// `(freq_gbs, freq_uniform)` of a node set, zero when never reached.
    pub fn frequency(&self, nodes: &[usize]) -> (f64, f64) {
        self.cliques.iter().find(|c| c.nodes == nodes).map_or((0.0, 0.0), |c| (c.freq_gbs, c.freq_uniform))
    }

    pub fn to_json(&self) -> String {
        serde_json::to_string_pretty(self).expect("report serializes")
    }

    /// `nodes,weight,freq_gbs,freq_uniform` with space-separated nodes.
    pub fn to_csv(&self) -> String {
        let mut out = String::from("nodes,weight,freq_gbs,freq_uniform\n");
        for c in &self.cliques {
            let nodes: Vec<String> = c.nodes.iter().map(usize::to_string).collect();
            out.push_str(&format!("{},{},{},{}\n", nodes.join(" "), c.weight, c.freq_gbs, c.freq_uniform));
        }
        out
    }
}

/// Shrinks and searches every sample with at least `min_photons` photons, and
/// the same number of uniformly drawn node sets of identical sizes.
pub fn run_pipeline(g: &WeightedGraph, samples: &[PhotonPattern], params: &PipelineParams) -> Result<CliqueReport> {
    let n = g.node_count();
    let mut seeds = Vec::new();
    for s in samples.iter().filter(|s| s.total() >= params.min_photons) {
        s.check_modes(n)?;
        seeds.push(pattern_to_subgraph(s)?);
    }
    if seeds.is_empty() {
        return Err(Error::EmptyReport { min_photons: params.min_photons });
    }

    let process = |nodes: &[usize], counter: u64| -> Result<Clique> {
        let c = greedy_shrink(g, nodes)?;
        local_search(g, &c, params.iterations, derive(params.seed, Stream::LocalSearch, counter))
    };
    let gbs: Vec<Clique> =
        seeds.par_iter().enumerate().map(|(i, nodes)| process(nodes, i as u64)).collect::<Result<_>>()?;
    let offset = seeds.len() as u64;
    let uniform: Vec<Clique> = seeds
        .par_iter()
        .enumerate()
        .map(|(i, nodes)| {
            let mut r = rng(params.seed, Stream::UniformBaseline, i as u64);
            let mut drawn = index::sample(&mut r, n, nodes.len()).into_vec();
            drawn.sort_unstable();
            process(&drawn, offset + i as u64)
        })
        .collect::<Result<_>>()?;

    let mut table: BTreeMap<Vec<usize>, (f64, usize, usize)> = BTreeMap::new();
    for c in &gbs {
        table.entry(c.nodes().to_vec()).or_insert((c.weight(), 0, 0)).1 += 1;
    }
    for c in &uniform {
        table.entry(c.nodes().to_vec()).or_insert((c.weight(), 0, 0)).2 += 1;
    }
    let total = seeds.len() as f64;
    let mut cliques: Vec<CliqueEntry> = table
        .into_iter()
        .map(|(nodes, (weight, a, b))| CliqueEntry {
            nodes,
            weight,
            freq_gbs: a as f64 / total,
            freq_uniform: b as f64 / total,
        })
        .collect();
    cliques.sort_by(|a, b| b.weight.total_cmp(&a.weight).then_with(|| a.nodes.cmp(&b.nodes)));
    Ok(CliqueReport {
        cliques,
        params: ReportParams {
            min_photons: params.min_photons,
            iterations: params.iterations,
            seed: params.seed,
            samples_total: samples.len(),
            samples_used: seeds.len(),
        },
    })
}

/// Settings for [`gbs_solve`].
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(default, deny_unknown_fields)]
pub struct GbsSettings {
    pub samples: usize,
    pub min_photons: usize,
    pub max_photons: usize,
    pub iterations: usize,
    pub seed: u64,
    pub target_max_eig: f64,
    pub kernel: KernelMode,
}

impl Default for GbsSettings {
    fn default() -> Self {
        Self {
            samples: 300,
            min_photons: 2,
            max_photons: 6,
            iterations: 30,
            seed: 0,
            target_max_eig: DEFAULT_TARGET_MAX_EIG,
            kernel: KernelMode::Laplacian,
        }
    }
}

/// Encodes `g`, samples collision-free patterns in the photon window (capped
/// at the node count), post-processes them and returns the heaviest clique
/// reached from the sampled seeds together with the full report.
pub fn gbs_solve(g: &WeightedGraph, s: &GbsSettings) -> Result<(Clique, CliqueReport)> {
    let (_, program) = auto_encode(g, s.target_max_eig, s.kernel)?;
    let state = prepare_state(&program)?;
    let max_total = s.max_photons.min(g.node_count());
    let window = SampleWindow { min_total: s.min_photons.min(max_total), max_total, collision_free: true };
    let set = sample_window(&state, window, s.samples, s.seed)?;
    let report = run_pipeline(
        g,
        &set.patterns,
        &PipelineParams { min_photons: window.min_total, iterations: s.iterations, seed: s.seed },
    )?;
    let best = report
        .cliques
        .iter()
        .find(|c| c.freq_gbs > 0.0)
        .ok_or_else(|| Error::Consistency("report has no sampled clique".into()))?;
    let clique = Clique::new(g, best.nodes.clone())?;
    Ok((clique, report))
}
