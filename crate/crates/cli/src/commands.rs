use std::path::Path;

use gbs_core::cliques::{gbs_solve, run_pipeline, GbsSettings, PipelineParams};
use gbs_core::docking::{build_big, interpret_pose, PharmacophoreSet};
use gbs_core::encoding::{choose_scale, default_alpha, encode, rescale, EncodingParams, GbsProgram};
use gbs_core::graph::WeightedGraph;
use gbs_core::mesh::{hardware_transmission, loss_budget, LossModel};
use gbs_core::rna::{confusion, mcc_approx, mcc_from_counts, parse_dot_bracket, predict, PredictMode, RnaSequence};
use gbs_core::simulator::{from_jsonl, prepare_state, sample, sample_window, to_jsonl, SampleWindow};
use serde_json::{json, Value};

use crate::config::{LossProfile, RunConfig};
use crate::error::{CliError, CliResult};
use crate::io::{Artifacts, ProgramFile};

/// Files to write plus run facts for the manifest.
pub struct Outcome {
    pub artifacts: Artifacts,
    pub summary: Value,
}

fn pretty(v: &impl serde::Serialize) -> String {
    let mut s = serde_json::to_string_pretty(v).expect("serializable");
    s.push('\n');
    s
}

pub fn encode_cmd(cfg: &RunConfig, graph: &Path) -> CliResult<Outcome> {
    let mut artifacts = Artifacts::default();
    let g = WeightedGraph::from_json(&artifacts.read_input(graph)?)?;
    let e = &cfg.encode;
    let alpha = e.alpha.unwrap_or_else(|| default_alpha(&g));
    let params = match e.c {
        Some(c) => EncodingParams { c, alpha, target_max_eig: e.target_max_eig, mode: e.mode },
        None => choose_scale(&g, alpha, e.target_max_eig, e.mode)?,
    };
    params.validate()?;
    let loss = match e.loss {
        LossProfile::Ideal => vec![1.0; g.node_count()],
        LossProfile::Hardware => hardware_transmission(g.node_count()),
    };
    let program = encode(&rescale(&g, &params)?, loss)?;
    artifacts.add("program.json", pretty(&ProgramFile::from(&program)));
    Ok(Outcome { artifacts, summary: json!({ "encoding": params, "modes": program.mode_count() }) })
}

pub fn sample_cmd(cfg: &RunConfig, program: &Path) -> CliResult<Outcome> {
    let mut artifacts = Artifacts::default();
    let program: GbsProgram = ProgramFile::parse(&artifacts.read_input(program)?)?;
    let s = &cfg.sample;
    let state = prepare_state(&program)?;
    let set = match (s.min_photons, s.collision_free) {
        (None, false) => sample(&state, s.samples, s.cutoff, cfg.seed)?,
        (min, collision_free) => {
            let window = SampleWindow { min_total: min.unwrap_or(0), max_total: s.cutoff, collision_free };
            sample_window(&state, window, s.samples, cfg.seed)?
        }
    };
    artifacts.add("samples.jsonl", to_jsonl(&set.patterns));
    artifacts.add("distribution.csv", set.distribution.to_csv());
    Ok(Outcome {
        artifacts,
        summary: json!({
            "captured_mass": set.captured_mass(),
            "patterns": set.distribution.len(),
            "samples": set.patterns.len(),
        }),
    })
}

pub fn clique_cmd(cfg: &RunConfig, graph: &Path, samples: &Path) -> CliResult<Outcome> {
    let mut artifacts = Artifacts::default();
    let g = WeightedGraph::from_json(&artifacts.read_input(graph)?)?;
    let patterns = from_jsonl(&artifacts.read_input(samples)?)?;
    if let Some(p) = patterns.iter().find(|p| p.mode_count() != g.node_count()) {
        return Err(CliError::usage(format!(
            "samples have {} modes but the graph has {} nodes",
            p.mode_count(),
            g.node_count()
        )));
    }
    let params =
        PipelineParams { min_photons: cfg.clique.min_photons, iterations: cfg.clique.iterations, seed: cfg.seed };
    let report = run_pipeline(&g, &patterns, &params)?;
    artifacts.add("report.json", format!("{}\n", report.to_json()));
    artifacts.add("report.csv", report.to_csv());
    let top = report.cliques.iter().max_by(|a, b| a.freq_gbs.total_cmp(&b.freq_gbs));
    Ok(Outcome {
        artifacts,
        summary: json!({ "samples_used": report.params.samples_used, "most_frequent": top.map(|c| &c.nodes) }),
    })
}

fn gbs_settings(base: &GbsSettings, seed: u64) -> GbsSettings {
    GbsSettings { seed, ..*base }
}

pub fn dock_cmd(cfg: &RunConfig, points: &Path, solve: bool) -> CliResult<Outcome> {
    let mut artifacts = Artifacts::default();
    let set = PharmacophoreSet::from_json(&artifacts.read_input(points)?)?;
    let big = build_big(&set.ligand, &set.protein, &cfg.dock.params)?;
    artifacts.add("big.json", format!("{}\n", big.graph.to_json()));
    let mut summary = json!({ "nodes": big.graph.node_count(), "edges": big.graph.edge_count() });
    if solve || cfg.dock.solve {
        let (clique, report) = gbs_solve(&big.graph, &gbs_settings(&cfg.dock.gbs, cfg.seed))?;
        let contacts = interpret_pose(&big, &clique)?;
        artifacts.add("pose.json", pretty(&json!({ "clique": clique, "contacts": contacts })));
        artifacts.add("report.json", format!("{}\n", report.to_json()));
        summary["pose_weight"] = json!(clique.weight());
    }
    Ok(Outcome { artifacts, summary })
}

pub fn rnafold_cmd(cfg: &RunConfig, fasta: &Path, reference: Option<&Path>, exact: bool) -> CliResult<Outcome> {
    let mut artifacts = Artifacts::default();
    let seq = RnaSequence::from_fasta(&artifacts.read_input(fasta)?)?;
    let reference = match reference {
        Some(path) => {
            let text = artifacts.read_input(path)?;
            let line = text
                .lines()
                .map(str::trim)
                .find(|l| !l.is_empty() && !l.starts_with('>'))
                .ok_or_else(|| CliError::usage("reference file has no dot-bracket line"))?;
            if line.chars().count() != seq.len() {
                return Err(CliError::usage(format!(
                    "reference has length {} but the sequence has {}",
                    line.chars().count(),
                    seq.len()
                )));
            }
            Some(parse_dot_bracket(line)?)
        }
        None => None,
    };
    let mode = if exact || cfg.rnafold.exact {
        PredictMode::Exact
    } else {
        PredictMode::Gbs(gbs_settings(&cfg.rnafold.gbs, cfg.seed))
    };
    let prediction = predict(&seq, &cfg.rnafold.stems, &mode)?;
    if prediction.stems.is_empty() {
        eprintln!("warning: no stems satisfy the stem parameters; the prediction is empty");
    }
    let mut out = json!({
        "accession": seq.accession(),
        "sequence": seq.as_str(),
        "stems": prediction.stems,
        "base_pairs": prediction.base_pairs,
    });
    if let Some(r) = &reference {
        let (tp, fp, fn_, tn) = confusion(&prediction.base_pairs, r, seq.len())?;
        out["mcc"] = json!(mcc_from_counts(tp, fp, fn_, tn));
        out["mcc_approx"] = json!(mcc_approx(tp, fp, fn_));
        out["confusion"] = json!({ "tp": tp, "fp": fp, "fn": fn_, "tn": tn });
    }
    artifacts.add("prediction.json", pretty(&out));
    Ok(Outcome { artifacts, summary: json!({ "stems": prediction.stems.len(), "mcc": out.get("mcc") }) })
}

/// Returns the outcome and the human-readable table for stdout.
/// Loop traversals of the projected 60-mode machine.
const PROJECTION_LOOPS: u32 = 61;

pub fn lossbudget_cmd(cfg: &RunConfig, stages: Option<&Path>) -> CliResult<(Outcome, String)> {
    let mut artifacts = Artifacts::default();
    let (model, default_loops) = match stages {
        Some(path) => (
            serde_json::from_str::<LossModel>(&artifacts.read_input(path)?)
                .map_err(|e| CliError::usage(format!("stages file: {e}")))?,
            0,
        ),
        None => (LossModel::sixty_mode_projection(), PROJECTION_LOOPS),
    };
    model.validate()?;
    let loops = cfg.lossbudget.loops.unwrap_or(default_loops);
    let total = loss_budget(&model, loops);
    let mut table = format!("{:<32} {:>12}\n", "stage", "transmission");
    table.push_str(&format!(
        "{:<32} {:>12.6}\n",
        format!("loop x{loops}"),
        model.per_loop_transmission.powi(loops as i32)
    ));
    for s in &model.stages {
        table.push_str(&format!("{:<32} {:>12.6}\n", s.label, s.transmission));
    }
    table.push_str(&format!("{:<32} {:>12.6} ({:.4}%)\n", "total", total, total * 100.0));
    let report = json!({ "model": model, "loops": loops, "total_transmission": total, "total_percent": total * 100.0 });
    artifacts.add("lossbudget.json", pretty(&report));
    Ok((Outcome { artifacts, summary: json!({ "total_transmission": total }) }, table))
}
