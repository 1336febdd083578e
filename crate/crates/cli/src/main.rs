//! `gbs-toolkit`: encode graphs, simulate and sample GBS programs, and run
//! the clique, docking and RNA pipelines from the command line.

mod commands;
mod config;
mod error;
mod io;

use std::path::PathBuf;
use std::process::ExitCode;
use std::time::Instant;

use clap::{Parser, Subcommand};
use gbs_core::encoding::KernelMode;
use serde_json::json;

use crate::config::{LossProfile, RunConfig};
use crate::error::{CliError, CliResult};
use crate::io::write_atomic;

const THREADS_ENV: &str = "GBS_TOOLKIT_THREADS";

#[derive(Debug, Parser)]
#[command(name = "gbs-toolkit", version, about = "Desk-scale Gaussian boson sampling for graph problems")]
struct Cli {
    /// JSON run configuration; unknown keys are rejected.
    #[arg(long, global = true)]
    config: Option<PathBuf>,
    /// Master seed (overrides the config).
    #[arg(long, global = true)]
    seed: Option<u64>,
    /// Output directory (overrides the config; default `gbs-out`).
    #[arg(long, global = true)]
    out: Option<PathBuf>,
    #[command(subcommand)]
    command: Command,
}

#[derive(Debug, Subcommand)]
enum Command {
    /// Graph JSON → program.json.
    Encode {
        #[arg(long)]
        graph: PathBuf,
        #[arg(long)]
        target_max_eig: Option<f64>,
        #[arg(long, value_parser = parse_kernel)]
        mode: Option<KernelMode>,
        #[arg(long)]
        c: Option<f64>,
        #[arg(long)]
        alpha: Option<f64>,
        /// Per-mode transmission 0.82^N instead of a lossless machine.
        #[arg(long)]
        hardware_loss: bool,
    },
    /// program.json → samples.jsonl and distribution.csv.
    Sample {
        #[arg(long)]
        program: PathBuf,
        #[arg(long)]
        samples: Option<usize>,
        #[arg(long)]
        cutoff: Option<usize>,
        #[arg(long)]
        min_photons: Option<usize>,
        #[arg(long)]
        collision_free: bool,
    },
    /// Graph + samples → clique report (JSON and CSV).
    Clique {
        #[arg(long)]
        graph: PathBuf,
        #[arg(long)]
        samples: PathBuf,
        #[arg(long)]
        iterations: Option<usize>,
        #[arg(long)]
        min_photons: Option<usize>,
    },
    /// Pharmacophore JSON → BIG graph, and with --solve a pose.
    Dock {
        #[arg(long)]
        pharmacophores: PathBuf,
        #[arg(long)]
        solve: bool,
    },
    /// FASTA → secondary-structure prediction.
    Rnafold {
        #[arg(long)]
        fasta: PathBuf,
        /// File holding a dot-bracket line of the same length.
        #[arg(long)]
        reference: Option<PathBuf>,
        /// Solve the stem graph exactly instead of sampling.
        #[arg(long)]
        exact: bool,
    },
    /// Loss-budget arithmetic; defaults to the projected 60-mode machine.
    Lossbudget {
        #[arg(long)]
        stages: Option<PathBuf>,
        #[arg(long)]
        loops: Option<u32>,
    },
}

fn parse_kernel(s: &str) -> Result<KernelMode, String> {
    match s {
        "laplacian" => Ok(KernelMode::Laplacian),
        "adjacency" => Ok(KernelMode::Adjacency),
        _ => Err(format!("expected 'laplacian' or 'adjacency', got '{s}'")),
    }
}

fn configure_threads() -> CliResult<()> {
    let Ok(raw) = std::env::var(THREADS_ENV) else { return Ok(()) };
    let n: usize = raw
        .parse()
        .ok()
        .filter(|&n| n > 0)
        .ok_or_else(|| CliError::usage(format!("{THREADS_ENV} must be a positive integer, got '{raw}'")))?;
    rayon::ThreadPoolBuilder::new()
        .num_threads(n)
        .build_global()
        .map_err(|e| CliError::usage(format!("thread pool: {e}")))
}

/// Folds command-line overrides into the loaded config.
fn apply_overrides(cli: &Cli, cfg: &mut RunConfig) {
    if let Some(seed) = cli.seed {
        cfg.seed = seed;
    }
    if let Some(out) = &cli.out {
        cfg.output_dir = Some(out.clone());
    }
    match &cli.command {
        Command::Encode { target_max_eig, mode, c, alpha, hardware_loss, .. } => {
            let e = &mut cfg.encode;
            e.target_max_eig = target_max_eig.unwrap_or(e.target_max_eig);
            e.mode = mode.unwrap_or(e.mode);
            e.c = c.or(e.c);
            e.alpha = alpha.or(e.alpha);
            if *hardware_loss {
                e.loss = LossProfile::Hardware;
            }
        }
        Command::Sample { samples, cutoff, min_photons, collision_free, .. } => {
            let s = &mut cfg.sample;
            s.samples = samples.unwrap_or(s.samples);
            s.cutoff = cutoff.unwrap_or(s.cutoff);
            s.min_photons = min_photons.or(s.min_photons);
            s.collision_free |= collision_free;
        }
        Command::Clique { iterations, min_photons, .. } => {
            cfg.clique.iterations = iterations.unwrap_or(cfg.clique.iterations);
            cfg.clique.min_photons = min_photons.unwrap_or(cfg.clique.min_photons);
        }
        Command::Lossbudget { loops, .. } => {
            cfg.lossbudget.loops = loops.or(cfg.lossbudget.loops);
        }
        Command::Dock { .. } | Command::Rnafold { .. } => {}
    }
}

fn run(cli: Cli) -> CliResult<()> {
    configure_threads()?;
    let mut cfg = RunConfig::load(cli.config.as_deref())?;
    apply_overrides(&cli, &mut cfg);
    let started = Instant::now();
    let (name, outcome) = match &cli.command {
        Command::Encode { graph, .. } => ("encode", commands::encode_cmd(&cfg, graph)?),
        Command::Sample { program, .. } => ("sample", commands::sample_cmd(&cfg, program)?),
        Command::Clique { graph, samples, .. } => ("clique", commands::clique_cmd(&cfg, graph, samples)?),
        Command::Dock { pharmacophores, solve } => ("dock", commands::dock_cmd(&cfg, pharmacophores, *solve)?),
        Command::Rnafold { fasta, reference, exact } => {
            ("rnafold", commands::rnafold_cmd(&cfg, fasta, reference.as_deref(), *exact)?)
        }
        Command::Lossbudget { stages, .. } => {
            let (outcome, table) = commands::lossbudget_cmd(&cfg, stages.as_deref())?;
            print!("{table}");
            ("lossbudget", outcome)
        }
    };

    let dir = cfg.output_dir.clone().unwrap_or_else(|| PathBuf::from("gbs-out"));
    let written = outcome.artifacts.commit(&dir)?;
    let manifest = json!({
        "tool": "gbs-toolkit",
        "version": env!("CARGO_PKG_VERSION"),
        "command": name,
        "config": cfg,
        "wall_clock_seconds": started.elapsed().as_secs_f64(),
        "inputs": outcome.artifacts.inputs(),
        "artifacts": written,
        "summary": outcome.summary,
    });
    let mut text = serde_json::to_string_pretty(&manifest).expect("manifest serializes");
    text.push('\n');
    write_atomic(&dir.join("manifest.json"), text.as_bytes())?;
    for f in &written {
        eprintln!("wrote {}", dir.join(&f.path).display());
    }
    Ok(())
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    match run(cli) {
        Ok(()) => ExitCode::SUCCESS,
        Err(e) => {
            eprintln!("error: {e}");
            ExitCode::from(e.exit_code())
        }
    }
}
