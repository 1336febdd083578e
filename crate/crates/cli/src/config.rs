//! Run configuration. Every section is optional; command-line flags override
//! the file, and the file overrides the defaults.

use std::path::{Path, PathBuf};

use gbs_core::cliques::GbsSettings;
use gbs_core::docking::DockingParams;
use gbs_core::encoding::{KernelMode, DEFAULT_TARGET_MAX_EIG};
use gbs_core::rna::StemParams;
use serde::{Deserialize, Serialize};

use crate::error::{CliError, CliResult};
use crate::io::read_text;

#[derive(Debug, Clone, Default, PartialEq, Serialize, Deserialize)]
#[serde(default, deny_unknown_fields)]
pub struct RunConfig {
    /// Master seed; it replaces any `seed` inside the `gbs` sections.
    pub seed: u64,
    pub output_dir: Option<PathBuf>,
    pub encode: EncodeConfig,
    pub sample: SampleConfig,
    pub clique: CliqueConfig,
    pub dock: DockConfig,
    pub rnafold: RnaConfig,
    pub lossbudget: LossBudgetConfig,
}

impl RunConfig {
    pub fn load(path: Option<&Path>) -> CliResult<Self> {
        let Some(path) = path else { return Ok(Self::default()) };
        serde_json::from_str(&read_text(path)?).map_err(|e| CliError::usage(format!("config {}: {e}", path.display())))
    }
}

#[derive(Debug, Clone, Copy, Default, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum LossProfile {
    /// Lossless machine.
    #[default]
    Ideal,
    /// `0.82^N` transmission per mode for `N` modes.
    Hardware,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(default, deny_unknown_fields)]
pub struct EncodeConfig {
    pub target_max_eig: f64,
    pub mode: KernelMode,
    /// Fixed scale; chosen from `target_max_eig` when absent.
    pub c: Option<f64>,
    /// Weight coupling; 0.1 for weighted graphs and 0 otherwise when absent.
    pub alpha: Option<f64>,
    pub loss: LossProfile,
}

impl Default for EncodeConfig {
    fn default() -> Self {
        Self {
            target_max_eig: DEFAULT_TARGET_MAX_EIG,
            mode: KernelMode::Laplacian,
            c: None,
            alpha: None,
            loss: LossProfile::Ideal,
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(default, deny_unknown_fields)]
pub struct SampleConfig {
    pub samples: usize,
    /// Largest total photon number enumerated.
    pub cutoff: usize,
    /// Post-select on `min_photons ≤ total ≤ cutoff` instead of truncating.
    pub min_photons: Option<usize>,
    pub collision_free: bool,
}

impl Default for SampleConfig {
    fn default() -> Self {
        Self { samples: 10_000, cutoff: 4, min_photons: None, collision_free: false }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(default, deny_unknown_fields)]
pub struct CliqueConfig {
    pub iterations: usize,
    pub min_photons: usize,
}

impl Default for CliqueConfig {
    fn default() -> Self {
        Self { iterations: 30, min_photons: 5 }
    }
}

#[derive(Debug, Clone, Default, PartialEq, Serialize, Deserialize)]
#[serde(default, deny_unknown_fields)]
pub struct DockConfig {
    pub params: DockingParams,
    pub solve: bool,
    pub gbs: GbsSettings,
}

#[derive(Debug, Clone, Default, PartialEq, Serialize, Deserialize)]
#[serde(default, deny_unknown_fields)]
pub struct RnaConfig {
    pub stems: StemParams,
    pub exact: bool,
    pub gbs: GbsSettings,
}

#[derive(Debug, Clone, Default, PartialEq, Serialize, Deserialize)]
#[serde(default, deny_unknown_fields)]
pub struct LossBudgetConfig {
    /// Loop traversals; unset means 61 for the built-in projection and 0 for
    /// a stages file.
    pub loops: Option<u32>,
}
