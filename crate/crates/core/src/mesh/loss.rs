use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

/// Round-trip throughput of the storage loop on the reference hardware.
pub const HARDWARE_LOOP_TRANSMISSION: f64 = 0.82;

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct LossStage {
    pub label: String,
    pub transmission: f64,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct LossModel {
    #[serde(default)]
    pub stages: Vec<LossStage>,
    #[serde(default = "lossless")]
    pub per_loop_transmission: f64,
}

fn lossless() -> f64 {
    1.0
}

impl LossModel {
    pub fn validate(&self) -> Result<()> {
        let ok = |t: f64| (0.0..=1.0).contains(&t);
        if !ok(self.per_loop_transmission) {
            return Err(Error::validation(format!(
                "per-loop transmission {} outside [0,1]",
                self.per_loop_transmission
            )));
        }
        match self.stages.iter().find(|s| !ok(s.transmission)) {
            Some(s) => {
                Err(Error::validation(format!("stage '{}' transmission {} outside [0,1]", s.label, s.transmission)))
            }
            None => Ok(()),
        }
    }

    /// Projected low-loss 60-mode machine: 0.90 per loop plus source
    /// coupling, filter, loop coupling, demultiplexer and detector stages.
    pub fn sixty_mode_projection() -> Self {
        let stage = |label: &str, transmission| LossStage { label: label.into(), transmission };
        Self {
            stages: vec![
                stage("source to fibre coupling", 0.9),
                stage("post-source filter", 0.944),
                stage("processor to fibre coupling", 0.93),
                stage("demultiplexer", 0.973),
                stage("detector efficiency", 0.95),
            ],
            per_loop_transmission: 0.90,
        }
    }
}

/// `per_loop^loops · ∏ stages`.
pub fn loss_budget(model: &LossModel, loops: u32) -> f64 {
    let stages: f64 = model.stages.iter().map(|s| s.transmission).product();
    model.per_loop_transmission.powi(loops as i32) * stages
}

/// Uniform per-mode transmission when every mode traverses the loop once per
/// mesh layer of an `n`-mode rectangular mesh (`n` layers).
pub fn hardware_transmission(mode_count: usize) -> Vec<f64> {
    vec![HARDWARE_LOOP_TRANSMISSION.powi(mode_count as i32); mode_count]
}
