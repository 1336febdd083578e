use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

/// Photon counts of one detection event, one entry per mode.
#[derive(Debug, Clone, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
pub struct PhotonPattern {
    counts: Vec<u8>,
}

impl PhotonPattern {
    pub fn new(counts: Vec<u8>) -> Self {
        Self { counts }
    }

    pub fn zeros(modes: usize) -> Self {
        Self { counts: vec![0; modes] }
    }

    /// One photon in each listed mode (repeats accumulate).
    pub fn from_modes(modes: usize, occupied: &[usize]) -> Self {
        let mut counts = vec![0u8; modes];
        for &m in occupied {
            counts[m] += 1;
        }
        Self { counts }
    }

    pub fn counts(&self) -> &[u8] {
        &self.counts
    }

    pub fn mode_count(&self) -> usize {
        self.counts.len()
    }

    pub fn total(&self) -> usize {
        self.counts.iter().map(|&c| c as usize).sum()
    }

    pub fn is_collision_free(&self) -> bool {
        self.counts.iter().all(|&c| c <= 1)
    }

    /// Modes with at least one photon, ascending.
    pub fn occupied(&self) -> Vec<usize> {
        self.counts.iter().enumerate().filter(|(_, &c)| c > 0).map(|(i, _)| i).collect()
    }

    /// Mode indices repeated by their counts, ascending.
    pub fn expanded(&self) -> Vec<usize> {
        self.counts.iter().enumerate().flat_map(|(i, &c)| std::iter::repeat_n(i, c as usize)).collect()
    }

    pub(crate) fn check_modes(&self, modes: usize) -> Result<()> {
        if self.counts.len() == modes {
            Ok(())
        } else {
            Err(Error::validation(format!("pattern has {} modes, state has {modes}", self.counts.len())))
        }
    }
}

/// `{"counts":[…]}` per line.
pub fn to_jsonl(samples: &[PhotonPattern]) -> String {
    let mut out = String::with_capacity(samples.len() * 16);
    for s in samples {
        out.push_str(&serde_json::to_string(s).expect("pattern serializes"));
        out.push('\n');
    }
    out
}

pub fn from_jsonl(text: &str) -> Result<Vec<PhotonPattern>> {
    text.lines()
        .enumerate()
        .filter(|(_, l)| !l.trim().is_empty())
        .map(|(k, l)| serde_json::from_str(l).map_err(|e| Error::validation(format!("samples line {}: {e}", k + 1))))
        .collect()
}
