use rayon::prelude::*;

use super::{GaussianState, PhotonPattern, ProbabilityKernel, MAX_PATTERN_PHOTONS};
use crate::error::{Error, Result};

/// Largest number of patterns a single enumeration may visit.
pub const ENUMERATION_GUARD: u128 = 1_000_000;

/// All patterns on `modes` modes with `total` photons, optionally restricted
/// to at most one photon per mode.
///
/// Patterns are ordered lexicographically by their sorted list of occupied
/// modes, so two-photon collision-free patterns run `(0,1), (0,2), …, (1,2), …`.
/// Multisets `i₁ ≤ … ≤ i_k` map to combinations `i_j + j` of `M + k − 1`.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct Sector {
    pub modes: usize,
    pub total: usize,
    pub collision_free: bool,
}

impl Sector {
    fn pool(&self) -> usize {
        if self.collision_free || self.total == 0 {
            self.modes
        } else {
            self.modes + self.total - 1
        }
    }

    pub fn len(&self) -> u128 {
        if self.collision_free && self.total > self.modes {
            return 0;
        }
        if self.modes == 0 {
            return u128::from(self.total == 0);
        }
        binomial(self.pool(), self.total)
    }

    pub fn is_empty(&self) -> bool {
        self.len() == 0
    }

    /// The pattern at position `rank`; panics past the end.
    pub fn unrank(&self, mut rank: u128) -> PhotonPattern {
        assert!(rank < self.len(), "rank {rank} outside sector");
        let n = self.pool();
        let k = self.total;
        let mut counts = vec![0u8; self.modes];
        let mut v = 0usize;
        for j in 0..k {
            loop {
                let block = binomial(n - v - 1, k - j - 1);
                if rank < block {
                    break;
                }
                rank -= block;
                v += 1;
            }
            let mode = if self.collision_free { v } else { v - j };
            counts[mode] += 1;
            v += 1;
        }
        PhotonPattern::new(counts)
    }

    pub fn iter(&self) -> impl Iterator<Item = PhotonPattern> + '_ {
        (0..self.len()).map(move |r| self.unrank(r))
    }

    pub(crate) fn guard(&self) -> Result<u128> {
        let count = self.len();
        if count > ENUMERATION_GUARD {
            return Err(Error::Guard { count, limit: ENUMERATION_GUARD });
        }
        if self.total > MAX_PATTERN_PHOTONS {
            return Err(Error::PatternTooLarge { total: self.total, limit: MAX_PATTERN_PHOTONS });
        }
        Ok(count)
    }
}

pub(crate) fn binomial(n: usize, k: usize) -> u128 {
    if k > n {
        return 0;
    }
    let k = k.min(n - k);
    let mut acc: u128 = 1;
    for i in 0..k {
        acc = acc * (n - i) as u128 / (i + 1) as u128;
    }
    acc
}

/// Patterns with their probabilities. `captured_mass` is the unnormalized
/// sum of `probs`.
#[derive(Debug, Clone, PartialEq)]
pub struct Distribution {
    patterns: Vec<PhotonPattern>,
    probs: Vec<f64>,
    captured_mass: f64,
}

impl Distribution {
    pub fn new(patterns: Vec<PhotonPattern>, probs: Vec<f64>) -> Result<Self> {
        if patterns.len() != probs.len() {
            return Err(Error::validation(format!("{} patterns but {} probabilities", patterns.len(), probs.len())));
        }
        if let Some(p) = probs.iter().find(|p| !(p.is_finite() && **p >= 0.0)) {
            return Err(Error::validation(format!("invalid probability {p}")));
        }
        let captured_mass = probs.iter().sum();
        Ok(Self { patterns, probs, captured_mass })
    }

    /// Frequencies of `samples` over `patterns`; samples outside the list
    /// lower the captured mass.
    pub fn empirical(patterns: Vec<PhotonPattern>, samples: &[PhotonPattern]) -> Result<Self> {
        if samples.is_empty() {
            return Err(Error::validation("no samples"));
        }
        let index: std::collections::HashMap<&PhotonPattern, usize> =
            patterns.iter().enumerate().map(|(i, p)| (p, i)).collect();
        let mut counts = vec![0usize; patterns.len()];
        for s in samples {
            if let Some(&i) = index.get(s) {
                counts[i] += 1;
            }
        }
        let n = samples.len() as f64;
        Self::new(patterns, counts.into_iter().map(|c| c as f64 / n).collect())
    }

    pub fn patterns(&self) -> &[PhotonPattern] {
        &self.patterns
    }

    pub fn probs(&self) -> &[f64] {
        &self.probs
    }

    pub fn captured_mass(&self) -> f64 {
        self.captured_mass
    }

    pub fn len(&self) -> usize {
        self.patterns.len()
    }

    pub fn is_empty(&self) -> bool {
        self.patterns.is_empty()
    }

    /// Rescaled to unit mass; the captured mass is kept.
    pub fn normalized(&self) -> Result<Self> {
        if self.captured_mass.is_nan() || self.captured_mass <= 0.0 {
            return Err(Error::Numerical("cannot normalize a zero-mass distribution".into()));
        }
        let probs = self.probs.iter().map(|p| p / self.captured_mass).collect();
        Ok(Self { patterns: self.patterns.clone(), probs, captured_mass: self.captured_mass })
    }

    /// `pattern,probability` with space-separated counts.
    pub fn to_csv(&self) -> String {
        let mut out = String::from("pattern,probability\n");
        for (pat, p) in self.patterns.iter().zip(&self.probs) {
            let counts: Vec<String> = pat.counts().iter().map(u8::to_string).collect();
            out.push_str(&format!("{},{p:.17e}\n", counts.join(" ")));
        }
        out
    }
}

/// Exact probabilities of every pattern in one sector.
pub fn enumerate_distribution(s: &GaussianState, total: usize, collision_free: bool) -> Result<Distribution> {
    let kernel = ProbabilityKernel::new(s)?;
    enumerate_sector(&kernel, Sector { modes: s.mode_count(), total, collision_free })
}

pub(crate) fn enumerate_sector(kernel: &ProbabilityKernel, sector: Sector) -> Result<Distribution> {
    if sector.collision_free && sector.total > sector.modes {
        return Err(Error::validation(format!(
            "{} photons cannot be collision-free on {} modes",
            sector.total, sector.modes
        )));
    }
    let count = sector.guard()?;
    let patterns: Vec<PhotonPattern> = (0..count as u64).into_par_iter().map(|r| sector.unrank(r as u128)).collect();
    let probs = patterns
        .par_iter()
        .map(|p| {
            let v = kernel.evaluate(p.counts());
            if v < -1e-12 {
                Err(Error::Numerical(format!("negative probability {v:e}")))
            } else {
                Ok(v.max(0.0))
            }
        })
        .collect::<Result<Vec<f64>>>()?;
    Distribution::new(patterns, probs)
}
