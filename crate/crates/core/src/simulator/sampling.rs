use rand::distr::{weighted::WeightedIndex, Distribution as _};

use super::enumerate::{enumerate_sector, Sector};
use super::{Distribution, GaussianState, PhotonPattern, ProbabilityKernel, ENUMERATION_GUARD};
use crate::error::{Error, Result};
use crate::seeding::{rng, Stream};

/// Minimum captured mass accepted by [`sample`].
pub const MIN_CAPTURED_MASS: f64 = 0.5;

/// Photon-number window for post-selected sampling.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct SampleWindow {
    pub min_total: usize,
    pub max_total: usize,
    pub collision_free: bool,
}

/// Drawn patterns and the exact distribution they were drawn from.
#[derive(Debug, Clone, PartialEq)]
pub struct SampleSet {
    pub patterns: Vec<PhotonPattern>,
    pub distribution: Distribution,
}

impl SampleSet {
    /// Probability mass of the region the samples were drawn from.
    pub fn captured_mass(&self) -> f64 {
        self.distribution.captured_mass()
    }
}

/// Draws from the exact distribution truncated to `total ≤ max_total`.
///
/// Fails with [`Error::LowCapturedMass`] when the truncation keeps less than
/// half the probability.
pub fn sample(s: &GaussianState, n_samples: usize, max_total: usize, seed: u64) -> Result<SampleSet> {
    let window = SampleWindow { min_total: 0, max_total, collision_free: false };
    let count: u128 = sectors(s.mode_count(), &window).iter().map(Sector::len).sum();
    if count > ENUMERATION_GUARD {
        return Err(Error::Guard { count, limit: ENUMERATION_GUARD });
    }
    let distribution = enumerate_window(s, &window)?;
    if distribution.captured_mass() < MIN_CAPTURED_MASS {
        return Err(Error::LowCapturedMass { mass: distribution.captured_mass() });
    }
    draw(distribution, n_samples, seed)
}

/// Draws from the exact distribution post-selected on a photon-number window.
/// The enumeration guard applies to each sector separately.
pub fn sample_window(s: &GaussianState, window: SampleWindow, n_samples: usize, seed: u64) -> Result<SampleSet> {
    draw(enumerate_window(s, &window)?, n_samples, seed)
}

fn sectors(modes: usize, window: &SampleWindow) -> Vec<Sector> {
    (window.min_total..=window.max_total)
        .map(|total| Sector { modes, total, collision_free: window.collision_free })
        .filter(|sec| !sec.is_empty())
        .collect()
}

/// Every pattern of the window, sector by sector, with exact probabilities.
pub fn enumerate_window(s: &GaussianState, window: &SampleWindow) -> Result<Distribution> {
    if window.min_total > window.max_total {
        return Err(Error::validation("empty photon-number window"));
    }
    let sectors = sectors(s.mode_count(), window);
    for sec in &sectors {
        sec.guard()?;
    }
    let kernel = ProbabilityKernel::new(s)?;
    let mut patterns = Vec::new();
    let mut probs = Vec::new();
    for &sec in &sectors {
        let d = enumerate_sector(&kernel, sec)?;
        patterns.extend_from_slice(d.patterns());
        probs.extend_from_slice(d.probs());
    }
    Distribution::new(patterns, probs)
}

/// `n_samples` categorical draws from `d`, renormalized.
pub fn draw(distribution: Distribution, n_samples: usize, seed: u64) -> Result<SampleSet> {
    let mass = distribution.captured_mass();
    if mass.is_nan() || mass <= 0.0 {
        return Err(Error::Numerical("no probability mass in the sampled region".into()));
    }
    let index = WeightedIndex::new(distribution.probs()).map_err(|e| Error::Numerical(e.to_string()))?;
    let mut r = rng(seed, Stream::Sampler, 0);
    let patterns = (0..n_samples).map(|_| distribution.patterns()[index.sample(&mut r)].clone()).collect();
    Ok(SampleSet { patterns, distribution })
}
