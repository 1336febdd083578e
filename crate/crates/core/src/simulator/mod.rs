//! Exact simulation of lossy Gaussian states prepared by a [`GbsProgram`].
//!
//! Conventions (fixed throughout): quadratures are ordered
//! `(x₁ … x_M, p₁ … p_M)`, `a = (x + i·p)/√2`, and the vacuum covariance is
//! `I/2`. A single mode squeezed by `r` has variances `e^{−2r}/2` (x) and
//! `e^{2r}/2` (p).
//!
//! [`GbsProgram`]: crate::encoding::GbsProgram

mod enumerate;
mod pattern;
mod probability;
mod sampling;
mod state;

pub use enumerate::{enumerate_distribution, Distribution, Sector, ENUMERATION_GUARD};
pub use pattern::{from_jsonl, to_jsonl, PhotonPattern};
pub use probability::{pattern_probability, ProbabilityKernel, MAX_PATTERN_PHOTONS};
pub use sampling::{draw, enumerate_window, sample, sample_window, SampleSet, SampleWindow, MIN_CAPTURED_MASS};
pub use state::{prepare_state, GaussianState};

use crate::error::{Error, Result};

/// `½·Σ|pᵢ − qᵢ|` after normalizing both to unit mass on their (identical)
/// support.
pub fn tvd(p: &Distribution, q: &Distribution) -> Result<f64> {
    if p.patterns() != q.patterns() {
        return Err(Error::validation("TVD needs identical pattern lists"));
    }
    let (sp, sq): (f64, f64) = (p.probs().iter().sum(), q.probs().iter().sum());
    if !(sp > 0.0 && sq > 0.0) {
        return Err(Error::validation("TVD of a distribution with zero mass"));
    }
    Ok(0.5 * p.probs().iter().zip(q.probs()).map(|(a, b)| (a / sp - b / sq).abs()).sum::<f64>())
}
