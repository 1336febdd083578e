//! Photon-number pattern probabilities of a zero-mean Gaussian state.
//!
//! With `Q = σ_a + I/2` the covariance of `(a, a†)` shifted by the vacuum,
//! and `A = X·(I − Q⁻¹)` where `X` swaps the two `M`-blocks,
//!
//! ```text
//! p(n) = Haf(A_n) / (√det Q · ∏ nᵢ!)
//! ```
//!
//! where `A_n` repeats row/column `i` (and `i + M`) `nᵢ` times. For a pure
//! state `A = B ⊕ B̄`, so `p(n) = |Haf(B_n)|² / (√det Q · ∏ nᵢ!)` with an
//! `N`-dimensional hafnian instead of a `2N`-dimensional one; that path is
//! taken whenever the off-diagonal block of `A` vanishes.

use super::{GaussianState, PhotonPattern};
use crate::error::{Error, Result};
use crate::numerics::{hafnian_dense, CMatrix, C64};

/// Largest total photon number accepted per pattern.
pub const MAX_PATTERN_PHOTONS: usize = 16;

/// Off-diagonal block magnitude below which the state is treated as pure.
const PURE_TOL: f64 = 1e-12;
/// Negative round-off tolerated (and clamped) in returned probabilities.
const NEGATIVE_TOL: f64 = 1e-12;

/// Per-state precomputation shared by all pattern evaluations.
#[derive(Debug, Clone)]
pub struct ProbabilityKernel {
    modes: usize,
    a: CMatrix,
    pure: bool,
    sqrt_det_q: f64,
}

impl ProbabilityKernel {
    pub fn new(state: &GaussianState) -> Result<Self> {
        let mut k = Self::general(state)?;
        let m = k.modes;
        let off = k.a.view((0, m), (m, m)).iter().fold(0.0f64, |acc, z| acc.max(z.norm()));
        k.pure = off < PURE_TOL;
        Ok(k)
    }

    /// Always evaluates the `2N`-dimensional mixed-state hafnian.
    pub fn general(state: &GaussianState) -> Result<Self> {
        state.check_physical()?;
        let m = state.mode_count();
        let cov = state.cov();
        // σ_a = R·cov·R†, R = [[I, iI], [I, −iI]]/√2
        let r = CMatrix::from_fn(2 * m, 2 * m, |i, j| {
            let same = i % m == j % m;
            if !same {
                return C64::new(0.0, 0.0);
            }
            let v = match (i < m, j < m) {
                (_, true) => C64::new(1.0, 0.0),
                (true, false) => C64::new(0.0, 1.0),
                (false, false) => C64::new(0.0, -1.0),
            };
            v * std::f64::consts::FRAC_1_SQRT_2
        });
        let cov_c = cov.map(|x| C64::new(x, 0.0));
        let q = &r * cov_c * r.adjoint() + CMatrix::identity(2 * m, 2 * m) * C64::new(0.5, 0.0);
        let lu = q.clone().lu();
        let det = lu.determinant();
        if det.re.is_nan() || det.re <= 0.0 || det.im.abs() > 1e-8 * det.re {
            return Err(Error::Numerical(format!("det Q = {det} is not positive real")));
        }
        let q_inv = lu.try_inverse().ok_or_else(|| Error::Numerical("Q is singular".into()))?;
        let i_minus = CMatrix::identity(2 * m, 2 * m) - q_inv;
        let a = CMatrix::from_fn(2 * m, 2 * m, |i, j| i_minus[((i + m) % (2 * m), j)]);
        Ok(Self { modes: m, a, pure: false, sqrt_det_q: det.re.sqrt() })
    }

    pub fn is_pure(&self) -> bool {
        self.pure
    }

    pub fn mode_count(&self) -> usize {
        self.modes
    }

    pub fn probability(&self, n: &PhotonPattern) -> Result<f64> {
        n.check_modes(self.modes)?;
        let total = n.total();
        if total > MAX_PATTERN_PHOTONS {
            return Err(Error::PatternTooLarge { total, limit: MAX_PATTERN_PHOTONS });
        }
        let p = self.evaluate(n.counts());
        if p < -NEGATIVE_TOL {
            return Err(Error::Numerical(format!("negative probability {p:e}")));
        }
        Ok(p.max(0.0))
    }

    /// Unchecked evaluation for enumeration loops (counts already validated).
    pub(crate) fn evaluate(&self, counts: &[u8]) -> f64 {
        let m = self.modes;
        let mut idx: Vec<usize> = Vec::with_capacity(2 * MAX_PATTERN_PHOTONS);
        let mut norm = self.sqrt_det_q;
        for (i, &c) in counts.iter().enumerate() {
            for _ in 0..c {
                idx.push(i);
            }
            norm *= factorial(c);
        }
        let n = idx.len();
        if self.pure {
            if n % 2 == 1 {
                return 0.0;
            }
            let sub = gather(&self.a, &idx, &idx);
            let h = hafnian_dense(&sub, n);
            h.norm_sqr() / norm
        } else {
            let full: Vec<usize> = idx.iter().copied().chain(idx.iter().map(|i| i + m)).collect();
            let sub = gather(&self.a, &full, &full);
            hafnian_dense(&sub, 2 * n).re / norm
        }
    }
}

fn gather(a: &CMatrix, rows: &[usize], cols: &[usize]) -> Vec<C64> {
    let mut out = Vec::with_capacity(rows.len() * cols.len());
    for &r in rows {
        for &c in cols {
            out.push(a[(r, c)]);
        }
    }
    out
}

fn factorial(c: u8) -> f64 {
    (1..=c as u64).product::<u64>() as f64
}

/// Probability of one pattern.
pub fn pattern_probability(s: &GaussianState, n: &PhotonPattern) -> Result<f64> {
    ProbabilityKernel::new(s)?.probability(n)
}
