use nalgebra::{DMatrix, SymmetricEigen};

use crate::encoding::GbsProgram;
use crate::error::{Error, Result};
use crate::numerics::{CMatrix, C64};

/// Tolerance on the smallest eigenvalue of `cov + i·Ω/2`.
const PHYSICALITY_TOL: f64 = 1e-9;

/// Zero-mean Gaussian state given by its `2M×2M` quadrature covariance.
#[derive(Debug, Clone, PartialEq)]
pub struct GaussianState {
    cov: DMatrix<f64>,
}

impl GaussianState {
    pub fn vacuum(modes: usize) -> Self {
        Self { cov: DMatrix::identity(2 * modes, 2 * modes) * 0.5 }
    }

    /// Validates shape, symmetry and the uncertainty principle.
    pub fn from_covariance(cov: DMatrix<f64>) -> Result<Self> {
        if cov.nrows() != cov.ncols() || !cov.nrows().is_multiple_of(2) {
            return Err(Error::validation("covariance must be square with even dimension"));
        }
        if cov.iter().any(|v| !v.is_finite()) {
            return Err(Error::validation("covariance has non-finite entries"));
        }
        let asym = (&cov - cov.transpose()).amax();
        if asym > 1e-12 * cov.amax().max(1.0) {
            return Err(Error::validation(format!("covariance asymmetry {asym:.2e}")));
        }
        let state = Self { cov };
        state.check_physical()?;
        Ok(state)
    }

    pub fn mode_count(&self) -> usize {
        self.cov.nrows() / 2
    }

    pub fn cov(&self) -> &DMatrix<f64> {
        &self.cov
    }

    /// `cov + i·Ω/2 ⪰ 0` with `Ω = [[0, I], [−I, 0]]`.
    pub fn check_physical(&self) -> Result<()> {
        let m = self.mode_count();
        let h = CMatrix::from_fn(2 * m, 2 * m, |i, j| {
            let omega = match (i < m, j < m) {
                (true, false) if j - m == i => 0.5,
                (false, true) if i - m == j => -0.5,
                _ => 0.0,
            };
            C64::new(self.cov[(i, j)], omega)
        });
        let min = SymmetricEigen::new(h).eigenvalues.iter().copied().fold(f64::INFINITY, f64::min);
        if min < -PHYSICALITY_TOL {
            return Err(Error::validation(format!("unphysical covariance: cov + iΩ/2 has eigenvalue {min:.3e}")));
        }
        Ok(())
    }
}

/// Squeeze each mode, apply the interferometer's symplectic image, then apply
/// per-mode loss `σ ↦ √η·σ·√η + (1 − η)/2`.
pub fn prepare_state(p: &GbsProgram) -> Result<GaussianState> {
    let m = p.mode_count();
    if let Some((i, e)) = p.loss().iter().enumerate().find(|(_, e)| !(0.0..=1.0).contains(*e)) {
        return Err(Error::validation(format!("transmission η[{i}] = {e} outside [0,1]")));
    }
    let mut cov = DMatrix::zeros(2 * m, 2 * m);
    for (i, &r) in p.squeezing().iter().enumerate() {
        cov[(i, i)] = (-2.0 * r).exp() / 2.0;
        cov[(i + m, i + m)] = (2.0 * r).exp() / 2.0;
    }
    let u = p.unitary().matrix();
    let s = DMatrix::from_fn(2 * m, 2 * m, |i, j| {
        let z = u[(i % m, j % m)];
        match (i < m, j < m) {
            (true, true) | (false, false) => z.re,
            (true, false) => -z.im,
            (false, true) => z.im,
        }
    });
    let mut cov = &s * cov * s.transpose();
    cov = (&cov + cov.transpose()) * 0.5;

    let scale: Vec<f64> = (0..2 * m).map(|k| p.loss()[k % m].sqrt()).collect();
    for i in 0..2 * m {
        for j in 0..2 * m {
            cov[(i, j)] *= scale[i] * scale[j];
        }
        cov[(i, i)] += (1.0 - p.loss()[i % m]) / 2.0;
    }
    Ok(GaussianState { cov })
}
