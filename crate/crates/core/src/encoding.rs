//! Graph → GBS program encoding.
//!
//! `B = Ω·K·Ω` with `Ω_ii = c·(1 + α·ω_i)` and `K` either the graph Laplacian
//! `D − A` or the adjacency matrix `A`. The Takagi values of `B` become
//! `tanh(r_i)` and its Takagi unitary becomes the interferometer.
//!
//! The hafnian of a submatrix never reads its diagonal, so on collision-free
//! patterns both kernels give the same relative probabilities; they differ in
//! the spectrum (hence the achievable `c`) and on collision patterns.

use nalgebra::{DMatrix, SymmetricEigen};
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::graph::WeightedGraph;
use crate::numerics::{takagi, CMatrix, SymmetricMatrix, UnitaryMatrix};

pub const DEFAULT_TARGET_MAX_EIG: f64 = 0.9;
pub const DEFAULT_ALPHA: f64 = 0.1;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Default, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum KernelMode {
    #[default]
    Laplacian,
    Adjacency,
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct EncodingParams {
    pub c: f64,
    pub alpha: f64,
    pub target_max_eig: f64,
    #[serde(default)]
    pub mode: KernelMode,
}

impl EncodingParams {
    pub fn validate(&self) -> Result<()> {
        if !(self.c > 0.0 && self.c.is_finite()) {
            return Err(Error::validation(format!("c must be positive, got {}", self.c)));
        }
        if !self.alpha.is_finite() {
            return Err(Error::validation("alpha must be finite"));
        }
        check_target(self.target_max_eig)
    }
}

fn check_target(t: f64) -> Result<()> {
    if t > 0.0 && t < 1.0 {
        Ok(())
    } else {
        Err(Error::validation(format!("target_max_eig must lie in (0,1), got {t}")))
    }
}

/// 0.1 when any node carries a non-zero weight, otherwise 0.
pub fn default_alpha(g: &WeightedGraph) -> f64 {
    if g.weights().iter().any(|&w| w != 0.0) {
        DEFAULT_ALPHA
    } else {
        0.0
    }
}

/// Squeezing, interferometer and per-mode transmission of one machine run.
#[derive(Debug, Clone, PartialEq)]
pub struct GbsProgram {
    squeezing: Vec<f64>,
    unitary: UnitaryMatrix,
    loss: Vec<f64>,
}

impl GbsProgram {
    /// Direct specification, bypassing graph encoding.
    pub fn new(squeezing: Vec<f64>, unitary: UnitaryMatrix, loss: Vec<f64>) -> Result<Self> {
        let m = unitary.dim();
        if m == 0 {
            return Err(Error::validation("program needs at least one mode"));
        }
        if squeezing.len() != m || loss.len() != m {
            return Err(Error::validation(format!(
                "program lengths disagree: {} squeezers, {}-mode unitary, {} loss entries",
                squeezing.len(),
                m,
                loss.len()
            )));
        }
        if let Some((i, r)) = squeezing.iter().enumerate().find(|(_, r)| !(r.is_finite() && **r >= 0.0)) {
            return Err(Error::validation(format!("squeezing r[{i}] = {r} must be finite and ≥ 0")));
        }
        if let Some((i, e)) = loss.iter().enumerate().find(|(_, e)| !(0.0..=1.0).contains(*e)) {
            return Err(Error::validation(format!("transmission η[{i}] = {e} outside [0,1]")));
        }
        Ok(Self { squeezing, unitary, loss })
    }

    pub fn vacuum(modes: usize) -> Result<Self> {
        Self::new(vec![0.0; modes], UnitaryMatrix::identity(modes), vec![1.0; modes])
    }

    pub fn mode_count(&self) -> usize {
        self.squeezing.len()
    }

    pub fn squeezing(&self) -> &[f64] {
        &self.squeezing
    }

    pub fn unitary(&self) -> &UnitaryMatrix {
        &self.unitary
    }

    pub fn loss(&self) -> &[f64] {
        &self.loss
    }

    pub fn with_loss(mut self, loss: Vec<f64>) -> Result<Self> {
        self.loss = loss;
        Self::new(self.squeezing, self.unitary, self.loss)
    }

    /// `U·diag(tanh r)·Uᵀ`, the matrix this program realizes.
    pub fn kernel(&self) -> CMatrix {
        let u = self.unitary.matrix();
        let scaled = CMatrix::from_fn(u.nrows(), u.ncols(), |i, j| u[(i, j)] * self.squeezing[j].tanh());
        scaled * u.transpose()
    }
}

/// Graph Laplacian `D − A` with edge weights.
pub fn laplacian(g: &WeightedGraph) -> SymmetricMatrix {
    real_symmetric(&laplacian_real(g))
}

fn laplacian_real(g: &WeightedGraph) -> DMatrix<f64> {
    let n = g.node_count();
    let mut l = DMatrix::zeros(n, n);
    for &(i, j, w) in g.edges() {
        l[(i, j)] -= w;
        l[(j, i)] -= w;
        l[(i, i)] += w;
        l[(j, j)] += w;
    }
    l
}

fn real_symmetric(m: &DMatrix<f64>) -> SymmetricMatrix {
    SymmetricMatrix::from_real(m).expect("constructed symmetric and finite")
}

/// `Ω·K·Ω`, entries computed once per unordered pair so the result is exactly
/// symmetric.
pub fn rescale(g: &WeightedGraph, p: &EncodingParams) -> Result<SymmetricMatrix> {
    p.validate()?;
    Ok(real_symmetric(&rescale_real(g, p)?))
}

fn omega(g: &WeightedGraph, c: f64, alpha: f64) -> Result<Vec<f64>> {
    g.weights()
        .iter()
        .enumerate()
        .map(|(i, &w)| {
            let o = c * (1.0 + alpha * w);
            if o > 0.0 {
                Ok(o)
            } else {
                Err(Error::validation(format!(
                    "Ω[{i}] = {o} is not positive (alpha = {alpha} too negative for weight {w})"
                )))
            }
        })
        .collect()
}

fn rescale_real(g: &WeightedGraph, p: &EncodingParams) -> Result<DMatrix<f64>> {
    let om = omega(g, p.c, p.alpha)?;
    let k = match p.mode {
        KernelMode::Laplacian => laplacian_real(g),
        KernelMode::Adjacency => g.adjacency_matrix(),
    };
    let n = g.node_count();
    let mut b = DMatrix::zeros(n, n);
    for i in 0..n {
        for j in i..n {
            let v = om[i] * k[(i, j)] * om[j];
            b[(i, j)] = v;
            b[(j, i)] = v;
        }
    }
    Ok(b)
}

/// Largest |eigenvalue| of a real symmetric matrix (its largest Takagi value).
fn spectral_radius(m: &DMatrix<f64>) -> f64 {
    if m.is_empty() {
        return 0.0;
    }
    SymmetricEigen::new(m.clone()).eigenvalues.iter().fold(0.0, |acc, v| acc.max(v.abs()))
}

/// Picks `c` so that the largest Takagi value of `rescale(g, {c, alpha})`
/// equals `target_max_eig`. `B` scales as `c²`, so one eigensolve at `c = 1`
/// suffices. Graphs whose kernel vanishes keep `c = 1`.
pub fn choose_scale(g: &WeightedGraph, alpha: f64, target_max_eig: f64, mode: KernelMode) -> Result<EncodingParams> {
    check_target(target_max_eig)?;
    let mut p = EncodingParams { c: 1.0, alpha, target_max_eig, mode };
    p.validate()?;
    let radius = spectral_radius(&rescale_real(g, &p)?);
    if radius > 0.0 {
        p.c = (target_max_eig / radius).sqrt();
    }
    Ok(p)
}

/// Takagi-decomposes `b` into squeezing `r_i = artanh(λ_i)` and unitary `U`.
pub fn encode(b: &SymmetricMatrix, loss: Vec<f64>) -> Result<GbsProgram> {
    let t = takagi(b)?;
    if let Some((index, &value)) = t.values.iter().enumerate().find(|(_, v)| **v >= 1.0) {
        return Err(Error::Spectrum { value, index });
    }
    let r = t.values.iter().map(|l| l.atanh()).collect();
    GbsProgram::new(r, t.unitary, loss)
}

/// `rescale` then `encode` with a lossless machine.
pub fn encode_graph(g: &WeightedGraph, p: &EncodingParams) -> Result<GbsProgram> {
    encode(&rescale(g, p)?, vec![1.0; g.node_count()])
}

/// Convenience used by the application front ends: default α, the given
/// target spectrum, Laplacian kernel unless `mode` says otherwise.
pub fn auto_encode(g: &WeightedGraph, target_max_eig: f64, mode: KernelMode) -> Result<(EncodingParams, GbsProgram)> {
    let p = choose_scale(g, default_alpha(g), target_max_eig, mode)?;
    let program = encode_graph(g, &p)?;
    Ok((p, program))
}

/// Ω diagonal for diagnostics and tests.
pub fn omega_diagonal(g: &WeightedGraph, p: &EncodingParams) -> Result<Vec<f64>> {
    omega(g, p.c, p.alpha)
}
