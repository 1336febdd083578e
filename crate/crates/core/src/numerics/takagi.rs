//! Autonne–Takagi factorization `B = U·diag(λ)·Uᵀ` of a complex symmetric
//! matrix, with `U` unitary and `λ ≥ 0` sorted descending.
//!
//! Real `B` goes through the real symmetric eigendecomposition
//! `B = V·diag(μ)·Vᵀ`: `λ_k = |μ_k|` and the columns of `V` belonging to
//! negative `μ_k` are multiplied by `i`, since `(i·v)(i·v)ᵀ = −v·vᵀ`.
//!
//! Complex `B = X + iY` is reduced to the real symmetric matrix
//! `[[X, Y], [Y, −X]]`, whose eigenpairs come in `±σ` couples
//! `[a; b] ↦ [−b; a]`. Each non-negative eigenvector gives a Takagi vector
//! `u = a + i·b` with `B·ū = σ·u`.

use nalgebra::{DMatrix, DVector, SymmetricEigen};

use super::{CMatrix, SymmetricMatrix, UnitaryMatrix, C64};
use crate::error::{Error, Result};

/// Takagi values below this are reported as exactly zero.
pub const TAKAGI_ZERO: f64 = 1e-12;

#[derive(Debug, Clone)]
pub struct Takagi {
    pub unitary: UnitaryMatrix,
    /// Non-negative, descending.
    pub values: Vec<f64>,
}

impl Takagi {
    /// `U·diag(λ)·Uᵀ`.
    pub fn reconstruct(&self) -> CMatrix {
        let u = self.unitary.matrix();
        let scaled = CMatrix::from_fn(u.nrows(), u.ncols(), |i, j| u[(i, j)] * self.values[j]);
        scaled * u.transpose()
    }
}

pub fn takagi(b: &SymmetricMatrix) -> Result<Takagi> {
    let n = b.dim();
    if n == 0 {
        return Ok(Takagi { unitary: UnitaryMatrix::identity(0), values: vec![] });
    }
    let (columns, values) = if b.is_real() { real_path(b) } else { complex_path(b)? };

    let mut order: Vec<usize> = (0..n).collect();
    // stable: ties keep their eigen-solver order
    order.sort_by(|&x, &y| values[y].total_cmp(&values[x]));

    let u = CMatrix::from_fn(n, n, |i, j| columns[order[j]][i]);
    let values = order.iter().map(|&k| if values[k] < TAKAGI_ZERO { 0.0 } else { values[k] }).collect();
    let unitary =
        UnitaryMatrix::new(u).map_err(|e| Error::Numerical(format!("Takagi vectors lost orthonormality: {e}")))?;
    Ok(Takagi { unitary, values })
}

fn real_path(b: &SymmetricMatrix) -> (Vec<Vec<C64>>, Vec<f64>) {
    let n = b.dim();
    let x = DMatrix::from_fn(n, n, |i, j| b.matrix()[(i, j)].re);
    let eig = SymmetricEigen::new(x);
    let mut vectors: Vec<DVector<f64>> = (0..n).map(|k| eig.eigenvectors.column(k).into_owned()).collect();
    let mu: Vec<f64> = eig.eigenvalues.iter().copied().collect();
    let scale = mu.iter().fold(1.0f64, |acc, v| acc.max(v.abs()));

    // Re-orthonormalize each cluster of numerically equal eigenvalues.
    let mut visited = vec![false; n];
    for k in 0..n {
        if visited[k] {
            continue;
        }
        let cluster: Vec<usize> = (k..n).filter(|&j| !visited[j] && (mu[j] - mu[k]).abs() <= 1e-10 * scale).collect();
        for (pos, &j) in cluster.iter().enumerate() {
            visited[j] = true;
            for &prev in &cluster[..pos] {
                let proj = vectors[prev].dot(&vectors[j]);
                let p = vectors[prev].clone();
                vectors[j].axpy(-proj, &p, 1.0);
            }
            let norm = vectors[j].norm();
            vectors[j] /= norm;
        }
    }

    let columns = vectors
        .iter()
        .zip(&mu)
        .map(|(v, &m)| {
            let phase = if m < 0.0 { C64::i() } else { C64::new(1.0, 0.0) };
            v.iter().map(|&x| phase * x).collect()
        })
        .collect();
    (columns, mu.iter().map(|m| m.abs()).collect())
}

fn complex_path(b: &SymmetricMatrix) -> Result<(Vec<Vec<C64>>, Vec<f64>)> {
    let n = b.dim();
    let m = b.matrix();
    let embed = DMatrix::from_fn(2 * n, 2 * n, |i, j| {
        let (bi, bj) = (i % n, j % n);
        let z = m[(bi, bj)];
        match (i < n, j < n) {
            (true, true) => z.re,
            (false, false) => -z.re,
            _ => z.im,
        }
    });
    let eig = SymmetricEigen::new(embed);
    let mut order: Vec<usize> = (0..2 * n).collect();
    order.sort_by(|&x, &y| eig.eigenvalues[y].total_cmp(&eig.eigenvalues[x]));

    let partner =
        |v: &DVector<f64>| -> DVector<f64> { DVector::from_fn(2 * n, |i, _| if i < n { -v[i + n] } else { v[i - n] }) };

    // Symplectic Gram–Schmidt: each accepted vector excludes itself and its
    // partner, which only matters inside the null space.
    let mut accepted: Vec<(DVector<f64>, f64)> = Vec::with_capacity(n);
    let mut basis: Vec<DVector<f64>> = Vec::with_capacity(2 * n);
    for &k in &order {
        if accepted.len() == n {
            break;
        }
        let mut v = eig.eigenvectors.column(k).into_owned();
        for q in &basis {
            let proj = q.dot(&v);
            v.axpy(-proj, q, 1.0);
        }
        let norm = v.norm();
        if norm < 0.5 {
            continue;
        }
        v /= norm;
        let w = partner(&v);
        basis.push(v.clone());
        basis.push(w);
        accepted.push((v, eig.eigenvalues[k].max(0.0)));
    }
    if accepted.len() != n {
        return Err(Error::Numerical("Takagi null-space completion failed".into()));
    }
    let columns = accepted.iter().map(|(v, _)| (0..n).map(|i| C64::new(v[i], v[i + n])).collect()).collect();
    Ok((columns, accepted.iter().map(|(_, s)| *s).collect()))
}
