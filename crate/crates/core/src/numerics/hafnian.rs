//! Hafnian by the power-trace inclusion–exclusion formula.
//!
//! Indices are grouped into the fixed pairs `(2k, 2k+1)`. For every subset `Z`
//! of pairs let `C_Z` be the submatrix on the paired indices with the rows of
//! each pair swapped. Then
//!
//! ```text
//! haf(A) = Σ_Z (−1)^(m−|Z|) · [λ^m] exp( Σ_{k=1..m} tr(C_Z^k) / (2k) · λ^k )
//! ```
//!
//! for `A` of dimension `2m`, i.e. `2^m` subsets each costing `O(m · (2m)^3)`.

use super::{SymmetricMatrix, C64, ONE, ZERO};

/// Sum over perfect matchings of `∏ M[i][j]`. Empty matrix gives 1, odd
/// dimension gives 0.
pub fn hafnian(m: &SymmetricMatrix) -> C64 {
    let n = m.dim();
    // nalgebra storage is column-major; symmetry makes it equal to row-major.
    hafnian_dense(m.matrix().as_slice(), n)
}

/// Hafnian of a symmetric `n×n` matrix stored densely (either major order).
pub(crate) fn hafnian_dense(a: &[C64], n: usize) -> C64 {
    debug_assert_eq!(a.len(), n * n);
    if n == 0 {
        return ONE;
    }
    if n % 2 == 1 {
        return ZERO;
    }
    if n == 2 {
        return a[1];
    }
    let m = n / 2;
    let mut ws = Workspace::new(n);
    let mut total = ZERO;
    for mask in 1u64..(1u64 << m) {
        let term = ws.subset_term(a, n, m, mask);
        let excluded = m - mask.count_ones() as usize;
        if excluded.is_multiple_of(2) {
            total += term;
        } else {
            total -= term;
        }
    }
    total
}

struct Workspace {
    idx: Vec<usize>,
    c: Vec<C64>,
    pow: Vec<C64>,
    tmp: Vec<C64>,
    traces: Vec<C64>,
    coeffs: Vec<C64>,
}

impl Workspace {
    fn new(n: usize) -> Self {
        let m = n / 2;
        Self {
            idx: Vec::with_capacity(n),
            c: vec![ZERO; n * n],
            pow: vec![ZERO; n * n],
            tmp: vec![ZERO; n * n],
            traces: vec![ZERO; m + 1],
            coeffs: vec![ZERO; m + 1],
        }
    }

    fn subset_term(&mut self, a: &[C64], n: usize, m: usize, mask: u64) -> C64 {
        self.idx.clear();
        for k in 0..m {
            if mask >> k & 1 == 1 {
                self.idx.push(2 * k);
                self.idx.push(2 * k + 1);
            }
        }
        let s = self.idx.len();
        for r in 0..s {
            let src = self.idx[r ^ 1];
            for col in 0..s {
                self.c[r * s + col] = a[src * n + self.idx[col]];
            }
        }

        self.pow[..s * s].copy_from_slice(&self.c[..s * s]);
        for k in 1..=m {
            if k > 1 {
                matmul(&self.pow[..s * s], &self.c[..s * s], &mut self.tmp[..s * s], s);
                std::mem::swap(&mut self.pow, &mut self.tmp);
            }
            let tr: C64 = (0..s).map(|i| self.pow[i * s + i]).sum();
            self.traces[k] = tr / (2 * k) as f64;
        }

        // Coefficients of exp(Σ t_k λ^k): e_j = (1/j) Σ_{k=1..j} k·t_k·e_{j−k}.
        self.coeffs[0] = ONE;
        for j in 1..=m {
            let mut acc = ZERO;
            for k in 1..=j {
                acc += self.traces[k] * self.coeffs[j - k] * k as f64;
            }
            self.coeffs[j] = acc / j as f64;
        }
        self.coeffs[m]
    }
}

fn matmul(a: &[C64], b: &[C64], out: &mut [C64], s: usize) {
    for i in 0..s {
        let row = &mut out[i * s..(i + 1) * s];
        row.fill(ZERO);
        for k in 0..s {
            let aik = a[i * s + k];
            if aik == ZERO {
                continue;
            }
            let brow = &b[k * s..(k + 1) * s];
            for (o, bkj) in row.iter_mut().zip(brow) {
                *o += aik * bkj;
            }
        }
    }
}
