//! Dense complex linear algebra and combinatorial kernels: the symmetric and
//! unitary matrix newtypes, Takagi factorization, the hafnian and Haar-random
//! unitaries.

mod hafnian;
mod takagi;
mod unitary;

pub use hafnian::hafnian;
pub(crate) use hafnian::hafnian_dense;
pub use takagi::{takagi, Takagi};
pub use unitary::random_unitary;

use nalgebra::DMatrix;
use num_complex::Complex64;

use crate::error::{Error, Result};

pub type C64 = Complex64;
pub type CMatrix = DMatrix<C64>;

/// Default unitarity tolerance (max absolute entry of `U·U† − I`).
pub const UNITARITY_TOL: f64 = 1e-10;

pub(crate) const ZERO: C64 = C64::new(0.0, 0.0);
pub(crate) const ONE: C64 = C64::new(1.0, 0.0);

/// A square complex matrix whose stored entries satisfy `m[i][j] == m[j][i]`
/// bit for bit.
#[derive(Debug, Clone, PartialEq)]
pub struct SymmetricMatrix(CMatrix);

impl SymmetricMatrix {
    /// Validates squareness, finiteness and exact symmetry.
    pub fn new(m: CMatrix) -> Result<Self> {
        if m.nrows() != m.ncols() {
            return Err(Error::validation(format!("matrix is {}x{}, expected square", m.nrows(), m.ncols())));
        }
        check_finite(&m)?;
        let n = m.nrows();
        for i in 0..n {
            for j in (i + 1)..n {
                if m[(i, j)] != m[(j, i)] {
                    return Err(Error::validation(format!(
                        "matrix is not symmetric at ({i},{j}): {} vs {}",
                        m[(i, j)],
                        m[(j, i)]
                    )));
                }
            }
        }
        Ok(Self(m))
    }

    pub fn from_real(m: &DMatrix<f64>) -> Result<Self> {
        Self::new(m.map(|x| C64::new(x, 0.0)))
    }

    /// Averages `m` with its transpose after checking that the asymmetry is at
    /// most `tol` in every entry. Used for matrices that are symmetric in exact
    /// arithmetic but were produced by floating-point products.
    pub fn symmetrize(m: CMatrix, tol: f64) -> Result<Self> {
        if m.nrows() != m.ncols() {
            return Err(Error::validation("matrix is not square"));
        }
        check_finite(&m)?;
        let n = m.nrows();
        let mut out = m.clone();
        for i in 0..n {
            for j in (i + 1)..n {
                let (a, b) = (m[(i, j)], m[(j, i)]);
                if (a - b).norm() > tol {
                    return Err(Error::validation(format!(
                        "matrix asymmetry {} at ({i},{j}) exceeds {tol}",
                        (a - b).norm()
                    )));
                }
                let avg = (a + b) * 0.5;
                out[(i, j)] = avg;
                out[(j, i)] = avg;
            }
        }
        Ok(Self(out))
    }

    pub fn zeros(dim: usize) -> Self {
        Self(CMatrix::zeros(dim, dim))
    }

    pub fn dim(&self) -> usize {
        self.0.nrows()
    }

    pub fn matrix(&self) -> &CMatrix {
        &self.0
    }

    pub fn into_inner(self) -> CMatrix {
        self.0
    }

    pub fn is_real(&self) -> bool {
        self.0.iter().all(|z| z.im == 0.0)
    }

    /// Submatrix on `indices` (repeats allowed); symmetric by construction.
    pub fn select(&self, indices: &[usize]) -> SymmetricMatrix {
        let k = indices.len();
        Self(CMatrix::from_fn(k, k, |r, c| self.0[(indices[r], indices[c])]))
    }
}

/// A square complex matrix with `U·U†` equal to the identity within a
/// tolerance checked on construction.
#[derive(Debug, Clone, PartialEq)]
pub struct UnitaryMatrix(CMatrix);

impl UnitaryMatrix {
    pub fn new(m: CMatrix) -> Result<Self> {
        Self::with_tolerance(m, UNITARITY_TOL)
    }

    pub fn with_tolerance(m: CMatrix, tol: f64) -> Result<Self> {
        if m.nrows() != m.ncols() {
            return Err(Error::validation("unitary must be square"));
        }
        check_finite(&m)?;
        let dev = unitarity_deviation(&m);
        if dev > tol {
            return Err(Error::validation(format!(
                "matrix is not unitary: max |U·U† − I| = {dev:.3e} exceeds {tol:.1e}"
            )));
        }
        Ok(Self(m))
    }

    pub fn identity(dim: usize) -> Self {
        Self(CMatrix::identity(dim, dim))
    }

    pub fn dim(&self) -> usize {
        self.0.nrows()
    }

    pub fn matrix(&self) -> &CMatrix {
        &self.0
    }

    pub fn into_inner(self) -> CMatrix {
        self.0
    }
}

/// Max absolute entry of `m·m† − I`.
pub fn unitarity_deviation(m: &CMatrix) -> f64 {
    let n = m.nrows();
    let prod = m * m.adjoint();
    max_abs_diff(&prod, &CMatrix::identity(n, n))
}

pub fn max_abs_diff(a: &CMatrix, b: &CMatrix) -> f64 {
    assert_eq!(a.shape(), b.shape());
    a.iter().zip(b.iter()).map(|(x, y)| (x - y).norm()).fold(0.0, f64::max)
}

fn check_finite(m: &CMatrix) -> Result<()> {
    match m.iter().position(|z| !z.re.is_finite() || !z.im.is_finite()) {
        None => Ok(()),
        Some(k) => Err(Error::validation(format!("non-finite entry at ({}, {})", k % m.nrows(), k / m.nrows()))),
    }
}
