use rand_distr::{Distribution, StandardNormal};

use super::{CMatrix, UnitaryMatrix, C64};
use crate::error::{Error, Result};
use crate::seeding::{self, Stream};

/// Haar-random unitary: QR of a complex Ginibre matrix with the phases of
/// `diag(R)` moved into `Q`. Bit-identical for a given `(dim, seed)`.
pub fn random_unitary(dim: usize, seed: u64) -> Result<UnitaryMatrix> {
    if dim == 0 {
        return Err(Error::validation("unitary dimension must be at least 1"));
    }
    let mut rng = seeding::rng(seed, Stream::Unitary, 0);
    let mut draw = || -> f64 { StandardNormal.sample(&mut rng) };
    // filled column by column so the draw order does not depend on storage
    let mut z = CMatrix::zeros(dim, dim);
    for j in 0..dim {
        for i in 0..dim {
            z[(i, j)] = C64::new(draw(), draw()) * std::f64::consts::FRAC_1_SQRT_2;
        }
    }
    let qr = z.qr();
    let (mut q, r) = qr.unpack();
    for j in 0..dim {
        let d = r[(j, j)];
        let phase = if d.norm() > 0.0 { d / d.norm() } else { C64::new(1.0, 0.0) };
        for i in 0..dim {
            q[(i, j)] *= phase;
        }
    }
    UnitaryMatrix::new(q)
}
