use serde::{Deserialize, Serialize};

use super::{cell_matrix, wrap_phase};
use crate::error::{Error, Result};
use crate::numerics::{CMatrix, UnitaryMatrix, C64, UNITARITY_TOL};

/// One MZI acting on modes `(mode, mode + 1)`.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct MziSetting {
    pub mode: usize,
    pub theta: f64,
    pub phi: f64,
    /// Column of the rectangular mesh this cell sits in.
    pub layer: usize,
}

impl MziSetting {
    pub fn mode_pair(&self) -> (usize, usize) {
        (self.mode, self.mode + 1)
    }
}

/// Cells in application order (grouped by layer), followed by a diagonal of
/// output phases.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Mesh {
    mode_count: usize,
    cells: Vec<MziSetting>,
    output_phases: Vec<f64>,
}

impl Mesh {
    pub fn new(mode_count: usize, cells: Vec<MziSetting>, output_phases: Vec<f64>) -> Result<Self> {
        let n = mode_count;
        if n == 0 {
            return Err(Error::validation("mesh needs at least one mode"));
        }
        if cells.len() != n * (n - 1) / 2 {
            return Err(Error::validation(format!(
                "{n}-mode mesh needs {} cells, got {}",
                n * (n - 1) / 2,
                cells.len()
            )));
        }
        if output_phases.len() != n {
            return Err(Error::validation("output phase count must equal mode count"));
        }
        let half_pi = std::f64::consts::FRAC_PI_2;
        let tau = std::f64::consts::TAU;
        let mut busy_until = vec![None::<usize>; n];
        let mut last_layer = 0;
        for (idx, c) in cells.iter().enumerate() {
            if c.mode + 1 >= n {
                return Err(Error::validation(format!("cell {idx} acts on modes beyond {n}")));
            }
            if !(0.0..=half_pi).contains(&c.theta) || !(0.0..tau).contains(&c.phi) {
                return Err(Error::validation(format!(
                    "cell {idx} angles out of range: θ = {}, φ = {}",
                    c.theta, c.phi
                )));
            }
            if c.layer < last_layer {
                return Err(Error::validation(format!("cell {idx} breaks layer order")));
            }
            last_layer = c.layer;
            for m in [c.mode, c.mode + 1] {
                if busy_until[m].is_some_and(|l| l >= c.layer) {
                    return Err(Error::validation(format!(
                        "cell {idx} shares mode {m} with an earlier cell in layer {}",
                        c.layer
                    )));
                }
                busy_until[m] = Some(c.layer);
            }
        }
        if output_phases.iter().any(|p| !p.is_finite()) {
            return Err(Error::validation("non-finite output phase"));
        }
        Ok(Self { mode_count, cells, output_phases })
    }

    pub fn mode_count(&self) -> usize {
        self.mode_count
    }

    pub fn cells(&self) -> &[MziSetting] {
        &self.cells
    }

    pub fn output_phases(&self) -> &[f64] {
        &self.output_phases
    }

    pub fn depth(&self) -> usize {
        self.cells.last().map_or(0, |c| c.layer + 1)
    }
}

fn apply_left(u: &mut CMatrix, k: usize, t: &[[C64; 2]; 2]) {
    for col in 0..u.ncols() {
        let (a, b) = (u[(k, col)], u[(k + 1, col)]);
        u[(k, col)] = t[0][0] * a + t[0][1] * b;
        u[(k + 1, col)] = t[1][0] * a + t[1][1] * b;
    }
}

fn apply_right(u: &mut CMatrix, k: usize, t: &[[C64; 2]; 2]) {
    for row in 0..u.nrows() {
        let (a, b) = (u[(row, k)], u[(row, k + 1)]);
        u[(row, k)] = a * t[0][0] + b * t[1][0];
        u[(row, k + 1)] = a * t[0][1] + b * t[1][1];
    }
}

fn adjoint(t: &[[C64; 2]; 2]) -> [[C64; 2]; 2] {
    [[t[0][0].conj(), t[1][0].conj()], [t[0][1].conj(), t[1][1].conj()]]
}

/// `(θ, φ)` such that `(U·T⁻¹)[r][k] = 0` for columns `(k, k+1)`, where
/// `a = U[r][k]`, `b = U[r][k+1]`.
fn null_from_right(a: C64, b: C64) -> (f64, f64) {
    if a.norm() == 0.0 {
        return (0.0, 0.0);
    }
    if b.norm() == 0.0 {
        return (std::f64::consts::FRAC_PI_2, 0.0);
    }
    let theta = a.norm().atan2(b.norm());
    (theta, wrap_phase(a.arg() - b.arg() - std::f64::consts::FRAC_PI_2))
}

/// `(θ, φ)` such that `(T·U)[k+1][c] = 0` for rows `(k, k+1)`, where
/// `a = U[k][c]`, `b = U[k+1][c]`.
fn null_from_left(a: C64, b: C64) -> (f64, f64) {
    if b.norm() == 0.0 {
        return (0.0, 0.0);
    }
    if a.norm() == 0.0 {
        return (std::f64::consts::FRAC_PI_2, 0.0);
    }
    let theta = b.norm().atan2(a.norm());
    (theta, wrap_phase(b.arg() - a.arg() + std::f64::consts::FRAC_PI_2))
}

/// Rectangular decomposition `U = D · T_last ⋯ T_first`.
///
/// Alternating anti-diagonals of `U` are nulled from the right with `T⁻¹`
/// and from the left with `T`, leaving a diagonal `D`. The left factors are
/// then pushed through `D` using `T(θ,φ)⁻¹·diag(d₁,d₂) = diag(−e^{−iφ}d₂, d₂)·T(θ,φ')`
/// with `e^{iφ'} = −d₁/d₂`.
pub fn clements_decompose(u: &UnitaryMatrix) -> Result<Mesh> {
    let dev = crate::numerics::unitarity_deviation(u.matrix());
    if dev > UNITARITY_TOL {
        return Err(Error::validation(format!("cannot decompose a non-unitary matrix: max |U·U† − I| = {dev:.3e}")));
    }
    let n = u.dim();
    let mut w = u.matrix().clone();
    let mut right: Vec<(usize, f64, f64)> = Vec::new();
    let mut left: Vec<(usize, f64, f64)> = Vec::new();

    for i in 0..n.saturating_sub(1) {
        if i % 2 == 0 {
            for j in 0..=i {
                let (r, k) = (n - 1 - j, i - j);
                let (theta, phi) = null_from_right(w[(r, k)], w[(r, k + 1)]);
                apply_right(&mut w, k, &adjoint(&cell_matrix(theta, phi)));
                right.push((k, theta, phi));
            }
        } else {
            for j in 1..=i + 1 {
                let (k, c) = (n + j - i - 3, j - 1);
                let (theta, phi) = null_from_left(w[(k, c)], w[(k + 1, c)]);
                apply_left(&mut w, k, &cell_matrix(theta, phi));
                left.push((k, theta, phi));
            }
        }
    }

    let mut diag: Vec<C64> = (0..n).map(|i| w[(i, i)]).collect();
    let off = (0..n)
        .flat_map(|i| (0..n).filter(move |&j| j != i).map(move |j| (i, j)))
        .map(|(i, j)| w[(i, j)].norm())
        .fold(0.0, f64::max);
    if off > 1e-8 {
        return Err(Error::Numerical(format!("nulling left off-diagonal residue {off:.2e}")));
    }

    let mut moved = Vec::with_capacity(left.len());
    for &(k, theta, phi) in left.iter().rev() {
        let (d1, d2) = (diag[k], diag[k + 1]);
        let ratio = -d1 / d2;
        let phi_new = wrap_phase(ratio.arg());
        diag[k] = -C64::from_polar(1.0, -phi) * d2;
        moved.push((k, theta, phi_new));
    }

    let sequence: Vec<(usize, f64, f64)> = right.into_iter().chain(moved).collect();
    let mut layer_of_mode = vec![0usize; n];
    let mut cells: Vec<MziSetting> = sequence
        .into_iter()
        .map(|(k, theta, phi)| {
            let layer = layer_of_mode[k].max(layer_of_mode[k + 1]);
            layer_of_mode[k] = layer + 1;
            layer_of_mode[k + 1] = layer + 1;
            MziSetting { mode: k, theta, phi, layer }
        })
        .collect();
    cells.sort_by_key(|c| c.layer);
    let phases = diag.iter().map(|d| wrap_phase(d.arg())).collect();
    Mesh::new(n, cells, phases)
}

/// Product of the cells in order, then the output phase diagonal.
pub fn mesh_compose(m: &Mesh) -> UnitaryMatrix {
    let n = m.mode_count();
    let mut u = CMatrix::identity(n, n);
    for c in m.cells() {
        apply_left(&mut u, c.mode, &cell_matrix(c.theta, c.phi));
    }
    for (i, &p) in m.output_phases().iter().enumerate() {
        let e = C64::from_polar(1.0, p);
        for col in 0..n {
            u[(i, col)] *= e;
        }
    }
    UnitaryMatrix::with_tolerance(u, UNITARITY_TOL).expect("products of unitary cells are unitary")
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::numerics::{max_abs_diff, random_unitary};

    #[test]
    fn single_mode() {
        let phase = C64::from_polar(1.0, -2.0);
        let u = UnitaryMatrix::new(CMatrix::from_element(1, 1, phase)).unwrap();
        let m = clements_decompose(&u).unwrap();
        assert!(m.cells().is_empty());
        assert!((C64::from_polar(1.0, m.output_phases()[0]) - phase).norm() < 1e-15);
    }

    #[test]
    fn two_modes_recover_cell() {
        let t = cell_matrix(0.3, 1.1);
        let u = UnitaryMatrix::new(CMatrix::from_row_slice(2, 2, &[t[0][0], t[0][1], t[1][0], t[1][1]])).unwrap();
        let m = clements_decompose(&u).unwrap();
        assert_eq!(m.cells().len(), 1);
        let c = m.cells()[0];
        assert!((c.theta - 0.3).abs() < 1e-12 && (c.phi - 1.1).abs() < 1e-12, "{c:?}");
        assert!(max_abs_diff(mesh_compose(&m).matrix(), u.matrix()) < 1e-12);
    }

    #[test]
    fn empty_mesh_is_identity() {
        let m = Mesh::new(1, vec![], vec![0.0]).unwrap();
        assert_eq!(mesh_compose(&m).matrix(), &CMatrix::identity(1, 1));
        let cells = vec![
            MziSetting { mode: 0, theta: 0.0, phi: 0.0, layer: 0 },
            MziSetting { mode: 1, theta: 0.0, phi: 0.0, layer: 1 },
            MziSetting { mode: 0, theta: 0.0, phi: 0.0, layer: 2 },
        ];
        let m = Mesh::new(3, cells, vec![0.0; 3]).unwrap();
        assert!(max_abs_diff(mesh_compose(&m).matrix(), &CMatrix::identity(3, 3)) < 1e-15);
    }

    #[test]
    fn half_pi_cell_swaps() {
        let cells = vec![MziSetting { mode: 0, theta: std::f64::consts::FRAC_PI_2, phi: 0.4, layer: 0 }];
        let u = mesh_compose(&Mesh::new(2, cells, vec![0.0; 2]).unwrap());
        let mag = u.matrix().map(|z| z.norm());
        assert!(mag[(0, 0)] < 1e-15 && mag[(1, 1)] < 1e-15);
        assert!((mag[(0, 1)] - 1.0).abs() < 1e-15 && (mag[(1, 0)] - 1.0).abs() < 1e-15);
        assert!((u.matrix()[(1, 0)] - C64::i() * C64::from_polar(1.0, 0.4)).norm() < 1e-15);
    }

    #[test]
    fn round_trip_and_layout() {
        for n in [2, 3, 4, 5, 8, 16] {
            let u = random_unitary(n, 11 + n as u64).unwrap();
            let m = clements_decompose(&u).unwrap();
            assert_eq!(m.cells().len(), n * (n - 1) / 2);
            assert!(m.depth() <= n, "depth {} for n={n}", m.depth());
            let err = max_abs_diff(mesh_compose(&m).matrix(), u.matrix());
            assert!(err < 1e-9, "n={n}: {err:e}");
        }
    }

    #[test]
    fn identity_and_permutations_decompose() {
        let id = UnitaryMatrix::identity(4);
        let m = clements_decompose(&id).unwrap();
        assert!(max_abs_diff(mesh_compose(&m).matrix(), id.matrix()) < 1e-12);

        let mut p = CMatrix::zeros(4, 4);
        for (r, c) in [(0, 2), (1, 0), (2, 3), (3, 1)] {
            p[(r, c)] = C64::new(1.0, 0.0);
        }
        let p = UnitaryMatrix::new(p).unwrap();
        let m = clements_decompose(&p).unwrap();
        assert!(max_abs_diff(mesh_compose(&m).matrix(), p.matrix()) < 1e-12);
    }

    #[test]
    fn rejects_malformed_meshes() {
        assert!(Mesh::new(3, vec![], vec![0.0; 3]).is_err());
        let bad_theta = vec![MziSetting { mode: 0, theta: 2.0, phi: 0.0, layer: 0 }];
        assert!(Mesh::new(2, bad_theta, vec![0.0; 2]).is_err());
        let clash = vec![
            MziSetting { mode: 0, theta: 0.1, phi: 0.0, layer: 0 },
            MziSetting { mode: 1, theta: 0.1, phi: 0.0, layer: 0 },
            MziSetting { mode: 0, theta: 0.1, phi: 0.0, layer: 1 },
        ];
        assert!(Mesh::new(3, clash, vec![0.0; 3]).is_err());
    }
}
