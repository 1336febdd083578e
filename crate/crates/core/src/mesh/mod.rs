//! Rectangular (Clements) MZI meshes, their time-bin control schedule and
//! loss budgets.
//!
//! Cell convention, used everywhere in this module: an MZI on adjacent modes
//! `(k, k+1)` applies a phase `φ` to mode `k` followed by a symmetric
//! beamsplitter of transmission amplitude `cos θ`:
//!
//! ```text
//!            ⎡ cos θ   i·sin θ ⎤ ⎡ e^{iφ}  0 ⎤   ⎡ e^{iφ}·cos θ     i·sin θ ⎤
//! T(θ, φ) =  ⎣ i·sin θ  cos θ  ⎦ ⎣   0     1 ⎦ = ⎣ i·e^{iφ}·sin θ    cos θ  ⎦
//! ```
//!
//! with `θ ∈ [0, π/2]` and `φ ∈ [0, 2π)`. At `θ = π/2` the cell is a swap
//! with phases `i` and `i·e^{iφ}`.

mod clements;
mod loss;
mod schedule;

pub use clements::{clements_decompose, mesh_compose, Mesh, MziSetting};
pub use loss::{hardware_transmission, loss_budget, LossModel, LossStage, HARDWARE_LOOP_TRANSMISSION};
pub use schedule::{compile_timebin_schedule, compile_with, Device, ScheduleEvent, TimeBinSchedule, TimingModel};

use crate::numerics::C64;

/// The 2×2 matrix of `T(θ, φ)`, row-major.
pub fn cell_matrix(theta: f64, phi: f64) -> [[C64; 2]; 2] {
    let (s, c) = theta.sin_cos();
    let e = C64::from_polar(1.0, phi);
    let i = C64::i();
    [[e * c, i * s], [i * e * s, C64::new(c, 0.0)]]
}

/// Maps an angle into `[0, 2π)`.
pub(crate) fn wrap_phase(x: f64) -> f64 {
    let tau = std::f64::consts::TAU;
    let w = x.rem_euclid(tau);
    if w >= tau {
        0.0
    } else {
        w
    }
}
