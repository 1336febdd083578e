//! Logical EOM schedule for a time-bin loop realization of a mesh.
//!
//! Modes are time bins spaced `bin_spacing_ns` apart. One mesh layer is
//! executed per traversal of the storage loop, whose period is the fibre
//! delay rounded to whole bins. Within a traversal, the short delay line holds
//! bin `k` for one spacing so that it co-arrives with bin `k+1` at offset
//! `(k+1)·spacing`; that is when EOM1 (θ) and EOM2 (φ) fire for the cell on
//! `(k, k+1)`. EOMa switches bins into the delay line one bin before the first
//! cell of a layer and EOMb switches them out one bin after the last. Output
//! phases are emitted on the traversal after the final layer without a
//! device. Switching is treated as lossless and instantaneous.

use std::fmt::Write as _;

use serde::{Deserialize, Serialize};

use super::Mesh;

/// Vacuum speed of light in m/ns.
const C_M_PER_NS: f64 = 0.299_792_458;

#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize, Deserialize)]
pub enum Device {
    EOMa,
    EOMb,
    EOM1,
    EOM2,
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct ScheduleEvent {
    pub t_ns: f64,
    /// `None` for output-phase events.
    pub device: Option<Device>,
    pub value: f64,
}

#[derive(Debug, Clone, PartialEq)]
pub struct TimeBinSchedule {
    pub events: Vec<ScheduleEvent>,
    pub bin_spacing_ns: f64,
    /// Loop period in bins.
    pub loop_bins: usize,
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct TimingModel {
    pub bin_spacing_ns: f64,
    pub fibre_length_m: f64,
    pub group_index: f64,
}

impl Default for TimingModel {
    fn default() -> Self {
        Self { bin_spacing_ns: 25.0, fibre_length_m: 180.0, group_index: 1.5 }
    }
}

impl TimingModel {
    pub fn fibre_delay_ns(&self) -> f64 {
        self.fibre_length_m * self.group_index / C_M_PER_NS
    }

    /// Fibre delay rounded to the nearest whole bin (36 for the defaults).
    pub fn fibre_bins(&self) -> usize {
        (self.fibre_delay_ns() / self.bin_spacing_ns).round() as usize
    }
}

pub fn compile_timebin_schedule(m: &Mesh) -> TimeBinSchedule {
    compile_with(m, &TimingModel::default())
}

pub fn compile_with(m: &Mesh, timing: &TimingModel) -> TimeBinSchedule {
    let n = m.mode_count();
    let spacing = timing.bin_spacing_ns;
    // a traversal must hold every bin plus the EOMa/EOMb guard bins
    let loop_bins = timing.fibre_bins().max(n + 2);
    let at = |traversal: usize, offset_bins: usize| ((traversal * loop_bins + offset_bins) as f64) * spacing;

    let mut events = Vec::with_capacity(2 * m.cells().len() + 2 * m.depth() + n);
    for layer_cells in m.cells().chunk_by(|a, b| a.layer == b.layer) {
        let layer = layer_cells[0].layer;
        let first = layer_cells.iter().map(|c| c.mode).min().unwrap_or(0);
        let last = layer_cells.iter().map(|c| c.mode).max().unwrap_or(0);
        events.push(ScheduleEvent { t_ns: at(layer, first), device: Some(Device::EOMa), value: 1.0 });
        for c in layer_cells {
            let t = at(layer, c.mode + 1);
            events.push(ScheduleEvent { t_ns: t, device: Some(Device::EOM1), value: c.theta });
            events.push(ScheduleEvent { t_ns: t, device: Some(Device::EOM2), value: c.phi });
        }
        events.push(ScheduleEvent { t_ns: at(layer, last + 2), device: Some(Device::EOMb), value: 1.0 });
    }
    let out = m.depth();
    for (k, &p) in m.output_phases().iter().enumerate() {
        events.push(ScheduleEvent { t_ns: at(out, k), device: None, value: p });
    }
    events.sort_by(|a, b| a.t_ns.total_cmp(&b.t_ns).then(a.device.cmp(&b.device)));
    TimeBinSchedule { events, bin_spacing_ns: spacing, loop_bins }
}

impl TimeBinSchedule {
    /// One `{"t_ns":…, "device":…, "value":…}` object per line.
    pub fn to_jsonl(&self) -> String {
        let mut out = String::new();
        for e in &self.events {
            let _ = writeln!(out, "{}", serde_json::to_string(e).expect("event serializes"));
        }
        out
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::mesh::{clements_decompose, MziSetting};
    use crate::numerics::random_unitary;

    #[test]
    fn default_loop_is_36_bins() {
        let t = TimingModel::default();
        assert!((t.fibre_delay_ns() - 900.6).abs() < 0.1);
        assert_eq!(t.fibre_bins(), 36);
    }

    #[test]
    fn single_mode_has_only_output_phase() {
        let m = Mesh::new(1, vec![], vec![0.5]).unwrap();
        let s = compile_timebin_schedule(&m);
        assert_eq!(s.events, vec![ScheduleEvent { t_ns: 0.0, device: None, value: 0.5 }]);
    }

    #[test]
    fn two_modes_single_cell() {
        let cell = MziSetting { mode: 0, theta: 0.3, phi: 1.1, layer: 0 };
        let s = compile_timebin_schedule(&Mesh::new(2, vec![cell], vec![0.0, 0.0]).unwrap());
        let theta: Vec<_> = s.events.iter().filter(|e| e.device == Some(Device::EOM1)).collect();
        let phi: Vec<_> = s.events.iter().filter(|e| e.device == Some(Device::EOM2)).collect();
        assert_eq!((theta.len(), phi.len()), (1, 1));
        assert_eq!((theta[0].t_ns, theta[0].value), (25.0, 0.3));
        assert_eq!((phi[0].t_ns, phi[0].value), (25.0, 1.1));
        // bin 0 enters the delay line one bin before the co-arrival
        let eoma = s.events.iter().find(|e| e.device == Some(Device::EOMa)).unwrap();
        assert_eq!(eoma.t_ns, 0.0);
    }

    #[test]
    fn thirty_two_modes_timing() {
        let m = clements_decompose(&random_unitary(32, 5).unwrap()).unwrap();
        let s = compile_timebin_schedule(&m);
        assert_eq!(s.loop_bins, 36);
        let last = s.events.last().unwrap();
        let expected = (m.depth() * 36 + 31) as f64 * 25.0;
        assert_eq!(last.t_ns, expected);
        assert_eq!(last.device, None);
        for e in &s.events {
            let bins = e.t_ns / 25.0;
            assert!((bins - bins.round()).abs() < 1e-9);
        }
        assert!(s.events.windows(2).all(|w| w[0].t_ns <= w[1].t_ns));
        let mut keys: Vec<_> = s.events.iter().map(|e| (e.t_ns.to_bits(), e.device)).collect();
        keys.sort();
        keys.dedup();
        assert_eq!(keys.len(), s.events.len());
    }

    #[test]
    fn jsonl_shape() {
        let m = Mesh::new(1, vec![], vec![0.25]).unwrap();
        let line = compile_timebin_schedule(&m).to_jsonl();
        assert_eq!(line, "{\"t_ns\":0.0,\"device\":null,\"value\":0.25}\n");
    }
}
