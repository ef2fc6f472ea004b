//! Output rows and records.

use bifurjet::durham::{Jet, Preselection};
use bifurjet::metrics::MassResult;
use bifurjet::FourMomentum;
use serde::{Deserialize, Serialize};

#[derive(Clone, Debug, Serialize, Deserialize)]
pub struct JetRecord {
    pub constituents: Vec<usize>,
    pub e: f64,
    pub px: f64,
    pub py: f64,
    pub pz: f64,
    pub mass: f64,
    pub btag: bool,
}

impl From<&Jet<f64>> for JetRecord {
    fn from(j: &Jet<f64>) -> Self {
        Self {
            constituents: j.constituents.clone(),
            e: j.p4.e,
            px: j.p4.px,
            py: j.p4.py,
            pz: j.p4.pz,
            mass: j.p4.mass(),
            btag: j.btag,
        }
    }
}

impl From<&JetRecord> for Jet<f64> {
    fn from(r: &JetRecord) -> Self {
        Jet {
            p4: FourMomentum::new(r.e, r.px, r.py, r.pz),
            constituents: r.constituents.clone(),
            btag: r.btag,
        }
    }
}

/// One line of `durham` output.
#[derive(Debug, Serialize, Deserialize)]
pub struct DurhamRecord {
    pub event: usize,
    pub jets: Vec<JetRecord>,
    pub preselection: Preselection,
    pub masses: MassResult,
}

/// One line of `cluster` output.
#[derive(Debug, Serialize, Deserialize)]
pub struct ClusterRecord {
    pub event: usize,
    pub solver: String,
    pub n_input: usize,
    pub n_jet: usize,
    /// Number of binary variables, `n_jet * n_input`.
    pub qubo_size: usize,
    pub lambda: f64,
    pub shots: usize,
    pub best_energy: f64,
    pub best_shot: usize,
    /// One-hot violations in the best solution before repair.
    pub violations: usize,
    pub efficiency: f64,
    pub efficiency_per_jet: Vec<f64>,
    pub jets: Vec<JetRecord>,
    pub masses: MassResult,
}

/// The fields `mass` needs from either record type.
#[derive(Debug, Deserialize)]
pub struct JetsLine {
    pub event: usize,
    pub jets: Vec<JetRecord>,
}

#[derive(Debug, Serialize)]
pub struct TimingRow {
    pub event: usize,
    pub shots: usize,
    pub wall_time_s: f64,
}

#[derive(Debug, Serialize)]
pub struct BenchRow {
    pub solver: &'static str,
    pub step: usize,
    pub time_s: f64,
    pub energy_mean: f64,
    pub energy_std: f64,
    pub eff_mean: f64,
    pub eff_std: f64,
}

#[derive(Debug, Serialize)]
pub struct MassRow {
    pub event: usize,
    pub n_jet: usize,
    pub n_btag: usize,
    pub preselected: bool,
    pub m_z: Option<f64>,
    pub m_h: Option<f64>,
    pub m_w1: Option<f64>,
    pub m_w2: Option<f64>,
    pub m_top1: Option<f64>,
    pub m_top2: Option<f64>,
}

#[derive(Debug, Serialize)]
pub struct TtsRow {
    pub total_time: f64,
    pub steps: usize,
    pub ground_probability: f64,
    /// Empty when the ground state was never observed.
    pub tts: Option<f64>,
}
