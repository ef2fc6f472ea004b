//! Clustering and solver quality metrics.

use std::collections::BTreeMap;

use itertools::Itertools;
use serde::{Deserialize, Serialize};

use crate::durham::Jet;
use crate::error::{Error, Result};
use crate::jet_qubo::JetAssignment;
use crate::kinematics::FourMomentum;
use crate::scalar::Real;
use crate::solvers::{mean_std, ShotEnsemble};
use crate::ising::SpinConfig;

/// Largest jet multiplicity for which every matching permutation is tried.
pub const MAX_MATCHED_JETS: usize = 8;

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct EfficiencyReport {
    /// Efficiency of each reference jet, in reference order.
    pub per_jet: Vec<f64>,
    /// `matching[k]` is the solver jet paired with reference jet `k`.
    pub matching: Vec<usize>,
    pub mean: f64,
}

/// Constituent-matching efficiency of `solver` against `reference`.
///
/// Solver jets are paired with reference jets by the permutation that
/// maximizes the total number of shared constituents (first permutation in
/// lexicographic order on ties). Reference jet `k` then scores
/// `|S_matching[k] ∩ R_k| / |R_k|`.
pub fn jet_efficiency(solver: &[Vec<usize>], reference: &[Vec<usize>]) -> Result<EfficiencyReport> {
    let n_jet = reference.len();
    if solver.len() != n_jet {
        return Err(Error::Multiplicity {
            what: "solver jets",
            expected: n_jet,
            found: solver.len(),
        });
    }
    if n_jet > MAX_MATCHED_JETS {
        return Err(Error::InvalidParameter(format!(
            "at most {MAX_MATCHED_JETS} jets can be matched, got {n_jet}"
        )));
    }
    let universe = |jets: &[Vec<usize>]| jets.iter().flatten().copied().sorted().collect_vec();
    let (su, ru) = (universe(solver), universe(reference));
    if su != ru {
        return Err(Error::UniverseMismatch(format!(
            "solver covers {} constituents, reference {}",
            su.len(),
            ru.len()
        )));
    }
    if reference.iter().any(Vec::is_empty) {
        return Err(Error::InvalidParameter("reference jets must be non-empty".into()));
    }
    let n_input = ru.last().map_or(0, |&m| m + 1);
    let mut label = vec![usize::MAX; n_input];
    for (s, jet) in solver.iter().enumerate() {
        for &i in jet {
            label[i] = s;
        }
    }
    // overlap[k][s] = |S_s ∩ R_k|
    let overlap: Vec<Vec<usize>> = reference
        .iter()
        .map(|r| {
            let mut row = vec![0; n_jet];
            for &i in r {
                row[label[i]] += 1;
            }
            row
        })
        .collect();
    let mut best: Option<(usize, Vec<usize>)> = None;
    for perm in (0..n_jet).permutations(n_jet) {
        let total: usize = perm.iter().enumerate().map(|(k, &s)| overlap[k][s]).sum();
        if best.as_ref().is_none_or(|(b, _)| total > *b) {
            best = Some((total, perm));
        }
    }
    let matching = best.map(|(_, p)| p).unwrap_or_default();
    let per_jet: Vec<f64> = matching
        .iter()
        .enumerate()
        .map(|(k, &s)| overlap[k][s] as f64 / reference[k].len() as f64)
        .collect();
    let mean = if n_jet == 0 {
        0.0
    } else {
        per_jet.iter().sum::<f64>() / n_jet as f64
    };
    Ok(EfficiencyReport {
        per_jet,
        matching,
        mean,
    })
}

/// [`jet_efficiency`] of an assignment against reconstructed reference jets.
pub fn assignment_efficiency<T: Real>(solver: &JetAssignment, reference: &[Jet<T>]) -> Result<EfficiencyReport> {
    let reference: Vec<Vec<usize>> = reference.iter().map(|j| j.constituents.clone()).collect();
    jet_efficiency(solver.jets(), &reference)
}

/// `sqrt(max(0, (sum E)^2 - |sum p|^2))` of the summed jets.
pub fn invariant_mass<T: Real>(jets: &[&Jet<T>]) -> T {
    jets.iter().map(|j| j.p4).sum::<FourMomentum<T>>().mass()
}

/// Mass hypotheses reported per event.
#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize, Deserialize)]
pub enum Hypothesis {
    Z,
    H,
    W1,
    W2,
    Top1,
    Top2,
}

pub type MassResult = BTreeMap<Hypothesis, f64>;

pub const TOP_MASS_GEV: f64 = 172.5;
pub const W_MASS_GEV: f64 = 80.4;

/// Outcome of the two-step W/top assignment.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct TopPairing {
    /// Light-jet index pairs forming the two W candidates.
    pub w_pairs: [(usize, usize); 2],
    /// `b_for_w[k]` is the b-jet combined with W candidate `k`.
    pub b_for_w: [usize; 2],
    pub w_masses: [f64; 2],
    pub top_masses: [f64; 2],
    /// `|m_W1 - m_W| + |m_W2 - m_W|` of the chosen pairing.
    pub w_deviation: f64,
}

/// The three ways to split four light jets into two pairs.
pub const LIGHT_PAIRINGS: [[(usize, usize); 2]; 3] = [[(0, 1), (2, 3)], [(0, 2), (1, 3)], [(0, 3), (1, 2)]];

/// Picks the light-jet pairing closest to two W bosons, then the b-jet
/// association minimizing `|m_top1 - m_t| + |m_top2 - m_t|`. Earlier
/// candidates win ties.
pub fn top_pairing<T: Real>(b_jets: &[Jet<T>], light_jets: &[Jet<T>], m_w: f64) -> Result<TopPairing> {
    top_pairing_with_top_mass(b_jets, light_jets, m_w, TOP_MASS_GEV)
}

pub fn top_pairing_with_top_mass<T: Real>(
    b_jets: &[Jet<T>],
    light_jets: &[Jet<T>],
    m_w: f64,
    m_top: f64,
) -> Result<TopPairing> {
    if b_jets.len() != 2 {
        return Err(Error::Multiplicity {
            what: "b-jets",
            expected: 2,
            found: b_jets.len(),
        });
    }
    if light_jets.len() != 4 {
        return Err(Error::Multiplicity {
            what: "light jets",
            expected: 4,
            found: light_jets.len(),
        });
    }
    if !(m_w > 0.0) {
        return Err(Error::InvalidParameter(format!("m_W must be positive, got {m_w}")));
    }
    let pair_mass = |(i, j): (usize, usize)| invariant_mass(&[&light_jets[i], &light_jets[j]]).as_f64();

    let mut best: Option<(f64, [(usize, usize); 2])> = None;
    for pairing in LIGHT_PAIRINGS {
        let dev = (pair_mass(pairing[0]) - m_w).abs() + (pair_mass(pairing[1]) - m_w).abs();
        if best.is_none_or(|(d, _)| dev < d) {
            best = Some((dev, pairing));
        }
    }
    let (w_deviation, w_pairs) = best.expect("three pairings");
    let w: [FourMomentum<T>; 2] = w_pairs.map(|(i, j)| light_jets[i].p4 + light_jets[j].p4);

    let mut best_top: Option<(f64, [usize; 2], [f64; 2])> = None;
    for b_for_w in [[0, 1], [1, 0]] {
        let tops = [0, 1].map(|k| (w[k] + b_jets[b_for_w[k]].p4).mass().as_f64());
        let dev = (tops[0] - m_top).abs() + (tops[1] - m_top).abs();
        if best_top.is_none_or(|(d, _, _)| dev < d) {
            best_top = Some((dev, b_for_w, tops));
        }
    }
    let (_, b_for_w, top_masses) = best_top.expect("two associations");
    Ok(TopPairing {
        w_pairs,
        b_for_w,
        w_masses: w.map(|p| p.mass().as_f64()),
        top_masses,
        w_deviation,
    })
}

/// Mass hypotheses available from the jet multiplicity and b-tags:
/// two jets give Z; four jets with exactly two b-tags give H (b pair) and Z
/// (light pair); six jets with two b-tags give the W and top candidates.
pub fn event_masses<T: Real>(jets: &[Jet<T>]) -> MassResult {
    let mut out = MassResult::new();
    let (b, light) = split_by_btag(jets);
    match (jets.len(), b.len()) {
        (2, _) => {
            out.insert(Hypothesis::Z, invariant_mass(&[&jets[0], &jets[1]]).as_f64());
        }
        (4, 2) => {
            out.insert(Hypothesis::H, invariant_mass(&[&b[0], &b[1]]).as_f64());
            out.insert(Hypothesis::Z, invariant_mass(&[&light[0], &light[1]]).as_f64());
        }
        (6, 2) => {
            if let Ok(t) = top_pairing(&b, &light, W_MASS_GEV) {
                out.insert(Hypothesis::W1, t.w_masses[0]);
                out.insert(Hypothesis::W2, t.w_masses[1]);
                out.insert(Hypothesis::Top1, t.top_masses[0]);
                out.insert(Hypothesis::Top2, t.top_masses[1]);
            }
        }
        _ => {}
    }
    out
}

/// Splits jets by b-tag, keeping their order.
pub fn split_by_btag<T: Real>(jets: &[Jet<T>]) -> (Vec<Jet<T>>, Vec<Jet<T>>) {
    jets.iter().cloned().partition(|j| j.btag)
}

/// Expected runtime to observe the solution with probability `target`:
/// `t_shot * ln(1 - target) / ln(1 - p_success)`, or `t_shot` once a single
/// shot already reaches `target`.
pub fn time_to_solution(p_success: f64, t_shot: f64, target: f64) -> Result<f64> {
    if p_success == 0.0 {
        return Err(Error::Unreachable);
    }
    if !(p_success > 0.0 && p_success <= 1.0) {
        return Err(Error::InvalidParameter(format!("p_success must be in (0, 1], got {p_success}")));
    }
    if !(t_shot > 0.0 && t_shot.is_finite()) {
        return Err(Error::InvalidParameter(format!("t_shot must be positive, got {t_shot}")));
    }
    if !(target > 0.0 && target < 1.0) {
        return Err(Error::InvalidParameter(format!("target must be in (0, 1), got {target}")));
    }
    if p_success >= target {
        return Ok(t_shot);
    }
    Ok(t_shot * (1.0 - target).ln() / (1.0 - p_success).ln())
}

/// One row of an energy/efficiency-versus-time table.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct TrajectoryRow {
    pub step: usize,
    /// Mean over shots of the cumulative wall time at this step.
    pub time_s: f64,
    pub energy_mean: f64,
    pub energy_std: f64,
    pub eff_mean: f64,
    pub eff_std: f64,
}

/// Aggregates recorded trajectories: per recorded step, mean and population
/// standard deviation across shots of the best-so-far energy and of the
/// mean efficiency of the decoded best-so-far assignment.
pub fn trajectory_aggregate<T: Real>(
    ensemble: &ShotEnsemble<T>,
    reference: &[Vec<usize>],
    decode: impl Fn(&SpinConfig) -> Result<JetAssignment>,
) -> Result<Vec<TrajectoryRow>> {
    let shots = &ensemble.shots;
    for (k, s) in shots.iter().enumerate().skip(1) {
        if !s.trajectory.iter().map(|p| p.step).eq(shots[0].trajectory.iter().map(|p| p.step)) {
            return Err(Error::InconsistentGrid { first: 0, other: k });
        }
    }
    let mut rows = Vec::with_capacity(ensemble.steps.len());
    for (idx, &step) in ensemble.steps.iter().enumerate() {
        let energies: Vec<f64> = shots.iter().map(|s| s.trajectory[idx].best_energy.as_f64()).collect();
        let effs = shots
            .iter()
            .map(|s| {
                let a = decode(&s.trajectory[idx].best_spins)?;
                Ok(jet_efficiency(a.jets(), reference)?.mean)
            })
            .collect::<Result<Vec<f64>>>()?;
        let times: Vec<f64> = shots.iter().map(|s| s.trajectory[idx].wall_time_s).collect();
        let (energy_mean, energy_std) = mean_std(energies.iter().copied());
        let (eff_mean, eff_std) = mean_std(effs.iter().copied());
        let (time_s, _) = mean_std(times.iter().copied());
        rows.push(TrajectoryRow {
            step,
            time_s,
            energy_mean,
            energy_std,
            eff_mean,
            eff_std,
        });
    }
    Ok(rows)
}
