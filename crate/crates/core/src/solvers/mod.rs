//! Ising solvers and seeded multi-shot ensembles.

mod sa;
mod sb;

pub use sa::{sa_solve, SaParams};
pub use sb::{bsb_solve, dsb_solve, pump_schedule, PumpSchedule, SbIntegrator, SbParams, SbVariant};

use std::time::Instant;

use rand::{RngCore, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::ising::{IsingModel, SpinConfig};
use crate::scalar::Real;

/// Best-so-far snapshot at one recorded step.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct TrajectoryPoint<T> {
    pub step: usize,
    pub best_energy: T,
    pub wall_time_s: f64,
    pub best_spins: SpinConfig,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct SolverResult<T> {
    pub best_spins: SpinConfig,
    pub best_energy: T,
    pub best_step: usize,
    pub trajectory: Vec<TrajectoryPoint<T>>,
    pub shot_seed: u64,
}

impl<T: Real> SolverResult<T> {
    /// Equality on everything except wall-clock times.
    pub fn same_outcome(&self, other: &Self) -> bool {
        self.best_spins == other.best_spins
            && self.best_energy.to_bits_eq(other.best_energy)
            && self.best_step == other.best_step
            && self.shot_seed == other.shot_seed
            && self.trajectory.len() == other.trajectory.len()
            && self.trajectory.iter().zip(&other.trajectory).all(|(a, b)| {
                a.step == b.step && a.best_energy.to_bits_eq(b.best_energy) && a.best_spins == b.best_spins
            })
    }
}

trait BitEq {
    fn to_bits_eq(self, other: Self) -> bool;
}

impl<T: Real> BitEq for T {
    fn to_bits_eq(self, other: Self) -> bool {
        self.as_f64().to_bits() == other.as_f64().to_bits()
    }
}

/// Best-seen bookkeeping shared by the solvers.
///
/// Candidates are compared on the solver's running energy estimate; the
/// stored best energy is always recomputed exactly from the stored spins,
/// and a candidate whose exact energy is not strictly lower is discarded.
pub(crate) struct BestTracker<'m, T> {
    model: &'m IsingModel<T>,
    record_every: usize,
    total_steps: usize,
    start: Instant,
    estimate: T,
    candidate: Vec<i8>,
    candidate_step: usize,
    dirty: bool,
    best: Option<(T, Vec<i8>, usize)>,
    trajectory: Vec<TrajectoryPoint<T>>,
}

impl<'m, T: Real> BestTracker<'m, T> {
    pub(crate) fn new(model: &'m IsingModel<T>, record_every: usize, total_steps: usize, start: Instant) -> Self {
        Self {
            model,
            record_every,
            total_steps,
            start,
            estimate: T::infinity(),
            candidate: Vec::new(),
            candidate_step: 0,
            dirty: false,
            best: None,
            trajectory: Vec::new(),
        }
    }

    #[inline]
    pub(crate) fn offer(&mut self, step: usize, estimate: T, spins: &[i8]) {
        if estimate < self.estimate && spins != self.candidate.as_slice() {
            self.estimate = estimate;
            self.candidate.clear();
            self.candidate.extend_from_slice(spins);
            self.candidate_step = step;
            self.dirty = true;
        }
    }

    fn settle(&mut self) {
        if !self.dirty {
            return;
        }
        self.dirty = false;
        let exact = self.model.energy_unchecked(&self.candidate);
        let improves = self.best.as_ref().is_none_or(|(e, _, _)| exact < *e);
        if improves {
            self.best = Some((exact, self.candidate.clone(), self.candidate_step));
        }
        if let Some((e, _, _)) = &self.best {
            self.estimate = *e;
        }
    }

    pub(crate) fn maybe_record(&mut self, step: usize) {
        let due = self.record_every > 0 && (step % self.record_every == 0 || step == self.total_steps);
        // settle periodically so candidate comparisons stay anchored to exact energies
        if due || step % 64 == 0 {
            self.settle();
        }
        if due {
            let (e, spins, _) = self.best.as_ref().expect("a candidate is offered every step");
            self.trajectory.push(TrajectoryPoint {
                step,
                best_energy: *e,
                wall_time_s: self.start.elapsed().as_secs_f64(),
                best_spins: SpinConfig::new(spins.clone()).expect("spins are +-1"),
            });
        }
    }

    pub(crate) fn finish(mut self, seed: u64) -> SolverResult<T> {
        self.settle();
        let (best_energy, spins, best_step) = self.best.expect("solver offered at least one state");
        SolverResult {
            best_spins: SpinConfig::new(spins).expect("spins are +-1"),
            best_energy,
            best_step,
            trajectory: self.trajectory,
            shot_seed: seed,
        }
    }
}

/// Which solver to run for each shot.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(tag = "solver", rename_all = "lowercase")]
pub enum SolverSpec<T> {
    Bsb(SbParams<T>),
    Dsb(SbParams<T>),
    Sa(SaParams),
}

impl<T: Real> SolverSpec<T> {
    pub fn name(&self) -> &'static str {
        match self {
            Self::Bsb(_) => "bsb",
            Self::Dsb(_) => "dsb",
            Self::Sa(_) => "sa",
        }
    }

    pub fn solve(&self, model: &IsingModel<T>, seed: u64) -> Result<SolverResult<T>> {
        match self {
            Self::Bsb(p) => bsb_solve(model, p, seed),
            Self::Dsb(p) => dsb_solve(model, p, seed),
            Self::Sa(p) => sa_solve(model, p, seed),
        }
    }

    pub fn record_every(&self) -> usize {
        match self {
            Self::Bsb(p) | Self::Dsb(p) => p.record_every,
            Self::Sa(p) => p.record_every,
        }
    }

    pub fn with_record_every(mut self, every: usize) -> Self {
        match &mut self {
            Self::Bsb(p) | Self::Dsb(p) => p.record_every = every,
            Self::Sa(p) => p.record_every = every,
        }
        self
    }
}

/// Seed for shot `shot`: the first word of ChaCha8 stream `shot` keyed by
/// `master_seed`.
pub fn child_seed(master_seed: u64, shot: u64) -> u64 {
    let mut rng = ChaCha8Rng::seed_from_u64(master_seed);
    rng.set_stream(shot);
    rng.next_u64()
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct ShotEnsemble<T> {
    pub shots: Vec<SolverResult<T>>,
    /// Recorded step indices shared by every shot.
    pub steps: Vec<usize>,
    pub energy_mean: Vec<T>,
    /// Population standard deviation across shots.
    pub energy_std: Vec<T>,
}

impl<T: Real> ShotEnsemble<T> {
    pub fn from_shots(shots: Vec<SolverResult<T>>) -> Result<Self> {
        if shots.is_empty() {
            return Err(Error::InvalidParameter("ensemble needs at least one shot".into()));
        }
        let steps: Vec<usize> = shots[0].trajectory.iter().map(|p| p.step).collect();
        for (k, s) in shots.iter().enumerate().skip(1) {
            if !s.trajectory.iter().map(|p| p.step).eq(steps.iter().copied()) {
                return Err(Error::InconsistentGrid { first: 0, other: k });
            }
        }
        let mut energy_mean = Vec::with_capacity(steps.len());
        let mut energy_std = Vec::with_capacity(steps.len());
        for idx in 0..steps.len() {
            let (m, s) = mean_std(shots.iter().map(|r| r.trajectory[idx].best_energy));
            energy_mean.push(m);
            energy_std.push(s);
        }
        Ok(Self {
            shots,
            steps,
            energy_mean,
            energy_std,
        })
    }

    /// Lowest-energy shot; the earliest shot wins ties.
    pub fn best(&self) -> &SolverResult<T> {
        self.shots
            .iter()
            .reduce(|a, b| if b.best_energy < a.best_energy { b } else { a })
            .expect("non-empty")
    }

    pub fn best_energy(&self) -> T {
        self.best().best_energy
    }
}

/// Mean and population standard deviation, summed in iteration order.
pub fn mean_std<T: Real>(values: impl Iterator<Item = T> + Clone) -> (T, T) {
    let (sum, count) = values.clone().fold((T::zero(), 0usize), |(s, c), v| (s + v, c + 1));
    if count == 0 {
        return (T::nan(), T::nan());
    }
    let mean = sum / T::of_usize(count);
    let var = values.map(|v| (v - mean) * (v - mean)).sum::<T>() / T::of_usize(count);
    (mean, var.sqrt())
}

/// Runs `n_shots` independent shots, in parallel on the current rayon pool.
///
/// Shot `k` uses [`child_seed`]`(master_seed, k)`, so results do not depend
/// on scheduling or thread count.
pub fn multi_shot<T: Real>(
    spec: &SolverSpec<T>,
    model: &IsingModel<T>,
    n_shots: usize,
    master_seed: u64,
) -> Result<ShotEnsemble<T>> {
    if n_shots == 0 {
        return Err(Error::InvalidParameter("n_shots must be >= 1".into()));
    }
    let shots = (0..n_shots as u64)
        .into_par_iter()
        .map(|k| spec.solve(model, child_seed(master_seed, k)))
        .collect::<Result<Vec<_>>>()?;
    ShotEnsemble::from_shots(shots)
}
