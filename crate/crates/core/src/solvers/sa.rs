//! Single-spin Metropolis simulated annealing with a geometric
//! inverse-temperature ladder, one sweep per rung.

use std::time::Instant;

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde::{Deserialize, Serialize};

use super::{BestTracker, SolverResult};
use crate::error::{Error, Result};
use crate::ising::IsingModel;
use crate::scalar::Real;

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct SaParams {
    pub sweeps: usize,
    pub beta_min: f64,
    pub beta_max: f64,
    /// Trajectory sampling period in sweeps; 0 disables recording.
    pub record_every: usize,
}

impl Default for SaParams {
    fn default() -> Self {
        Self {
            sweeps: 1000,
            beta_min: 0.1,
            beta_max: 10.0,
            record_every: 0,
        }
    }
}

impl SaParams {
    pub fn validate(&self) -> Result<()> {
        if self.sweeps == 0 {
            return Err(Error::InvalidParameter("sweeps must be >= 1".into()));
        }
        if !(self.beta_min > 0.0 && self.beta_min < self.beta_max && self.beta_max.is_finite()) {
            return Err(Error::InvalidParameter(format!(
                "beta range must satisfy 0 < beta_min < beta_max, got ({}, {})",
                self.beta_min, self.beta_max
            )));
        }
        Ok(())
    }

    /// `sweeps` geometrically spaced inverse temperatures from `beta_min`
    /// to `beta_max` inclusive (a single sweep runs at `beta_max`).
    pub fn beta_ladder(&self) -> Vec<f64> {
        if self.sweeps == 1 {
            return vec![self.beta_max];
        }
        let (lo, hi) = (self.beta_min.ln(), self.beta_max.ln());
        let d = (hi - lo) / (self.sweeps - 1) as f64;
        (0..self.sweeps).map(|k| (lo + d * k as f64).exp()).collect()
    }
}

pub fn sa_solve<T: Real>(model: &IsingModel<T>, params: &SaParams, seed: u64) -> Result<SolverResult<T>> {
    params.validate()?;
    let start = Instant::now();
    let n = model.n();
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut spins: Vec<i8> = (0..n)
        .map(|_| if rng.random::<bool>() { 1 } else { -1 })
        .collect();
    let j = model.j();
    let h = model.h();
    // local[i] = sum_j J_ij x_j
    let mut local: Vec<T> = (0..n)
        .map(|i| {
            j.row(i)
                .iter()
                .zip(&spins)
                .fold(T::zero(), |acc, (&v, &s)| if s > 0 { acc + v } else { acc - v })
        })
        .collect();
    let mut energy = model.energy_unchecked(&spins);
    let mut tracker = BestTracker::new(model, params.record_every, params.sweeps, start);
    tracker.offer(0, energy, &spins);
    let two = T::lit(2.0);

    for (sweep, beta) in params.beta_ladder().into_iter().enumerate() {
        let step = sweep + 1;
        for i in 0..n {
            let xi = if spins[i] > 0 { T::one() } else { -T::one() };
            // energy change of flipping spin i
            let delta = -two * xi * (local[i] + h[i]);
            let accept = delta <= T::zero() || {
                let u: f64 = rng.random();
                u < (-beta * delta.as_f64()).exp()
            };
            if accept {
                spins[i] = -spins[i];
                energy = energy + delta;
                let change = -two * xi;
                for (l, &jv) in local.iter_mut().zip(j.row(i)) {
                    *l = *l + jv * change;
                }
                if delta < T::zero() {
                    tracker.offer(step, energy, &spins);
                }
            }
        }
        tracker.maybe_record(step);
    }
    Ok(tracker.finish(seed))
}
