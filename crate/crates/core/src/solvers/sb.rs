//! Ballistic and discrete simulated bifurcation.
//!
//! Each spin is an oscillator with position `x_i` and momentum `y_i`. One
//! symplectic Euler step updates momenta first, then positions:
//!
//! ```text
//! y_i += dt * (-(a0 - a(t)) x_i - c0 (sum_j J_ij m_j + h_i))
//! x_i += dt * a0 * y_i
//! ```
//!
//! with `m = x` for the ballistic variant and `m = sgn(x)` for the discrete
//! one. Inelastic walls at `|x_i| = 1` clamp the position and zero the
//! momentum. The force pushes toward lower values of the Ising energy
//! `1/2 x.J.x + h.x`, i.e. the printed `+c0 (h + Jx)` form with `J` and `h`
//! negated.

use std::time::Instant;

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde::{Deserialize, Serialize};

use super::{BestTracker, SolverResult};
use crate::error::{Error, Result};
use crate::ising::{IsingModel, SpinConfig};
use crate::scalar::Real;

/// Shape of the pump amplitude `a(t)`.
#[derive(Clone, Copy, Debug, Default, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum PumpSchedule {
    #[default]
    Linear,
}

/// `a0 * step / steps`. Rises from 0 at step 0 to `a0` at the last step.
pub fn pump_schedule<T: Real>(step: usize, steps: usize, a0: T) -> Result<T> {
    if steps == 0 || step > steps {
        return Err(Error::InvalidParameter(format!(
            "pump step {step} outside 0..={steps}"
        )));
    }
    Ok(a0 * T::of_usize(step) / T::of_usize(steps))
}

#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub enum SbVariant {
    Ballistic,
    Discrete,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct SbParams<T> {
    pub a0: T,
    /// `None` selects `0.5 / (rms(J) * sqrt(n))`.
    pub c0: Option<T>,
    pub dt: T,
    pub steps: usize,
    pub pump: PumpSchedule,
    /// Trajectory sampling period in steps; 0 disables recording.
    pub record_every: usize,
}

impl<T: Real> Default for SbParams<T> {
    fn default() -> Self {
        Self {
            a0: T::one(),
            c0: None,
            dt: T::lit(0.25),
            steps: 1000,
            pump: PumpSchedule::Linear,
            record_every: 0,
        }
    }
}

impl<T: Real> SbParams<T> {
    pub fn with_steps(steps: usize) -> Self {
        Self {
            steps,
            ..Self::default()
        }
    }

    pub fn validate(&self) -> Result<()> {
        if !(self.a0 > T::zero()) {
            return Err(Error::InvalidParameter(format!("a0 must be positive, got {}", self.a0)));
        }
        if let Some(c0) = self.c0 {
            if !(c0 > T::zero()) {
                return Err(Error::InvalidParameter(format!("c0 must be positive, got {c0}")));
            }
        }
        if !(self.dt > T::zero()) {
            return Err(Error::InvalidParameter(format!("dt must be positive, got {}", self.dt)));
        }
        if self.steps == 0 {
            return Err(Error::InvalidParameter("steps must be >= 1".into()));
        }
        Ok(())
    }

    /// Coupling strength actually used for `model`.
    pub fn resolved_c0(&self, model: &IsingModel<T>) -> T {
        self.c0.unwrap_or_else(|| {
            let sigma = model.coupling_rms().max(T::lit(1e-12));
            T::lit(0.5) / (sigma * T::of_usize(model.n()).sqrt())
        })
    }
}

/// Steppable SB state for one shot.
pub struct SbIntegrator<'m, T> {
    model: &'m IsingModel<T>,
    variant: SbVariant,
    a0: T,
    c0: T,
    dt: T,
    steps: usize,
    step: usize,
    x: Vec<T>,
    y: Vec<T>,
    mean_field: Vec<T>,
    signs: Vec<T>,
}

impl<'m, T: Real> SbIntegrator<'m, T> {
    /// `x = 0`, `y` uniform in `[-0.1, 0.1]` drawn from a ChaCha8 stream
    /// seeded with `seed`.
    pub fn new(
        model: &'m IsingModel<T>,
        params: &SbParams<T>,
        variant: SbVariant,
        seed: u64,
    ) -> Result<Self> {
        params.validate()?;
        let n = model.n();
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        let y = (0..n)
            .map(|_| T::lit(rng.random_range(-0.1..=0.1)))
            .collect();
        Ok(Self {
            model,
            variant,
            a0: params.a0,
            c0: params.resolved_c0(model),
            dt: params.dt,
            steps: params.steps,
            step: 0,
            x: vec![T::zero(); n],
            y,
            mean_field: vec![T::zero(); n],
            signs: vec![T::zero(); n],
        })
    }

    pub fn positions(&self) -> &[T] {
        &self.x
    }

    pub fn momenta(&self) -> &[T] {
        &self.y
    }

    pub fn step_index(&self) -> usize {
        self.step
    }

    pub fn c0(&self) -> T {
        self.c0
    }

    pub fn spins(&self) -> SpinConfig {
        SpinConfig::from_signs(&self.x)
    }

    /// Advances one symplectic Euler step. Returns `false` once all steps
    /// have been taken.
    pub fn advance(&mut self) -> Result<bool> {
        if self.step >= self.steps {
            return Ok(false);
        }
        self.step += 1;
        let a = pump_schedule(self.step, self.steps, self.a0)?;
        let detune = self.a0 - a;
        let j = self.model.j();
        let h = self.model.h();
        match self.variant {
            SbVariant::Ballistic => j.mul_vec_into(&self.x, &mut self.mean_field),
            SbVariant::Discrete => {
                for (s, &v) in self.signs.iter_mut().zip(&self.x) {
                    *s = if v < T::zero() { -T::one() } else { T::one() };
                }
                j.mul_vec_into(&self.signs, &mut self.mean_field);
            }
        }
        let (dt, c0, a0) = (self.dt, self.c0, self.a0);
        let mut finite = true;
        for i in 0..self.x.len() {
            let force = -detune * self.x[i] - c0 * (self.mean_field[i] + h[i]);
            let yi = self.y[i] + dt * force;
            let xi = self.x[i] + dt * a0 * yi;
            finite &= xi.is_finite() && yi.is_finite();
            if xi.abs() > T::one() {
                self.x[i] = xi.signum();
                self.y[i] = T::zero();
            } else {
                self.x[i] = xi;
                self.y[i] = yi;
            }
        }
        if !finite {
            return Err(Error::Diverged {
                step: self.step,
                dt: dt.as_f64(),
                c0: c0.as_f64(),
            });
        }
        Ok(true)
    }
}

/// Tracks `J s` for `s = sgn(x)` with cheap updates when few spins flip.
struct SpinField<T> {
    spins: Vec<i8>,
    field: Vec<T>,
    flipped: Vec<usize>,
}

impl<T: Real> SpinField<T> {
    fn new(model: &IsingModel<T>, x: &[T]) -> Self {
        let mut sf = Self {
            spins: SpinConfig::from_signs(x).as_slice().to_vec(),
            field: vec![T::zero(); x.len()],
            flipped: Vec::new(),
        };
        sf.recompute(model);
        sf
    }

    fn recompute(&mut self, model: &IsingModel<T>) {
        let s: Vec<T> = self
            .spins
            .iter()
            .map(|&v| if v > 0 { T::one() } else { -T::one() })
            .collect();
        model.j().mul_vec_into(&s, &mut self.field);
    }

    fn sync(&mut self, model: &IsingModel<T>, x: &[T]) {
        let mut flipped = std::mem::take(&mut self.flipped);
        flipped.clear();
        flipped.extend(
            x.iter()
                .zip(&self.spins)
                .enumerate()
                .filter(|(_, (&v, &s))| crate::scalar::spin_sign(v) != s)
                .map(|(i, _)| i),
        );
        for &k in &flipped {
            self.spins[k] = -self.spins[k];
        }
        match flipped.len() {
            0 => {}
            k if 4 * k >= self.spins.len() => self.recompute(model),
            _ => self.apply_flips(model, &flipped),
        }
        self.flipped = flipped;
    }

    fn apply_flips(&mut self, model: &IsingModel<T>, flipped: &[usize]) {
        let two = T::lit(2.0);
        for &k in flipped {
            // J symmetric: column k equals row k
            let delta = if self.spins[k] > 0 { two } else { -two };
            for (f, &jv) in self.field.iter_mut().zip(model.j().row(k)) {
                *f = *f + jv * delta;
            }
        }
    }

    fn energy(&self, model: &IsingModel<T>) -> T {
        let half = T::lit(0.5);
        let mut e = model.offset();
        for ((&s, &f), &h) in self.spins.iter().zip(&self.field).zip(model.h()) {
            if s > 0 {
                e = e + half * f + h;
            } else {
                e = e - half * f - h;
            }
        }
        e
    }
}

fn run_sb<T: Real>(
    model: &IsingModel<T>,
    params: &SbParams<T>,
    variant: SbVariant,
    seed: u64,
) -> Result<SolverResult<T>> {
    let start = Instant::now();
    let mut sb = SbIntegrator::new(model, params, variant, seed)?;
    let mut spin_field = SpinField::new(model, sb.positions());
    let mut tracker = BestTracker::new(model, params.record_every, params.steps, start);
    while sb.advance()? {
        spin_field.sync(model, sb.positions());
        let estimate = spin_field.energy(model);
        tracker.offer(sb.step_index(), estimate, &spin_field.spins);
        tracker.maybe_record(sb.step_index());
    }
    Ok(tracker.finish(seed))
}

/// Ballistic SB: returns the lowest-energy `sgn(x)` seen over all steps.
pub fn bsb_solve<T: Real>(
    model: &IsingModel<T>,
    params: &SbParams<T>,
    seed: u64,
) -> Result<SolverResult<T>> {
    run_sb(model, params, SbVariant::Ballistic, seed)
}

/// Discrete SB: as [`bsb_solve`] with `sgn(x_j)` in the mean field.
pub fn dsb_solve<T: Real>(
    model: &IsingModel<T>,
    params: &SbParams<T>,
    seed: u64,
) -> Result<SolverResult<T>> {
    run_sb(model, params, SbVariant::Discrete, seed)
}
