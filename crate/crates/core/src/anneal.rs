//! Dense statevector simulation of transverse-field Ising annealing,
//! `H(s) = A(s) sum_i X_i + B(s) H_target`.
//!
//! Basis state `b` has qubit `i` equal to bit `(b >> i) & 1`, and
//! `Z|0> = +|0>`, so bit 0 maps to spin +1. The target diagonal holds the
//! model's Ising energy (offset included) for every bitstring.

use num_complex::Complex64;
use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::ising::IsingModel;
use crate::scalar::Real;

pub const MAX_SPINS: usize = 14;

/// Largest `||H|| dt` handled by one Taylor series.
const SUBSTEP_NORM: f64 = 0.5;
const MAX_TAYLOR_TERMS: usize = 60;
const NORM_DRIFT_LIMIT: f64 = 1e-6;
const PAR_THRESHOLD: usize = 1 << 10;

/// Spin of qubit `i` in basis state `b`.
#[inline]
pub fn z_value(b: usize, i: usize) -> f64 {
    if (b >> i) & 1 == 0 {
        1.0
    } else {
        -1.0
    }
}

/// Diagonal of the target Hamiltonian in the computational basis.
pub fn build_target_hamiltonian<T: Real>(m: &IsingModel<T>) -> Result<Vec<f64>> {
    let n = m.n();
    if n > MAX_SPINS {
        return Err(Error::TooManySpins { n, max: MAX_SPINS });
    }
    let j = m.j();
    let h: Vec<f64> = m.h().iter().map(|v| v.as_f64()).collect();
    let offset = m.offset().as_f64();
    let diag = (0..1usize << n)
        .map(|b| {
            let mut e = offset;
            for i in 0..n {
                let zi = z_value(b, i);
                e += h[i] * zi;
                for k in (i + 1)..n {
                    e += j[(i, k)].as_f64() * zi * z_value(b, k);
                }
            }
            e
        })
        .collect();
    Ok(diag)
}

/// Driver and problem weights as functions of normalized time `s`.
#[derive(Clone, Copy, Debug, Default, PartialEq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum AnnealSchedule {
    /// `A(s) = 1 - s`, `B(s) = s`.
    #[default]
    Linear,
    /// `A(s) = (1 - s)^2`, `B(s) = s^2`.
    Quadratic,
}

impl AnnealSchedule {
    pub fn a(self, s: f64) -> f64 {
        match self {
            Self::Linear => 1.0 - s,
            Self::Quadratic => (1.0 - s) * (1.0 - s),
        }
    }

    pub fn b(self, s: f64) -> f64 {
        match self {
            Self::Linear => s,
            Self::Quadratic => s * s,
        }
    }

    /// Starts in the pure driver (`A(0) > 0`, `B(0) = 0`).
    pub fn validate(self) -> Result<()> {
        if !(self.a(0.0) > 0.0 && self.b(0.0) == 0.0) {
            return Err(Error::InvalidParameter(format!("schedule {self:?} must start with A > 0, B = 0")));
        }
        Ok(())
    }
}

#[derive(Clone, Debug, PartialEq)]
pub struct Statevector {
    n: usize,
    amps: Vec<Complex64>,
}

impl Statevector {
    /// Ground state of `sum_i X_i`: every qubit in `|->`.
    pub fn driver_ground(n: usize) -> Result<Self> {
        if n > MAX_SPINS {
            return Err(Error::TooManySpins { n, max: MAX_SPINS });
        }
        let scale = (0.5f64).powf(n as f64 / 2.0);
        let amps = (0..1usize << n)
            .map(|b| {
                let sign = if b.count_ones() % 2 == 0 { 1.0 } else { -1.0 };
                Complex64::new(sign * scale, 0.0)
            })
            .collect();
        Ok(Self { n, amps })
    }

    pub fn basis(n: usize, index: usize) -> Result<Self> {
        if n > MAX_SPINS {
            return Err(Error::TooManySpins { n, max: MAX_SPINS });
        }
        if index >= 1 << n {
            return Err(Error::DimensionMismatch {
                expected: 1 << n,
                found: index,
            });
        }
        let mut amps = vec![Complex64::new(0.0, 0.0); 1 << n];
        amps[index] = Complex64::new(1.0, 0.0);
        Ok(Self { n, amps })
    }

    pub fn from_amplitudes(amps: Vec<Complex64>) -> Result<Self> {
        let dim = amps.len();
        if !dim.is_power_of_two() {
            return Err(Error::InvalidParameter(format!("dimension {dim} is not a power of two")));
        }
        let n = dim.trailing_zeros() as usize;
        if n > MAX_SPINS {
            return Err(Error::TooManySpins { n, max: MAX_SPINS });
        }
        Ok(Self { n, amps })
    }

    pub fn n_qubits(&self) -> usize {
        self.n
    }

    pub fn amplitudes(&self) -> &[Complex64] {
        &self.amps
    }

    pub fn probabilities(&self) -> Vec<f64> {
        self.amps.iter().map(|a| a.norm_sqr()).collect()
    }

    pub fn norm(&self) -> f64 {
        self.amps.iter().map(|a| a.norm_sqr()).sum::<f64>().sqrt()
    }

    /// `|<self|other>|^2`.
    pub fn fidelity(&self, other: &Self) -> f64 {
        self.amps
            .iter()
            .zip(&other.amps)
            .map(|(a, b)| a.conj() * b)
            .sum::<Complex64>()
            .norm_sqr()
    }

    /// `<psi| diag |psi>`.
    pub fn diagonal_expectation(&self, diag: &[f64]) -> f64 {
        self.amps.iter().zip(diag).map(|(a, d)| a.norm_sqr() * d).sum()
    }
}

/// `out = a * sum_i X_i psi + b * diag psi`.
fn apply_h(a: f64, b: f64, diag: &[f64], n: usize, psi: &[Complex64], out: &mut [Complex64]) {
    let entry = |(idx, o): (usize, &mut Complex64)| {
        let mut flip = Complex64::new(0.0, 0.0);
        for i in 0..n {
            flip += psi[idx ^ (1 << i)];
        }
        *o = flip * a + psi[idx] * (b * diag[idx]);
    };
    if psi.len() >= PAR_THRESHOLD {
        out.par_iter_mut().enumerate().for_each(entry);
    } else {
        out.iter_mut().enumerate().for_each(entry);
    }
}

/// Applies `exp(-i H dt)` for `H = a sum X + b diag`, splitting `dt` so each
/// Taylor series has `||H|| dt <= SUBSTEP_NORM`.
fn propagate(a: f64, b: f64, diag: &[f64], n: usize, dt: f64, psi: &mut Vec<Complex64>, work: &mut [Vec<Complex64>; 2]) {
    let diag_max = diag.iter().fold(0.0f64, |m, d| m.max(d.abs()));
    let bound = a.abs() * n as f64 + b.abs() * diag_max;
    let substeps = ((bound * dt.abs()) / SUBSTEP_NORM).ceil().max(1.0) as usize;
    let h = dt / substeps as f64;
    let tol = 1e-17;
    for _ in 0..substeps {
        let [term, next] = work;
        term.copy_from_slice(psi);
        for k in 1..=MAX_TAYLOR_TERMS {
            apply_h(a, b, diag, n, term, next);
            let factor = Complex64::new(0.0, -h / k as f64);
            let mut size = 0.0;
            for (t, nx) in term.iter_mut().zip(next.iter()) {
                *t = nx * factor;
                size += t.norm_sqr();
            }
            for (p, t) in psi.iter_mut().zip(term.iter()) {
                *p += t;
            }
            if size.sqrt() < tol {
                break;
            }
        }
    }
}

/// One recorded point of an annealing run.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct AnnealSample {
    pub s: f64,
    /// `<psi|H_target|psi>`.
    pub energy_expectation: f64,
    pub ground_probability: f64,
    pub norm: f64,
}

fn ground_mask(diag: &[f64]) -> Vec<bool> {
    let min = diag.iter().copied().fold(f64::INFINITY, f64::min);
    let tol = 1e-9 * min.abs().max(1.0);
    diag.iter().map(|&d| d <= min + tol).collect()
}

fn ground_probability_masked(psi: &Statevector, mask: &[bool]) -> f64 {
    psi.amps
        .iter()
        .zip(mask)
        .filter(|(_, &g)| g)
        .map(|(a, _)| a.norm_sqr())
        .sum()
}

/// Total probability on bitstrings whose target energy is minimal.
pub fn ground_state_probability<T: Real>(psi: &Statevector, m: &IsingModel<T>) -> Result<f64> {
    let diag = build_target_hamiltonian(m)?;
    if diag.len() != psi.amps.len() {
        return Err(Error::DimensionMismatch {
            expected: diag.len(),
            found: psi.amps.len(),
        });
    }
    Ok(ground_probability_masked(psi, &ground_mask(&diag)).min(1.0))
}

/// Evolves from the driver ground state over `total_time` in `steps`
/// midpoint steps. With `record_every > 0`, samples `s = 0`, every
/// `record_every`-th step and the final step.
pub fn anneal_sweep<T: Real>(
    m: &IsingModel<T>,
    schedule: AnnealSchedule,
    total_time: f64,
    steps: usize,
    record_every: usize,
) -> Result<(Statevector, Vec<AnnealSample>)> {
    schedule.validate()?;
    if !(total_time > 0.0 && total_time.is_finite()) {
        return Err(Error::InvalidParameter(format!("total_time must be positive, got {total_time}")));
    }
    if steps == 0 {
        return Err(Error::InvalidParameter("steps must be >= 1".into()));
    }
    let diag = build_target_hamiltonian(m)?;
    let n = m.n();
    let mask = ground_mask(&diag);
    let mut psi = Statevector::driver_ground(n)?;
    let mut work = [psi.amps.clone(), psi.amps.clone()];
    let dt = total_time / steps as f64;
    let mut samples = Vec::new();
    let sample = |psi: &Statevector, s: f64, norm: f64| AnnealSample {
        s,
        energy_expectation: psi.diagonal_expectation(&diag),
        ground_probability: ground_probability_masked(psi, &mask),
        norm,
    };
    if record_every > 0 {
        samples.push(sample(&psi, 0.0, psi.norm()));
    }
    for step in 1..=steps {
        let s_mid = (step as f64 - 0.5) / steps as f64;
        propagate(schedule.a(s_mid), schedule.b(s_mid), &diag, n, dt, &mut psi.amps, &mut work);
        let norm = psi.norm();
        if (norm - 1.0).abs() > NORM_DRIFT_LIMIT || !norm.is_finite() {
            return Err(Error::NormDrift { step, norm });
        }
        if record_every > 0 && (step % record_every == 0 || step == steps) {
            samples.push(sample(&psi, step as f64 / steps as f64, norm));
        }
    }
    Ok((psi, samples))
}

pub fn anneal_evolve<T: Real>(
    m: &IsingModel<T>,
    schedule: AnnealSchedule,
    total_time: f64,
    steps: usize,
) -> Result<Statevector> {
    anneal_sweep(m, schedule, total_time, steps, 0).map(|(psi, _)| psi)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::ising::SquareMatrix;

    fn field(h: f64) -> IsingModel<f64> {
        IsingModel::new(SquareMatrix::zeros(1), vec![h], 0.0).unwrap()
    }

    fn ferro() -> IsingModel<f64> {
        IsingModel::new(SquareMatrix::from_rows(&[vec![0.0, -1.0], vec![-1.0, 0.0]]).unwrap(), vec![0.0; 2], 0.0)
            .unwrap()
    }

    #[test]
    fn target_diagonal_examples() {
        assert_eq!(build_target_hamiltonian(&field(-1.0)).unwrap(), vec![-1.0, 1.0]);
        assert_eq!(build_target_hamiltonian(&IsingModel::<f64>::zeros(3)).unwrap(), vec![0.0; 8]);
        // |00>, |01>, |10>, |11>
        assert_eq!(build_target_hamiltonian(&ferro()).unwrap(), vec![-1.0, 1.0, 1.0, -1.0]);
        assert!(matches!(
            build_target_hamiltonian(&IsingModel::<f64>::zeros(15)),
            Err(Error::TooManySpins { .. })
        ));
    }

    #[test]
    fn driver_ground_state_amplitudes() {
        let psi = Statevector::driver_ground(2).unwrap();
        let a: Vec<f64> = psi.amplitudes().iter().map(|c| c.re).collect();
        assert_eq!(a, vec![0.5, -0.5, -0.5, 0.5]);
        assert!((psi.norm() - 1.0).abs() < 1e-15);
    }

    #[test]
    fn ground_probability_examples() {
        let m = field(-1.0);
        let basis = Statevector::basis(1, 0).unwrap();
        assert_eq!(ground_state_probability(&basis, &m).unwrap(), 1.0);
        let uniform = Statevector::driver_ground(1).unwrap();
        assert!((ground_state_probability(&uniform, &m).unwrap() - 0.5).abs() < 1e-15);
        let r = std::f64::consts::FRAC_1_SQRT_2;
        let bell = Statevector::from_amplitudes(vec![
            Complex64::new(r, 0.0),
            Complex64::new(0.0, 0.0),
            Complex64::new(0.0, 0.0),
            Complex64::new(r, 0.0),
        ])
        .unwrap();
        assert!((ground_state_probability(&bell, &ferro()).unwrap() - 1.0).abs() < 1e-15);
        assert!(ground_state_probability(&bell, &m).is_err());
    }

    #[test]
    fn tiny_time_leaves_state_alone() {
        let psi = anneal_evolve(&ferro(), AnnealSchedule::Linear, 1e-9, 1).unwrap();
        let init = Statevector::driver_ground(2).unwrap();
        assert!(psi.fidelity(&init) > 0.999);
    }

    #[test]
    fn slow_anneal_finds_field_ground_state() {
        let psi = anneal_evolve(&field(-1.0), AnnealSchedule::Linear, 100.0, 10_000).unwrap();
        assert!(ground_state_probability(&psi, &field(-1.0)).unwrap() > 0.99);
        assert!((psi.norm() - 1.0).abs() < 1e-8);
    }

    #[test]
    fn invalid_arguments() {
        let m = field(1.0);
        assert!(anneal_evolve(&m, AnnealSchedule::Linear, 0.0, 10).is_err());
        assert!(anneal_evolve(&m, AnnealSchedule::Linear, 1.0, 0).is_err());
        assert!(AnnealSchedule::Quadratic.validate().is_ok());
    }

    #[test]
    fn sweep_records_endpoints() {
        let (_, samples) = anneal_sweep(&ferro(), AnnealSchedule::Linear, 10.0, 100, 25).unwrap();
        let s: Vec<f64> = samples.iter().map(|x| x.s).collect();
        assert_eq!(s, vec![0.0, 0.25, 0.5, 0.75, 1.0]);
        // the driver ground state is uniform over bitstrings
        assert!((samples[0].ground_probability - 0.5).abs() < 1e-12);
        assert!(samples.iter().all(|x| (x.norm - 1.0).abs() < 1e-10));
    }
}
