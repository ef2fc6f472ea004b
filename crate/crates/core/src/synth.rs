//! Synthetic e+e- events and particle-flow slimming.
//!
//! Each event is built from a parton-level decay tree. Every parton is
//! fragmented into massless particles with a narrow angular spread and flat
//! Dirichlet energy fractions; the parton carries the invariant mass of its
//! fragments, so the particles of a truth jet sum exactly to their parton and
//! the decay tree conserves four-momentum exactly.

use std::f64::consts::PI;
use std::fmt;
use std::ops::RangeInclusive;
use std::str::FromStr;

use rand::seq::SliceRandom;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rand_distr::{Exp1, StandardNormal};
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::event::{Event, Flavor, Particle};
use crate::kinematics::{FourMomentum, Rotation};
use crate::scalar::Real;
use crate::solvers::child_seed;

pub const Z_MASS_GEV: f64 = 91.2;
pub const H_MASS_GEV: f64 = 125.0;
pub const TOP_MASS_GEV: f64 = 172.5;
pub const W_MASS_GEV: f64 = 80.4;

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Process {
    /// e+e- -> Z -> q q~
    Z,
    /// e+e- -> Z H, H -> b b~, Z -> q q~
    Zh,
    /// e+e- -> t t~, t -> b W, W -> q q'
    Tt,
}

impl Process {
    pub fn n_jet(self) -> usize {
        match self {
            Self::Z => 2,
            Self::Zh => 4,
            Self::Tt => 6,
        }
    }

    pub fn default_sqrt_s(self) -> f64 {
        match self {
            Self::Z => 91.0,
            Self::Zh => 240.0,
            Self::Tt => 350.0,
        }
    }

    /// Flavor of each truth jet, in truth-jet order.
    ///
    /// * Z: `[q, q~]`
    /// * ZH: `[b, b~, q, q~]` (Higgs daughters first)
    /// * tt: `[b1, q1, q1', b2, q2, q2']`, so W1 = jets 1, 2 and W2 = jets 4, 5
    pub fn jet_flavors(self) -> &'static [Flavor] {
        use Flavor::{Light as L, B};
        match self {
            Self::Z => &[L, L],
            Self::Zh => &[B, B, L, L],
            Self::Tt => &[B, L, L, B, L, L],
        }
    }
}

impl fmt::Display for Process {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            Self::Z => "z",
            Self::Zh => "zh",
            Self::Tt => "tt",
        })
    }
}

impl FromStr for Process {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s.to_ascii_lowercase().as_str() {
            "z" => Ok(Self::Z),
            "zh" => Ok(Self::Zh),
            "tt" | "ttbar" => Ok(Self::Tt),
            other => Err(Error::InvalidParameter(format!("unknown process {other:?} (z, zh, tt)"))),
        }
    }
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct SyntheticSpec {
    pub process: Process,
    /// Centre-of-mass energy in GeV.
    pub sqrt_s: f64,
    pub particles_per_jet: RangeInclusive<usize>,
    /// Width in radians of the fragment cone around the parton direction.
    pub angular_spread: f64,
    /// Relative Gaussian energy smear per particle; 0 disables smearing.
    pub energy_smear: f64,
    pub seed: u64,
}

impl SyntheticSpec {
    pub fn new(process: Process, seed: u64) -> Self {
        Self {
            process,
            sqrt_s: process.default_sqrt_s(),
            particles_per_jet: 3..=8,
            angular_spread: 0.1,
            energy_smear: 0.0,
            seed,
        }
    }

    pub fn validate(&self) -> Result<()> {
        if !(self.sqrt_s > 0.0 && self.sqrt_s.is_finite()) {
            return Err(Error::InvalidParameter(format!("sqrt_s must be positive, got {}", self.sqrt_s)));
        }
        if *self.particles_per_jet.start() < 1 || self.particles_per_jet.is_empty() {
            return Err(Error::InvalidParameter(format!(
                "particles_per_jet must be a non-empty range starting at >= 1, got {:?}",
                self.particles_per_jet
            )));
        }
        if !(self.angular_spread > 0.0 && self.angular_spread <= PI / 4.0) {
            return Err(Error::InvalidParameter(format!(
                "angular_spread must be in (0, pi/4], got {}",
                self.angular_spread
            )));
        }
        if !(self.energy_smear >= 0.0 && self.energy_smear.is_finite()) {
            return Err(Error::InvalidParameter(format!(
                "energy_smear must be >= 0, got {}",
                self.energy_smear
            )));
        }
        Ok(())
    }
}

/// A generated event together with its parton-level truth.
#[derive(Clone, Debug, PartialEq)]
pub struct SyntheticEvent<T> {
    pub event: Event<T>,
    /// Parton four-momenta in truth-jet order.
    pub partons: Vec<FourMomentum<f64>>,
}

/// Unit vectors for every two-body decay in the tree, drawn up front so the
/// tree can be re-solved with different daughter masses.
struct Angles(Vec<[f64; 3]>);

fn random_direction(rng: &mut ChaCha8Rng) -> [f64; 3] {
    let c: f64 = rng.random_range(-1.0..=1.0);
    let phi: f64 = rng.random_range(0.0..2.0 * PI);
    let s = (1.0 - c * c).max(0.0).sqrt();
    [s * phi.cos(), s * phi.sin(), c]
}

/// Two-body decay of `parent` into masses `m1`, `m2`, with daughter 1 along
/// `dir` in the parent rest frame.
fn two_body(parent: FourMomentum<f64>, m1: f64, m2: f64, dir: [f64; 3]) -> Result<[FourMomentum<f64>; 2]> {
    let big_m = parent.mass();
    if m1 + m2 > big_m {
        return Err(Error::Kinematics(format!(
            "mass {big_m:.6} GeV cannot decay into {m1:.6} + {m2:.6} GeV"
        )));
    }
    let (s, a, b) = (big_m * big_m, m1 * m1, m2 * m2);
    let lambda = ((s - a - b).powi(2) - 4.0 * a * b).max(0.0);
    let p = lambda.sqrt() / (2.0 * big_m);
    let d1 = FourMomentum::new((p * p + a).sqrt(), p * dir[0], p * dir[1], p * dir[2]);
    let d2 = FourMomentum::new((p * p + b).sqrt(), -p * dir[0], -p * dir[1], -p * dir[2]);
    let v = parent.velocity();
    Ok([d1.boost(v), d2.boost(v)])
}

fn at_rest(m: f64) -> FourMomentum<f64> {
    FourMomentum::new(m, 0.0, 0.0, 0.0)
}

/// Parton momenta in truth-jet order for the given parton masses.
fn solve_tree(process: Process, sqrt_s: f64, m: &[f64], angles: &Angles) -> Result<Vec<FourMomentum<f64>>> {
    let u = &angles.0;
    let cm = at_rest(sqrt_s);
    Ok(match process {
        Process::Z => two_body(cm, m[0], m[1], u[0])?.to_vec(),
        Process::Zh => {
            let [h, z] = two_body(cm, H_MASS_GEV, Z_MASS_GEV, u[0])?;
            let [b1, b2] = two_body(h, m[0], m[1], u[1])?;
            let [q1, q2] = two_body(z, m[2], m[3], u[2])?;
            vec![b1, b2, q1, q2]
        }
        Process::Tt => {
            let [t1, t2] = two_body(cm, TOP_MASS_GEV, TOP_MASS_GEV, u[0])?;
            let mut out = Vec::with_capacity(6);
            for (k, t) in [t1, t2].into_iter().enumerate() {
                let base = 3 * k;
                let [b, w] = two_body(t, m[base], W_MASS_GEV, u[1 + 2 * k])?;
                let [q, qp] = two_body(w, m[base + 1], m[base + 2], u[2 + 2 * k])?;
                out.extend([b, q, qp]);
            }
            out
        }
    })
}

/// Massless fragments of a unit-energy parton along +z.
fn fragment_pattern(rng: &mut ChaCha8Rng, k: usize, spread: f64) -> Vec<FourMomentum<f64>> {
    let weights: Vec<f64> = (0..k).map(|_| rng.sample::<f64, _>(Exp1)).collect();
    let total: f64 = weights.iter().sum();
    weights
        .iter()
        .map(|w| {
            let tx: f64 = spread * rng.sample::<f64, _>(StandardNormal);
            let ty: f64 = spread * rng.sample::<f64, _>(StandardNormal);
            let theta = tx.hypot(ty);
            let phi = ty.atan2(tx);
            let dir = [theta.sin() * phi.cos(), theta.sin() * phi.sin(), theta.cos()];
            FourMomentum::massless(w / total, dir)
        })
        .collect()
}

const Z_AXIS: [f64; 3] = [0.0, 0.0, 1.0];

fn unit(v: [f64; 3]) -> [f64; 3] {
    let n = (v[0] * v[0] + v[1] * v[1] + v[2] * v[2]).sqrt();
    if n == 0.0 {
        Z_AXIS
    } else {
        [v[0] / n, v[1] / n, v[2] / n]
    }
}

/// Lorentz transformation taking the fragment sum onto `target` (which must
/// carry the same invariant mass): align with z, boost along z by the
/// rapidity difference, align with the target direction.
fn map_fragments(fragments: &[FourMomentum<f64>], target: FourMomentum<f64>) -> Vec<FourMomentum<f64>> {
    let q: FourMomentum<f64> = fragments.iter().copied().sum();
    let to_z = Rotation::aligning(unit(q.p3()), Z_AXIS);
    let from_z = Rotation::aligning(Z_AXIS, unit(target.p3()));
    let dy = ((target.e + target.p()) / (q.e + q.p())).ln();
    let beta = dy.tanh();
    fragments
        .iter()
        .map(|f| f.rotated(&to_z).boost_z(beta).rotated(&from_z))
        .collect()
}

const MAX_FRAGMENT_ATTEMPTS: usize = 1000;

/// Generates one event from `spec.seed`.
pub fn generate_synthetic_event<T: Real>(spec: &SyntheticSpec) -> Result<SyntheticEvent<T>> {
    spec.validate()?;
    let mut rng = ChaCha8Rng::seed_from_u64(spec.seed);
    let process = spec.process;
    let n_jet = process.n_jet();
    let n_decays = match process {
        Process::Z => 1,
        Process::Zh => 3,
        Process::Tt => 5,
    };
    let angles = Angles((0..n_decays).map(|_| random_direction(&mut rng)).collect());

    // massless pass fixes the energy scale of each fragment pattern
    let nominal = solve_tree(process, spec.sqrt_s, &vec![0.0; n_jet], &angles)?;
    // wide cones can produce jet masses the decay tree cannot hold; redraw
    let mut attempt = 0;
    let (patterns, partons) = loop {
        let patterns: Vec<Vec<FourMomentum<f64>>> = nominal
            .iter()
            .map(|p| {
                let k = rng.random_range(spec.particles_per_jet.clone());
                fragment_pattern(&mut rng, k, spec.angular_spread)
                    .into_iter()
                    .map(|f| f * p.e)
                    .collect()
            })
            .collect();
        let masses: Vec<f64> = patterns
            .iter()
            .map(|f| f.iter().copied().sum::<FourMomentum<f64>>().mass())
            .collect();
        attempt += 1;
        match solve_tree(process, spec.sqrt_s, &masses, &angles) {
            Ok(partons) => break (patterns, partons),
            Err(e) if attempt >= MAX_FRAGMENT_ATTEMPTS => return Err(e),
            Err(_) => {}
        }
    };

    let flavors = process.jet_flavors();
    let mut particles = Vec::new();
    for (jet, (pattern, parton)) in patterns.iter().zip(&partons).enumerate() {
        for f in map_fragments(pattern, *parton) {
            let f = if spec.energy_smear > 0.0 {
                let g: f64 = rng.sample(StandardNormal);
                f * (1.0 + spec.energy_smear * g).max(1e-3)
            } else {
                f
            };
            particles.push(
                Particle::new(T::lit(f.e), T::lit(f.px), T::lit(f.py), T::lit(f.pz)).with_truth(flavors[jet], jet),
            );
        }
    }
    particles.shuffle(&mut rng);
    let mut event = Event::new(particles);
    event.meta.insert("process".into(), process.to_string());
    event.meta.insert("sqrt_s".into(), spec.sqrt_s.to_string());
    event.meta.insert("seed".into(), spec.seed.to_string());
    Ok(SyntheticEvent { event, partons })
}

/// `count` events; event `k` is generated from [`child_seed`]`(spec.seed, k)`.
pub fn generate_events<T: Real>(spec: &SyntheticSpec, count: usize) -> Result<Vec<SyntheticEvent<T>>> {
    (0..count as u64)
        .map(|k| {
            generate_synthetic_event(&SyntheticSpec {
                seed: child_seed(spec.seed, k),
                ..spec.clone()
            })
        })
        .collect()
}

#[derive(Clone, Debug, PartialEq)]
pub struct Simplified<T> {
    pub event: Event<T>,
    /// Original indices of the kept particles, ascending.
    pub kept: Vec<usize>,
    /// Set when more particles were requested than the event holds.
    pub warning: bool,
}

/// Keeps the `keep` highest-pT particles in their original order; ties in
/// pT go to the lower index.
pub fn simplify_event<T: Real>(event: &Event<T>, keep: usize) -> Result<Simplified<T>> {
    if keep == 0 {
        return Err(Error::InvalidParameter("keep must be >= 1".into()));
    }
    let n = event.len();
    if keep >= n {
        return Ok(Simplified {
            event: event.clone(),
            kept: (0..n).collect(),
            warning: keep > n,
        });
    }
    let mut order: Vec<usize> = (0..n).collect();
    order.sort_by(|&a, &b| {
        let (pa, pb) = (event.particles[a].pt(), event.particles[b].pt());
        pb.partial_cmp(&pa).unwrap_or(std::cmp::Ordering::Equal).then(a.cmp(&b))
    });
    let mut kept = order[..keep].to_vec();
    kept.sort_unstable();
    let particles = kept.iter().map(|&i| event.particles[i].clone()).collect();
    Ok(Simplified {
        event: Event {
            meta: event.meta.clone(),
            particles,
        },
        kept,
        warning: false,
    })
}
