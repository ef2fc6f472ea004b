//! Jet clustering as a QUBO.
//!
//! The dijet form assigns each constituent a single bit (jet A or B). The
//! multijet form uses one bit per `(jet, constituent)` pair in jet-major
//! order, `index = n * n_input + i`, plus a one-hot penalty
//! `lambda * sum_i (1 - sum_n s_i^(n))^2` that forces every constituent into
//! exactly one jet.

use std::fmt;
use std::str::FromStr;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::event::{Event, Particle};
use crate::ising::{BitConfig, Qubo, SquareMatrix};
use crate::kinematics::eekt_measure;
use crate::scalar::Real;

/// Pairwise constituent distance used to fill the QUBO matrix.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum DistanceMetric {
    /// `-cos(theta_ij) / 2`, dimensionless.
    Angle,
    /// `2 min(Ei^2, Ej^2) (1 - cos theta_ij)`, in GeV^2.
    EeKt,
}

impl fmt::Display for DistanceMetric {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            Self::Angle => "angle",
            Self::EeKt => "eekt",
        })
    }
}

impl FromStr for DistanceMetric {
    type Err = Error;
    fn from_str(s: &str) -> Result<Self> {
        match s.to_ascii_lowercase().as_str() {
            "angle" => Ok(Self::Angle),
            "eekt" | "ee-kt" | "durham" => Ok(Self::EeKt),
            other => Err(Error::InvalidParameter(format!("unknown metric '{other}'"))),
        }
    }
}

impl DistanceMetric {
    pub fn distance<T: Real>(self, pi: &Particle<T>, pj: &Particle<T>) -> Result<T> {
        match self {
            Self::Angle => angle_distance(pi, pj),
            Self::EeKt => eekt_distance(pi, pj),
        }
    }

    fn self_distance<T: Real>(self) -> T {
        match self {
            Self::Angle => -T::lit(0.5),
            Self::EeKt => T::zero(),
        }
    }
}

fn cos_between<T: Real>(pi: &Particle<T>, pj: &Particle<T>) -> Result<T> {
    let (a, b) = (pi.p4(), pj.p4());
    if a.p2() <= T::zero() {
        return Err(Error::ZeroMomentum { index: 0 });
    }
    if b.p2() <= T::zero() {
        return Err(Error::ZeroMomentum { index: 1 });
    }
    Ok(a.cos_angle(&b).expect("momenta checked non-zero"))
}

/// Angle-based distance `-(p_i . p_j) / (2 |p_i| |p_j|)`.
///
/// A zero-momentum argument is reported as index 0 or 1 (argument position).
pub fn angle_distance<T: Real>(pi: &Particle<T>, pj: &Particle<T>) -> Result<T> {
    Ok(-cos_between(pi, pj)? * T::lit(0.5))
}

/// ee-kt distance `2 min(Ei^2, Ej^2) (1 - cos theta_ij)`.
pub fn eekt_distance<T: Real>(pi: &Particle<T>, pj: &Particle<T>) -> Result<T> {
    Ok(eekt_measure(pi.e, pj.e, cos_between(pi, pj)?))
}

/// Full raw distance matrix including the diagonal (`-1/2` for the angle
/// metric, zero for ee-kt).
pub fn distance_matrix<T: Real>(event: &Event<T>, metric: DistanceMetric) -> Result<SquareMatrix<T>> {
    let parts = &event.particles;
    if let Some(index) = parts.iter().position(|p| p.p4().p2() <= T::zero()) {
        return Err(Error::ZeroMomentum { index });
    }
    let n = parts.len();
    let mut m = SquareMatrix::zeros(n);
    for i in 0..n {
        m[(i, i)] = metric.self_distance();
        for j in i + 1..n {
            let d = metric.distance(&parts[i], &parts[j])?;
            m[(i, j)] = d;
            m[(j, i)] = d;
        }
    }
    Ok(m)
}

/// Single-bit-per-constituent QUBO `sum_ij Q_ij s_i s_j`.
pub fn build_dijet_qubo<T: Real>(event: &Event<T>, metric: DistanceMetric) -> Result<Qubo<T>> {
    if event.len() < 2 {
        return Err(Error::TooFewParticles {
            needed: 2,
            found: event.len(),
        });
    }
    Qubo::canonicalize(&distance_matrix(event, metric)?)
}

/// `1.1 * n_input * max(q_max, 1e-12)`: strictly above the bound
/// `lambda > n_input * max_ij Q_ij` whenever `q_max > 0`.
pub fn default_lambda<T: Real>(q_max: T, n_input: usize) -> T {
    T::lit(1.1) * T::of_usize(n_input) * q_max.max(T::lit(1e-12))
}

/// A multijet QUBO together with what is needed to decode its solutions.
#[derive(Clone, Debug)]
pub struct MultijetProblem<T> {
    pub qubo: Qubo<T>,
    pub distances: SquareMatrix<T>,
    pub n_input: usize,
    pub n_jet: usize,
    pub lambda: T,
}

impl<T: Real> MultijetProblem<T> {
    pub fn build(
        event: &Event<T>,
        n_jet: usize,
        metric: DistanceMetric,
        lambda: Option<T>,
    ) -> Result<Self> {
        let n_input = event.len();
        if n_jet < 2 {
            return Err(Error::InvalidParameter(format!("n_jet must be >= 2, got {n_jet}")));
        }
        if n_input < n_jet {
            return Err(Error::TooFewParticles {
                needed: n_jet,
                found: n_input,
            });
        }
        if let Some(l) = lambda {
            if !(l > T::zero()) || !l.is_finite() {
                return Err(Error::InvalidParameter(format!("lambda must be positive, got {l}")));
            }
        }
        let distances = distance_matrix(event, metric)?;
        let q_max = distances.max_entry().expect("n_input >= 2");
        let lambda = lambda.unwrap_or_else(|| default_lambda(q_max, n_input));

        let size = n_jet * n_input;
        let mut raw = SquareMatrix::zeros(size);
        for n in 0..n_jet {
            let base = n * n_input;
            for i in 0..n_input {
                for j in 0..n_input {
                    raw[(base + i, base + j)] = distances[(i, j)];
                }
            }
        }
        let mut qubo = Qubo::canonicalize(&raw)?;

        // lambda (1 - sum_n s_n)^2 = lambda - lambda sum_n s_n + lambda sum_{n != m} s_n s_m
        for i in 0..n_input {
            for n in 0..n_jet {
                qubo.add_linear(n * n_input + i, -lambda);
                for m in n + 1..n_jet {
                    qubo.add_coupling_pair(n * n_input + i, m * n_input + i, lambda);
                }
            }
        }
        qubo.add_offset(lambda * T::of_usize(n_input));

        Ok(Self {
            qubo,
            distances,
            n_input,
            n_jet,
            lambda,
        })
    }

    /// Decodes `bits` and repairs any one-hot violations.
    pub fn assignment(&self, bits: &BitConfig) -> Result<JetAssignment> {
        Ok(decode_assignment(bits, self.n_input, self.n_jet)?.repair(&self.distances))
    }

    /// Sum of within-jet distances over ordered pairs `i != j`.
    pub fn clustering_energy(&self, a: &JetAssignment) -> T {
        a.jets()
            .iter()
            .map(|jet| {
                let mut e = T::zero();
                for &i in jet {
                    for &j in jet {
                        if i != j {
                            e = e + self.distances[(i, j)];
                        }
                    }
                }
                e
            })
            .sum()
    }
}

/// Multijet QUBO with one-hot penalty (see [`MultijetProblem`]).
pub fn build_multijet_qubo<T: Real>(
    event: &Event<T>,
    n_jet: usize,
    metric: DistanceMetric,
    lambda: Option<T>,
) -> Result<Qubo<T>> {
    MultijetProblem::build(event, n_jet, metric, lambda).map(|p| p.qubo)
}

/// Partition of constituent indices into jets.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct JetAssignment {
    jets: Vec<Vec<usize>>,
    n_input: usize,
    /// Set when one-hot violations were repaired during decoding.
    pub repaired: bool,
}

impl JetAssignment {
    /// Validates that `jets` partitions `0..n_input`. Empty jets are allowed.
    pub fn new(mut jets: Vec<Vec<usize>>, n_input: usize) -> Result<Self> {
        let mut seen = vec![false; n_input];
        for jet in &mut jets {
            jet.sort_unstable();
            for &i in jet.iter() {
                if i >= n_input {
                    return Err(Error::UniverseMismatch(format!(
                        "constituent {i} outside 0..{n_input}"
                    )));
                }
                if std::mem::replace(&mut seen[i], true) {
                    return Err(Error::UniverseMismatch(format!("constituent {i} appears twice")));
                }
            }
        }
        if let Some(i) = seen.iter().position(|s| !s) {
            return Err(Error::UniverseMismatch(format!("constituent {i} is unassigned")));
        }
        Ok(Self {
            jets,
            n_input,
            repaired: false,
        })
    }

    pub fn jets(&self) -> &[Vec<usize>] {
        &self.jets
    }

    pub fn n_jet(&self) -> usize {
        self.jets.len()
    }

    pub fn n_input(&self) -> usize {
        self.n_input
    }

    pub fn has_empty_jet(&self) -> bool {
        self.jets.iter().any(Vec::is_empty)
    }

    /// One-hot bit vector in jet-major order.
    pub fn encode(&self) -> BitConfig {
        let mut bits = BitConfig::zeros(self.n_input * self.jets.len());
        for (n, jet) in self.jets.iter().enumerate() {
            for &i in jet {
                bits.set(n * self.n_input + i, true);
            }
        }
        bits
    }
}

/// Constituents that break the one-hot constraint.
#[derive(Clone, Debug, Default, PartialEq, Eq, Serialize, Deserialize)]
pub struct ViolationReport {
    pub unassigned: Vec<usize>,
    pub multiply_assigned: Vec<usize>,
}

impl ViolationReport {
    pub fn is_empty(&self) -> bool {
        self.unassigned.is_empty() && self.multiply_assigned.is_empty()
    }

    pub fn count(&self) -> usize {
        self.unassigned.len() + self.multiply_assigned.len()
    }
}

/// Raw decoding of solver bits before repair.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct DecodedBits {
    n_input: usize,
    n_jet: usize,
    memberships: Vec<Vec<usize>>,
    pub report: ViolationReport,
}

/// Constituent `i` belongs to jet `n` iff `bits[n * n_input + i] == 1`.
pub fn decode_assignment(bits: &BitConfig, n_input: usize, n_jet: usize) -> Result<DecodedBits> {
    if bits.len() != n_input * n_jet {
        return Err(Error::DimensionMismatch {
            expected: n_input * n_jet,
            found: bits.len(),
        });
    }
    let b = bits.as_slice();
    let memberships: Vec<Vec<usize>> = (0..n_input)
        .map(|i| (0..n_jet).filter(|&n| b[n * n_input + i] == 1).collect())
        .collect();
    let mut report = ViolationReport::default();
    for (i, m) in memberships.iter().enumerate() {
        match m.len() {
            0 => report.unassigned.push(i),
            1 => {}
            _ => report.multiply_assigned.push(i),
        }
    }
    Ok(DecodedBits {
        n_input,
        n_jet,
        memberships,
        report,
    })
}

impl DecodedBits {
    pub fn is_valid(&self) -> bool {
        self.report.is_empty()
    }

    /// The assignment if no constituent violates the one-hot constraint.
    pub fn strict(&self) -> Option<JetAssignment> {
        self.is_valid().then(|| {
            let mut jets = vec![Vec::new(); self.n_jet];
            for (i, m) in self.memberships.iter().enumerate() {
                jets[m[0]].push(i);
            }
            JetAssignment {
                jets,
                n_input: self.n_input,
                repaired: false,
            }
        })
    }

    /// Places every violating constituent, in index order, into the jet with
    /// the smallest summed distance to its current members (lowest jet index
    /// on ties). The result is flagged as repaired when anything moved.
    pub fn repair<T: Real>(&self, distances: &SquareMatrix<T>) -> JetAssignment {
        let mut jets = vec![Vec::new(); self.n_jet];
        let mut pending = Vec::new();
        for (i, m) in self.memberships.iter().enumerate() {
            if m.len() == 1 {
                jets[m[0]].push(i);
            } else {
                pending.push(i);
            }
        }
        for &i in &pending {
            let mut best = (T::infinity(), 0);
            for (n, jet) in jets.iter().enumerate() {
                let added: T = jet.iter().map(|&j| distances[(i, j)]).sum();
                if added < best.0 {
                    best = (added, n);
                }
            }
            jets[best.1].push(i);
        }
        for jet in &mut jets {
            jet.sort_unstable();
        }
        JetAssignment {
            jets,
            n_input: self.n_input,
            repaired: !pending.is_empty(),
        }
    }
}
