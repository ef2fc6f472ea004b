//! Particle-flow candidates and events.

use std::collections::BTreeMap;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::kinematics::FourMomentum;
use crate::scalar::Real;

/// Truth flavor of the parton a particle came from.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Flavor {
    B,
    Light,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct Particle<T> {
    pub e: T,
    pub px: T,
    pub py: T,
    pub pz: T,
    pub flavor: Option<Flavor>,
    pub truth_jet: Option<usize>,
}

impl<T: Real> Particle<T> {
    pub fn new(e: T, px: T, py: T, pz: T) -> Self {
        Self {
            e,
            px,
            py,
            pz,
            flavor: None,
            truth_jet: None,
        }
    }

    pub fn from_p4(p: FourMomentum<T>) -> Self {
        Self::new(p.e, p.px, p.py, p.pz)
    }

    pub fn with_truth(mut self, flavor: Flavor, truth_jet: usize) -> Self {
        self.flavor = Some(flavor);
        self.truth_jet = Some(truth_jet);
        self
    }

    pub fn p4(&self) -> FourMomentum<T> {
        FourMomentum::new(self.e, self.px, self.py, self.pz)
    }

    pub fn pt(&self) -> T {
        self.px.hypot(self.py)
    }

    /// Positive energy and at most rounding-level spacelike.
    pub fn validate(&self, index: usize) -> Result<()> {
        let p = self.p4();
        if !p.is_finite() {
            return Err(Error::NonFinite {
                what: "particle four-momentum",
                index,
            });
        }
        if self.e <= T::zero() {
            return Err(Error::InvalidParameter(format!(
                "particle {index} has non-positive energy {}",
                self.e
            )));
        }
        if p.m2() < -T::lit(1e-6) * self.e * self.e {
            return Err(Error::InvalidParameter(format!(
                "particle {index} is spacelike (m^2 = {})",
                p.m2()
            )));
        }
        Ok(())
    }
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct Event<T> {
    #[serde(default)]
    pub meta: BTreeMap<String, String>,
    pub particles: Vec<Particle<T>>,
}

impl<T: Real> Event<T> {
    pub fn new(particles: Vec<Particle<T>>) -> Self {
        Self {
            meta: BTreeMap::new(),
            particles,
        }
    }

    pub fn len(&self) -> usize {
        self.particles.len()
    }

    pub fn is_empty(&self) -> bool {
        self.particles.is_empty()
    }

    pub fn total_momentum(&self) -> FourMomentum<T> {
        self.particles.iter().map(Particle::p4).sum()
    }

    pub fn validate(&self) -> Result<()> {
        self.particles
            .iter()
            .enumerate()
            .try_for_each(|(i, p)| p.validate(i))
    }

    /// Constituent indices grouped by truth jet, if every particle is labelled.
    pub fn truth_partition(&self) -> Option<Vec<Vec<usize>>> {
        let n_jets = self
            .particles
            .iter()
            .map(|p| p.truth_jet.map(|j| j + 1))
            .collect::<Option<Vec<_>>>()?
            .into_iter()
            .max()
            .unwrap_or(0);
        let mut jets = vec![Vec::new(); n_jets];
        for (i, p) in self.particles.iter().enumerate() {
            jets[p.truth_jet?].push(i);
        }
        Some(jets)
    }
}
