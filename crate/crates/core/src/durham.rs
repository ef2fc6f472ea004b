//! Exclusive Durham (ee-kt) clustering and event preselection.
//!
//! Pseudojets live in fixed slots: merging the pair `(a, b)` with `a < b`
//! stores the E-scheme sum in slot `a` and retires slot `b`. The pair with
//! the smallest `d_ab` is merged first; exact ties go to the
//! lexicographically smallest `(a, b)`.

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::event::{Event, Flavor};
use crate::kinematics::{eekt_measure, FourMomentum};
use crate::scalar::Real;

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct Jet<T> {
    pub p4: FourMomentum<T>,
    pub constituents: Vec<usize>,
    pub btag: bool,
}

impl<T: Real> Jet<T> {
    /// Jet from constituent indices into `event`, tagged as b when more than
    /// half of its energy comes from truth-b particles.
    pub fn from_constituents(event: &Event<T>, mut constituents: Vec<usize>) -> Self {
        constituents.sort_unstable();
        let p4: FourMomentum<T> = constituents.iter().map(|&i| event.particles[i].p4()).sum();
        let b_energy: T = constituents
            .iter()
            .map(|&i| &event.particles[i])
            .filter(|p| p.flavor == Some(Flavor::B))
            .map(|p| p.e)
            .sum();
        Self {
            p4,
            btag: b_energy > T::lit(0.5) * p4.e,
            constituents,
        }
    }

    pub fn pt(&self) -> T {
        self.p4.pt()
    }
}

/// Durham distance between pseudojets. A zero 3-momentum counts as
/// orthogonal to everything.
#[inline]
fn pair_distance<T: Real>(a: &FourMomentum<T>, b: &FourMomentum<T>) -> T {
    let cos = a.cos_angle(b).unwrap_or(T::zero());
    eekt_measure(a.e, b.e, cos)
}

fn check_input<T: Real>(event: &Event<T>, n_jet: usize) -> Result<()> {
    if n_jet == 0 {
        return Err(Error::InvalidParameter("n_jet must be >= 1".into()));
    }
    if event.len() < n_jet {
        return Err(Error::TooFewParticles {
            needed: n_jet,
            found: event.len(),
        });
    }
    Ok(())
}

fn into_jets<T: Real>(event: &Event<T>, members: Vec<Option<Vec<usize>>>) -> Vec<Jet<T>> {
    members
        .into_iter()
        .flatten()
        .map(|c| Jet::from_constituents(event, c))
        .collect()
}

/// Clusters `event` into exactly `n_jet` jets.
///
/// Keeps, for every live slot `i`, its nearest live partner `j > i`, so a
/// merge only rescans slots whose partner changed.
pub fn durham_exclusive<T: Real>(event: &Event<T>, n_jet: usize) -> Result<Vec<Jet<T>>> {
    check_input(event, n_jet)?;
    let n = event.len();
    let mut p4: Vec<FourMomentum<T>> = event.particles.iter().map(|p| p.p4()).collect();
    let mut members: Vec<Option<Vec<usize>>> = (0..n).map(|i| Some(vec![i])).collect();
    let mut alive = vec![true; n];
    let mut nn: Vec<Option<(T, usize)>> = vec![None; n];

    let scan = |i: usize, p4: &[FourMomentum<T>], alive: &[bool]| -> Option<(T, usize)> {
        let mut best: Option<(T, usize)> = None;
        for j in i + 1..p4.len() {
            if alive[j] {
                let d = pair_distance(&p4[i], &p4[j]);
                if best.is_none_or(|(bd, _)| d < bd) {
                    best = Some((d, j));
                }
            }
        }
        best
    };

    for i in 0..n {
        nn[i] = scan(i, &p4, &alive);
    }

    let mut remaining = n;
    while remaining > n_jet {
        let mut pick: Option<(T, usize, usize)> = None;
        for (i, entry) in nn.iter().enumerate() {
            if let (true, Some((d, j))) = (alive[i], entry) {
                if pick.is_none_or(|(bd, _, _)| *d < bd) {
                    pick = Some((*d, i, *j));
                }
            }
        }
        let (_, a, b) = pick.expect("at least two live pseudojets");
        p4[a] = p4[a] + p4[b];
        let moved = members[b].take().expect("live slot");
        members[a].as_mut().expect("live slot").extend(moved);
        alive[b] = false;
        nn[b] = None;
        remaining -= 1;

        for i in 0..n {
            if !alive[i] {
                continue;
            }
            match nn[i] {
                Some((_, j)) if j == a || j == b || i == a => nn[i] = scan(i, &p4, &alive),
                Some((d, j)) if i < a => {
                    let da = pair_distance(&p4[i], &p4[a]);
                    if da < d || (da == d && a < j) {
                        nn[i] = Some((da, a));
                    }
                }
                None if i < a => nn[i] = scan(i, &p4, &alive),
                _ => {}
            }
        }
    }
    Ok(into_jets(event, members))
}

/// Reference clustering that rescans every live pair before each merge.
pub fn durham_exclusive_naive<T: Real>(event: &Event<T>, n_jet: usize) -> Result<Vec<Jet<T>>> {
    check_input(event, n_jet)?;
    let n = event.len();
    let mut p4: Vec<FourMomentum<T>> = event.particles.iter().map(|p| p.p4()).collect();
    let mut members: Vec<Option<Vec<usize>>> = (0..n).map(|i| Some(vec![i])).collect();
    let mut remaining = n;
    while remaining > n_jet {
        let mut pick: Option<(T, usize, usize)> = None;
        for a in 0..n {
            if members[a].is_none() {
                continue;
            }
            for b in a + 1..n {
                if members[b].is_none() {
                    continue;
                }
                let d = pair_distance(&p4[a], &p4[b]);
                if pick.is_none_or(|(bd, _, _)| d < bd) {
                    pick = Some((d, a, b));
                }
            }
        }
        let (_, a, b) = pick.expect("two live pseudojets");
        p4[a] = p4[a] + p4[b];
        let moved = members[b].take().expect("live");
        members[a].as_mut().expect("live").extend(moved);
        remaining -= 1;
    }
    Ok(into_jets(event, members))
}

/// `sqrt(2 min(En^2, Em^2) (1 - cos theta_nm))` in GeV.
pub fn jet_separation<T: Real>(jn: &Jet<T>, jm: &Jet<T>) -> Result<T> {
    if jn.p4.p2() <= T::zero() {
        return Err(Error::ZeroMomentum { index: 0 });
    }
    if jm.p4.p2() <= T::zero() {
        return Err(Error::ZeroMomentum { index: 1 });
    }
    let cos = jn.p4.cos_angle(&jm.p4).expect("non-zero momenta");
    Ok(eekt_measure(jn.p4.e, jm.p4.e, cos).sqrt())
}

pub const ACCEPTANCE_COS_THETA: f64 = 0.9;
pub const MIN_SEPARATION_GEV: f64 = 20.0;

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(tag = "cut", rename_all = "snake_case")]
pub enum CutFailure {
    Acceptance { jet: usize, cos_theta: f64 },
    Separation { jets: (usize, usize), separation: f64 },
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct Preselection {
    pub pass: bool,
    pub failures: Vec<CutFailure>,
}

/// Every jet within `|cos theta| < 0.9` and the two lowest-pT jets separated
/// by more than 20 GeV.
pub fn event_preselection<T: Real>(jets: &[Jet<T>]) -> Result<Preselection> {
    if jets.len() < 2 {
        return Err(Error::Multiplicity {
            what: "jets",
            expected: 2,
            found: jets.len(),
        });
    }
    let mut failures = Vec::new();
    for (k, jet) in jets.iter().enumerate() {
        // a zero-momentum jet has no direction and cannot be inside the acceptance
        let cos = jet.p4.cos_theta().map_or(1.0, |c| c.as_f64());
        if cos.abs() >= ACCEPTANCE_COS_THETA {
            failures.push(CutFailure::Acceptance { jet: k, cos_theta: cos });
        }
    }
    let mut order: Vec<usize> = (0..jets.len()).collect();
    order.sort_by(|&a, &b| jets[a].pt().partial_cmp(&jets[b].pt()).unwrap().then(a.cmp(&b)));
    let (lo, hi) = (order[0].min(order[1]), order[0].max(order[1]));
    let separation = jet_separation(&jets[lo], &jets[hi]).map_or(0.0, |s| s.as_f64());
    if separation <= MIN_SEPARATION_GEV {
        failures.push(CutFailure::Separation {
            jets: (lo, hi),
            separation,
        });
    }
    Ok(Preselection {
        pass: failures.is_empty(),
        failures,
    })
}
