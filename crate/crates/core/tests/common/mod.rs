#![allow(dead_code)]

use bifurjet::kinematics::FourMomentum;
use bifurjet::{Event, IsingModel, Particle, SquareMatrix};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

pub fn rng(seed: u64) -> ChaCha8Rng {
    ChaCha8Rng::seed_from_u64(seed)
}

/// Couplings and fields uniform in [-1, 1], zero offset.
pub fn random_ising(rng: &mut impl Rng, n: usize) -> IsingModel<f64> {
    let mut j = SquareMatrix::zeros(n);
    for a in 0..n {
        for b in a + 1..n {
            let v = rng.random_range(-1.0..=1.0);
            j[(a, b)] = v;
            j[(b, a)] = v;
        }
    }
    let h = (0..n).map(|_| rng.random_range(-1.0..=1.0)).collect();
    IsingModel::new(j, h, 0.0).unwrap()
}

/// Massless particles with isotropic directions and energies in [1, 50] GeV.
pub fn random_event(rng: &mut impl Rng, n: usize) -> Event<f64> {
    let particles = (0..n)
        .map(|_| {
            let c: f64 = rng.random_range(-1.0..=1.0);
            let phi: f64 = rng.random_range(0.0..std::f64::consts::TAU);
            let s = (1.0 - c * c).sqrt();
            let e = rng.random_range(1.0..50.0);
            Particle::from_p4(FourMomentum::massless(e, [s * phi.cos(), s * phi.sin(), c]))
        })
        .collect();
    Event::new(particles)
}

pub fn rel_close(a: f64, b: f64, rel: f64) -> bool {
    (a - b).abs() <= rel * a.abs().max(b.abs()).max(1.0)
}

pub fn median(mut v: Vec<f64>) -> f64 {
    v.sort_by(f64::total_cmp);
    let n = v.len();
    if n % 2 == 1 {
        v[n / 2]
    } else {
        0.5 * (v[n / 2 - 1] + v[n / 2])
    }
}
