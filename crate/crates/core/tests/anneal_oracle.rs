mod common;

use bifurjet::{anneal_evolve, build_target_hamiltonian, ground_state_probability, AnnealSchedule, BitConfig, IsingModel};
use nalgebra::{DMatrix, DVector};
use num_complex::Complex64;
use proptest::prelude::*;

/// Dense `A sum_i X_i + B diag(target)`.
fn dense_hamiltonian(diag: &[f64], n: usize, a: f64, b: f64) -> DMatrix<f64> {
    let dim = diag.len();
    DMatrix::from_fn(dim, dim, |r, c| {
        if r == c {
            b * diag[r]
        } else if (r ^ c).count_ones() == 1 && (r ^ c) < 1 << n {
            a
        } else {
            0.0
        }
    })
}

/// Same midpoint stepping, each step exponentiated by eigendecomposition.
fn oracle_evolve(m: &IsingModel<f64>, schedule: AnnealSchedule, total: f64, steps: usize) -> Vec<Complex64> {
    let n = m.n();
    let diag = build_target_hamiltonian(m).unwrap();
    let dim = diag.len();
    let amp = (0.5f64).powf(n as f64 / 2.0);
    let mut re = DVector::from_fn(dim, |b, _| if b.count_ones() % 2 == 0 { amp } else { -amp });
    let mut im = DVector::zeros(dim);
    let dt = total / steps as f64;
    for k in 1..=steps {
        let s = (k as f64 - 0.5) / steps as f64;
        let eig = dense_hamiltonian(&diag, n, schedule.a(s), schedule.b(s)).symmetric_eigen();
        let v = &eig.eigenvectors;
        let (cr, ci) = (v.transpose() * &re, v.transpose() * &im);
        let mut nr = DVector::zeros(dim);
        let mut ni = DVector::zeros(dim);
        for j in 0..dim {
            let (sin, cos) = (-eig.eigenvalues[j] * dt).sin_cos();
            nr[j] = cos * cr[j] - sin * ci[j];
            ni[j] = sin * cr[j] + cos * ci[j];
        }
        re = v * nr;
        im = v * ni;
    }
    (0..dim).map(|j| Complex64::new(re[j], im[j])).collect()
}

#[test]
fn propagator_matches_eigendecomposition() {
    let mut rng = common::rng(2024);
    for n in 1..=3 {
        for schedule in [AnnealSchedule::Linear, AnnealSchedule::Quadratic] {
            for &(total, steps) in &[(1.0, 4), (10.0, 50), (40.0, 200)] {
                let m = common::random_ising(&mut rng, n);
                let psi = anneal_evolve(&m, schedule, total, steps).unwrap();
                let want = oracle_evolve(&m, schedule, total, steps);
                for (a, b) in psi.amplitudes().iter().zip(&want) {
                    assert!((a - b).norm() < 1e-10, "n={n} T={total}: {a} vs {b}");
                }
            }
        }
    }
}

#[test]
fn long_anneal_concentrates_on_ground_state() {
    // averaged over models, slower sweeps end closer to the ground state
    let mut rng = common::rng(77);
    let models: Vec<_> = (0..20).map(|_| common::random_ising(&mut rng, 2)).collect();
    let mean_p = |t: f64| {
        models
            .iter()
            .map(|m| {
                let psi = anneal_evolve(m, AnnealSchedule::Linear, t, (20.0 * t) as usize).unwrap();
                ground_state_probability(&psi, m).unwrap()
            })
            .sum::<f64>()
            / models.len() as f64
    };
    let ps: Vec<f64> = [1.0, 4.0, 16.0, 64.0, 128.0].iter().map(|&t| mean_p(t)).collect();
    for w in ps.windows(2) {
        assert!(w[1] >= w[0] - 1e-3, "{ps:?}");
    }
    assert!(ps[4] > 0.8 && ps[4] > ps[0] + 0.5, "{ps:?}");
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(24))]

    #[test]
    fn target_minimum_is_the_ising_minimum(n in 1usize..=12, seed in any::<u64>()) {
        let m = common::random_ising(&mut common::rng(seed), n);
        let diag = build_target_hamiltonian(&m).unwrap();
        let (e_min, _) = m.exhaustive_ground_states(1e-12).unwrap();
        let d_min = diag.iter().copied().fold(f64::INFINITY, f64::min);
        prop_assert!((d_min - e_min).abs() <= 1e-12 * e_min.abs().max(1.0));
        // bit 0 of the index is spin +1
        for idx in [0usize, diag.len() - 1] {
            let bits: Vec<u8> = (0..n).map(|i| ((idx >> i) & 1) as u8).collect();
            let spins = BitConfig::new(bits).unwrap().to_spins();
            let flipped: Vec<i8> = spins.as_slice().iter().map(|s| -s).collect();
            let e = m.energy(&bifurjet::SpinConfig::new(flipped).unwrap()).unwrap();
            prop_assert!((diag[idx] - e).abs() <= 1e-12 * e.abs().max(1.0));
        }
    }

    #[test]
    fn evolution_is_unitary(n in 1usize..=6, seed in any::<u64>(), t in 0.5f64..50.0) {
        let m = common::random_ising(&mut common::rng(seed), n);
        let psi = anneal_evolve(&m, AnnealSchedule::Linear, t, 40).unwrap();
        prop_assert!((psi.norm() - 1.0).abs() < 1e-10);
    }
}
