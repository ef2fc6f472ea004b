mod common;

use bifurjet::solvers::{SbIntegrator, SbVariant};
use bifurjet::{multi_shot, IsingModel, SaParams, SbParams, SolverSpec};
use proptest::prelude::*;

fn specs() -> impl Strategy<Value = SolverSpec<f64>> {
    (10usize..200, 1usize..20).prop_flat_map(|(steps, every)| {
        prop_oneof![
            Just(SolverSpec::Bsb(SbParams { steps, record_every: every, ..SbParams::default() })),
            Just(SolverSpec::Dsb(SbParams { steps, record_every: every, ..SbParams::default() })),
            Just(SolverSpec::Sa(SaParams { sweeps: steps, record_every: every, ..SaParams::default() })),
        ]
    })
}

fn model() -> impl Strategy<Value = IsingModel<f64>> {
    (1usize..=24, any::<u64>()).prop_map(|(n, seed)| common::random_ising(&mut common::rng(seed), n))
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(48))]

    #[test]
    fn positions_stay_inside_the_walls(m in model(), seed in any::<u64>(), ballistic in any::<bool>()) {
        let variant = if ballistic { SbVariant::Ballistic } else { SbVariant::Discrete };
        let params = SbParams { steps: 150, dt: 1.0, ..SbParams::default() };
        let mut sb = SbIntegrator::new(&m, &params, variant, seed).unwrap();
        while sb.advance().unwrap() {
            prop_assert!(sb.positions().iter().all(|x| x.abs() <= 1.0));
        }
    }

    #[test]
    fn best_energy_never_increases(m in model(), spec in specs(), seed in any::<u64>()) {
        let r = spec.solve(&m, seed).unwrap();
        for w in r.trajectory.windows(2) {
            prop_assert!(w[1].best_energy <= w[0].best_energy);
            prop_assert!(w[0].step < w[1].step);
        }
        prop_assert_eq!(m.energy(&r.best_spins).unwrap(), r.best_energy);
        if let Some(last) = r.trajectory.last() {
            prop_assert_eq!(last.best_energy, r.best_energy);
        }
    }

    #[test]
    fn same_seed_same_outcome(m in model(), spec in specs(), seed in any::<u64>()) {
        let a = spec.solve(&m, seed).unwrap();
        let b = spec.solve(&m, seed).unwrap();
        prop_assert!(a.same_outcome(&b));
    }

    #[test]
    fn ensemble_best_bounds_every_shot(m in model(), spec in specs(), seed in any::<u64>(), shots in 1usize..8) {
        let e = multi_shot(&spec, &m, shots, seed).unwrap();
        prop_assert_eq!(e.shots.len(), shots);
        for s in &e.shots {
            prop_assert!(e.best_energy() <= s.best_energy);
        }
        for (mean, idx) in e.energy_mean.iter().zip(0..) {
            let lo = e.shots.iter().map(|s| s.trajectory[idx].best_energy).fold(f64::INFINITY, f64::min);
            prop_assert!(*mean >= lo - 1e-12);
        }
    }
}

#[test]
fn small_instances_reach_the_exhaustive_minimum() {
    let mut rng = common::rng(808);
    let specs: [SolverSpec<f64>; 2] = [SolverSpec::Bsb(SbParams::default()), SolverSpec::Sa(SaParams::default())];
    for spec in &specs {
        let mut hits = 0;
        for k in 0..20 {
            let m = common::random_ising(&mut rng, 8);
            let (e_min, _) = m.exhaustive_ground_states(1e-12).unwrap();
            let best = multi_shot(spec, &m, 20, k).unwrap().best_energy();
            assert!(best >= e_min - 1e-9);
            if best <= e_min + 1e-9 * e_min.abs().max(1.0) {
                hits += 1;
            }
        }
        assert!(hits >= 18, "{} reached the minimum on {hits}/20", spec.name());
    }
}

#[test]
fn thread_count_does_not_change_results() {
    let m = common::random_ising(&mut common::rng(5), 16);
    let spec = SolverSpec::Bsb(SbParams { steps: 300, record_every: 25, ..SbParams::default() });
    let run = |threads| {
        rayon::ThreadPoolBuilder::new()
            .num_threads(threads)
            .build()
            .unwrap()
            .install(|| multi_shot(&spec, &m, 12, 99).unwrap())
    };
    let (a, b) = (run(1), run(3));
    assert!(a.shots.iter().zip(&b.shots).all(|(x, y)| x.same_outcome(y)));
    assert_eq!(a.energy_mean, b.energy_mean);
}
