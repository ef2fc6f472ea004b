mod common;

use bifurjet::{BitConfig, IsingModel, Qubo, SpinConfig, SquareMatrix};
use common::rel_close;
use proptest::prelude::*;

fn matrix(n: usize) -> impl Strategy<Value = SquareMatrix<f64>> {
    prop::collection::vec(-10.0f64..10.0, n * n).prop_map(move |v| SquareMatrix::from_fn(n, |i, j| v[i * n + j]))
}

fn qubo(max_n: usize) -> impl Strategy<Value = Qubo<f64>> {
    (1..=max_n).prop_flat_map(|n| {
        (matrix(n), prop::collection::vec(-10.0f64..10.0, n), -5.0f64..5.0)
            .prop_map(|(m, l, c)| Qubo::from_raw(&m, l, c).unwrap())
    })
}

fn ising(max_n: usize) -> impl Strategy<Value = IsingModel<f64>> {
    (2..=max_n).prop_flat_map(|n| {
        (matrix(n), prop::collection::vec(-3.0f64..3.0, n), -2.0f64..2.0).prop_map(move |(m, h, c)| {
            let j = SquareMatrix::from_fn(n, |a, b| if a == b { 0.0 } else { 0.5 * (m[(a, b)] + m[(b, a)]) });
            IsingModel::new(j, h, c).unwrap()
        })
    })
}

/// Energy straight from the raw matrix: s^T Q s + l.s + c.
fn raw_energy(q: &SquareMatrix<f64>, l: &[f64], c: f64, s: &[u8]) -> f64 {
    let n = q.n();
    let mut e = c;
    for i in 0..n {
        e += l[i] * s[i] as f64;
        for j in 0..n {
            e += q[(i, j)] * (s[i] * s[j]) as f64;
        }
    }
    e
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(64))]

    #[test]
    fn conversion_preserves_every_energy(q in qubo(8)) {
        let m = q.to_ising();
        for idx in 0..1u64 << q.n() {
            let bits = BitConfig::from_index(idx, q.n());
            let eq = q.energy(&bits).unwrap();
            let ei = m.energy(&bits.to_spins()).unwrap();
            prop_assert!(rel_close(eq, ei, 1e-12), "{eq} vs {ei}");
        }
    }

    #[test]
    fn canonical_form_matches_raw_energy(
        (raw, l, c) in (1usize..=10).prop_flat_map(|n| (matrix(n), prop::collection::vec(-10.0f64..10.0, n), -5.0f64..5.0))
    ) {
        let q = Qubo::from_raw(&raw, l.clone(), c).unwrap();
        let n = raw.n();
        for i in 0..n {
            prop_assert_eq!(q.coupling()[(i, i)], 0.0);
            for j in 0..n {
                prop_assert_eq!(q.coupling()[(i, j)], q.coupling()[(j, i)]);
            }
        }
        for idx in 0..1u64 << n {
            let bits = BitConfig::from_index(idx, n);
            let want = raw_energy(&raw, &l, c, bits.as_slice());
            prop_assert!(rel_close(q.energy(&bits).unwrap(), want, 1e-12));
        }
    }

    #[test]
    fn bit_spin_roundtrip(bits in prop::collection::vec(0u8..=1, 1..40)) {
        let b = BitConfig::new(bits).unwrap();
        prop_assert_eq!(b.to_spins().to_bits(), b);
    }

    #[test]
    fn relabeling_spins_keeps_the_spectrum(
        (m, perm) in ising(7).prop_flat_map(|m| {
            let n = m.n();
            (Just(m), Just((0..n).collect::<Vec<_>>()).prop_shuffle())
        })
    ) {
        let p = m.permuted(&perm).unwrap();
        let n = m.n();
        for idx in 0..1u64 << n {
            let x = BitConfig::from_index(idx, n).to_spins();
            // spin k of the permuted model is spin perm[k] of the original
            let mut y = vec![1i8; n];
            for (k, &src) in perm.iter().enumerate() {
                y[k] = x.as_slice()[src];
            }
            let ep = p.energy(&SpinConfig::new(y).unwrap()).unwrap();
            prop_assert!(rel_close(m.energy(&x).unwrap(), ep, 1e-12));
        }
    }

    #[test]
    fn exhaustive_search_finds_the_minimum(m in ising(10)) {
        let (e_min, ground) = m.exhaustive_ground_states(1e-12).unwrap();
        let brute = (0..1u64 << m.n())
            .map(|i| m.energy(&BitConfig::from_index(i, m.n()).to_spins()).unwrap())
            .fold(f64::INFINITY, f64::min);
        prop_assert!(rel_close(e_min, brute, 1e-12));
        prop_assert!(!ground.is_empty());
        for g in &ground {
            prop_assert!(rel_close(m.energy(g).unwrap(), e_min, 1e-10));
        }
    }

    #[test]
    fn global_flip_symmetry_without_fields(m in ising(8)) {
        let zero_h = IsingModel::new(m.j().clone(), vec![0.0; m.n()], m.offset()).unwrap();
        for idx in 0..1u64 << m.n() {
            let x = BitConfig::from_index(idx, m.n()).to_spins();
            let flipped = SpinConfig::new(x.as_slice().iter().map(|s| -s).collect()).unwrap();
            prop_assert!(rel_close(zero_h.energy(&x).unwrap(), zero_h.energy(&flipped).unwrap(), 1e-12));
        }
    }
}

#[test]
fn f32_conversion_tracks_f64() {
    let mut rng = common::rng(11);
    let m64 = common::random_ising(&mut rng, 6);
    let j32 = SquareMatrix::from_fn(6, |a, b| m64.j()[(a, b)] as f32);
    let h32 = m64.h().iter().map(|&v| v as f32).collect();
    let m32 = IsingModel::new(j32, h32, 0.0f32).unwrap();
    for idx in 0..64 {
        let x = BitConfig::from_index(idx, 6).to_spins();
        let a = m64.energy(&x).unwrap();
        let b = m32.energy(&x).unwrap() as f64;
        assert!((a - b).abs() < 1e-4, "{a} vs {b}");
    }
}
