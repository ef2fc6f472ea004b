use bifurjet::{jet_efficiency, time_to_solution};
use proptest::prelude::*;

/// Random labelling of `0..n` into `k` non-empty jets.
fn partition() -> impl Strategy<Value = Vec<Vec<usize>>> {
    (2usize..=5).prop_flat_map(|k| {
        prop::collection::vec(0..k, k..25).prop_map(move |mut labels| {
            labels[..k].iter_mut().enumerate().for_each(|(j, l)| *l = j);
            let mut jets = vec![Vec::new(); k];
            for (i, l) in labels.into_iter().enumerate() {
                jets[l].push(i);
            }
            jets
        })
    })
}

/// Brute-force overlap maximum over all bijections.
fn best_overlap(s: &[Vec<usize>], r: &[Vec<usize>]) -> usize {
    fn rec(k: usize, used: &mut Vec<bool>, s: &[Vec<usize>], r: &[Vec<usize>]) -> usize {
        if k == r.len() {
            return 0;
        }
        let mut best = 0;
        for j in 0..s.len() {
            if !used[j] {
                used[j] = true;
                let shared = r[k].iter().filter(|i| s[j].contains(i)).count();
                best = best.max(shared + rec(k + 1, used, s, r));
                used[j] = false;
            }
        }
        best
    }
    rec(0, &mut vec![false; s.len()], s, r)
}

proptest! {
    #[test]
    fn identical_partitions_score_one(p in partition()) {
        let r = jet_efficiency(&p, &p).unwrap();
        prop_assert_eq!(r.mean, 1.0);
        prop_assert_eq!(r.matching, (0..p.len()).collect::<Vec<_>>());
    }

    #[test]
    fn reordering_solver_jets_keeps_the_score(p in partition(), rot in 0usize..5) {
        let mut q = p.clone();
        q.rotate_left(rot % p.len());
        prop_assert_eq!(jet_efficiency(&q, &p).unwrap().mean, 1.0);
    }

    #[test]
    fn matching_maximizes_overlap(
        (s, r) in partition().prop_flat_map(|p| {
            let n: usize = p.iter().map(Vec::len).sum();
            let k = p.len();
            (Just(p), prop::collection::vec(0..k, n).prop_map(move |mut labels| {
                labels[..k].iter_mut().enumerate().for_each(|(j, l)| *l = j);
                let mut jets = vec![Vec::new(); k];
                for (i, l) in labels.into_iter().enumerate() {
                    jets[l].push(i);
                }
                jets
            }))
        })
    ) {
        let rep = jet_efficiency(&s, &r).unwrap();
        let total: usize = rep.matching.iter().enumerate()
            .map(|(k, &j)| r[k].iter().filter(|i| s[j].contains(i)).count())
            .sum();
        prop_assert_eq!(total, best_overlap(&s, &r));
        prop_assert!(rep.per_jet.iter().all(|&e| (0.0..=1.0).contains(&e)));
    }

    #[test]
    fn tts_shrinks_as_success_grows(p in 0.001f64..0.99, dp in 0.0f64..0.5, t in 0.001f64..100.0) {
        let q = (p + dp).min(0.999);
        let a = time_to_solution(p, t, 0.99).unwrap();
        let b = time_to_solution(q, t, 0.99).unwrap();
        prop_assert!(b <= a * (1.0 + 1e-12));
        prop_assert!(a >= t);
    }
}
