use std::collections::BTreeSet;

use itertools::Itertools;
use nalgebra::SymmetricEigen;
use proptest::prelude::*;
use sfarray::coarray::{coarrays_equal, difference_coarray, summarize};
use sfarray::doa::{
    coarray_autocorrelation, sample_covariance, simulate, steering_vector, SourceScene,
};
use sfarray::geometry::{cross_sum, SensorArray};
use sfarray::robustness::{essential_sensors, k_fragility};

fn array_strategy(max_len: usize) -> impl Strategy<Value = SensorArray> {
    prop::collection::btree_set(0i64..64, 1..=max_len)
        .prop_map(|set| SensorArray::custom(set).unwrap())
}

fn brute_lags(p: &[i64]) -> BTreeSet<i64> {
    p.iter()
        .flat_map(|a| p.iter().map(move |b| a - b))
        .collect()
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(200))]

    #[test]
    fn weight_function_invariants(s in array_strategy(16)) {
        let c = difference_coarray(&s);
        let n = s.len() as u64;
        prop_assert_eq!(c.weight(0), n);
        prop_assert_eq!(c.weights().map(|(_, w)| w).sum::<u64>(), n * n);
        for (lag, w) in c.weights() {
            prop_assert!(w > 0);
            prop_assert_eq!(c.weight(-lag), w);
            prop_assert!(c.contains(-lag));
        }
        let lags: BTreeSet<i64> = c.lags().iter().copied().collect();
        prop_assert_eq!(lags, brute_lags(s.positions()));
    }

    #[test]
    fn summary_invariants(s in array_strategy(16)) {
        let c = difference_coarray(&s);
        let sum = summarize(&c);
        let u = sum.ula_segment[1];
        prop_assert_eq!(sum.ula_segment[0], -u);
        prop_assert!((-u..=u).all(|k| c.contains(k)));
        prop_assert!(!c.contains(u + 1));
        prop_assert_eq!(sum.max_sources as i64, u);
        prop_assert_eq!(sum.hole_free, sum.holes.is_empty());
        prop_assert_eq!(sum.hole_free, u == sum.aperture);
    }

    #[test]
    fn removal_shrinks_coarray(s in array_strategy(16), pick in any::<prop::sample::Index>()) {
        prop_assume!(s.len() >= 2);
        let removed = s.positions()[pick.index(s.len())];
        let full: BTreeSet<i64> = difference_coarray(&s).lags().iter().copied().collect();
        let reduced: BTreeSet<i64> =
            difference_coarray(&s.without(&[removed]).unwrap()).lags().iter().copied().collect();
        prop_assert!(reduced.is_subset(&full));
    }

    #[test]
    fn cross_sum_algebra(a in array_strategy(6), b in array_strategy(6), c in array_strategy(6)) {
        let ab = cross_sum(&a, &b);
        let ba = cross_sum(&b, &a);
        prop_assert_eq!(ab.positions(), ba.positions());
        let left = cross_sum(&ab, &c);
        let right = cross_sum(&a, &cross_sum(&b, &c));
        prop_assert_eq!(left.positions(), right.positions());
        let zero = SensorArray::custom([0]).unwrap();
        let identity = cross_sum(&a, &zero);
        prop_assert_eq!(identity.positions(), a.positions());
        prop_assert!(ab.len() <= a.len() * b.len());
    }

    #[test]
    fn steering_unit_modulus(s in array_strategy(16), theta in -0.5f64..=0.5) {
        for z in steering_vector(&s, theta).iter() {
            prop_assert!((z.norm() - 1.0).abs() < 1e-12);
        }
    }

    #[test]
    fn covariance_hermitian_psd(
        s in array_strategy(16),
        theta in -0.5f64..0.5,
        t in 1usize..40,
        seed in any::<u64>(),
    ) {
        let scene = SourceScene::equal_power(vec![theta], 0.0).unwrap();
        let r = sample_covariance(&simulate(&s, &scene, t, seed).unwrap());
        prop_assert_eq!(&r, &r.adjoint());
        let eig = SymmetricEigen::new(r.clone());
        let scale = r.diagonal().iter().map(|z| z.re).sum::<f64>().max(1.0);
        for lambda in eig.eigenvalues.iter() {
            prop_assert!(*lambda >= -1e-10 * scale, "eigenvalue {}", lambda);
        }
        let ac = coarray_autocorrelation(&r, &s).unwrap();
        for (lag, v) in ac.iter() {
            prop_assert_eq!(ac.get(-lag).unwrap(), v.conj());
        }
    }

    #[test]
    fn fragility_structure(s in array_strategy(10)) {
        prop_assume!(s.len() >= 3);
        let report = essential_sensors(&s).unwrap();
        prop_assert!(report.essential.contains(&s.first()));
        prop_assert!(report.essential.contains(&s.last()));
        let f1 = k_fragility(&s, 1).unwrap();
        prop_assert_eq!(f1.essential_subset_count as usize, report.essential.len());
        let mut previous = f1.fragility();
        for k in 2..s.len().min(4) {
            let f = k_fragility(&s, k).unwrap().fragility();
            prop_assert!(f >= previous);
            previous = f;
        }
    }
}

#[test]
fn essential_removals_are_strict_subsets() {
    for case in sfarray::fixtures::CASE_STUDIES {
        let s = case.build().unwrap();
        let full: BTreeSet<i64> = difference_coarray(&s).lags().iter().copied().collect();
        for k in 1..=3 {
            for z in s.positions().iter().copied().combinations(k) {
                let reduced = s.without(&z).unwrap();
                if !coarrays_equal(&s, &reduced) {
                    let lags: BTreeSet<i64> = difference_coarray(&reduced)
                        .lags()
                        .iter()
                        .copied()
                        .collect();
                    assert!(lags.is_subset(&full) && lags != full);
                }
            }
        }
    }
}
