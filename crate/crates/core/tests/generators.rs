//! Brute-force checks of the closed-form generators.

use std::collections::BTreeSet;

use sfarray::coarray::{coarrays_equal, difference_coarray, summarize};
use sfarray::geometry::{
    gen_ana1, gen_ana2, gen_cantor, gen_coprime, gen_nested, gen_nested_two_level,
    gen_super_nested, make_sfa, Subarray,
};

fn brute_hole_free(p: &[i64]) -> bool {
    let lags: BTreeSet<i64> = p
        .iter()
        .flat_map(|a| p.iter().map(move |b| a - b))
        .collect();
    let max = *lags.iter().max().unwrap();
    (-max..=max).all(|k| lags.contains(&k))
}

#[test]
fn nested_arrays_are_hole_free() {
    for n in 2..40 {
        assert!(
            brute_hole_free(gen_nested(n).unwrap().positions()),
            "nested({n})"
        );
    }
}

#[test]
fn augmented_nested_arrays_are_hole_free() {
    for n in 6..=30 {
        let a1 = gen_ana1(n).unwrap();
        let a2 = gen_ana2(n).unwrap();
        assert!(brute_hole_free(a1.positions()), "ANA-I({n})");
        assert!(brute_hole_free(a2.positions()), "ANA-II({n})");
        // Both extend the nested aperture.
        let nested = summarize(&difference_coarray(&gen_nested(n).unwrap())).aperture;
        assert!(a1.aperture() >= nested && a2.aperture() >= nested);
    }
    assert!(brute_hole_free(gen_ana1(8).unwrap().positions()));
    assert!(brute_hole_free(gen_ana2(8).unwrap().positions()));
}

#[test]
fn super_nested_matches_nested_coarray() {
    assert!(coarrays_equal(
        &gen_super_nested(3, 3).unwrap(),
        &gen_nested(6).unwrap()
    ));
    assert!(coarrays_equal(
        &gen_super_nested(4, 4).unwrap(),
        &gen_nested(8).unwrap()
    ));
    for n1 in 3..=13 {
        for n2 in 2..=9 {
            assert!(
                coarrays_equal(
                    &gen_super_nested(n1, n2).unwrap(),
                    &gen_nested_two_level(n1, n2).unwrap()
                ),
                "super-nested({n1},{n2})"
            );
        }
    }
}

#[test]
fn cantor_coarrays() {
    for r in 1..=8u32 {
        let c = gen_cantor(r).unwrap();
        let span = (3i64.pow(r) - 1) / 2;
        let co = difference_coarray(&c);
        assert_eq!(co.len() as i64, 3i64.pow(r));
        assert_eq!(co.lags().first(), Some(&-span));
        assert_eq!(co.lags().last(), Some(&span));
        assert!(summarize(&co).hole_free);
    }
}

#[test]
fn coprime_cardinality() {
    for (m, n) in [(1, 2), (2, 3), (2, 5), (3, 4), (3, 5), (4, 5), (5, 7)] {
        assert_eq!(gen_coprime(m, n).unwrap().len(), 2 * m + n - 1);
    }
}

#[test]
fn sfa_size_is_product_without_collisions() {
    let nfa2 = make_sfa(&Subarray::Nested { n: 6 }, 2).unwrap();
    assert_eq!(nfa2.len(), 24);
    assert!(summarize(&difference_coarray(&nfa2)).hole_free);
}
