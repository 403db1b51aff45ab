//! Difference coarrays and their weight functions.

use std::collections::BTreeMap;

use serde::Serialize;

use crate::geometry::SensorArray;

/// Difference coarray `D = {a − b : a, b ∈ S}` with ordered-pair weights.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Coarray {
    lags: Vec<i64>,
    weights: Vec<u64>,
    source_cardinality: usize,
}

impl Coarray {
    /// Sorted lags, symmetric about zero.
    pub fn lags(&self) -> &[i64] {
        &self.lags
    }

    /// Number of ordered sensor pairs at separation `lag` (zero when absent).
    pub fn weight(&self, lag: i64) -> u64 {
        self.lags
            .binary_search(&lag)
            .map(|i| self.weights[i])
            .unwrap_or(0)
    }

    pub fn weights(&self) -> impl Iterator<Item = (i64, u64)> + '_ {
        self.lags.iter().copied().zip(self.weights.iter().copied())
    }

    pub fn contains(&self, lag: i64) -> bool {
        self.lags.binary_search(&lag).is_ok()
    }

    pub fn len(&self) -> usize {
        self.lags.len()
    }

    pub fn is_empty(&self) -> bool {
        self.lags.is_empty()
    }

    pub fn source_cardinality(&self) -> usize {
        self.source_cardinality
    }

    /// Largest lag.
    pub fn aperture(&self) -> i64 {
        *self.lags.last().expect("coarray contains lag 0")
    }

    /// Half-width `u` of the central contiguous segment `[−u, u]`.
    pub fn ula_half_width(&self) -> i64 {
        // Lags are sorted and symmetric, so walk outward from 0.
        let zero = self.lags.binary_search(&0).expect("coarray contains lag 0");
        let mut u = 0;
        while zero + ((u + 1) as usize) < self.lags.len()
            && self.lags[zero + (u + 1) as usize] == u + 1
        {
            u += 1;
        }
        u
    }
}

/// Computes every pairwise difference of `s` with its ordered-pair count.
pub fn difference_coarray(s: &SensorArray) -> Coarray {
    let aperture = s.aperture();
    let width = 2 * aperture as usize + 1;
    let mut counts = vec![0u64; width];
    let p = s.positions();
    for &a in p {
        for &b in p {
            counts[(a - b + aperture) as usize] += 1;
        }
    }
    let (lags, weights) = counts
        .into_iter()
        .enumerate()
        .filter(|&(_, c)| c > 0)
        .map(|(i, c)| (i as i64 - aperture, c))
        .unzip();
    Coarray {
        lags,
        weights,
        source_cardinality: s.len(),
    }
}

/// True when both arrays have the same difference coarray lag set.
pub fn coarrays_equal(a: &SensorArray, b: &SensorArray) -> bool {
    difference_coarray(a).lags == difference_coarray(b).lags
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct CoarraySummary {
    pub aperture: i64,
    pub hole_free: bool,
    /// Missing positive lags below the aperture.
    pub holes: Vec<i64>,
    pub max_sources: usize,
    /// Number of lags in the central segment, `2u + 1`.
    pub segment_size: usize,
    /// Central contiguous segment as `[−u, u]`.
    pub ula_segment: [i64; 2],
}

pub fn summarize(c: &Coarray) -> CoarraySummary {
    let aperture = c.aperture();
    let holes: Vec<i64> = (1..aperture).filter(|&k| !c.contains(k)).collect();
    let u = c.ula_half_width();
    CoarraySummary {
        aperture,
        hole_free: holes.is_empty(),
        holes,
        max_sources: u as usize,
        segment_size: 2 * u as usize + 1,
        ula_segment: [-u, u],
    }
}

/// JSON form of a coarray together with its hole structure.
#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct CoarrayReport {
    pub hole_free: bool,
    pub holes: Vec<i64>,
    pub lags: Vec<i64>,
    pub ula_segment: [i64; 2],
    pub weights: BTreeMap<i64, u64>,
}

impl From<&Coarray> for CoarrayReport {
    fn from(c: &Coarray) -> Self {
        let summary = summarize(c);
        Self {
            hole_free: summary.hole_free,
            holes: summary.holes,
            lags: c.lags.clone(),
            ula_segment: summary.ula_segment,
            weights: c.weights().collect(),
        }
    }
}

#[cfg(test)]
mod tests {
    use std::collections::BTreeSet;

    use super::*;
    use crate::fixtures;
    use crate::geometry::{gen_cantor, gen_nested, gen_super_nested, gen_ula};

    fn brute_lags(p: &[i64]) -> BTreeSet<i64> {
        p.iter()
            .flat_map(|a| p.iter().map(move |b| a - b))
            .collect()
    }

    #[test]
    fn two_sensors() {
        let c = difference_coarray(&SensorArray::custom([0, 1]).unwrap());
        assert_eq!(c.lags(), &[-1, 0, 1]);
        assert_eq!(
            c.weights().collect::<Vec<_>>(),
            vec![(-1, 1), (0, 2), (1, 1)]
        );
    }

    #[test]
    fn nfa_is_hole_free() {
        let nfa = fixtures::NFA.build().unwrap();
        let c = difference_coarray(&nfa);
        assert_eq!(c.lags(), (-24..=24).collect::<Vec<_>>().as_slice());
        let s = summarize(&c);
        assert_eq!(s.ula_segment, [-24, 24]);
        assert_eq!(s.segment_size, 49);
        assert_eq!(s.max_sources, 24);
        assert!(s.hole_free);
    }

    #[test]
    fn cfa_has_holes_at_21() {
        let cfa = fixtures::CFA.build().unwrap();
        let c = difference_coarray(&cfa);
        let oracle = brute_lags(cfa.positions());
        assert!(!oracle.contains(&21) && !oracle.contains(&-21));
        assert_eq!(c.lags().iter().copied().collect::<BTreeSet<_>>(), oracle);
        let s = summarize(&c);
        assert_eq!(s.holes, vec![21]);
        assert_eq!(s.ula_segment, [-20, 20]);
        assert_eq!(s.aperture, 22);
        assert!(!s.hole_free);
    }

    #[test]
    fn cantor_three() {
        let s = summarize(&difference_coarray(&gen_cantor(3).unwrap()));
        assert!(s.hole_free);
        assert_eq!(s.aperture, 13);
    }

    #[test]
    fn singleton() {
        let s = summarize(&difference_coarray(&SensorArray::custom([5]).unwrap()));
        assert_eq!(s.ula_segment, [0, 0]);
        assert_eq!(s.max_sources, 0);
        assert!(s.hole_free);
    }

    #[test]
    fn ula_weights_are_triangular() {
        for n in 1..10 {
            let c = difference_coarray(&gen_ula(n).unwrap());
            let n = n as i64;
            assert_eq!(c.lags(), (-(n - 1)..n).collect::<Vec<_>>().as_slice());
            for k in -(n - 1)..n {
                assert_eq!(c.weight(k), (n - k.abs()) as u64);
            }
        }
    }

    #[test]
    fn equality() {
        let nfa = fixtures::NFA.build().unwrap();
        assert!(coarrays_equal(&nfa, &nfa));
        assert!(coarrays_equal(
            &gen_nested(6).unwrap(),
            &gen_super_nested(3, 3).unwrap()
        ));
        assert!(!coarrays_equal(&nfa, &nfa.without(&[25]).unwrap()));
    }

    #[test]
    fn report_json_shape() {
        let c = difference_coarray(&SensorArray::custom([0, 1, 3]).unwrap());
        let json = serde_json::to_string(&CoarrayReport::from(&c)).unwrap();
        assert_eq!(
            json,
            r#"{"hole_free":true,"holes":[],"lags":[-3,-2,-1,0,1,2,3],"ula_segment":[-3,3],"weights":{"-3":1,"-2":1,"-1":1,"0":3,"1":1,"2":1,"3":1}}"#
        );
    }
}
