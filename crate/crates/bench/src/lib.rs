//! Inputs shared by the criterion benchmarks.

use sfarray::fixtures::CASE_STUDIES;
use sfarray::SensorArray;

/// The five sparse fractal case-study arrays, built from their generators.
pub fn case_study_arrays() -> Vec<SensorArray> {
    CASE_STUDIES
        .iter()
        .map(|c| c.build().expect("case-study generator"))
        .collect()
}
