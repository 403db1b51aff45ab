//! Sparse fractal sensor arrays.
//!
//! Builds one-dimensional sparse arrays (nested, coprime, augmented nested,
//! super nested) and their cross-sum with Cantor fractal arrays, analyses the
//! resulting difference coarrays, measures how fragile the coarray is to
//! sensor failures, and estimates directions of arrival with coarray MUSIC.
//!
//! ```
//! use sfarray::geometry::{make_sfa, Subarray};
//! use sfarray::coarray::{difference_coarray, summarize};
//!
//! let nfa = make_sfa(&Subarray::Nested { n: 6 }, 1).unwrap();
//! assert_eq!(nfa.positions(), &[1, 2, 3, 4, 8, 12, 14, 15, 16, 17, 21, 25]);
//! let summary = summarize(&difference_coarray(&nfa));
//! assert!(summary.hole_free);
//! assert_eq!(summary.max_sources, 24);
//! ```

pub mod coarray;
pub mod doa;
pub mod error;
pub mod fixtures;
pub mod geometry;
pub mod robustness;

pub use coarray::{coarrays_equal, difference_coarray, summarize, Coarray, CoarraySummary};
pub use error::{Error, Result};
pub use geometry::{ArrayKind, SensorArray, Subarray};
pub use robustness::{essential_sensors, fragility_profile, k_fragility};
