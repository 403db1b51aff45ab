//! Sensor-failure robustness: essential sensors and k-fragility.
//!
//! A set of sensors is *essential* when removing it changes the lag set of
//! the difference coarray. The k-fragility `F_k` is the fraction of size-k
//! subsets that are essential, so `F_1` is the fraction of essential sensors.

use std::io;

use itertools::Itertools;
use num_rational::Ratio;
use serde::Serialize;

use crate::coarray::coarrays_equal;
use crate::error::{Error, Result};
use crate::geometry::SensorArray;

/// Upper bound on `C(|S|, k)` accepted by the exhaustive enumeration.
pub const MAX_SUBSETS: u64 = 10_000_000;

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct EssentialnessReport {
    pub array: SensorArray,
    pub essential: Vec<i64>,
    pub inessential: Vec<i64>,
}

/// Splits the sensors of `s` into essential and inessential ones.
pub fn essential_sensors(s: &SensorArray) -> Result<EssentialnessReport> {
    if s.len() < 2 {
        return Err(Error::InvalidParameter(
            "essentialness needs at least 2 sensors".into(),
        ));
    }
    let (essential, inessential) = s.positions().iter().copied().partition(|&p| {
        let reduced = s.without(&[p]).expect("at least one sensor remains");
        !coarrays_equal(s, &reduced)
    });
    Ok(EssentialnessReport {
        array: s.clone(),
        essential,
        inessential,
    })
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct FragilityReport {
    pub k: usize,
    pub essential_subset_count: u64,
    pub total_subsets: u64,
}

impl FragilityReport {
    pub fn fragility(&self) -> Ratio<u64> {
        Ratio::new(self.essential_subset_count, self.total_subsets)
    }

    pub fn value(&self) -> f64 {
        self.essential_subset_count as f64 / self.total_subsets as f64
    }

    /// `F_k` rounded half-up to 4 decimals, as an integer count of 1e-4 units.
    pub fn ten_thousandths(&self) -> u64 {
        let (c, t) = (
            self.essential_subset_count as u128,
            self.total_subsets as u128,
        );
        ((20_000 * c + t) / (2 * t)) as u64
    }

    /// `F_k` as a 4-decimal string, e.g. `"0.8788"`.
    pub fn display_4dp(&self) -> String {
        let v = self.ten_thousandths();
        format!("{}.{:04}", v / 10_000, v % 10_000)
    }
}

/// Exact binomial coefficient, `None` on overflow.
pub fn binomial(n: usize, k: usize) -> Option<u128> {
    if k > n {
        return Some(0);
    }
    let k = k.min(n - k);
    let mut acc: u128 = 1;
    for i in 1..=k as u128 {
        acc = acc.checked_mul(n as u128 - k as u128 + i)? / i;
    }
    Some(acc)
}

/// Unordered pair counts per positive lag, used to test whether a removal
/// empties some lag without rebuilding the coarray.
struct PairWitnesses {
    /// `counts[k]` = number of pairs `i < j` with `p[j] − p[i] = k`.
    counts: Vec<u32>,
    /// For every sensor, the (partner, lag) of each pair it belongs to.
    pairs: Vec<Vec<(usize, usize)>>,
}

impl PairWitnesses {
    fn new(s: &SensorArray) -> Self {
        let p = s.positions();
        let mut counts = vec![0u32; s.aperture() as usize + 1];
        let mut pairs = vec![Vec::with_capacity(p.len() - 1); p.len()];
        for i in 0..p.len() {
            for j in i + 1..p.len() {
                let lag = (p[j] - p[i]) as usize;
                counts[lag] += 1;
                pairs[i].push((j, lag));
                pairs[j].push((i, lag));
            }
        }
        Self { counts, pairs }
    }

    fn removal_changes_lags(
        &self,
        removed: &[usize],
        mask: &mut [bool],
        scratch: &mut [u32],
    ) -> bool {
        scratch.copy_from_slice(&self.counts);
        for &i in removed {
            mask[i] = true;
        }
        let mut changed = false;
        'outer: for &i in removed {
            for &(j, lag) in &self.pairs[i] {
                // A pair inside the removed set is visited twice; count it once.
                if mask[j] && j < i {
                    continue;
                }
                scratch[lag] -= 1;
                if scratch[lag] == 0 {
                    changed = true;
                    break 'outer;
                }
            }
        }
        for &i in removed {
            mask[i] = false;
        }
        changed
    }
}

/// Counts the size-`k` subsets whose removal changes the coarray lag set.
pub fn k_fragility(s: &SensorArray, k: usize) -> Result<FragilityReport> {
    let n = s.len();
    if k == 0 || k >= n {
        return Err(Error::InvalidParameter(format!(
            "k must satisfy 1 <= k < {n}, got {k}"
        )));
    }
    let total = binomial(n, k).unwrap_or(u128::MAX);
    if total > MAX_SUBSETS as u128 {
        return Err(Error::EnumerationTooLarge {
            n,
            k,
            count: total,
            limit: MAX_SUBSETS,
        });
    }

    let witnesses = PairWitnesses::new(s);
    let mut mask = vec![false; n];
    let mut scratch = witnesses.counts.clone();
    let essential = (0..n)
        .combinations(k)
        .filter(|z| witnesses.removal_changes_lags(z, &mut mask, &mut scratch))
        .count() as u64;

    Ok(FragilityReport {
        k,
        essential_subset_count: essential,
        total_subsets: total as u64,
    })
}

/// `F_1 … F_{k_max}`.
pub fn fragility_profile(s: &SensorArray, k_max: usize) -> Result<Vec<FragilityReport>> {
    if k_max == 0 || k_max >= s.len() {
        return Err(Error::InvalidParameter(format!(
            "k_max must satisfy 1 <= k_max < {}, got {k_max}",
            s.len()
        )));
    }
    (1..=k_max).map(|k| k_fragility(s, k)).collect()
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct FragilityEntry {
    pub count: u64,
    pub k: usize,
    pub total: u64,
    pub value: f64,
}

impl From<&FragilityReport> for FragilityEntry {
    fn from(r: &FragilityReport) -> Self {
        Self {
            count: r.essential_subset_count,
            k: r.k,
            total: r.total_subsets,
            value: r.value(),
        }
    }
}

/// JSON robustness report.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct RobustnessReport {
    pub essential: Vec<i64>,
    pub fragility: Vec<FragilityEntry>,
    pub inessential: Vec<i64>,
    pub label: String,
}

impl RobustnessReport {
    pub fn new(essentialness: &EssentialnessReport, profile: &[FragilityReport]) -> Self {
        Self {
            essential: essentialness.essential.clone(),
            fragility: profile.iter().map(FragilityEntry::from).collect(),
            inessential: essentialness.inessential.clone(),
            label: essentialness.array.label().to_string(),
        }
    }
}

/// Writes `label,k,F_k` rows, one per report.
pub fn write_fragility_csv<W: io::Write>(
    out: W,
    rows: &[(&str, &[FragilityReport])],
) -> csv::Result<()> {
    let mut w = csv::WriterBuilder::new()
        .terminator(csv::Terminator::Any(b'\n'))
        .from_writer(out);
    w.write_record(["label", "k", "F_k"])?;
    for (label, profile) in rows {
        for r in *profile {
            w.write_record([label.to_string(), r.k.to_string(), r.display_4dp()])?;
        }
    }
    w.flush()?;
    Ok(())
}
