use rayon::prelude::*;
use serde::Serialize;

use super::music::{estimate_doas, MusicOptions, MusicResult, DEFAULT_GRID_SIZE};
use super::signal::{expected_covariance, sample_covariance, simulate};
use super::SourceScene;
use crate::coarray::{difference_coarray, summarize};
use crate::error::{Error, Result};
use crate::geometry::SensorArray;

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct TrialOptions {
    pub grid_size: usize,
    pub allow_over_capacity: bool,
    /// Use the model covariance instead of a sample estimate (snapshot count
    /// is then ignored).
    pub expected_covariance: bool,
}

impl Default for TrialOptions {
    fn default() -> Self {
        Self {
            grid_size: DEFAULT_GRID_SIZE,
            allow_over_capacity: false,
            expected_covariance: false,
        }
    }
}

/// SplitMix64 step: derives an independent seed for trial `index`.
pub fn trial_seed(batch_seed: u64, index: u64) -> u64 {
    let mut z = batch_seed
        .wrapping_add(0x9E37_79B9_7F4A_7C15)
        .wrapping_add(index.wrapping_mul(0xBF58_476D_1CE4_E5B9));
    z = (z ^ (z >> 30)).wrapping_mul(0xBF58_476D_1CE4_E5B9);
    z = (z ^ (z >> 27)).wrapping_mul(0x94D0_49BB_1331_11EB);
    z ^ (z >> 31)
}

#[derive(Debug, Clone, PartialEq)]
pub struct TrialOutcome {
    pub seed: u64,
    pub estimates: Vec<f64>,
    pub under_resolved: bool,
    pub rmse: Option<f64>,
}

#[derive(Debug, Clone, PartialEq)]
pub struct TrialBatchResult {
    /// Full result of trial 0, including its spectrum.
    pub first: MusicResult,
    pub trials: Vec<TrialOutcome>,
    /// Aggregate RMSE over all resolved trials; `None` if none resolved.
    pub rmse: Option<f64>,
    pub resolved_trials: usize,
}

impl TrialBatchResult {
    pub fn median_rmse(&self) -> Option<f64> {
        let mut v: Vec<f64> = self.trials.iter().filter_map(|t| t.rmse).collect();
        if v.is_empty() {
            return None;
        }
        v.sort_by(f64::total_cmp);
        let mid = v.len() / 2;
        Some(if v.len().is_multiple_of(2) {
            (v[mid - 1] + v[mid]) / 2.0
        } else {
            v[mid]
        })
    }
}

/// Runs `trials` independent Monte-Carlo trials of coarray MUSIC on a fixed
/// scene. Trial `i` uses `trial_seed(seed, i)`, so results do not depend on
/// execution order.
pub fn run_trial_batch(
    s: &SensorArray,
    scene: &SourceScene,
    t: usize,
    trials: usize,
    seed: u64,
    options: TrialOptions,
) -> Result<TrialBatchResult> {
    if trials == 0 {
        return Err(Error::InvalidParameter("trial count must be >= 1".into()));
    }
    let max_sources = summarize(&difference_coarray(s)).max_sources;
    if scene.len() > max_sources && !options.allow_over_capacity {
        return Err(Error::Capacity {
            sources: scene.len(),
            max_sources,
        });
    }
    let music = MusicOptions {
        grid_size: options.grid_size,
        allow_over_capacity: options.allow_over_capacity,
    };
    let run_one = |index: usize| -> Result<(u64, MusicResult)> {
        let seed = trial_seed(seed, index as u64);
        let covariance = if options.expected_covariance {
            expected_covariance(s, scene)
        } else {
            sample_covariance(&simulate(s, scene, t, seed)?)
        };
        let result = estimate_doas(s, &covariance, scene.len(), Some(scene.doas()), music)?;
        Ok((seed, result))
    };

    let first = run_one(0)?;
    let rest: Vec<(u64, MusicResult)> = (1..trials)
        .into_par_iter()
        .map(run_one)
        .collect::<Result<_>>()?;

    let outcomes: Vec<TrialOutcome> = std::iter::once(&first)
        .chain(rest.iter())
        .map(|(seed, r)| TrialOutcome {
            seed: *seed,
            estimates: r.estimates.clone(),
            under_resolved: r.under_resolved,
            rmse: r.rmse,
        })
        .collect();

    let resolved: Vec<f64> = outcomes.iter().filter_map(|o| o.rmse).collect();
    let m = scene.len() as f64;
    let rmse = (!resolved.is_empty()).then(|| {
        // Every resolved trial contributes M squared errors.
        let total_sq: f64 = resolved.iter().map(|r| r * r * m).sum();
        (total_sq / (m * resolved.len() as f64)).sqrt()
    });

    Ok(TrialBatchResult {
        first: first.1,
        resolved_trials: resolved.len(),
        trials: outcomes,
        rmse,
    })
}

/// JSON trial report.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct TrialReport {
    pub label: String,
    #[serde(rename = "M")]
    pub sources: usize,
    pub resolved_trials: usize,
    pub rmse: Option<f64>,
    pub seed: u64,
    pub snapshots: usize,
    pub snr_db: Option<f64>,
    pub trials: usize,
    pub under_resolved: bool,
}

impl TrialReport {
    pub fn new(
        label: impl Into<String>,
        scene: &SourceScene,
        snapshots: usize,
        seed: u64,
        result: &TrialBatchResult,
    ) -> Self {
        Self {
            label: label.into(),
            sources: scene.len(),
            resolved_trials: result.resolved_trials,
            rmse: result.rmse,
            seed,
            snapshots,
            snr_db: scene.snr_db(),
            trials: result.trials.len(),
            under_resolved: result.trials.iter().any(|t| t.under_resolved),
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::fixtures;

    #[test]
    fn seeds_are_distinct() {
        let seeds: std::collections::BTreeSet<u64> = (0..1000).map(|i| trial_seed(7, i)).collect();
        assert_eq!(seeds.len(), 1000);
        assert_eq!(trial_seed(7, 3), trial_seed(7, 3));
    }

    #[test]
    fn noiseless_on_grid_is_exact() {
        let nfa = fixtures::NFA.build().unwrap();
        let scene = SourceScene::on_grid(5, DEFAULT_GRID_SIZE, None).unwrap();
        let opts = TrialOptions {
            expected_covariance: true,
            ..Default::default()
        };
        let r = run_trial_batch(&nfa, &scene, 1, 2, 0, opts).unwrap();
        assert_eq!(r.rmse, Some(0.0));
        assert_eq!(r.resolved_trials, 2);
    }

    #[test]
    fn deterministic_and_capacity_checked() {
        let nfa = fixtures::NFA.build().unwrap();
        let scene = SourceScene::equal_power(vec![-0.3, 0.05, 0.31], 0.0).unwrap();
        let opts = TrialOptions {
            grid_size: 2048,
            ..Default::default()
        };
        let a = run_trial_batch(&nfa, &scene, 100, 4, 99, opts).unwrap();
        let b = run_trial_batch(&nfa, &scene, 100, 4, 99, opts).unwrap();
        assert_eq!(a, b);
        assert_eq!(a.trials.len(), 4);

        let big = SourceScene::on_grid(25, 2048, Some(0.0)).unwrap();
        assert!(matches!(
            run_trial_batch(&nfa, &big, 100, 1, 0, opts),
            Err(Error::Capacity {
                sources: 25,
                max_sources: 24
            })
        ));
        assert!(run_trial_batch(&nfa, &scene, 100, 0, 0, opts).is_err());
    }

    #[test]
    fn report_keys() {
        let nfa = fixtures::NFA.build().unwrap();
        let scene = SourceScene::on_grid(3, 1024, Some(0.0)).unwrap();
        let opts = TrialOptions {
            grid_size: 1024,
            ..Default::default()
        };
        let r = run_trial_batch(&nfa, &scene, 50, 2, 5, opts).unwrap();
        let report = TrialReport::new("NFA", &scene, 50, 5, &r);
        let v = serde_json::to_value(&report).unwrap();
        for key in [
            "label",
            "M",
            "snapshots",
            "snr_db",
            "trials",
            "rmse",
            "seed",
        ] {
            assert!(v.get(key).is_some(), "missing {key}");
        }
        assert_eq!(v["M"], 3);
        assert_eq!(v["snr_db"], 0.0);
    }
}
