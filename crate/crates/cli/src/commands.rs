use std::path::Path;

use anyhow::anyhow;
use serde::Serialize;
use sfarray::coarray::{difference_coarray, summarize, CoarrayReport, CoarraySummary};
use sfarray::doa::{
    run_trial_batch, write_spectrum_csv, SourceScene, TrialBatchResult, TrialOptions, TrialReport,
};
use sfarray::robustness::{
    essential_sensors, fragility_profile, write_fragility_csv, FragilityReport, RobustnessReport,
};
use sfarray::SensorArray;

use crate::config::{ArraySpec, ExperimentConfig};
use crate::{to_json, write_file, CliError, CliResult};

pub fn generate(spec: &ArraySpec) -> CliResult<SensorArray> {
    spec.build()
}

pub fn parse_geometry(text: &str) -> CliResult<SensorArray> {
    serde_json::from_str(text).map_err(|e| CliError::usage(anyhow!("malformed geometry JSON: {e}")))
}

#[derive(Debug, Clone, Serialize)]
pub struct Analysis {
    pub array: SensorArray,
    pub coarray: CoarrayReport,
    pub robustness: RobustnessReport,
    pub summary: CoarraySummary,
    #[serde(skip)]
    pub profile: Vec<FragilityReport>,
}

/// Coarray summary, essential sensors and `F_1 … F_k` with `k` capped at `|S| − 1`.
pub fn analyze(array: &SensorArray, k_max: usize) -> CliResult<Analysis> {
    if k_max == 0 {
        return Err(CliError::usage(anyhow!("--k-max must be at least 1")));
    }
    let coarray = difference_coarray(array);
    let essentialness = essential_sensors(array)?;
    let profile = fragility_profile(array, k_max.min(array.len() - 1))?;
    Ok(Analysis {
        array: array.clone(),
        coarray: CoarrayReport::from(&coarray),
        robustness: RobustnessReport::new(&essentialness, &profile),
        summary: summarize(&coarray),
        profile,
    })
}

pub fn fragility_csv(rows: &[(&str, &[FragilityReport])]) -> String {
    let mut buf = Vec::new();
    write_fragility_csv(&mut buf, rows).expect("in-memory CSV");
    String::from_utf8(buf).expect("UTF-8 CSV")
}

pub fn write_analysis(dir: &Path, analysis: &Analysis) -> CliResult<()> {
    write_file(&dir.join("analysis.json"), to_json(analysis))?;
    let label = analysis.array.label();
    write_file(
        &dir.join("fragility.csv"),
        fragility_csv(&[(label, &analysis.profile)]),
    )
}

#[derive(Debug, Clone, Copy, Default, PartialEq, Eq)]
pub struct MusicSettings {
    pub noiseless: bool,
    pub expected_covariance: bool,
    pub override_capacity: bool,
}

#[derive(Debug, Clone)]
pub struct MusicRun {
    pub scene: SourceScene,
    pub result: TrialBatchResult,
    pub report: TrialReport,
    pub warnings: Vec<String>,
}

/// Monte-Carlo coarray MUSIC on `array`. The source count defaults to the
/// largest the coarray segment supports.
pub fn music(
    array: &SensorArray,
    config: &ExperimentConfig,
    settings: MusicSettings,
) -> CliResult<MusicRun> {
    let max_sources = summarize(&difference_coarray(array)).max_sources;
    let m = config.sources.unwrap_or(max_sources);
    let mut warnings = Vec::new();
    if m > max_sources {
        if !settings.override_capacity {
            return Err(sfarray::Error::Capacity {
                sources: m,
                max_sources,
            }
            .into());
        }
        warnings.push(format!(
            "{m} sources exceed the {max_sources} supported by the coarray segment; results are under-resolved"
        ));
    }
    let snr = (!settings.noiseless).then_some(config.snr_db);
    let scene = config.scene_layout().generate(m, snr, config.seed)?;
    let options = TrialOptions {
        grid_size: config.grid_size,
        allow_over_capacity: settings.override_capacity,
        expected_covariance: settings.expected_covariance,
    };
    let result = run_trial_batch(
        array,
        &scene,
        config.snapshots,
        config.trials,
        config.seed,
        options,
    )?;
    if result.resolved_trials < result.trials.len() && m <= max_sources {
        warnings.push(format!(
            "{} of {} trials did not resolve every source",
            result.trials.len() - result.resolved_trials,
            result.trials.len()
        ));
    }
    let report = TrialReport::new(
        array.label(),
        &scene,
        config.snapshots,
        config.seed,
        &result,
    );
    Ok(MusicRun {
        scene,
        result,
        report,
        warnings,
    })
}

pub fn spectrum_csv(run: &MusicRun) -> String {
    let mut buf = Vec::new();
    write_spectrum_csv(&mut buf, &run.result.first.spectrum).expect("in-memory CSV");
    String::from_utf8(buf).expect("UTF-8 CSV")
}

pub fn write_music(dir: &Path, run: &MusicRun) -> CliResult<()> {
    write_file(&dir.join("spectrum.csv"), spectrum_csv(run))?;
    write_file(&dir.join("trial.json"), to_json(&run.report))
}
