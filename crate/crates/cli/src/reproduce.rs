//! `reproduce <tag>`: regenerate every artifact of one case study or table
//! and compare it, value by value, against what was published.
//!
//! Comparison status:
//! - `match`: computed equals published.
//! - `refuted`: exhaustive computation contradicts the published value. The
//!   computed value is authoritative; this is flagged but is not a failure.
//! - `mismatch`: a generator does not reproduce a published sensor list.
//!   This is a regression and makes the command exit with code 3.
//! - `reference`: a published value that cannot be reproduced exactly
//!   (Monte-Carlo RMSE with undisclosed seeds); shown for context only.

use std::fmt::Write as _;
use std::path::{Path, PathBuf};

use anyhow::anyhow;
use serde::Serialize;
use serde_json::{json, Value};
use sfarray::coarray::{difference_coarray, summarize, CoarrayReport};
use sfarray::fixtures::{self, CaseStudy};
use sfarray::geometry::{gen_coprime, gen_nested, gen_super_nested, gen_ula, make_sfa, Subarray};
use sfarray::robustness::FragilityReport;
use sfarray::SensorArray;

use crate::claims::{self, PublishedClaims, TableRow};
use crate::commands::{analyze, fragility_csv, music, spectrum_csv, MusicSettings};
use crate::config::ExperimentConfig;
use crate::{exit, to_json, write_file, CliError, CliResult};

pub const TAGS: [&str; 8] = [
    "example1",
    "nfa",
    "cfa",
    "auggen1",
    "auggen2",
    "snfa",
    "table1",
    "fragility-figures",
];

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(rename_all = "snake_case")]
pub enum Status {
    Match,
    Refuted,
    Mismatch,
    Reference,
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct Comparison {
    pub subject: String,
    pub field: String,
    pub published: Value,
    pub computed: Value,
    pub status: Status,
}

impl Comparison {
    fn new(
        subject: &str,
        field: &str,
        published: Value,
        computed: Value,
        agree: bool,
        on_disagree: Status,
    ) -> Self {
        Self {
            subject: subject.to_string(),
            field: field.to_string(),
            status: if agree { Status::Match } else { on_disagree },
            published,
            computed,
        }
    }

    /// Published and computed values compared for equality; disagreement is `refuted`.
    fn check<T: Serialize + PartialEq>(
        subject: &str,
        field: &str,
        published: T,
        computed: T,
    ) -> Self {
        let agree = published == computed;
        Self::new(
            subject,
            field,
            json!(published),
            json!(computed),
            agree,
            Status::Refuted,
        )
    }
}

/// Everything one `reproduce` invocation produces.
#[derive(Debug, Clone)]
pub struct Bundle {
    pub tag: String,
    /// Relative path and contents of every output file.
    pub files: Vec<(PathBuf, String)>,
    pub comparisons: Vec<Comparison>,
    /// Human-readable summary for standard output.
    pub summary: String,
}

impl Bundle {
    pub fn flagged(&self) -> impl Iterator<Item = &Comparison> {
        self.comparisons
            .iter()
            .filter(|c| matches!(c.status, Status::Refuted | Status::Mismatch))
    }

    pub fn exit_code(&self) -> i32 {
        if self
            .comparisons
            .iter()
            .any(|c| c.status == Status::Mismatch)
        {
            exit::MISMATCH
        } else {
            exit::SUCCESS
        }
    }

    pub fn file(&self, name: &str) -> Option<&str> {
        self.files
            .iter()
            .find(|(p, _)| p == Path::new(name))
            .map(|(_, c)| c.as_str())
    }

    /// Writes every file under `out_dir/<tag>/`.
    pub fn write(&self, out_dir: &Path) -> CliResult<()> {
        let dir = out_dir.join(&self.tag);
        for (name, contents) in &self.files {
            write_file(&dir.join(name), contents)?;
        }
        Ok(())
    }
}

pub fn reproduce(tag: &str, config: &ExperimentConfig) -> CliResult<Bundle> {
    match tag {
        "example1" => example1(),
        "table1" => table1(),
        "fragility-figures" => fragility_figures(config),
        _ => match (fixtures::by_tag(tag), claims::by_tag(tag)) {
            (Some(case), Some(claims)) => case_study(case, claims, config),
            _ => Err(CliError::usage(anyhow!(
                "unknown reproduction tag `{tag}`; valid tags: {}",
                TAGS.join(", ")
            ))),
        },
    }
}

fn comparisons_json(tag: &str, label: &str, comparisons: &[Comparison]) -> String {
    let flagged: Vec<&str> = comparisons
        .iter()
        .filter(|c| c.status != Status::Match && c.status != Status::Reference)
        .map(|c| c.field.as_str())
        .collect();
    to_json(&json!({
        "tag": tag,
        "label": label,
        "comparisons": comparisons,
        "flagged": flagged,
        "mismatch": comparisons.iter().any(|c| c.status == Status::Mismatch),
    }))
}

fn geometry_checks(case: &CaseStudy, array: &SensorArray) -> CliResult<Vec<Comparison>> {
    let sub = case.build_subarray()?;
    Ok(vec![
        Comparison::new(
            case.name,
            "subarray_positions",
            json!(case.subarray_positions),
            json!(sub.positions()),
            sub.positions() == case.subarray_positions,
            Status::Mismatch,
        ),
        Comparison::new(
            case.name,
            "positions",
            json!(case.positions),
            json!(array.positions()),
            array.positions() == case.positions,
            Status::Mismatch,
        ),
    ])
}

fn table_checks(row: &TableRow, essential: &[i64], profile: &[FragilityReport]) -> Vec<Comparison> {
    let mut out = vec![Comparison::check(
        row.name,
        "essential",
        row.essential,
        essential,
    )];
    for (published, computed) in row.fragility.iter().zip(profile) {
        let mut c = Comparison::check(
            row.name,
            &format!("F{}", computed.k),
            format_4dp(*published),
            computed.display_4dp(),
        );
        c.computed = json!({
            "value": computed.display_4dp(),
            "count": computed.essential_subset_count,
            "total": computed.total_subsets,
        });
        out.push(c);
    }
    out
}

fn format_4dp(ten_thousandths: u64) -> String {
    format!(
        "{}.{:04}",
        ten_thousandths / 10_000,
        ten_thousandths % 10_000
    )
}

fn example1() -> CliResult<Bundle> {
    let sub = Subarray::Nested { n: 6 };
    let array = make_sfa(&sub, 1)?;
    let coarray = difference_coarray(&array);
    let summary = summarize(&coarray);
    let name = "nested SFA";
    let d2 = 2 * sub.build()?.len() as i64 + 1;
    let comparisons = vec![
        Comparison::new(
            name,
            "positions",
            json!(fixtures::NFA.positions),
            json!(array.positions()),
            array.positions() == fixtures::NFA.positions,
            Status::Mismatch,
        ),
        Comparison::check(name, "d2", 13, d2),
        Comparison::check(name, "virtual_aperture", 24, summary.aperture),
        Comparison::check(name, "ula_segment", [-24, 24], summary.ula_segment),
        Comparison::check(name, "hole_free", true, summary.hole_free),
    ];
    let label = array.label().to_string();
    let report = comparisons_json("example1", &label, &comparisons);
    Ok(Bundle {
        tag: "example1".into(),
        files: vec![
            ("geometry.json".into(), to_json(&array)),
            (
                "coarray.json".into(),
                to_json(&CoarrayReport::from(&coarray)),
            ),
            ("comparison.json".into(), report.clone()),
        ],
        comparisons,
        summary: report,
    })
}

fn case_study(
    case: &CaseStudy,
    published: &PublishedClaims,
    config: &ExperimentConfig,
) -> CliResult<Bundle> {
    let array = case.build()?;
    let coarray = difference_coarray(&array);
    let summary = summarize(&coarray);
    let name = case.name;

    let mut comparisons = geometry_checks(case, &array)?;
    if let Some(a) = published.virtual_aperture {
        comparisons.push(Comparison::check(
            name,
            "virtual_aperture",
            a,
            summary.aperture,
        ));
    }
    if let Some(hole_free) = published.hole_free {
        comparisons.push(Comparison::check(
            name,
            "hole_free",
            hole_free,
            summary.hole_free,
        ));
        if hole_free {
            comparisons.push(Comparison::check(
                name,
                "holes",
                Vec::<i64>::new(),
                summary.holes.clone(),
            ));
        }
    }
    if let Some(u) = published.segment_half_width {
        comparisons.push(Comparison::check(
            name,
            "ula_segment",
            [-u, u],
            summary.ula_segment,
        ));
    }
    comparisons.push(Comparison::check(
        name,
        "max_sources",
        published.max_sources,
        summary.max_sources,
    ));

    let analysis = analyze(&array, config.k_max)?;
    comparisons.extend(table_checks(
        &published.table,
        &analysis.robustness.essential,
        &analysis.profile,
    ));

    // Run MUSIC with the published source count, capped at what the coarray supports.
    let sources = config
        .sources
        .unwrap_or_else(|| published.max_sources.min(summary.max_sources));
    let music_config = ExperimentConfig {
        sources: Some(sources),
        ..config.clone()
    };
    let run = music(&array, &music_config, MusicSettings::default())?;
    comparisons.push(Comparison::check(
        name,
        "music_sources",
        published.max_sources,
        sources,
    ));
    comparisons.push(Comparison::new(
        name,
        "rmse",
        json!(published.rmse),
        json!(run.report.rmse),
        false,
        Status::Reference,
    ));

    let report = comparisons_json(case.tag, name, &comparisons);
    Ok(Bundle {
        tag: case.tag.into(),
        files: vec![
            ("geometry.json".into(), to_json(&array)),
            (
                "coarray.json".into(),
                to_json(&CoarrayReport::from(&coarray)),
            ),
            ("summary.json".into(), to_json(&summary)),
            ("robustness.json".into(), to_json(&analysis.robustness)),
            (
                "fragility.csv".into(),
                fragility_csv(&[(name, &analysis.profile)]),
            ),
            ("spectrum.csv".into(), spectrum_csv(&run)),
            ("trial.json".into(), to_json(&run.report)),
            ("comparison.json".into(), report.clone()),
        ],
        comparisons,
        summary: report,
    })
}

/// One table row as computed, with 3 fragility levels.
#[derive(Debug, Clone, Serialize)]
struct ComputedRow {
    essential: Vec<i64>,
    fragility: Vec<Value>,
    name: &'static str,
    sensors: usize,
}

fn table1() -> CliResult<Bundle> {
    let mut comparisons = Vec::new();
    let mut rows = Vec::new();
    for (case, published) in fixtures::CASE_STUDIES.iter().zip(claims::ALL) {
        let array = case.build()?;
        let analysis = analyze(&array, 3)?;
        comparisons.extend(geometry_checks(case, &array)?);
        comparisons.extend(table_checks(
            &published.table,
            &analysis.robustness.essential,
            &analysis.profile,
        ));
        rows.push(ComputedRow {
            essential: analysis.robustness.essential.clone(),
            fragility: analysis
                .profile
                .iter()
                .map(|r| {
                    json!({
                        "k": r.k,
                        "count": r.essential_subset_count,
                        "total": r.total_subsets,
                        "value": r.display_4dp(),
                    })
                })
                .collect(),
            name: case.name,
            sensors: array.len(),
        });
    }

    let mut text = String::new();
    writeln!(
        text,
        "{:<11} {:<10} {:<32} {:<32} status",
        "array", "field", "published", "computed"
    )
    .unwrap();
    for c in comparisons
        .iter()
        .filter(|c| c.field != "subarray_positions" && c.field != "positions")
    {
        let computed = match &c.computed {
            Value::Object(o) => format!(
                "{} ({}/{})",
                o["value"].as_str().unwrap_or(""),
                o["count"],
                o["total"]
            ),
            v => compact(v),
        };
        writeln!(
            text,
            "{:<11} {:<10} {:<32} {:<32} {}",
            c.subject,
            c.field,
            compact(&c.published),
            computed,
            status_word(c.status)
        )
        .unwrap();
    }

    let json = to_json(&json!({ "computed": rows, "comparisons": comparisons }));
    Ok(Bundle {
        tag: "table1".into(),
        files: vec![
            ("table1.json".into(), json),
            ("table1.txt".into(), text.clone()),
        ],
        comparisons,
        summary: text,
    })
}

fn compact(v: &Value) -> String {
    match v {
        Value::String(s) => s.clone(),
        v => v.to_string(),
    }
}

fn status_word(s: Status) -> &'static str {
    match s {
        Status::Match => "match",
        Status::Refuted => "REFUTED",
        Status::Mismatch => "MISMATCH",
        Status::Reference => "reference",
    }
}

fn fragility_figures(config: &ExperimentConfig) -> CliResult<Bundle> {
    let mut arrays: Vec<SensorArray> = vec![
        gen_ula(12)?,
        gen_nested(12)?,
        gen_coprime(4, 5)?,
        gen_super_nested(6, 6)?,
    ];
    for case in fixtures::CASE_STUDIES {
        arrays.push(case.build()?);
    }

    let mut profiles = Vec::new();
    for a in &arrays {
        profiles.push(analyze(a, config.k_max)?.profile);
    }
    let rows: Vec<(&str, &[FragilityReport])> = arrays
        .iter()
        .zip(&profiles)
        .map(|(a, p)| (a.label(), p.as_slice()))
        .collect();
    let by_k = fragility_csv(&rows);

    let mut f1 = String::from("label,sensors,coarray_size,normalized_coarray_size,F_1\n");
    for (a, p) in arrays.iter().zip(&profiles) {
        let size = difference_coarray(a).len();
        let n = a.len();
        writeln!(
            f1,
            "\"{}\",{n},{size},{:.6},{}",
            a.label().replace('"', "\"\""),
            size as f64 / (n * n) as f64,
            p[0].display_4dp()
        )
        .unwrap();
    }

    Ok(Bundle {
        tag: "fragility-figures".into(),
        files: vec![
            ("fragility_by_k.csv".into(), by_k.clone()),
            ("f1_vs_coarray.csv".into(), f1),
        ],
        comparisons: Vec::new(),
        summary: by_k,
    })
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn unknown_tag_lists_valid_ones() {
        let err = reproduce("mra", &ExperimentConfig::default()).unwrap_err();
        assert_eq!(err.code, exit::USAGE);
        let msg = err.to_string();
        for tag in TAGS {
            assert!(msg.contains(tag));
        }
    }

    #[test]
    fn example1_matches() {
        let b = reproduce("example1", &ExperimentConfig::default()).unwrap();
        assert!(b.comparisons.iter().all(|c| c.status == Status::Match));
        assert_eq!(b.exit_code(), exit::SUCCESS);
    }

    #[test]
    fn table1_flags_refuted_values_only() {
        let b = reproduce("table1", &ExperimentConfig::default()).unwrap();
        let flagged: Vec<(String, String)> = b
            .flagged()
            .map(|c| (c.subject.clone(), c.field.clone()))
            .collect();
        let expected: Vec<(String, String)> = [
            ("AUGGENIIFA", "essential"),
            ("AUGGENIIFA", "F1"),
            ("AUGGENIIFA", "F2"),
            ("AUGGENIIFA", "F3"),
            ("SNFA", "F2"),
        ]
        .iter()
        .map(|(a, b)| (a.to_string(), b.to_string()))
        .collect();
        assert_eq!(flagged, expected);
        assert_eq!(b.exit_code(), exit::SUCCESS);
        assert!(b.summary.contains("REFUTED"));
    }

    #[test]
    fn fragility_figures_rows() {
        let b = reproduce("fragility-figures", &ExperimentConfig::default()).unwrap();
        let csv = b.file("fragility_by_k.csv").unwrap();
        assert_eq!(csv.lines().count(), 1 + 9 * 3);
        assert!(csv.contains("ULA(12),1,0.1667"));
        assert!(csv.contains("nested(12),3,1.0000"));
        assert!(b.file("f1_vs_coarray.csv").unwrap().lines().count() == 10);
    }
}
