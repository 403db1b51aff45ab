use std::path::{Path, PathBuf};

use anyhow::{anyhow, Context};
use clap::{Args, ValueEnum};
use serde::Deserialize;
use sfarray::doa::{SceneLayout, DEFAULT_GRID_SIZE};
use sfarray::geometry::{
    gen_ana1, gen_ana2, gen_cantor, gen_coprime, gen_nested, gen_super_nested, gen_ula, make_sfa,
    Subarray,
};
use sfarray::SensorArray;

use crate::{CliError, CliResult};

pub const DEFAULT_SEED: u64 = 2024;
pub const DEFAULT_K_MAX: usize = 3;
pub const DEFAULT_SNAPSHOTS: usize = 500;
pub const DEFAULT_TRIALS: usize = 50;
pub const DEFAULT_SNR_DB: f64 = 0.0;
pub const DEFAULT_JITTER: f64 = 0.2;

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum KindArg {
    Ula,
    Nested,
    Coprime,
    Ana1,
    Ana2,
    SuperNested,
    Cantor,
    Sfa,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum FamilyArg {
    Ula,
    Nested,
    Coprime,
    Ana1,
    Ana2,
    SuperNested,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum SceneArg {
    WellSeparated,
    Random,
    OnGrid,
}

/// Array family and parameters, as given on the command line.
#[derive(Debug, Clone, Default, Args)]
pub struct ArraySpec {
    #[arg(long, value_enum)]
    pub kind: Option<KindArg>,
    /// Subarray family for `--kind sfa`.
    #[arg(long, value_enum)]
    pub sub: Option<FamilyArg>,
    #[arg(long)]
    pub n: Option<usize>,
    #[arg(long)]
    pub m: Option<usize>,
    #[arg(long)]
    pub n1: Option<usize>,
    #[arg(long)]
    pub n2: Option<usize>,
    /// Cantor order (fractal scale).
    #[arg(long)]
    pub r: Option<u32>,
}

fn need<T>(value: Option<T>, flag: &str, kind: &str) -> CliResult<T> {
    value.ok_or_else(|| CliError::usage(anyhow!("--{flag} is required for {kind}")))
}

impl ArraySpec {
    fn subarray(&self, family: FamilyArg) -> CliResult<Subarray> {
        let name = "this subarray family";
        Ok(match family {
            FamilyArg::Ula => Subarray::Ula {
                n: need(self.n, "n", name)?,
            },
            FamilyArg::Nested => Subarray::Nested {
                n: need(self.n, "n", name)?,
            },
            FamilyArg::Coprime => Subarray::Coprime {
                m: need(self.m, "m", name)?,
                n: need(self.n, "n", name)?,
            },
            FamilyArg::Ana1 => Subarray::Ana1 {
                n: need(self.n, "n", name)?,
            },
            FamilyArg::Ana2 => Subarray::Ana2 {
                n: need(self.n, "n", name)?,
            },
            FamilyArg::SuperNested => Subarray::SuperNested {
                n1: need(self.n1, "n1", name)?,
                n2: need(self.n2, "n2", name)?,
            },
        })
    }

    pub fn build(&self) -> CliResult<SensorArray> {
        let kind = need(self.kind, "kind", "array generation")?;
        let array = match kind {
            KindArg::Ula => gen_ula(need(self.n, "n", "ula")?),
            KindArg::Nested => gen_nested(need(self.n, "n", "nested")?),
            KindArg::Coprime => {
                gen_coprime(need(self.m, "m", "coprime")?, need(self.n, "n", "coprime")?)
            }
            KindArg::Ana1 => gen_ana1(need(self.n, "n", "ana1")?),
            KindArg::Ana2 => gen_ana2(need(self.n, "n", "ana2")?),
            KindArg::SuperNested => gen_super_nested(
                need(self.n1, "n1", "super-nested")?,
                need(self.n2, "n2", "super-nested")?,
            ),
            KindArg::Cantor => gen_cantor(need(self.r, "r", "cantor")?),
            KindArg::Sfa => {
                let family = need(self.sub, "sub", "sfa")?;
                make_sfa(&self.subarray(family)?, self.r.unwrap_or(1))
            }
        };
        Ok(array?)
    }
}

/// Optional TOML config file; every key mirrors a command-line flag.
#[derive(Debug, Clone, Default, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct ConfigFile {
    pub seed: Option<u64>,
    pub out_dir: Option<PathBuf>,
    pub grid_size: Option<usize>,
    pub k_max: Option<usize>,
    pub sources: Option<usize>,
    pub snr_db: Option<f64>,
    pub snapshots: Option<usize>,
    pub trials: Option<usize>,
    pub scene: Option<SceneArg>,
    pub jitter: Option<f64>,
}

impl ConfigFile {
    pub fn load(path: &Path) -> CliResult<Self> {
        let text = std::fs::read_to_string(path)
            .with_context(|| format!("reading config {}", path.display()))
            .map_err(CliError::usage)?;
        toml::from_str(&text)
            .with_context(|| format!("parsing config {}", path.display()))
            .map_err(CliError::usage)
    }
}

/// Fully resolved settings: flag, then config file, then default.
#[derive(Debug, Clone, PartialEq)]
pub struct ExperimentConfig {
    pub seed: u64,
    pub out_dir: PathBuf,
    pub grid_size: usize,
    pub k_max: usize,
    /// `None` means "as many as the array supports".
    pub sources: Option<usize>,
    pub snr_db: f64,
    pub snapshots: usize,
    pub trials: usize,
    pub scene: SceneArg,
    pub jitter: f64,
}

impl Default for ExperimentConfig {
    fn default() -> Self {
        Self::resolve(&ConfigFile::default(), &ConfigFile::default())
    }
}

impl ExperimentConfig {
    /// `flags` wins over `file`.
    pub fn resolve(flags: &ConfigFile, file: &ConfigFile) -> Self {
        Self {
            seed: flags.seed.or(file.seed).unwrap_or(DEFAULT_SEED),
            out_dir: flags
                .out_dir
                .clone()
                .or_else(|| file.out_dir.clone())
                .unwrap_or_else(|| PathBuf::from("out")),
            grid_size: flags
                .grid_size
                .or(file.grid_size)
                .unwrap_or(DEFAULT_GRID_SIZE),
            k_max: flags.k_max.or(file.k_max).unwrap_or(DEFAULT_K_MAX),
            sources: flags.sources.or(file.sources),
            snr_db: flags.snr_db.or(file.snr_db).unwrap_or(DEFAULT_SNR_DB),
            snapshots: flags
                .snapshots
                .or(file.snapshots)
                .unwrap_or(DEFAULT_SNAPSHOTS),
            trials: flags.trials.or(file.trials).unwrap_or(DEFAULT_TRIALS),
            scene: flags
                .scene
                .or(file.scene)
                .unwrap_or(SceneArg::WellSeparated),
            jitter: flags.jitter.or(file.jitter).unwrap_or(DEFAULT_JITTER),
        }
    }

    pub fn scene_layout(&self) -> SceneLayout {
        match self.scene {
            SceneArg::WellSeparated => SceneLayout::WellSeparated {
                jitter: self.jitter,
            },
            SceneArg::Random => SceneLayout::Random {
                min_separation: 2.0 / self.grid_size as f64,
            },
            SceneArg::OnGrid => SceneLayout::OnGrid {
                grid_size: self.grid_size,
            },
        }
    }
}
