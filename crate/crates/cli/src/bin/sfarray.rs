use std::fs;
use std::io::{self, Read, Write};
use std::path::PathBuf;
use std::process::ExitCode;

use anyhow::anyhow;
use clap::{Args, Parser, Subcommand};
use experiments::commands::{self, MusicSettings};
use experiments::config::{ConfigFile, SceneArg};
use experiments::reproduce::{self, Status};
use experiments::{exit, to_json, ArraySpec, CliError, CliResult, ExperimentConfig};

/// Sparse fractal array design, coarray analysis, robustness and DOA estimation.
#[derive(Debug, Parser)]
#[command(name = "sfarray", version)]
struct Cli {
    /// Base RNG seed.
    #[arg(long, global = true)]
    seed: Option<u64>,
    /// Directory for output files.
    #[arg(long, global = true)]
    out_dir: Option<PathBuf>,
    /// Number of MUSIC grid points over [-0.5, 0.5).
    #[arg(long, global = true)]
    grid_size: Option<usize>,
    /// Largest k for k-fragility.
    #[arg(long, global = true)]
    k_max: Option<usize>,
    /// TOML file with default settings; flags override it.
    #[arg(long, global = true)]
    config: Option<PathBuf>,
    #[command(subcommand)]
    command: Command,
}

#[derive(Debug, Subcommand)]
enum Command {
    /// Print the sensor positions of a generated array as JSON.
    Generate(ArraySpec),
    /// Coarray, essentialness and fragility of a geometry JSON file (or `-` for stdin).
    Analyze { input: Option<PathBuf> },
    /// Monte-Carlo coarray MUSIC.
    Music(MusicArgs),
    /// Regenerate a case study, table or figure data and compare with published values.
    Reproduce {
        /// example1, nfa, cfa, auggen1, auggen2, snfa, table1 or fragility-figures.
        tag: String,
        /// Monte-Carlo trials for case-study MUSIC runs.
        #[arg(long)]
        trials: Option<usize>,
        #[arg(long)]
        snapshots: Option<usize>,
    },
}

#[derive(Debug, Args)]
struct MusicArgs {
    #[command(flatten)]
    array: ArraySpec,
    /// Geometry JSON file used instead of the generator flags.
    #[arg(long, conflicts_with = "kind")]
    geometry: Option<PathBuf>,
    /// Number of sources (defaults to the coarray capacity).
    #[arg(long)]
    sources: Option<usize>,
    #[arg(long, allow_hyphen_values = true)]
    snr_db: Option<f64>,
    #[arg(long)]
    snapshots: Option<usize>,
    #[arg(long)]
    trials: Option<usize>,
    #[arg(long, value_enum)]
    scene: Option<SceneArg>,
    /// Well-separated layout jitter as a fraction of the cell width.
    #[arg(long)]
    jitter: Option<f64>,
    /// Drop the noise term.
    #[arg(long)]
    noiseless: bool,
    /// Use the model covariance instead of sample estimates.
    #[arg(long)]
    expected_covariance: bool,
    /// Run even when the source count exceeds the coarray capacity.
    #[arg(long)]
    override_capacity: bool,
}

fn main() -> ExitCode {
    let cli = match Cli::try_parse() {
        Ok(cli) => cli,
        Err(e) => {
            let _ = e.print();
            return ExitCode::from(if e.use_stderr() { exit::USAGE as u8 } else { 0 });
        }
    };
    match run(cli) {
        Ok(code) => ExitCode::from(code as u8),
        Err(e) => {
            eprintln!("error: {e}");
            ExitCode::from(e.code as u8)
        }
    }
}

fn read_text(path: Option<&PathBuf>) -> CliResult<String> {
    let mut text = String::new();
    match path {
        Some(p) if p.as_os_str() != "-" => {
            text = fs::read_to_string(p)
                .map_err(|e| CliError::usage(anyhow!("reading {}: {e}", p.display())))?;
        }
        _ => {
            io::stdin()
                .read_to_string(&mut text)
                .map_err(|e| CliError::usage(anyhow!("reading stdin: {e}")))?;
        }
    }
    Ok(text)
}

fn print(text: &str) -> CliResult<()> {
    io::stdout()
        .write_all(text.as_bytes())
        .map_err(|e| CliError::computation(anyhow!("writing stdout: {e}")))
}

fn run(cli: Cli) -> CliResult<i32> {
    let file = match &cli.config {
        Some(path) => ConfigFile::load(path)?,
        None => ConfigFile::default(),
    };
    let mut flags = ConfigFile {
        seed: cli.seed,
        out_dir: cli.out_dir.clone(),
        grid_size: cli.grid_size,
        k_max: cli.k_max,
        ..Default::default()
    };
    let out_dir_given = flags.out_dir.is_some() || file.out_dir.is_some();

    match cli.command {
        Command::Generate(spec) => {
            let array = commands::generate(&spec)?;
            print(&to_json(&array))?;
        }
        Command::Analyze { input } => {
            let config = ExperimentConfig::resolve(&flags, &file);
            let array = commands::parse_geometry(&read_text(input.as_ref())?)?;
            let analysis = commands::analyze(&array, config.k_max)?;
            if out_dir_given {
                commands::write_analysis(&config.out_dir, &analysis)?;
            }
            print(&to_json(&analysis))?;
        }
        Command::Music(args) => {
            flags.sources = args.sources;
            flags.snr_db = args.snr_db;
            flags.snapshots = args.snapshots;
            flags.trials = args.trials;
            flags.scene = args.scene;
            flags.jitter = args.jitter;
            let config = ExperimentConfig::resolve(&flags, &file);
            let array = match &args.geometry {
                Some(path) => commands::parse_geometry(&read_text(Some(path))?)?,
                None => args.array.build()?,
            };
            let settings = MusicSettings {
                noiseless: args.noiseless,
                expected_covariance: args.expected_covariance,
                override_capacity: args.override_capacity,
            };
            let run = commands::music(&array, &config, settings)?;
            for w in &run.warnings {
                eprintln!("warning: {w}");
            }
            commands::write_music(&config.out_dir, &run)?;
            print(&to_json(&run.report))?;
        }
        Command::Reproduce {
            tag,
            trials,
            snapshots,
        } => {
            flags.trials = trials;
            flags.snapshots = snapshots;
            let config = ExperimentConfig::resolve(&flags, &file);
            let bundle = reproduce::reproduce(&tag, &config)?;
            bundle.write(&config.out_dir)?;
            print(&bundle.summary)?;
            for c in bundle.flagged() {
                let kind = if c.status == Status::Mismatch {
                    "mismatch"
                } else {
                    "refuted"
                };
                eprintln!(
                    "{kind}: {} {}: published {} computed {}",
                    c.subject, c.field, c.published, c.computed
                );
            }
            return Ok(bundle.exit_code());
        }
    }
    Ok(exit::SUCCESS)
}
