//! Experiment recipes behind the `sfarray` command line tool.
//!
//! Each subcommand is a plain function returning structured output so that
//! the binary only parses flags, prints, and maps errors to exit codes.

use std::fmt;
use std::fs;
use std::path::Path;

use serde::Serialize;

pub mod claims;
pub mod commands;
pub mod config;
pub mod reproduce;

pub use config::{ArraySpec, ExperimentConfig, FamilyArg, KindArg};

/// Process exit codes.
pub mod exit {
    pub const SUCCESS: i32 = 0;
    pub const USAGE: i32 = 1;
    pub const COMPUTATION: i32 = 2;
    pub const MISMATCH: i32 = 3;
}

#[derive(Debug)]
pub struct CliError {
    pub code: i32,
    pub error: anyhow::Error,
}

impl CliError {
    pub fn usage(error: impl Into<anyhow::Error>) -> Self {
        Self {
            code: exit::USAGE,
            error: error.into(),
        }
    }

    pub fn computation(error: impl Into<anyhow::Error>) -> Self {
        Self {
            code: exit::COMPUTATION,
            error: error.into(),
        }
    }
}

impl fmt::Display for CliError {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{:#}", self.error)
    }
}

impl From<sfarray::Error> for CliError {
    fn from(e: sfarray::Error) -> Self {
        if e.is_parameter_error() {
            Self::usage(e)
        } else {
            Self::computation(e)
        }
    }
}

pub type CliResult<T> = Result<T, CliError>;

/// Pretty JSON with object keys sorted and a trailing newline.
pub fn to_json<T: Serialize>(value: &T) -> String {
    // serde_json::Value objects are BTreeMaps, so a round trip sorts keys.
    let value = serde_json::to_value(value).expect("serializable report");
    let mut s = serde_json::to_string_pretty(&value).expect("valid JSON value");
    s.push('\n');
    s
}

pub fn write_file(path: &Path, contents: impl AsRef<[u8]>) -> CliResult<()> {
    if let Some(dir) = path.parent() {
        fs::create_dir_all(dir).map_err(|e| {
            CliError::computation(anyhow::anyhow!("creating {}: {e}", dir.display()))
        })?;
    }
    fs::write(path, contents)
        .map_err(|e| CliError::computation(anyhow::anyhow!("writing {}: {e}", path.display())))
}
