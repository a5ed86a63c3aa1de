use std::fmt;
use std::str::FromStr;

use serde::Serialize;

use crate::error::{Error, Result};
use crate::partition::{DEFAULT_RANK_CEILING, MIN_RANK};

#[derive(Copy, Clone, Debug, PartialEq, Eq, Default, Serialize)]
#[serde(rename_all = "lowercase")]
pub enum OutputFormat {
    #[default]
    Json,
    Dot,
    Text,
}

impl FromStr for OutputFormat {
    type Err = Error;
    fn from_str(s: &str) -> Result<OutputFormat> {
        match s {
            "json" => Ok(OutputFormat::Json),
            "dot" => Ok(OutputFormat::Dot),
            "text" => Ok(OutputFormat::Text),
            _ => Err(Error::Precondition(format!("unknown output format `{s}`"))),
        }
    }
}

impl fmt::Display for OutputFormat {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            OutputFormat::Json => "json",
            OutputFormat::Dot => "dot",
            OutputFormat::Text => "text",
        })
    }
}

/// Run settings shared by the library entry points and the CLI.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct Config {
    rank_ceiling: u8,
    workers: usize,
    format: OutputFormat,
    seed: u64,
}

impl Default for Config {
    fn default() -> Config {
        Config { rank_ceiling: DEFAULT_RANK_CEILING, workers: 1, format: OutputFormat::Json, seed: 0 }
    }
}

impl Config {
    pub fn new(rank_ceiling: u8, workers: usize, format: OutputFormat, seed: u64) -> Result<Config> {
        if !(MIN_RANK..=DEFAULT_RANK_CEILING).contains(&rank_ceiling) {
            return Err(Error::RankOutOfRange { rank: rank_ceiling, min: MIN_RANK, max: DEFAULT_RANK_CEILING });
        }
        if workers == 0 {
            return Err(Error::Precondition("worker count must be at least 1".into()));
        }
        Ok(Config { rank_ceiling, workers, format, seed })
    }

    pub fn rank_ceiling(&self) -> u8 {
        self.rank_ceiling
    }

    pub fn workers(&self) -> usize {
        self.workers
    }

    pub fn format(&self) -> OutputFormat {
        self.format
    }

    pub fn seed(&self) -> u64 {
        self.seed
    }

    /// Rejects ranks above the ceiling (and below the minimum rank).
    pub fn check_rank(&self, rank: u8) -> Result<()> {
        if !(MIN_RANK..=self.rank_ceiling).contains(&rank) {
            return Err(Error::RankOutOfRange { rank, min: MIN_RANK, max: self.rank_ceiling });
        }
        Ok(())
    }
}
