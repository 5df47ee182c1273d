//! Run configuration: defaults, then a TOML file, then command-line flags.

use std::path::{Path, PathBuf};

use serde::{Deserialize, Serialize};

use crate::json::Num;

#[derive(Debug, Default, Clone, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct FileConfig {
    #[serde(default)]
    pub root: RootSection,
    #[serde(default)]
    pub point: PointSection,
    #[serde(default)]
    pub series: SeriesSection,
    #[serde(default)]
    pub simulate: SimulateSection,
    #[serde(default)]
    pub output: OutputSection,
}

#[derive(Debug, Default, Clone, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct RootSection {
    pub kind: Option<String>,
    pub m: Option<usize>,
    pub k0: Option<f64>,
    pub k1: Option<f64>,
}

#[derive(Debug, Default, Clone, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct PointSection {
    pub x: Option<Vec<f64>>,
    pub y: Option<Vec<f64>>,
    pub t: Option<f64>,
}

#[derive(Debug, Default, Clone, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct SeriesSection {
    pub max_weight: Option<u32>,
    pub tail_ratio_threshold: Option<f64>,
    pub abs_floor: Option<f64>,
}

#[derive(Debug, Default, Clone, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct SimulateSection {
    pub paths: Option<usize>,
    pub dt: Option<f64>,
    pub seed: Option<u64>,
    pub boundary_shrink: Option<f64>,
    pub max_retries: Option<u32>,
}

#[derive(Debug, Default, Clone, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct OutputSection {
    pub format: Option<String>,
    pub cache_dir: Option<PathBuf>,
}

impl FileConfig {
    pub fn load(path: &Path) -> Result<Self, String> {
        let text = std::fs::read_to_string(path).map_err(|e| format!("{}: {e}", path.display()))?;
        toml::from_str(&text).map_err(|e| format!("{}: {e}", path.display()))
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, clap::ValueEnum)]
#[serde(rename_all = "lowercase")]
pub enum Format {
    Json,
    Csv,
}

/// Fully resolved settings, echoed into every JSON record.
#[derive(Debug, Clone, Serialize)]
pub struct RunConfig {
    pub command: String,
    pub kind: Option<String>,
    pub m: Option<usize>,
    pub k0: Num,
    pub k1: Num,
    pub x: Option<Vec<Num>>,
    pub y: Option<Vec<Num>>,
    pub t: Option<Num>,
    pub max_weight: u32,
    pub tail_ratio_threshold: Num,
    pub abs_floor: Num,
    pub seed: u64,
    pub paths: usize,
    pub dt: Num,
    pub boundary_shrink: Num,
    pub max_retries: u32,
    pub format: Format,
    pub cache_dir: Option<String>,
}

pub fn nums(v: &[f64]) -> Vec<Num> {
    v.iter().copied().map(Num).collect()
}

/// `CHAMBER_BESSEL_CACHE`, else the user cache directory.
pub fn default_cache_dir() -> Option<PathBuf> {
    std::env::var_os("CHAMBER_BESSEL_CACHE")
        .filter(|v| !v.is_empty())
        .map(PathBuf::from)
        .or_else(|| dirs::cache_dir().map(|d| d.join("chamber-bessel")))
}

pub fn parse_format(s: &str) -> Result<Format, String> {
    match s {
        "json" => Ok(Format::Json),
        "csv" => Ok(Format::Csv),
        _ => Err(format!("unknown output format '{s}'")),
    }
}
