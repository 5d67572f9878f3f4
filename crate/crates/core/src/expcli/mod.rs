//! Experiment runner: grid sweeps with checkpoints, result files, and the
//! log-log fit of errors against q.
//!
//! Config files are flat `key = value` lines; `#` starts a comment. Keys
//! mirror the command-line flags:
//!
//! ```text
//! field    = 3..499          # or a list: 3,5,7,3^2
//! n        = 2
//! offsets  = 0,1
//! mode     = exact           # exact | sample | cr | cycle
//! samples  = 100000
//! seed     = 1
//! shards   = 8
//! budget   = 100000000
//! out      = rows.jsonl
//! csv      = rows.csv
//! checkpoint = sweep.ckpt
//! allow_even_q = false
//! ```

mod fit;
mod sweep;

use std::collections::BTreeMap;
use std::path::{Path, PathBuf};

use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::hlcount::{CountError, Violation, DEFAULT_BUDGET};
use crate::numtheory::{odd_prime_powers, prime_power};

pub use fit::{fit_error_exponent, FitError, FitResult};
pub use sweep::{
    read_rows, run_sweep, sweep_digest, write_csv, Checkpoint, CycleRow, SweepControl, SweepOutcome, SweepResult,
    SweepRow,
};

/// Process exit codes.
pub mod exit {
    pub const SUCCESS: i32 = 0;
    pub const VALIDATION: i32 = 2;
    pub const BUDGET: i32 = 3;
    pub const IO: i32 = 4;
}

#[derive(Debug, Error)]
pub enum ConfigError {
    #[error("line {line}: expected key = value")]
    Syntax { line: usize },
    #[error("unknown config key '{0}'")]
    UnknownKey(String),
    #[error("bad value for '{key}': {value}")]
    BadValue { key: String, value: String },
    #[error("missing required key '{0}'")]
    Missing(&'static str),
    #[error("bad grid entry '{0}'")]
    BadGrid(String),
}

#[derive(Debug, Error)]
pub enum SweepError {
    #[error(transparent)]
    Config(#[from] ConfigError),
    #[error("grid point {field}: {}", .violations.iter().map(|v| v.to_string()).collect::<Vec<_>>().join("; "))]
    Invalid { field: String, violations: Vec<Violation> },
    #[error("grid point {field}: needs {needed} tests, budget is {budget}")]
    Budget { field: String, needed: u128, budget: u64 },
    #[error("grid point {field}: {source}")]
    Count { field: String, source: CountError },
    #[error("grid point {field}: {source}")]
    Galois { field: String, source: crate::galois_stats::GaloisError },
    #[error("checkpoint was written for config {found}, current config is {expected}")]
    DigestMismatch { expected: String, found: String },
    #[error("{path}: {msg}")]
    Io { path: PathBuf, msg: String },
}

impl SweepError {
    pub fn exit_code(&self) -> i32 {
        match self {
            SweepError::Budget { .. } => exit::BUDGET,
            SweepError::Count { source: CountError::Budget { .. }, .. } => exit::BUDGET,
            SweepError::Io { .. } => exit::IO,
            _ => exit::VALIDATION,
        }
    }

    pub(crate) fn io(path: &Path, e: impl std::fmt::Display) -> SweepError {
        SweepError::Io { path: path.to_path_buf(), msg: e.to_string() }
    }
}

#[derive(Copy, Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum SweepMode {
    Exact,
    Sample,
    Cr,
    Cycle,
}

impl std::str::FromStr for SweepMode {
    type Err = String;

    fn from_str(s: &str) -> Result<SweepMode, String> {
        match s {
            "exact" => Ok(SweepMode::Exact),
            "sample" | "sampled" => Ok(SweepMode::Sample),
            "cr" => Ok(SweepMode::Cr),
            "cycle" => Ok(SweepMode::Cycle),
            _ => Err(format!("unknown mode '{s}'")),
        }
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct SweepConfig {
    /// Field labels, one grid point each.
    pub fields: Vec<String>,
    pub n: usize,
    /// Offset texts, parsed over each grid field.
    pub offsets: Vec<String>,
    pub mode: SweepMode,
    pub samples: u64,
    pub seed: u64,
    pub shards: u64,
    pub budget: u64,
    pub allow_even_q: bool,
    pub out: Option<PathBuf>,
    pub csv: Option<PathBuf>,
    pub checkpoint: Option<PathBuf>,
}

impl SweepConfig {
    pub fn new(fields: Vec<String>, n: usize, offsets: Vec<String>, mode: SweepMode) -> SweepConfig {
        SweepConfig {
            fields,
            n,
            offsets,
            mode,
            samples: 10_000,
            seed: 0,
            shards: 1,
            budget: DEFAULT_BUDGET,
            allow_even_q: false,
            out: None,
            csv: None,
            checkpoint: None,
        }
    }

    /// Builds a config from parsed key-value pairs.
    pub fn from_map(map: &BTreeMap<String, String>) -> Result<SweepConfig, ConfigError> {
        for k in map.keys() {
            if !CONFIG_KEYS.contains(&k.as_str()) {
                return Err(ConfigError::UnknownKey(k.clone()));
            }
        }
        let get = |k: &str| map.get(k).map(|s| s.as_str());
        let fields = parse_grid(get("field").ok_or(ConfigError::Missing("field"))?)?;
        let n = parse_value(map, "n")?.ok_or(ConfigError::Missing("n"))?;
        let offsets = split_offsets(get("offsets").ok_or(ConfigError::Missing("offsets"))?);
        let mode = parse_value(map, "mode")?.unwrap_or(SweepMode::Exact);
        let mut c = SweepConfig::new(fields, n, offsets, mode);
        if let Some(v) = parse_value(map, "samples")? {
            c.samples = v;
        }
        if let Some(v) = parse_value(map, "seed")? {
            c.seed = v;
        }
        if let Some(v) = parse_value(map, "shards")? {
            c.shards = v;
        }
        if let Some(v) = parse_value(map, "budget")? {
            c.budget = v;
        }
        if let Some(v) = parse_value(map, "allow_even_q")? {
            c.allow_even_q = v;
        }
        c.out = get("out").map(PathBuf::from);
        c.csv = get("csv").map(PathBuf::from);
        c.checkpoint = get("checkpoint").map(PathBuf::from);
        Ok(c)
    }

    pub fn from_text(text: &str) -> Result<SweepConfig, ConfigError> {
        SweepConfig::from_map(&parse_kv(text)?)
    }
}

/// Keys accepted in config files.
pub const CONFIG_KEYS: &[&str] = &[
    "field",
    "n",
    "offsets",
    "mode",
    "samples",
    "seed",
    "shards",
    "budget",
    "allow_even_q",
    "out",
    "csv",
    "checkpoint",
    "format",
    "enumerate_if_full",
];

fn parse_value<T: std::str::FromStr>(map: &BTreeMap<String, String>, key: &str) -> Result<Option<T>, ConfigError> {
    match map.get(key) {
        None => Ok(None),
        Some(v) => v
            .parse()
            .map(Some)
            .map_err(|_| ConfigError::BadValue { key: key.to_string(), value: v.clone() }),
    }
}

/// Parses `key = value` lines. Later keys override earlier ones.
pub fn parse_kv(text: &str) -> Result<BTreeMap<String, String>, ConfigError> {
    let mut map = BTreeMap::new();
    for (i, raw) in text.lines().enumerate() {
        let line = raw.split('#').next().unwrap_or("").trim();
        if line.is_empty() {
            continue;
        }
        let (k, v) = line.split_once('=').ok_or(ConfigError::Syntax { line: i + 1 })?;
        let k = k.trim().replace('-', "_");
        if k.is_empty() {
            return Err(ConfigError::Syntax { line: i + 1 });
        }
        map.insert(k, v.trim().to_string());
    }
    Ok(map)
}

/// Splits a comma-separated offset list, keeping commas inside coefficient
/// tuples. `;` is accepted as a separator too.
pub fn split_offsets(s: &str) -> Vec<String> {
    let mut out = Vec::new();
    let mut depth = 0i32;
    let mut cur = String::new();
    for ch in s.chars() {
        match ch {
            '(' => depth += 1,
            ')' => depth -= 1,
            _ => {}
        }
        if (ch == ',' && depth == 0) || ch == ';' {
            out.push(cur.trim().to_string());
            cur.clear();
        } else {
            cur.push(ch);
        }
    }
    if !cur.trim().is_empty() || !out.is_empty() {
        out.push(cur.trim().to_string());
    }
    out
}

/// Label of a field of order `q`: `"p"` or `"p^k"`.
pub fn field_label(q: u64) -> Option<String> {
    let (p, k) = prime_power(q)?;
    Some(if k == 1 { p.to_string() } else { format!("{p}^{k}") })
}

/// Expands a grid spec into field labels. Entries are comma-separated; each is
/// a field label (`7`, `3^2`), or a range `lo..hi` meaning every odd prime
/// power in `[lo, hi]` in increasing order, so primes and proper powers interleave.
pub fn parse_grid(s: &str) -> Result<Vec<String>, ConfigError> {
    let mut out = Vec::new();
    for item in s.split(',').map(str::trim).filter(|x| !x.is_empty()) {
        if let Some((lo, hi)) = item.split_once("..") {
            let lo: u64 = lo.trim().parse().map_err(|_| ConfigError::BadGrid(item.into()))?;
            let hi: u64 = hi.trim().trim_start_matches('=').parse().map_err(|_| ConfigError::BadGrid(item.into()))?;
            out.extend(odd_prime_powers(lo, hi).into_iter().map(|q| field_label(q).expect("prime power")));
        } else {
            out.push(item.to_string());
        }
    }
    Ok(out)
}
