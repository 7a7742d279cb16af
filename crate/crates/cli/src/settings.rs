//! Parameter resolution: built-in defaults, then a `key=value` config file,
//! then command-line flags.

use std::collections::BTreeMap;
use std::fs;
use std::path::{Path, PathBuf};

use anyhow::{bail, Context, Result};
use clap::{Args, ValueEnum};

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum Format {
    Csv,
    Plot,
}

/// Flags shared by every subcommand.
#[derive(Debug, Clone, Default, Args)]
pub struct Flags {
    #[arg(long, global = true, allow_negative_numbers = true)]
    pub alpha: Option<f64>,
    #[arg(long, global = true, allow_negative_numbers = true)]
    pub beta: Option<f64>,
    #[arg(long, global = true, allow_negative_numbers = true)]
    pub lambda: Option<f64>,
    /// Number of eigenmodes (or roots for `roots`).
    #[arg(long, global = true)]
    pub modes: Option<usize>,
    #[arg(long = "r-points", global = true)]
    pub r_points: Option<usize>,
    /// Final time (the oracle horizon for `oracle-compare`).
    #[arg(long = "t-max", global = true, allow_negative_numbers = true)]
    pub t_max: Option<f64>,
    /// Time spacing (the oracle step for `oracle-compare`).
    #[arg(long, global = true, allow_negative_numbers = true)]
    pub dt: Option<f64>,
    /// Series tail tolerance (the L2 threshold for `oracle-compare`).
    #[arg(long, global = true, allow_negative_numbers = true)]
    pub tol: Option<f64>,
    /// Output file, or a directory for `figure`; stdout when absent.
    #[arg(long, global = true)]
    pub out: Option<PathBuf>,
    #[arg(long, global = true, value_enum)]
    pub format: Option<Format>,
    /// File of `key=value` lines using the flag names; flags take precedence.
    #[arg(long, global = true)]
    pub config: Option<PathBuf>,
}

/// Per-command fallbacks for values that neither the file nor the flags set.
#[derive(Debug, Clone, Copy)]
pub struct Defaults {
    pub alpha: f64,
    pub beta: f64,
    pub lambda: f64,
    pub modes: usize,
    pub r_points: usize,
    pub t_max: f64,
    pub dt: f64,
    pub tol: f64,
}

impl Default for Defaults {
    fn default() -> Self {
        Defaults {
            alpha: 0.0,
            beta: 1.0,
            lambda: 1.0,
            modes: 200,
            r_points: 21,
            t_max: 10.0,
            dt: 0.05,
            tol: 1e-6,
        }
    }
}

/// Fully resolved parameters.
#[derive(Debug, Clone)]
pub struct Settings {
    pub alpha: f64,
    pub beta: f64,
    pub lambda: f64,
    pub modes: usize,
    pub r_points: usize,
    pub t_max: f64,
    pub dt: f64,
    pub tol: f64,
    pub out: Option<PathBuf>,
    pub format: Format,
}

const KEYS: [&str; 10] = ["alpha", "beta", "lambda", "modes", "r-points", "t-max", "dt", "tol", "out", "format"];

pub fn read_config(path: &Path) -> Result<BTreeMap<String, String>> {
    let text = fs::read_to_string(path).with_context(|| format!("reading config file {}", path.display()))?;
    parse_config(&text).with_context(|| format!("in config file {}", path.display()))
}

pub fn parse_config(text: &str) -> Result<BTreeMap<String, String>> {
    let mut map = BTreeMap::new();
    for (i, raw) in text.lines().enumerate() {
        let line = raw.split('#').next().unwrap_or("").trim();
        if line.is_empty() {
            continue;
        }
        let Some((k, v)) = line.split_once('=') else {
            bail!("line {}: expected key=value, got '{line}'", i + 1);
        };
        let key = k.trim().replace('_', "-");
        if !KEYS.contains(&key.as_str()) {
            bail!("line {}: unknown key '{}'", i + 1, k.trim());
        }
        map.insert(key, v.trim().to_string());
    }
    Ok(map)
}

fn from_file<T: std::str::FromStr>(map: &BTreeMap<String, String>, key: &str) -> Result<Option<T>>
where
    T::Err: std::fmt::Display,
{
    map.get(key)
        .map(|v| v.parse::<T>().map_err(|e| anyhow::anyhow!("config value {key}={v}: {e}")))
        .transpose()
}

impl Flags {
    pub fn resolve(&self, d: Defaults) -> Result<Settings> {
        let file = match &self.config {
            Some(path) => read_config(path)?,
            None => BTreeMap::new(),
        };
        let format = match (self.format, file.get("format").map(String::as_str)) {
            (Some(f), _) => f,
            (None, Some(s)) => Format::from_str(s, true).map_err(|e| anyhow::anyhow!("config value format={s}: {e}"))?,
            (None, None) => Format::Csv,
        };
        let s = Settings {
            alpha: self.alpha.or(from_file(&file, "alpha")?).unwrap_or(d.alpha),
            beta: self.beta.or(from_file(&file, "beta")?).unwrap_or(d.beta),
            lambda: self.lambda.or(from_file(&file, "lambda")?).unwrap_or(d.lambda),
            modes: self.modes.or(from_file(&file, "modes")?).unwrap_or(d.modes),
            r_points: self.r_points.or(from_file(&file, "r-points")?).unwrap_or(d.r_points),
            t_max: self.t_max.or(from_file(&file, "t-max")?).unwrap_or(d.t_max),
            dt: self.dt.or(from_file(&file, "dt")?).unwrap_or(d.dt),
            tol: self.tol.or(from_file(&file, "tol")?).unwrap_or(d.tol),
            out: self.out.clone().or_else(|| file.get("out").map(PathBuf::from)),
            format,
        };
        s.validate()?;
        Ok(s)
    }
}

impl Settings {
    fn validate(&self) -> Result<()> {
        if self.modes == 0 {
            bail!("--modes must be at least 1");
        }
        if self.r_points < 2 {
            bail!("--r-points must be at least 2, got {}", self.r_points);
        }
        if !(self.dt > 0.0 && self.dt.is_finite()) {
            bail!("--dt must be positive, got {}", self.dt);
        }
        if !(self.t_max >= self.dt && self.t_max.is_finite()) {
            bail!("--t-max must be finite and at least --dt, got {}", self.t_max);
        }
        if !(self.tol > 0.0) {
            bail!("--tol must be positive, got {}", self.tol);
        }
        Ok(())
    }

    /// `dt, 2 dt, ...` up to `t_max`.
    pub fn times(&self) -> Vec<f64> {
        let n = (self.t_max / self.dt + 1e-9).floor() as usize;
        (1..=n).map(|i| i as f64 * self.dt).collect()
    }

    /// `# key=value` header lines for every resolved parameter.
    pub fn header(&self) -> Vec<(String, String)> {
        vec![
            ("alpha".into(), self.alpha.to_string()),
            ("beta".into(), self.beta.to_string()),
            ("lambda".into(), self.lambda.to_string()),
            ("r-points".into(), self.r_points.to_string()),
            ("t-max".into(), self.t_max.to_string()),
            ("dt".into(), self.dt.to_string()),
            ("tol".into(), self.tol.to_string()),
        ]
    }
}
