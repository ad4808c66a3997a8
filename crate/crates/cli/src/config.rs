//! Run configuration: defaults, config-file parsing, flag overrides.

use crate::CliError;
use qcrit_core::sweep::Method;
use std::collections::BTreeMap;
use std::path::{Path, PathBuf};

/// Fully resolved configuration of one run.
#[derive(Debug, Clone)]
pub struct RunConfig {
    pub method: Method,
    /// Ladder bounds (min, max, step).
    pub sizes: (usize, usize, usize),
    /// λ-grid bounds (min, max, count).
    pub lambda: (f64, f64, usize),
    /// Element length for FEM methods.
    pub h: f64,
    pub output: PathBuf,
    /// None = let the runtime pick.
    pub threads: Option<usize>,
    /// Collapse-parameter overrides.
    pub lambda_c: Option<f64>,
    pub alpha: Option<f64>,
    pub nu: Option<f64>,
    /// Refuse to rebuild a missing expectation table.
    pub no_recompute: bool,
}

impl Default for RunConfig {
    fn default() -> Self {
        RunConfig {
            method: Method::Basis,
            sizes: (8, 48, 2),
            lambda: (0.46, 0.56, 1001),
            h: 0.5,
            output: PathBuf::from("qcrit-out"),
            threads: None,
            lambda_c: None,
            alpha: None,
            nu: None,
            no_recompute: false,
        }
    }
}

pub fn parse_sizes(s: &str) -> Result<(usize, usize, usize), CliError> {
    let parts: Vec<&str> = s.split(':').collect();
    if parts.len() != 3 {
        return Err(CliError::Config(format!(
            "sizes must be MIN:MAX:STEP, got '{s}'"
        )));
    }
    let nums: Vec<usize> = parts
        .iter()
        .map(|p| {
            p.parse()
                .map_err(|_| CliError::Config(format!("bad integer '{p}' in sizes '{s}'")))
        })
        .collect::<Result<_, _>>()?;
    if nums[2] == 0 || nums[0] > nums[1] {
        return Err(CliError::Config(format!("degenerate sizes ladder '{s}'")));
    }
    Ok((nums[0], nums[1], nums[2]))
}

pub fn parse_lambda(s: &str) -> Result<(f64, f64, usize), CliError> {
    let parts: Vec<&str> = s.split(':').collect();
    if parts.len() != 3 {
        return Err(CliError::Config(format!(
            "lambda must be MIN:MAX:COUNT, got '{s}'"
        )));
    }
    let min: f64 = parts[0]
        .parse()
        .map_err(|_| CliError::Config(format!("bad number '{}' in lambda", parts[0])))?;
    let max: f64 = parts[1]
        .parse()
        .map_err(|_| CliError::Config(format!("bad number '{}' in lambda", parts[1])))?;
    let count: usize = parts[2]
        .parse()
        .map_err(|_| CliError::Config(format!("bad count '{}' in lambda", parts[2])))?;
    if !(min < max) || count < 2 {
        return Err(CliError::Config(format!("degenerate lambda grid '{s}'")));
    }
    Ok((min, max, count))
}

/// Plain-text `key = value` file; '#' starts a comment.
pub fn read_config_file(path: &Path) -> Result<BTreeMap<String, String>, CliError> {
    let text = std::fs::read_to_string(path).map_err(|e| {
        CliError::Config(format!("cannot read config file {}: {e}", path.display()))
    })?;
    let mut map = BTreeMap::new();
    for (lineno, raw) in text.lines().enumerate() {
        let line = raw.split('#').next().unwrap_or("").trim();
        if line.is_empty() {
            continue;
        }
        let Some((key, value)) = line.split_once('=') else {
            return Err(CliError::Config(format!(
                "{}:{}: expected key=value, got '{raw}'",
                path.display(),
                lineno + 1
            )));
        };
        map.insert(key.trim().to_string(), value.trim().to_string());
    }
    Ok(map)
}

impl RunConfig {
    /// Apply one config-file entry.
    pub fn apply(&mut self, key: &str, value: &str) -> Result<(), CliError> {
        match key {
            "method" => {
                self.method = value
                    .parse()
                    .map_err(|e| CliError::Config(format!("{e}")))?;
            }
            "sizes" => self.sizes = parse_sizes(value)?,
            "lambda" => self.lambda = parse_lambda(value)?,
            "h" => {
                self.h = value
                    .parse()
                    .map_err(|_| CliError::Config(format!("bad h '{value}'")))?;
            }
            "output" => self.output = PathBuf::from(value),
            "threads" => {
                self.threads = Some(
                    value
                        .parse()
                        .map_err(|_| CliError::Config(format!("bad threads '{value}'")))?,
                );
            }
            "lambda_c" => {
                self.lambda_c = Some(
                    value
                        .parse()
                        .map_err(|_| CliError::Config(format!("bad lambda_c '{value}'")))?,
                );
            }
            "alpha" => {
                self.alpha = Some(
                    value
                        .parse()
                        .map_err(|_| CliError::Config(format!("bad alpha '{value}'")))?,
                );
            }
            "nu" => {
                self.nu = Some(
                    value
                        .parse()
                        .map_err(|_| CliError::Config(format!("bad nu '{value}'")))?,
                );
            }
            other => {
                return Err(CliError::Config(format!("unknown config key '{other}'")));
            }
        }
        Ok(())
    }

    pub fn validate(&self) -> Result<(), CliError> {
        if !(self.h > 0.0) {
            return Err(CliError::Config(format!("h must be > 0, got {}", self.h)));
        }
        if self.threads == Some(0) {
            return Err(CliError::Config("threads must be >= 1".into()));
        }
        Ok(())
    }

    /// Echoed into every report and into table.csv metadata.
    pub fn echo(&self) -> String {
        let mut s = String::new();
        s.push_str(&format!("method = {}\n", self.method.tag()));
        s.push_str(&format!(
            "sizes = {}:{}:{}\n",
            self.sizes.0, self.sizes.1, self.sizes.2
        ));
        s.push_str(&format!(
            "lambda = {}:{}:{}\n",
            self.lambda.0, self.lambda.1, self.lambda.2
        ));
        s.push_str(&format!("h = {}\n", self.h));
        s.push_str(&format!("output = {}\n", self.output.display()));
        s.push_str(&format!(
            "threads = {}\n",
            self.threads.map_or("auto".to_string(), |t| t.to_string())
        ));
        if let Some(v) = self.lambda_c {
            s.push_str(&format!("lambda_c = {v}\n"));
        }
        if let Some(v) = self.alpha {
            s.push_str(&format!("alpha = {v}\n"));
        }
        if let Some(v) = self.nu {
            s.push_str(&format!("nu = {v}\n"));
        }
        s
    }
}
