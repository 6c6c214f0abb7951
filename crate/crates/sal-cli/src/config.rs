//! Optional JSON run configuration and the merge with command-line flags.

use std::path::{Path, PathBuf};

use serde::Deserialize;

use crate::error::{CliError, CliResult};
use crate::table::{parse_f64, parse_f64_list, parse_usize_list};

/// A numeric list given as an array, a single number or a list/range string.
#[derive(Debug, Clone, Deserialize)]
#[serde(untagged)]
pub enum FloatList {
    Many(Vec<f64>),
    One(f64),
    Spec(String),
}

impl FloatList {
    pub fn values(&self) -> CliResult<Vec<f64>> {
        match self {
            FloatList::Many(v) if !v.is_empty() => Ok(v.clone()),
            FloatList::Many(_) => Err(CliError::Config("empty list in config".into())),
            FloatList::One(x) => Ok(vec![*x]),
            FloatList::Spec(s) => parse_f64_list(s),
        }
    }
}

#[derive(Debug, Clone, Deserialize)]
#[serde(untagged)]
pub enum IntList {
    Many(Vec<usize>),
    One(usize),
    Spec(String),
}

impl IntList {
    pub fn values(&self) -> CliResult<Vec<usize>> {
        match self {
            IntList::Many(v) if !v.is_empty() => Ok(v.clone()),
            IntList::Many(_) => Err(CliError::Config("empty list in config".into())),
            IntList::One(x) => Ok(vec![*x]),
            IntList::Spec(s) => parse_usize_list(s),
        }
    }
}

#[derive(Debug, Clone, Deserialize)]
#[serde(untagged)]
pub enum Scalar {
    Num(f64),
    Text(String),
}

impl Scalar {
    pub fn value(&self) -> CliResult<f64> {
        match self {
            Scalar::Num(x) => Ok(*x),
            Scalar::Text(s) => parse_f64(s).ok_or_else(|| CliError::Config(format!("`{s}` is not a number"))),
        }
    }
}

#[derive(Debug, Clone, Deserialize)]
#[serde(untagged)]
pub enum AxisValue {
    Vector([f64; 3]),
    Text(String),
}

/// Every field mirrors a flag. Unknown keys are rejected.
#[derive(Debug, Clone, Default, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct RunConfig {
    /// If present, must name the subcommand being run.
    pub command: Option<String>,
    pub output: Option<PathBuf>,
    pub jobs: Option<usize>,
    pub seed: Option<u64>,
    pub omega: Option<Scalar>,

    pub tau: Option<FloatList>,
    pub steps: Option<usize>,
    pub grid: Option<usize>,
    pub cd: Option<String>,
    pub states: Option<usize>,
    pub mode: Option<String>,
    pub protocol: Option<String>,

    pub n_sectors: Option<IntList>,
    pub gate: Option<String>,
    /// Custom gate, rows of `[re, im]` pairs.
    pub gate_matrix: Option<Vec<Vec<[f64; 2]>>>,
    pub schedule: Option<String>,

    pub n_controls: Option<IntList>,
    pub axis: Option<AxisValue>,
    pub phi: Option<Scalar>,
    pub theta0: Option<FloatList>,
    pub activation: Option<usize>,

    pub kind: Option<String>,
    pub n: Option<IntList>,
    pub omega_tau: Option<FloatList>,
}

impl RunConfig {
    pub fn load(path: &Path) -> CliResult<Self> {
        let text = std::fs::read_to_string(path)
            .map_err(|e| CliError::Config(format!("cannot read {}: {e}", path.display())))?;
        serde_json::from_str(&text).map_err(|e| CliError::Config(format!("{}: {e}", path.display())))
    }

    pub fn check_command(&self, running: &str) -> CliResult<()> {
        match &self.command {
            Some(c) if c != running => {
                Err(CliError::Config(format!("config is for `{c}` but `{running}` was requested")))
            }
            _ => Ok(()),
        }
    }
}

/// Flag value if given, else the config value.
pub fn pick<T: Clone>(flag: &Option<T>, config: &Option<T>) -> Option<T> {
    flag.clone().or_else(|| config.clone())
}

/// List from a flag string, else from the config, else `default`.
pub fn float_list(flag: &Option<String>, config: &Option<FloatList>, default: &str) -> CliResult<Vec<f64>> {
    match (flag, config) {
        (Some(s), _) => parse_f64_list(s),
        (None, Some(c)) => c.values(),
        (None, None) => parse_f64_list(default),
    }
}

pub fn int_list(flag: &Option<String>, config: &Option<IntList>, default: &[usize]) -> CliResult<Vec<usize>> {
    match (flag, config) {
        (Some(s), _) => parse_usize_list(s),
        (None, Some(c)) => c.values(),
        (None, None) => Ok(default.to_vec()),
    }
}

pub fn scalar(flag: &Option<String>, config: &Option<Scalar>, default: f64) -> CliResult<f64> {
    match (flag, config) {
        (Some(s), _) => parse_f64(s).ok_or_else(|| CliError::Config(format!("`{s}` is not a number"))),
        (None, Some(c)) => c.value(),
        (None, None) => Ok(default),
    }
}

/// Unit axis from `x|y|z`, `ax,ay,az` or a config vector.
pub fn axis(flag: &Option<String>, config: &Option<AxisValue>) -> CliResult<[f64; 3]> {
    let raw = match (flag, config) {
        (Some(s), _) => parse_axis(s)?,
        (None, Some(AxisValue::Text(s))) => parse_axis(s)?,
        (None, Some(AxisValue::Vector(v))) => *v,
        (None, None) => [1.0, 0.0, 0.0],
    };
    let norm = raw.iter().map(|x| x * x).sum::<f64>().sqrt();
    if !(norm > 0.0 && norm.is_finite()) {
        return Err(CliError::Config("rotation axis must be a non-zero finite vector".into()));
    }
    Ok(raw.map(|x| x / norm))
}

fn parse_axis(s: &str) -> CliResult<[f64; 3]> {
    match s.trim().to_ascii_lowercase().as_str() {
        "x" => Ok([1.0, 0.0, 0.0]),
        "y" => Ok([0.0, 1.0, 0.0]),
        "z" => Ok([0.0, 0.0, 1.0]),
        other => {
            let v = parse_f64_list(other)?;
            <[f64; 3]>::try_from(v).map_err(|_| CliError::Config(format!("axis `{s}` needs three components")))
        }
    }
}

/// Worker count: `SAL_JOBS`, then the flag/config, then all logical cores.
pub fn jobs(env: Option<&str>, flag: Option<usize>, config: Option<usize>) -> CliResult<usize> {
    let n = match env {
        Some(v) => v.trim().parse().map_err(|_| CliError::Config(format!("SAL_JOBS=`{v}` is not a positive integer")))?,
        None => flag.or(config).unwrap_or_else(|| std::thread::available_parallelism().map_or(1, |n| n.get())),
    };
    if n == 0 {
        return Err(CliError::Config("jobs must be at least 1".into()));
    }
    Ok(n)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn flags_override_config() {
        let cfg: RunConfig = serde_json::from_str(r#"{"tau": [0.5, 2], "seed": 4, "theta0": "pi/2"}"#).unwrap();
        assert_eq!(float_list(&None, &cfg.tau, "1").unwrap(), vec![0.5, 2.0]);
        assert_eq!(float_list(&Some("3".into()), &cfg.tau, "1").unwrap(), vec![3.0]);
        assert_eq!(float_list(&None, &None, "1,2").unwrap(), vec![1.0, 2.0]);
        assert!((float_list(&None, &cfg.theta0, "1").unwrap()[0] - std::f64::consts::FRAC_PI_2).abs() < 1e-15);
        assert_eq!(pick(&None, &cfg.seed), Some(4));
        assert_eq!(pick(&Some(9), &cfg.seed), Some(9));
    }

    #[test]
    fn unknown_keys_are_rejected() {
        assert!(serde_json::from_str::<RunConfig>(r#"{"taus": [1]}"#).is_err());
    }

    #[test]
    fn axis_is_normalized() {
        let a = axis(&Some("1,1,0".into()), &None).unwrap();
        assert!((a[0] - std::f64::consts::FRAC_1_SQRT_2).abs() < 1e-15);
        assert!(axis(&Some("0,0,0".into()), &None).is_err());
        assert_eq!(axis(&None, &Some(AxisValue::Vector([0.0, 2.0, 0.0]))).unwrap(), [0.0, 1.0, 0.0]);
    }

    #[test]
    fn env_jobs_win() {
        assert_eq!(jobs(Some("3"), Some(5), Some(7)).unwrap(), 3);
        assert_eq!(jobs(None, Some(5), Some(7)).unwrap(), 5);
        assert_eq!(jobs(None, None, Some(7)).unwrap(), 7);
        assert!(jobs(Some("zero"), None, None).is_err());
        assert!(jobs(None, Some(0), None).is_err());
    }
}
