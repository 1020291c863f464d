//! Optional TOML defaults merged under the command-line flags.
//!
//! The file is flat; every key is optional:
//!
//! ```toml
//! qubits = 4          # sample
//! p = [0.0, 0.3]      # or: gamma = 1.0 with t = [0.1, 0.5]
//! samples = 1000
//! seed = 42
//! split = "1-vs-rest" # or "0,1"
//! bins = 50
//! noise = "dephasing" # "amplitude-damping", "depolarizing"
//! out = "results"
//! qubits_from = 2     # sweep
//! qubits_to = 6
//! ```

use std::path::{Path, PathBuf};

use anyhow::Context;
use clap::ValueEnum;
use entconc::channels::markov_p;
use entconc::concentration::{ExperimentConfig, NoiseModel, DEFAULT_HISTOGRAM_BINS};
use entconc::entanglement::BipartiteSplit;
use serde::Deserialize;

use crate::run::{Plan, Rates};
use crate::{default_out_dir, SampleArgs, SweepArgs, UsageError};

pub const DEFAULT_SAMPLES: usize = 1000;
pub const DEFAULT_SEED: u64 = 0;
pub const MAX_QUBITS: usize = 10;

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum NoiseArg {
    Dephasing,
    AmplitudeDamping,
    Depolarizing,
}

impl From<NoiseArg> for NoiseModel {
    fn from(n: NoiseArg) -> Self {
        match n {
            NoiseArg::Dephasing => NoiseModel::Dephasing,
            NoiseArg::AmplitudeDamping => NoiseModel::AmplitudeDamping,
            NoiseArg::Depolarizing => NoiseModel::Depolarizing,
        }
    }
}

#[derive(Debug, Default, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct FileConfig {
    pub qubits: Option<usize>,
    pub p: Option<Vec<f64>>,
    pub gamma: Option<f64>,
    pub t: Option<Vec<f64>>,
    pub samples: Option<usize>,
    pub seed: Option<u64>,
    pub split: Option<String>,
    pub bins: Option<usize>,
    pub noise: Option<NoiseModel>,
    pub out: Option<PathBuf>,
    pub qubits_from: Option<usize>,
    pub qubits_to: Option<usize>,
}

impl FileConfig {
    pub fn load(path: Option<&Path>) -> anyhow::Result<Self> {
        let Some(path) = path else {
            return Ok(Self::default());
        };
        let text = std::fs::read_to_string(path)
            .with_context(|| format!("reading config {}", path.display()))?;
        toml::from_str(&text)
            .map_err(|e| UsageError(format!("invalid config {}: {e}", path.display())).into())
    }
}

/// Parses `"1-vs-rest"` or a comma-separated list of qubit indices.
pub fn parse_split(n_qubits: usize, text: &str) -> anyhow::Result<BipartiteSplit> {
    let text = text.trim();
    if text.eq_ignore_ascii_case("1-vs-rest") {
        return Ok(BipartiteSplit::one_vs_rest(n_qubits)?);
    }
    let indices = text
        .split(',')
        .map(|s| s.trim().parse::<usize>())
        .collect::<Result<Vec<_>, _>>()
        .map_err(|_| {
            UsageError(format!(
                "bad --split {text:?}: expected indices or 1-vs-rest"
            ))
        })?;
    Ok(BipartiteSplit::new(n_qubits, indices)?)
}

fn check_qubits(n: usize) -> anyhow::Result<()> {
    if !(2..=MAX_QUBITS).contains(&n) {
        return Err(UsageError(format!("qubit count {n} outside 2..={MAX_QUBITS}")).into());
    }
    Ok(())
}

/// Resolves the p list either directly or from `gamma` and times.
fn resolve_p(
    p: Option<Vec<f64>>,
    gamma: Option<f64>,
    t: Option<Vec<f64>>,
) -> anyhow::Result<(Vec<f64>, Option<Rates>)> {
    match (p, gamma, t) {
        (Some(_), Some(_), _) | (Some(_), _, Some(_)) => {
            Err(UsageError("give either p or gamma/t, not both".into()).into())
        }
        (Some(p), None, None) => Ok((p, None)),
        (None, Some(gamma), Some(t)) => {
            let p = t
                .iter()
                .map(|&t| markov_p(gamma, t))
                .collect::<Result<Vec<f64>, _>>()?;
            Ok((p, Some(Rates { gamma, t })))
        }
        (None, Some(_), None) | (None, None, Some(_)) => {
            Err(UsageError("gamma and t must be given together".into()).into())
        }
        (None, None, None) => Err(UsageError("missing --p (or --gamma with --t)".into()).into()),
    }
}

pub fn resolve_sample(a: &SampleArgs, file: &FileConfig) -> anyhow::Result<(Plan, PathBuf)> {
    let n = a
        .qubits
        .or(file.qubits)
        .ok_or_else(|| UsageError("missing --qubits".into()))?;
    check_qubits(n)?;
    let from_flags = a.p.is_some() || a.gamma.is_some() || a.t.is_some();
    let (p_values, rates) = if from_flags {
        resolve_p(a.p.clone(), a.gamma, a.t.clone())?
    } else {
        resolve_p(file.p.clone(), file.gamma, file.t.clone())?
    };
    let split_text = a
        .split
        .as_deref()
        .or(file.split.as_deref())
        .unwrap_or("1-vs-rest");
    let config = ExperimentConfig {
        n_qubits: n,
        p_values,
        n_samples: a.samples.or(file.samples).unwrap_or(DEFAULT_SAMPLES),
        master_seed: a.seed.or(file.seed).unwrap_or(DEFAULT_SEED),
        split: parse_split(n, split_text)?,
        histogram_bins: a.bins.or(file.bins).unwrap_or(DEFAULT_HISTOGRAM_BINS),
        noise: a.noise.map(Into::into).or(file.noise).unwrap_or_default(),
    };
    config.validate()?;
    let out =
        a.io.out
            .clone()
            .or(file.out.clone())
            .unwrap_or_else(default_out_dir);
    Ok((Plan::Sample { config, rates }, out))
}

pub fn resolve_sweep(a: &SweepArgs, file: &FileConfig) -> anyhow::Result<(Plan, PathBuf)> {
    let from = a.qubits_from.or(file.qubits_from).unwrap_or(2);
    let to = a.qubits_to.or(file.qubits_to).unwrap_or(6);
    check_qubits(from)?;
    check_qubits(to)?;
    if to < from {
        return Err(UsageError(format!("--qubits-to {to} < --qubits-from {from}")).into());
    }
    let p_values =
        a.p.clone()
            .or(file.p.clone())
            .unwrap_or_else(|| vec![0.0, 0.3, 0.5]);
    let configs = (from..=to)
        .map(|n| {
            let cfg = ExperimentConfig {
                n_qubits: n,
                p_values: p_values.clone(),
                n_samples: a.samples.or(file.samples).unwrap_or(DEFAULT_SAMPLES),
                master_seed: a.seed.or(file.seed).unwrap_or(DEFAULT_SEED),
                split: BipartiteSplit::one_vs_rest(n)?,
                histogram_bins: a.bins.or(file.bins).unwrap_or(DEFAULT_HISTOGRAM_BINS),
                noise: a.noise.map(Into::into).or(file.noise).unwrap_or_default(),
            };
            cfg.validate()?;
            Ok(cfg)
        })
        .collect::<anyhow::Result<Vec<_>>>()?;
    let out =
        a.io.out
            .clone()
            .or(file.out.clone())
            .unwrap_or_else(default_out_dir);
    Ok((
        Plan::Sweep {
            configs,
            synthetic: a.synthetic,
        },
        out,
    ))
}
