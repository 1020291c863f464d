//! Ensemble runs: plans recorded in manifests and their execution.

use std::collections::HashSet;
use std::path::Path;

use anyhow::Context;
use clap::ValueEnum;
use entconc::concentration::{
    bound_inferred_variance, fit_log_std, run_ensemble, variance_ratio, EnsembleStatistics,
    ExperimentConfig, Histogram, LinearFit, NoiseModel,
};
use entconc::entanglement::BipartiteSplit;
use serde::{Deserialize, Serialize};

use crate::report::{
    json_bytes, now_rfc3339, p_label, records_csv, sweep_csv, Outputs, RunManifest, SweepRow,
    MANIFEST_FILE,
};
use crate::svg::{self, Series};
use crate::{PropertyFailure, UsageError};

pub const FIG2_PANEL_P: [f64; 3] = [0.0, 0.3, 0.5];
const FIG2_SAMPLES: usize = 10_000;
const FIG2_FAST_SAMPLES: usize = 1000;

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum Synthetic {
    /// Standard deviation exactly `exp(-N)`.
    ExpDecay,
}

/// Rate parametrization used to derive the p values.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Rates {
    pub gamma: f64,
    pub t: Vec<f64>,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(tag = "command", rename_all = "kebab-case")]
pub enum Plan {
    Sample {
        config: ExperimentConfig,
        #[serde(default, skip_serializing_if = "Option::is_none")]
        rates: Option<Rates>,
    },
    Sweep {
        configs: Vec<ExperimentConfig>,
        #[serde(default, skip_serializing_if = "Option::is_none")]
        synthetic: Option<Synthetic>,
    },
    ReproduceFig2 {
        fast: bool,
        configs: Vec<ExperimentConfig>,
        histogram_qubits: Vec<usize>,
    },
}

impl Plan {
    fn name(&self) -> &'static str {
        match self {
            Plan::Sample { .. } => "sample",
            Plan::Sweep { .. } => "sweep",
            Plan::ReproduceFig2 { .. } => "reproduce-fig2",
        }
    }
}

pub fn fig2_plan(
    fast: bool,
    samples: Option<usize>,
    seed: u64,
    bins: Option<usize>,
) -> anyhow::Result<Plan> {
    let max_n = if fast { 6 } else { 8 };
    let n_samples = samples.unwrap_or(if fast {
        FIG2_FAST_SAMPLES
    } else {
        FIG2_SAMPLES
    });
    let configs = (2..=max_n)
        .map(|n| {
            let mut cfg = ExperimentConfig::new(n, FIG2_PANEL_P.to_vec(), n_samples, seed)?;
            if let Some(b) = bins {
                cfg.histogram_bins = b;
            }
            cfg.validate()?;
            Ok(cfg)
        })
        .collect::<anyhow::Result<Vec<_>>>()?;
    Ok(Plan::ReproduceFig2 {
        fast,
        configs,
        histogram_qubits: vec![3, 5, max_n],
    })
}

#[derive(Serialize)]
struct PSummary<'a> {
    p: f64,
    #[serde(skip_serializing_if = "Option::is_none")]
    gamma: Option<f64>,
    #[serde(skip_serializing_if = "Option::is_none")]
    t: Option<f64>,
    n_samples: usize,
    mean: f64,
    std: f64,
    standard_error: f64,
    normalized_mean: f64,
    normalized_std: f64,
    /// Contraction coefficient assumed by the bound columns.
    eta_channel: f64,
    bound_inferred_variance: f64,
    /// Measured normalized variance over the bound-inferred variance.
    variance_ratio: f64,
    records_csv: String,
    histogram_svg: String,
    histogram: &'a Histogram,
}

#[derive(Serialize)]
struct SampleSummary<'a> {
    n_qubits: usize,
    split: &'a BipartiteSplit,
    noise: NoiseModel,
    max_negativity: f64,
    lipschitz_negativity: f64,
    entries: Vec<PSummary<'a>>,
}

#[derive(Serialize)]
struct FitSummary {
    p: f64,
    fit: Option<LinearFit>,
    #[serde(skip_serializing_if = "Option::is_none")]
    note: Option<String>,
}

#[derive(Serialize)]
struct ScalingSummary {
    rows: Vec<SweepRow>,
    fits: Vec<FitSummary>,
    #[serde(skip_serializing_if = "Option::is_none")]
    synthetic: Option<Synthetic>,
}

fn panel_names(n: usize, p: f64) -> (String, String) {
    let label = p_label(p);
    (
        format!("records_N{n}_p{label}.csv"),
        format!("histogram_N{n}_p{label}.svg"),
    )
}

fn check_distinct_labels(cfg: &ExperimentConfig) -> anyhow::Result<()> {
    let mut seen = HashSet::new();
    for &p in &cfg.p_values {
        if !seen.insert(p_label(p)) {
            return Err(
                UsageError(format!("p values collide at 4 decimals: {}", p_label(p))).into(),
            );
        }
    }
    Ok(())
}

fn histogram_panel(
    out: &mut Outputs,
    stats: &EnsembleStatistics,
) -> anyhow::Result<(String, String)> {
    let (csv_name, svg_name) = panel_names(stats.n_qubits, stats.p);
    out.add(csv_name.clone(), records_csv(&stats.records)?);
    let title = format!("N = {}, p = {}", stats.n_qubits, p_label(stats.p));
    out.add(
        svg_name.clone(),
        svg::histogram(&title, "negativity", &stats.histogram),
    );
    Ok((csv_name, svg_name))
}

fn sample_outputs(
    out: &mut Outputs,
    cfg: &ExperimentConfig,
    rates: Option<&Rates>,
) -> anyhow::Result<()> {
    check_distinct_labels(cfg)?;
    let all = run_ensemble::<f64>(cfg)?;
    let lipschitz = cfg.split.lipschitz();
    let inferred = bound_inferred_variance(cfg.split.dim_a(), cfg.split.dim_b(), 1.0)?;
    let mut entries = Vec::new();
    for (k, stats) in all.iter().enumerate() {
        let (csv_name, svg_name) = histogram_panel(out, stats)?;
        println!(
            "N={} p={:<8} mean={:.6} std={:.6} ({} samples) -> {csv_name}",
            stats.n_qubits,
            p_label(stats.p),
            stats.mean,
            stats.std,
            stats.n_samples
        );
        entries.push(PSummary {
            p: stats.p,
            gamma: rates.map(|r| r.gamma),
            t: rates.map(|r| r.t[k]),
            n_samples: stats.n_samples,
            mean: stats.mean,
            std: stats.std,
            standard_error: stats.standard_error(),
            normalized_mean: stats.normalized_mean,
            normalized_std: stats.normalized_std,
            eta_channel: 1.0,
            bound_inferred_variance: inferred,
            variance_ratio: variance_ratio(stats, &cfg.split, 1.0)?,
            records_csv: csv_name,
            histogram_svg: svg_name,
            histogram: &stats.histogram,
        });
    }
    let summary = SampleSummary {
        n_qubits: cfg.n_qubits,
        split: &cfg.split,
        noise: cfg.noise,
        max_negativity: lipschitz.n_max,
        lipschitz_negativity: lipschitz.eta_n,
        entries,
    };
    out.add("summary.json", json_bytes(&summary)?);
    Ok(())
}

fn synthetic_stats(cfg: &ExperimentConfig) -> Vec<EnsembleStatistics> {
    cfg.p_values
        .iter()
        .map(|&p| {
            let std = (-(cfg.n_qubits as f64)).exp();
            EnsembleStatistics {
                n_qubits: cfg.n_qubits,
                p,
                n_samples: cfg.n_samples,
                mean: 0.0,
                std,
                normalized_mean: 0.0,
                normalized_std: std,
                histogram: Histogram::fixed_width([], 0.0, 1.0, cfg.histogram_bins),
                records: Vec::new(),
            }
        })
        .collect()
}

/// `by_n[i][k]`: register size `i`, probability `k`.
fn scaling_outputs(
    out: &mut Outputs,
    by_n: &[Vec<EnsembleStatistics>],
    p_values: &[f64],
    synthetic: Option<Synthetic>,
) -> anyhow::Result<()> {
    let rows: Vec<SweepRow> = by_n
        .iter()
        .flatten()
        .map(|s| SweepRow {
            n: s.n_qubits,
            p: s.p,
            mean: s.mean,
            std: s.std,
            n_samples: s.n_samples,
        })
        .collect();
    let mut fits = Vec::new();
    let mut series = Vec::new();
    for (k, &p) in p_values.iter().enumerate() {
        let column: Vec<EnsembleStatistics> = by_n.iter().map(|v| v[k].clone()).collect();
        let (fit, note) = match fit_log_std(&column) {
            Ok(fit) => (Some(fit), None),
            Err(e) => (None, Some(e.to_string())),
        };
        match (&fit, &note) {
            (Some(f), _) => println!(
                "p={:<8} slope={:.6} intercept={:.6} R2={:.6}",
                p_label(p),
                f.slope,
                f.intercept,
                f.r_squared
            ),
            (None, Some(n)) => println!("p={:<8} no fit: {n}", p_label(p)),
            _ => {}
        }
        series.push(Series {
            label: format!("p = {}", p_label(p)),
            points: column.iter().map(|s| (s.n_qubits as f64, s.std)).collect(),
            fit,
        });
        fits.push(FitSummary { p, fit, note });
    }
    out.add("sweep.csv", sweep_csv(&rows)?);
    out.add(
        "fits.json",
        json_bytes(&ScalingSummary {
            rows,
            fits,
            synthetic,
        })?,
    );
    out.add(
        "scaling.svg",
        svg::log_scaling("Standard deviation of negativity", &series),
    );
    Ok(())
}

/// Standard deviation must shrink from the smallest to the largest panel.
fn narrowing_failures(by_n: &[Vec<EnsembleStatistics>], histogram_qubits: &[usize]) -> Vec<String> {
    let find = |n: usize| by_n.iter().find(|v| v[0].n_qubits == n);
    let (Some(first), Some(last)) = (
        histogram_qubits.first().and_then(|&n| find(n)),
        histogram_qubits.last().and_then(|&n| find(n)),
    ) else {
        return Vec::new();
    };
    first
        .iter()
        .zip(last)
        .filter(|(a, b)| a.p < 1.0 && !(b.std < a.std))
        .map(|(a, b)| {
            format!(
                "p={}: std(N={}) = {} is not below std(N={}) = {}",
                p_label(a.p),
                b.n_qubits,
                b.std,
                a.n_qubits,
                a.std
            )
        })
        .collect()
}

/// Runs a plan and writes its outputs plus a manifest into `dir`.
pub fn execute(plan: &Plan, dir: &Path) -> anyhow::Result<()> {
    let started_at = now_rfc3339();
    let mut out = Outputs::default();
    let mut failures = Vec::new();
    match plan {
        Plan::Sample { config, rates } => sample_outputs(&mut out, config, rates.as_ref())?,
        Plan::Sweep { configs, synthetic } => {
            let by_n = configs
                .iter()
                .map(|cfg| match synthetic {
                    Some(Synthetic::ExpDecay) => Ok(synthetic_stats(cfg)),
                    None => Ok(run_ensemble::<f64>(cfg)?),
                })
                .collect::<anyhow::Result<Vec<_>>>()?;
            let ps = configs
                .first()
                .map(|c| c.p_values.clone())
                .unwrap_or_default();
            scaling_outputs(&mut out, &by_n, &ps, *synthetic)?;
        }
        Plan::ReproduceFig2 {
            configs,
            histogram_qubits,
            ..
        } => {
            let mut by_n = Vec::new();
            for cfg in configs {
                let started = std::time::Instant::now();
                let stats = run_ensemble::<f64>(cfg)?;
                println!(
                    "N={} done ({} samples, {:.1}s)",
                    cfg.n_qubits,
                    cfg.n_samples,
                    started.elapsed().as_secs_f64()
                );
                if histogram_qubits.contains(&cfg.n_qubits) {
                    for s in &stats {
                        histogram_panel(&mut out, s)?;
                    }
                }
                by_n.push(stats);
            }
            let ps = configs
                .first()
                .map(|c| c.p_values.clone())
                .unwrap_or_default();
            scaling_outputs(&mut out, &by_n, &ps, None)?;
            failures = narrowing_failures(&by_n, histogram_qubits);
        }
    }
    let mut output_paths = out.names();
    output_paths.push(MANIFEST_FILE.into());
    let manifest = RunManifest {
        tool_version: env!("CARGO_PKG_VERSION").into(),
        plan: plan.clone(),
        started_at,
        finished_at: now_rfc3339(),
        output_paths,
    };
    out.add(MANIFEST_FILE, json_bytes(&manifest)?);
    out.write_all(dir)?;
    println!(
        "{}: wrote {} files to {}",
        plan.name(),
        out.names().len(),
        dir.display()
    );
    if !failures.is_empty() {
        return Err(PropertyFailure(failures.join("; ")).into());
    }
    Ok(())
}

pub fn replay(manifest_path: &Path, out: Option<&Path>) -> anyhow::Result<()> {
    let text = std::fs::read_to_string(manifest_path)
        .with_context(|| format!("reading {}", manifest_path.display()))?;
    let manifest: RunManifest = serde_json::from_str(&text)
        .map_err(|e| UsageError(format!("invalid manifest {}: {e}", manifest_path.display())))?;
    let dir = match out {
        Some(d) => d.to_path_buf(),
        None => manifest_path
            .parent()
            .map(Path::to_path_buf)
            .unwrap_or_default(),
    };
    execute(&manifest.plan, &dir)
}
