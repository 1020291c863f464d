//! Ensemble experiments over Haar-random initial states and the Levy-type
//! concentration bounds they are compared against.
//!
//! For a Lipschitz entanglement quantifier `E` (constant `eta_E`) evaluated
//! after a channel with contraction coefficient `eta_L`, the probability that
//! `E` deviates from its ensemble mean by more than `epsilon` is at most
//!
//! ```text
//! 4 exp(-C (2d - 1) epsilon^2 / (4 eta_E^2 eta_L^2)),   C = 1 / (24 pi^2)
//! ```
//!
//! [`negativity_bound`] is the same bound specialized to normalized
//! negativity (`d = d_A d_B`, `eta_E = d_A / (d_A - 1)`). At desk-scale
//! dimensions the bound usually exceeds 1 and says nothing; the ensemble
//! statistics show the concentration directly.

use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::channels::{LocalChannels, QuantumChannel};
use crate::entanglement::{negativity, BipartiteSplit};
use crate::error::{Error, Result};
use crate::scalar::Scalar;
use crate::states::{sample_haar_pure, RngStream};
use crate::stats::mean_std;

pub const DEFAULT_HISTOGRAM_BINS: usize = 50;

/// `C = 1 / (24 pi^2)`.
pub fn levy_constant<T: Scalar>() -> T {
    T::one() / (T::lit(24.0) * T::PI() * T::PI())
}

/// Parameters of the generic concentration bound.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct BoundInputs<T> {
    pub epsilon: T,
    /// Hilbert-space dimension `d`.
    pub dim: T,
    pub eta_e: T,
    pub eta_channel: T,
    pub c: T,
}

impl<T: Scalar> BoundInputs<T> {
    pub fn new(epsilon: T, dim: usize, eta_e: T, eta_channel: T) -> Result<Self> {
        let inputs = Self {
            epsilon,
            dim: T::lit(dim as f64),
            eta_e,
            eta_channel,
            c: levy_constant(),
        };
        inputs.validate()?;
        Ok(inputs)
    }

    pub fn validate(&self) -> Result<()> {
        let positive = |name, v: T| {
            if v > T::zero() && v.is_finite() {
                Ok(())
            } else {
                Err(Error::out_of_range(name, v.as_f64(), "finite and > 0"))
            }
        };
        positive("epsilon", self.epsilon)?;
        positive("dim", self.dim)?;
        positive("eta_e", self.eta_e)?;
        positive("c", self.c)?;
        if !(self.eta_channel > T::zero() && self.eta_channel <= T::one()) {
            return Err(Error::out_of_range(
                "eta_channel",
                self.eta_channel.as_f64(),
                "0 < eta_channel <= 1",
            ));
        }
        Ok(())
    }

    /// Magnitude of the exponent, `C (2d - 1) epsilon^2 / (4 eta_E^2 eta_L^2)`.
    pub fn exponent(&self) -> T {
        let two = T::lit(2.0);
        self.c * (two * self.dim - T::one()) * self.epsilon * self.epsilon
            / (T::lit(4.0) * self.eta_e * self.eta_e * self.eta_channel * self.eta_channel)
    }
}

/// `4 exp(-C (2d - 1) epsilon^2 / (4 eta_E^2 eta_L^2))`
pub fn levy_bound<T: Scalar>(inputs: &BoundInputs<T>) -> Result<T> {
    inputs.validate()?;
    Ok(T::lit(4.0) * (-inputs.exponent()).exp())
}

fn check_negativity_bound_args<T: Scalar>(
    epsilon: T,
    dim_a: usize,
    dim_b: usize,
    eta_channel: T,
) -> Result<()> {
    if dim_a < 2 {
        return Err(Error::out_of_range("dim_a", dim_a as f64, "dim_a >= 2"));
    }
    if dim_b < dim_a {
        return Err(Error::out_of_range("dim_b", dim_b as f64, "dim_b >= dim_a"));
    }
    if !(epsilon > T::zero()) || epsilon.is_infinite() {
        return Err(Error::out_of_range(
            "epsilon",
            epsilon.as_f64(),
            "finite and > 0",
        ));
    }
    if !(eta_channel > T::zero() && eta_channel <= T::one()) {
        return Err(Error::out_of_range(
            "eta_channel",
            eta_channel.as_f64(),
            "0 < eta_channel <= 1",
        ));
    }
    Ok(())
}

/// Tail bound for normalized negativity:
/// `4 exp(-C (2 d_A d_B - 1)(d_A - 1)^2 epsilon^2 / (4 d_A^2 eta_L^2))`.
pub fn negativity_bound<T: Scalar>(
    epsilon: T,
    dim_a: usize,
    dim_b: usize,
    eta_channel: T,
) -> Result<T> {
    check_negativity_bound_args(epsilon, dim_a, dim_b, eta_channel)?;
    let (da, db) = (T::lit(dim_a as f64), T::lit(dim_b as f64));
    let one = T::one();
    let exponent = levy_constant::<T>()
        * (T::lit(2.0) * da * db - one)
        * (da - one)
        * (da - one)
        * epsilon
        * epsilon
        / (T::lit(4.0) * da * da * eta_channel * eta_channel);
    Ok(T::lit(4.0) * (-exponent).exp())
}

/// Generic-bound parameters equivalent to [`negativity_bound`].
pub fn negativity_bound_inputs<T: Scalar>(
    epsilon: T,
    dim_a: usize,
    dim_b: usize,
    eta_channel: T,
) -> Result<BoundInputs<T>> {
    check_negativity_bound_args(epsilon, dim_a, dim_b, eta_channel)?;
    let da = T::lit(dim_a as f64);
    BoundInputs::new(epsilon, dim_a * dim_b, da / (da - T::one()), eta_channel)
}

/// Variance implied by reading the normalized-negativity bound as a
/// sub-Gaussian tail `exp(-epsilon^2 / (2 sigma^2))`:
/// `sigma^2 = 2 eta_E^2 eta_L^2 / (C (2d - 1))`.
pub fn bound_inferred_variance(dim_a: usize, dim_b: usize, eta_channel: f64) -> Result<f64> {
    let inputs = negativity_bound_inputs(1.0, dim_a, dim_b, eta_channel)?;
    Ok(2.0 * inputs.eta_e.powi(2) * eta_channel.powi(2) / (inputs.c * (2.0 * inputs.dim - 1.0)))
}

/// Local noise applied independently to every qubit.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Default, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum NoiseModel {
    #[default]
    Dephasing,
    AmplitudeDamping,
    Depolarizing,
}

impl NoiseModel {
    pub fn qubit_channel<T: Scalar>(self, p: T) -> Result<QuantumChannel<T>> {
        match self {
            NoiseModel::Dephasing => QuantumChannel::dephasing_qubit(p),
            NoiseModel::AmplitudeDamping => QuantumChannel::amplitude_damping(p),
            NoiseModel::Depolarizing => QuantumChannel::depolarizing(p),
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ExperimentConfig {
    pub n_qubits: usize,
    pub p_values: Vec<f64>,
    pub n_samples: usize,
    pub master_seed: u64,
    pub split: BipartiteSplit,
    pub histogram_bins: usize,
    #[serde(default)]
    pub noise: NoiseModel,
}

impl ExperimentConfig {
    /// One-vs-rest split, default binning, dephasing noise.
    pub fn new(
        n_qubits: usize,
        p_values: Vec<f64>,
        n_samples: usize,
        master_seed: u64,
    ) -> Result<Self> {
        let cfg = Self {
            n_qubits,
            p_values,
            n_samples,
            master_seed,
            split: BipartiteSplit::one_vs_rest(n_qubits)?,
            histogram_bins: DEFAULT_HISTOGRAM_BINS,
            noise: NoiseModel::Dephasing,
        };
        cfg.validate()?;
        Ok(cfg)
    }

    pub fn validate(&self) -> Result<()> {
        if self.n_samples < 1 {
            return Err(Error::out_of_range("n_samples", 0.0, "n_samples >= 1"));
        }
        if self.histogram_bins < 2 {
            return Err(Error::out_of_range(
                "histogram_bins",
                self.histogram_bins as f64,
                "histogram_bins >= 2",
            ));
        }
        if self.p_values.is_empty() {
            return Err(Error::out_of_range("p_values", 0.0, "at least one value"));
        }
        if let Some(&p) = self.p_values.iter().find(|p| !(0.0..=1.0).contains(*p)) {
            return Err(Error::out_of_range("p", p, "0 <= p <= 1"));
        }
        if self.split.n_qubits() != self.n_qubits {
            return Err(Error::mismatch(self.n_qubits, self.split.n_qubits()));
        }
        Ok(())
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct SampleRecord {
    pub sample_index: u64,
    pub negativity: f64,
    pub normalized_negativity: f64,
}

/// Fixed-width histogram; `edges.len() == counts.len() + 1`.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Histogram {
    pub edges: Vec<f64>,
    pub counts: Vec<u64>,
}

impl Histogram {
    /// Values outside `[lo, hi]` are clipped into the end bins.
    pub fn fixed_width(
        values: impl IntoIterator<Item = f64>,
        lo: f64,
        hi: f64,
        bins: usize,
    ) -> Self {
        assert!(bins >= 1 && hi > lo, "invalid histogram range");
        let width = (hi - lo) / bins as f64;
        let edges = (0..=bins).map(|k| lo + k as f64 * width).collect();
        let mut counts = vec![0u64; bins];
        for v in values {
            let k = ((v - lo) / width).floor();
            let k = if k.is_nan() || k < 0.0 {
                0
            } else {
                (k as usize).min(bins - 1)
            };
            counts[k] += 1;
        }
        Self { edges, counts }
    }

    pub fn total(&self) -> u64 {
        self.counts.iter().sum()
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct EnsembleStatistics {
    pub n_qubits: usize,
    pub p: f64,
    pub n_samples: usize,
    pub mean: f64,
    /// Unbiased (`n - 1`) standard deviation of negativity.
    pub std: f64,
    pub normalized_mean: f64,
    pub normalized_std: f64,
    /// Negativity over `[0, N_max]`.
    pub histogram: Histogram,
    pub records: Vec<SampleRecord>,
}

impl EnsembleStatistics {
    pub fn from_records(
        n_qubits: usize,
        p: f64,
        n_max: f64,
        bins: usize,
        records: Vec<SampleRecord>,
    ) -> Result<Self> {
        if records.is_empty() {
            return Err(Error::DegenerateData("no records".into()));
        }
        let values: Vec<f64> = records.iter().map(|r| r.negativity).collect();
        let normalized: Vec<f64> = records.iter().map(|r| r.normalized_negativity).collect();
        let (mean, std) = mean_std(&values);
        let (normalized_mean, normalized_std) = mean_std(&normalized);
        Ok(Self {
            n_qubits,
            p,
            n_samples: records.len(),
            mean,
            std,
            normalized_mean,
            normalized_std,
            histogram: Histogram::fixed_width(values, 0.0, n_max, bins),
            records,
        })
    }

    pub fn standard_error(&self) -> f64 {
        self.std / (self.n_samples as f64).sqrt()
    }
}

/// Negativity of `Lambda_p(|psi><psi|)` for each configured `p`.
fn evaluate_sample<T: Scalar>(
    cfg: &ExperimentConfig,
    channels: &[LocalChannels<T>],
    n_max: f64,
    sample_index: u64,
) -> Result<Vec<SampleRecord>> {
    let mut rng = RngStream::new(cfg.master_seed, sample_index);
    let psi = sample_haar_pure::<T>(1 << cfg.n_qubits, &mut rng)?;
    let rho = psi.projector();
    channels
        .iter()
        .map(|ch| {
            let value = negativity(&ch.apply(&rho)?, &cfg.split)?.as_f64();
            Ok(SampleRecord {
                sample_index,
                negativity: value,
                normalized_negativity: value / n_max,
            })
        })
        .collect()
}

/// Runs the ensemble in the scalar type `T`; one statistics entry per `p`,
/// in configuration order.
///
/// Sample `i` draws its initial state from stream `(master_seed, i)` and is
/// shared by every `p`, so results are identical for any thread count.
pub fn run_ensemble<T: Scalar>(cfg: &ExperimentConfig) -> Result<Vec<EnsembleStatistics>> {
    cfg.validate()?;
    let channels: Vec<LocalChannels<T>> = cfg
        .p_values
        .iter()
        .map(|&p| LocalChannels::uniform(cfg.noise.qubit_channel(T::lit(p))?, cfg.n_qubits))
        .collect::<Result<_>>()?;
    let n_max = cfg.split.lipschitz().n_max;

    let per_sample: Vec<Vec<SampleRecord>> = (0..cfg.n_samples as u64)
        .into_par_iter()
        .map(|i| evaluate_sample(cfg, &channels, n_max, i))
        .collect::<Result<_>>()?;

    cfg.p_values
        .iter()
        .enumerate()
        .map(|(k, &p)| {
            let records = per_sample.iter().map(|r| r[k]).collect();
            EnsembleStatistics::from_records(cfg.n_qubits, p, n_max, cfg.histogram_bins, records)
        })
        .collect()
}

/// Fraction of samples whose normalized negativity deviates from the
/// ensemble mean by more than `epsilon`.
pub fn empirical_tail(stats: &EnsembleStatistics, epsilon: f64) -> f64 {
    let exceed = stats
        .records
        .iter()
        .filter(|r| (r.normalized_negativity - stats.normalized_mean).abs() > epsilon)
        .count();
    exceed as f64 / stats.records.len() as f64
}

/// Same as [`empirical_tail`] on unnormalized negativity.
pub fn empirical_tail_raw(stats: &EnsembleStatistics, epsilon: f64) -> f64 {
    let exceed = stats
        .records
        .iter()
        .filter(|r| (r.negativity - stats.mean).abs() > epsilon)
        .count();
    exceed as f64 / stats.records.len() as f64
}

/// Measured variance of normalized negativity over the bound-inferred variance.
pub fn variance_ratio(
    stats: &EnsembleStatistics,
    split: &BipartiteSplit,
    eta_channel: f64,
) -> Result<f64> {
    let inferred = bound_inferred_variance(split.dim_a(), split.dim_b(), eta_channel)?;
    Ok(stats.normalized_std.powi(2) / inferred)
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct LinearFit {
    pub slope: f64,
    pub intercept: f64,
    pub r_squared: f64,
}

/// Ordinary least squares `y = slope x + intercept`.
pub fn fit_linear(points: &[(f64, f64)]) -> Result<LinearFit> {
    if points.len() < 3 {
        return Err(Error::DegenerateData(format!(
            "need at least 3 points, got {}",
            points.len()
        )));
    }
    let n = points.len() as f64;
    let mx = points.iter().map(|p| p.0).sum::<f64>() / n;
    let my = points.iter().map(|p| p.1).sum::<f64>() / n;
    let sxx: f64 = points.iter().map(|p| (p.0 - mx).powi(2)).sum();
    let sxy: f64 = points.iter().map(|p| (p.0 - mx) * (p.1 - my)).sum();
    let syy: f64 = points.iter().map(|p| (p.1 - my).powi(2)).sum();
    if sxx == 0.0 {
        return Err(Error::DegenerateData("all x values equal".into()));
    }
    let slope = sxy / sxx;
    let intercept = my - slope * mx;
    let ss_res: f64 = points
        .iter()
        .map(|p| (p.1 - slope * p.0 - intercept).powi(2))
        .sum();
    // constant data is fit exactly
    let r_squared = if syy == 0.0 { 1.0 } else { 1.0 - ss_res / syy };
    Ok(LinearFit {
        slope,
        intercept,
        r_squared,
    })
}

/// Least-squares fit of `ln(std)` against the number of qubits.
pub fn fit_log_std(stats_by_n: &[EnsembleStatistics]) -> Result<LinearFit> {
    if let Some(s) = stats_by_n.iter().find(|s| !(s.std > 0.0)) {
        return Err(Error::DegenerateData(format!(
            "zero standard deviation at N = {}, p = {}",
            s.n_qubits, s.p
        )));
    }
    let points: Vec<(f64, f64)> = stats_by_n
        .iter()
        .map(|s| (s.n_qubits as f64, s.std.ln()))
        .collect();
    fit_linear(&points)
}

#[cfg(test)]
mod tests {
    use super::*;
    use approx::assert_abs_diff_eq;

    fn synthetic(n_qubits: usize, std: f64) -> EnsembleStatistics {
        EnsembleStatistics {
            n_qubits,
            p: 0.0,
            n_samples: 1,
            mean: 0.0,
            std,
            normalized_mean: 0.0,
            normalized_std: 2.0 * std,
            histogram: Histogram::fixed_width([], 0.0, 1.0, 2),
            records: vec![],
        }
    }

    #[test]
    fn levy_constant_value() {
        assert_abs_diff_eq!(
            levy_constant::<f64>(),
            1.0 / (24.0 * std::f64::consts::PI.powi(2)),
            epsilon = 1e-18
        );
    }

    #[test]
    fn levy_bound_limits_and_scaling() {
        let b = |eps: f64| BoundInputs::new(eps, 16, 1.5, 1.0).unwrap();
        assert_abs_diff_eq!(levy_bound(&b(1e-9)).unwrap(), 4.0, epsilon = 1e-12);
        assert_abs_diff_eq!(b(0.2).exponent(), 4.0 * b(0.1).exponent(), epsilon = 1e-15);
        let big = BoundInputs::new(100.0, 1 << 20, 1.0, 1.0).unwrap();
        assert_eq!(levy_bound(&big).unwrap(), 0.0);
    }

    #[test]
    fn levy_bound_worked_value() {
        let b = BoundInputs::new(0.1, 256, 2.0, 1.0).unwrap();
        let c = 1.0 / (24.0 * std::f64::consts::PI.powi(2));
        let exponent = c * 511.0 * 0.01 / 16.0;
        assert_abs_diff_eq!(b.exponent(), exponent, epsilon = 1e-15);
        assert_abs_diff_eq!(b.exponent(), 1.349e-3, epsilon = 1e-6);
        assert_abs_diff_eq!(levy_bound(&b).unwrap(), 3.9946, epsilon = 1e-4);
    }

    #[test]
    fn levy_bound_monotonicity() {
        let base = BoundInputs::new(0.3, 64, 2.0, 0.8).unwrap();
        let v = levy_bound(&base).unwrap();
        let with = |f: &dyn Fn(&mut BoundInputs<f64>)| {
            let mut b = base;
            f(&mut b);
            levy_bound(&b).unwrap()
        };
        assert!(with(&|b| b.dim = 128.0) < v);
        assert!(with(&|b| b.epsilon = 0.4) < v);
        assert!(with(&|b| b.eta_e = 3.0) > v);
        assert!(with(&|b| b.eta_channel = 1.0) > v);
    }

    #[test]
    fn bound_input_validation() {
        assert!(BoundInputs::new(0.0, 4, 1.0, 1.0).is_err());
        assert!(BoundInputs::new(0.1, 0, 1.0, 1.0).is_err());
        assert!(BoundInputs::new(0.1, 4, -1.0, 1.0).is_err());
        assert!(BoundInputs::new(0.1, 4, 1.0, 1.5).is_err());
        assert!(BoundInputs::new(0.1, 4, 1.0, 0.0).is_err());
        assert!(negativity_bound(0.1, 1, 4, 1.0).is_err());
        assert!(negativity_bound(0.1, 4, 2, 1.0).is_err());
        assert!(negativity_bound(-0.1, 2, 2, 1.0).is_err());
        assert!(negativity_bound(0.1, 2, 2, 1.01).is_err());
    }

    #[test]
    fn negativity_bound_two_qubits() {
        let c = levy_constant::<f64>();
        for eps in [0.05, 0.5, 2.0] {
            let expected = 4.0 * (-c * 7.0 / 16.0 * eps * eps).exp();
            assert_abs_diff_eq!(
                negativity_bound(eps, 2, 2, 1.0).unwrap(),
                expected,
                epsilon = 1e-15
            );
        }
    }

    #[test]
    fn negativity_bound_matches_generic_bound() {
        for da in [2usize, 3, 4, 8] {
            for db in [da, 2 * da, 64] {
                for eps in [0.01, 0.1, 1.0, 5.0] {
                    for eta in [0.1, 0.5, 1.0] {
                        let direct = negativity_bound(eps, da, db, eta).unwrap();
                        let generic =
                            levy_bound(&negativity_bound_inputs(eps, da, db, eta).unwrap())
                                .unwrap();
                        assert_abs_diff_eq!(direct, generic, epsilon = 1e-12);
                    }
                }
            }
        }
    }

    #[test]
    fn negativity_bound_decreases_with_environment_size() {
        let values: Vec<f64> = (1..10)
            .map(|k| negativity_bound(0.5, 2, 2 << k, 1.0).unwrap())
            .collect();
        assert!(values.windows(2).all(|w| w[1] < w[0]));
    }

    #[test]
    fn bound_inferred_variance_formula() {
        let c = levy_constant::<f64>();
        let v = bound_inferred_variance(2, 16, 1.0).unwrap();
        assert_abs_diff_eq!(v, 2.0 * 4.0 / (c * 63.0), epsilon = 1e-12);
    }

    #[test]
    fn histogram_binning() {
        let h = Histogram::fixed_width([0.0, 0.1, 0.5, 0.49, 1.0, 1.2, -0.1], 0.0, 1.0, 2);
        assert_eq!(h.counts, vec![4, 3]);
        assert_eq!(h.edges, vec![0.0, 0.5, 1.0]);
        assert_eq!(h.total(), 7);
    }

    #[test]
    fn config_validation() {
        assert!(ExperimentConfig::new(3, vec![0.0, 0.5], 10, 1).is_ok());
        assert!(ExperimentConfig::new(3, vec![1.5], 10, 1).is_err());
        assert!(ExperimentConfig::new(3, vec![0.5], 0, 1).is_err());
        assert!(ExperimentConfig::new(3, vec![], 10, 1).is_err());
        assert!(ExperimentConfig::new(1, vec![0.5], 10, 1).is_err());
        let mut cfg = ExperimentConfig::new(3, vec![0.5], 10, 1).unwrap();
        cfg.histogram_bins = 1;
        assert!(cfg.validate().is_err());
        cfg.histogram_bins = 10;
        cfg.split = BipartiteSplit::one_vs_rest(4).unwrap();
        assert!(cfg.validate().is_err());
    }

    #[test]
    fn fully_dephased_ensemble_is_unentangled() {
        let cfg = ExperimentConfig::new(3, vec![1.0], 50, 9).unwrap();
        let stats = run_ensemble::<f64>(&cfg).unwrap();
        assert!(stats[0].records.iter().all(|r| r.negativity.abs() < 1e-10));
        assert_eq!(stats[0].histogram.counts[0], 50);
        assert!(stats[0].std < 1e-10);
    }

    #[test]
    fn ensemble_records_are_in_range_and_counted() {
        let cfg = ExperimentConfig::new(2, vec![0.0, 0.3], 500, 4).unwrap();
        let stats = run_ensemble::<f64>(&cfg).unwrap();
        assert_eq!(stats.len(), 2);
        for s in &stats {
            assert_eq!(s.histogram.total(), 500);
            assert!(s
                .records
                .iter()
                .all(|r| (0.0..=0.5 + 1e-9).contains(&r.negativity)));
            assert!(s
                .records
                .iter()
                .enumerate()
                .all(|(i, r)| r.sample_index == i as u64));
            assert!(s.std >= 0.0);
        }
        assert!(stats[1].mean < stats[0].mean);
    }

    #[test]
    fn ensemble_is_deterministic_across_thread_counts() {
        let cfg = ExperimentConfig::new(3, vec![0.0, 0.5], 64, 77).unwrap();
        let pool = |threads| {
            rayon::ThreadPoolBuilder::new()
                .num_threads(threads)
                .build()
                .unwrap()
                .install(|| run_ensemble::<f64>(&cfg).unwrap())
        };
        let (a, b) = (pool(1), pool(3));
        assert_eq!(a, b);
        for (x, y) in a.iter().zip(&b) {
            for (r, s) in x.records.iter().zip(&y.records) {
                assert_eq!(r.negativity.to_bits(), s.negativity.to_bits());
            }
        }
    }

    #[test]
    fn single_precision_ensemble_tracks_double() {
        let cfg = ExperimentConfig::new(3, vec![0.3], 40, 5).unwrap();
        let a = &run_ensemble::<f64>(&cfg).unwrap()[0];
        let b = &run_ensemble::<f32>(&cfg).unwrap()[0];
        for (r, s) in a.records.iter().zip(&b.records) {
            assert!((r.negativity - s.negativity).abs() < 1e-4);
        }
    }

    #[test]
    fn empirical_tail_edges() {
        let cfg = ExperimentConfig::new(3, vec![0.2], 200, 3).unwrap();
        let stats = &run_ensemble::<f64>(&cfg).unwrap()[0];
        assert_eq!(empirical_tail(stats, 10.0), 0.0);
        assert_eq!(empirical_tail_raw(stats, 10.0), 0.0);
        assert!(empirical_tail(stats, 1e-15) > 0.99);
        let tails: Vec<f64> = (1..20)
            .map(|k| empirical_tail(stats, k as f64 * 0.05))
            .collect();
        assert!(tails.windows(2).all(|w| w[1] <= w[0]));
    }

    #[test]
    fn log_std_fit_on_synthetic_data() {
        let exp_decay: Vec<_> = (2..=8).map(|n| synthetic(n, (-(n as f64)).exp())).collect();
        let fit = fit_log_std(&exp_decay).unwrap();
        assert_abs_diff_eq!(fit.slope, -1.0, epsilon = 1e-12);
        assert_abs_diff_eq!(fit.intercept, 0.0, epsilon = 1e-12);
        assert_abs_diff_eq!(fit.r_squared, 1.0, epsilon = 1e-12);
        let flat: Vec<_> = (2..=6).map(|n| synthetic(n, 0.1)).collect();
        assert_abs_diff_eq!(fit_log_std(&flat).unwrap().slope, 0.0, epsilon = 1e-15);
    }

    #[test]
    fn log_std_fit_rejects_degenerate_input() {
        let two: Vec<_> = (2..=3).map(|n| synthetic(n, 0.1)).collect();
        assert!(matches!(fit_log_std(&two), Err(Error::DegenerateData(_))));
        let zero: Vec<_> = (2..=5)
            .map(|n| synthetic(n, if n == 3 { 0.0 } else { 0.1 }))
            .collect();
        assert!(matches!(fit_log_std(&zero), Err(Error::DegenerateData(_))));
        assert!(fit_linear(&[(1.0, 0.0), (1.0, 1.0), (1.0, 2.0)]).is_err());
    }
}
