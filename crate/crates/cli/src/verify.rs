//! `entconc verify`: randomized property suites with reproducible seeds.
//!
//! Trial `i` of every property draws from stream `(seed, i)`.

use clap::ValueEnum;
use entconc::channels::{estimate_contraction, Channel, LocalChannels, QuantumChannel};
use entconc::entanglement::{
    check_entanglement_difference_chain, negativity, BipartiteSplit, Negativity,
};
use entconc::states::{sample_haar_pure, trace_distance, RngStream};
use entconc::stats::{ks_critical_1pct, ks_statistic};

use crate::{PropertyFailure, UsageError, VerifyArgs};

const SLACK: f64 = 1e-9;

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum Suite {
    Contraction,
    Lipschitz,
    Chain,
    Haar,
    All,
}

impl Suite {
    fn flag(self) -> &'static str {
        match self {
            Suite::Contraction => "contraction",
            Suite::Lipschitz => "lipschitz",
            Suite::Chain => "chain",
            Suite::Haar => "haar",
            Suite::All => "all",
        }
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct PropertyResult {
    pub suite: Suite,
    pub name: String,
    pub trials: usize,
    /// Smallest `rhs - lhs` observed; negative beyond the tolerance means failure.
    pub worst_slack: f64,
    pub worst_trial: u64,
    pub passed: bool,
}

/// Tracks the worst slack over trials.
struct Tracker {
    worst_slack: f64,
    worst_trial: u64,
}

impl Tracker {
    fn new() -> Self {
        Self {
            worst_slack: f64::INFINITY,
            worst_trial: 0,
        }
    }

    fn record(&mut self, trial: u64, slack: f64) {
        if slack < self.worst_slack {
            self.worst_slack = slack;
            self.worst_trial = trial;
        }
    }

    fn finish(self, suite: Suite, name: String, trials: usize) -> PropertyResult {
        PropertyResult {
            suite,
            name,
            trials,
            worst_slack: self.worst_slack,
            worst_trial: self.worst_trial,
            passed: self.worst_slack >= -SLACK,
        }
    }
}

fn register(qubits: usize) -> anyhow::Result<()> {
    if !(1..=8).contains(&qubits) {
        return Err(UsageError(format!("--qubits {qubits} outside 1..=8")).into());
    }
    Ok(())
}

pub fn contraction(trials: usize, seed: u64, qubits: usize) -> anyhow::Result<Vec<PropertyResult>> {
    register(qubits)?;
    let mut cases: Vec<(String, QuantumChannel<f64>)> = [0.2, 0.5, 0.9]
        .into_iter()
        .map(|p| {
            Ok((
                format!("dephasing({p})"),
                QuantumChannel::dephasing_qubit(p)?,
            ))
        })
        .collect::<anyhow::Result<_>>()?;
    cases.push((
        "amplitude-damping(0.5)".into(),
        QuantumChannel::amplitude_damping(0.5)?,
    ));
    cases.push((
        "depolarizing(0.5)".into(),
        QuantumChannel::depolarizing(0.5)?,
    ));
    cases
        .into_iter()
        .map(|(label, qubit)| {
            let channel = LocalChannels::uniform(qubit, qubits)?;
            let est = estimate_contraction::<f64, _>(&channel, trials, seed)?;
            let mut t = Tracker::new();
            t.record(est.argmax_pair, 1.0 - est.max_ratio);
            Ok(t.finish(
                Suite::Contraction,
                format!("trace distance contracts under {label}^{qubits}"),
                trials,
            ))
        })
        .collect()
}

pub fn lipschitz(trials: usize, seed: u64, qubits: usize) -> anyhow::Result<Vec<PropertyResult>> {
    register(qubits)?;
    let qubits = qubits.max(2);
    let split = BipartiteSplit::one_vs_rest(qubits)?;
    let eta = split.dim_a() as f64 / 2.0;
    let dim = 1usize << qubits;
    let mut results = Vec::new();
    for evolved in [false, true] {
        let mut t = Tracker::new();
        for i in 0..trials as u64 {
            let mut rng = RngStream::new(seed, i);
            let mut rho = sample_haar_pure::<f64>(dim, &mut rng)?.projector();
            let mut omega = sample_haar_pure::<f64>(dim, &mut rng)?.projector();
            if evolved {
                let ch = LocalChannels::dephasing((i % 10) as f64 / 10.0, qubits)?;
                rho = ch.apply(&rho)?;
                omega = ch.apply(&omega)?;
            }
            let lhs = (negativity(&rho, &split)? - negativity(&omega, &split)?).abs();
            t.record(i, eta * trace_distance(&rho, &omega)? - lhs);
        }
        let kind = if evolved { "dephased" } else { "pure" };
        results.push(t.finish(
            Suite::Lipschitz,
            format!("negativity is (dA/2)-Lipschitz on {kind} pairs, N = {qubits}"),
            trials,
        ));
    }
    Ok(results)
}

pub fn chain(trials: usize, seed: u64, qubits: usize) -> anyhow::Result<Vec<PropertyResult>> {
    register(qubits)?;
    let qubits = qubits.max(2);
    let channel = LocalChannels::dephasing(0.3, qubits)?;
    let measure = Negativity {
        split: BipartiteSplit::one_vs_rest(qubits)?,
    };
    let mut steps = [Tracker::new(), Tracker::new(), Tracker::new()];
    for i in 0..trials as u64 {
        let mut rng = RngStream::new(seed, i);
        let chi = sample_haar_pure::<f64>(channel.dim(), &mut rng)?;
        let psi = sample_haar_pure::<f64>(channel.dim(), &mut rng)?;
        let r = check_entanglement_difference_chain(&chi, &psi, &channel, &measure)?;
        steps[0].record(i, r.evolved_distance_bound - r.entanglement_difference);
        steps[1].record(i, r.initial_distance_bound - r.evolved_distance_bound);
        steps[2].record(i, r.euclidean_bound - r.initial_distance_bound);
    }
    let names = [
        "entanglement difference <= eta_E * evolved trace distance",
        "evolved trace distance <= initial trace distance",
        "initial trace distance <= 2 * Euclidean distance",
    ];
    Ok(steps
        .into_iter()
        .zip(names)
        .map(|(t, name)| {
            t.finish(
                Suite::Chain,
                format!("{name}, dephasing(0.3)^{qubits}"),
                trials,
            )
        })
        .collect())
}

pub fn haar(trials: usize, seed: u64, dim: usize) -> anyhow::Result<Vec<PropertyResult>> {
    if dim < 2 {
        return Err(UsageError(format!("--dim {dim} must be at least 2")).into());
    }
    let overlaps = (0..trials as u64)
        .map(|i| {
            Ok(
                sample_haar_pure::<f64>(dim, &mut RngStream::new(seed, i))?.amplitudes()[0]
                    .norm_sqr(),
            )
        })
        .collect::<anyhow::Result<Vec<f64>>>()?;
    let stat = ks_statistic(&overlaps, |x| {
        1.0 - (1.0 - x.clamp(0.0, 1.0)).powi(dim as i32 - 1)
    });
    let mut t = Tracker::new();
    t.record(0, ks_critical_1pct(trials) - stat);
    let mut result = t.finish(
        Suite::Haar,
        format!("overlap distribution matches 1-(1-x)^(d-1), d = {dim} (KS = {stat:.5})"),
        trials,
    );
    result.passed = result.worst_slack > 0.0;
    Ok(vec![result])
}

pub fn run(a: &VerifyArgs) -> anyhow::Result<()> {
    if a.trials == 0 {
        return Err(UsageError("--trials must be positive".into()).into());
    }
    let suites = match a.suite {
        Suite::All => vec![
            Suite::Contraction,
            Suite::Lipschitz,
            Suite::Chain,
            Suite::Haar,
        ],
        s => vec![s],
    };
    let mut results = Vec::new();
    for suite in suites {
        results.extend(match suite {
            Suite::Contraction => contraction(a.trials, a.seed, a.qubits)?,
            Suite::Lipschitz => lipschitz(a.trials, a.seed, a.qubits)?,
            Suite::Chain => chain(a.trials, a.seed, a.qubits)?,
            Suite::Haar => haar(a.trials, a.seed, a.dim)?,
            Suite::All => unreachable!(),
        });
    }
    let mut failed = Vec::new();
    for r in &results {
        println!(
            "{} [{}] {} (trials {}, worst slack {:.3e} at trial {})",
            if r.passed { "PASS" } else { "FAIL" },
            r.suite.flag(),
            r.name,
            r.trials,
            r.worst_slack,
            r.worst_trial
        );
        if !r.passed {
            failed.push(r);
        }
    }
    if let Some(first) = failed.first() {
        let repro = format!(
            "entconc verify --suite {} --trials {} --seed {} --qubits {} --dim {}",
            first.suite.flag(),
            a.trials,
            a.seed,
            a.qubits,
            a.dim
        );
        println!("reproduce with: {repro}");
        return Err(PropertyFailure(format!(
            "{} of {} properties failed; first at trial {} (seed {}, stream {})",
            failed.len(),
            results.len(),
            first.worst_trial,
            a.seed,
            first.worst_trial
        ))
        .into());
    }
    Ok(())
}
