//! `entconc bound`: closed-form tail bound for negativity.

use clap::ValueEnum;
use entconc::concentration::{
    bound_inferred_variance, levy_bound, negativity_bound, negativity_bound_inputs,
};
use serde::Serialize;

use crate::{BoundArgs, PropertyFailure};

const CROSS_CHECK_TOL: f64 = 1e-12;

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum Format {
    Text,
    Csv,
}

#[derive(Debug, Serialize)]
pub struct BoundReport {
    pub d_a: usize,
    pub d_b: usize,
    pub epsilon: f64,
    pub eta_channel: f64,
    pub dim: f64,
    pub eta_e: f64,
    pub levy_constant: f64,
    pub exponent: f64,
    pub bound: f64,
    pub generic_bound: f64,
    pub vacuous: bool,
    pub inferred_variance: f64,
}

pub fn evaluate(
    d_a: usize,
    d_b: usize,
    epsilon: f64,
    eta_channel: f64,
) -> anyhow::Result<BoundReport> {
    let bound = negativity_bound(epsilon, d_a, d_b, eta_channel)?;
    let inputs = negativity_bound_inputs(epsilon, d_a, d_b, eta_channel)?;
    Ok(BoundReport {
        d_a,
        d_b,
        epsilon,
        eta_channel,
        dim: inputs.dim,
        eta_e: inputs.eta_e,
        levy_constant: inputs.c,
        exponent: inputs.exponent(),
        bound,
        generic_bound: levy_bound(&inputs)?,
        vacuous: bound > 1.0,
        inferred_variance: bound_inferred_variance(d_a, d_b, eta_channel)?,
    })
}

fn text(r: &BoundReport, cross_check: bool) -> String {
    let mut s = format!(
        "negativity tail bound for dA = {}, dB = {}, epsilon = {}, eta_channel = {}\n\
         \x20 equivalent parameters: d = {}, eta_E = {}, eta_channel = {}, C = {:.9}\n\
         \x20 exponent              = {:.6e}\n\
         \x20 bound                 = {:.6}{}\n\
         \x20 inferred variance     = {:.6e}\n",
        r.d_a,
        r.d_b,
        r.epsilon,
        r.eta_channel,
        r.dim,
        r.eta_e,
        r.eta_channel,
        r.levy_constant,
        r.exponent,
        r.bound,
        if r.vacuous { "  vacuous (>1)" } else { "" },
        r.inferred_variance,
    );
    if cross_check {
        s.push_str(&format!(
            "  generic form          = {:.6}  |difference| = {:.3e}\n",
            r.generic_bound,
            (r.bound - r.generic_bound).abs()
        ));
    }
    s
}

fn csv(r: &BoundReport) -> anyhow::Result<String> {
    let mut w = csv::WriterBuilder::new()
        .terminator(csv::Terminator::Any(b'\n'))
        .from_writer(Vec::new());
    w.serialize(r)?;
    let bytes = w
        .into_inner()
        .map_err(|e| anyhow::anyhow!("flushing csv: {e}"))?;
    Ok(String::from_utf8(bytes)?)
}

pub fn run(a: &BoundArgs) -> anyhow::Result<()> {
    let report = evaluate(a.d_a, a.d_b, a.epsilon, a.eta_channel)?;
    match a.format {
        Format::Text => print!("{}", text(&report, a.cross_check)),
        Format::Csv => print!("{}", csv(&report)?),
    }
    let diff = (report.bound - report.generic_bound).abs();
    if a.cross_check && !(diff <= CROSS_CHECK_TOL) {
        return Err(PropertyFailure(format!(
            "cross-check failed: {} vs {} (difference {diff:e})",
            report.bound, report.generic_bound
        ))
        .into());
    }
    Ok(())
}
