//! Output files: CSV tables, JSON reports and the run manifest.
//!
//! Every file is rendered in memory first and then written by a single
//! writer, so a failed run leaves no partial tables behind.

use std::fs;
use std::path::Path;

use anyhow::Context;
use entconc::concentration::SampleRecord;
use serde::{Deserialize, Serialize};

use crate::run::Plan;

pub const MANIFEST_FILE: &str = "manifest.json";

/// One row of the scaling table.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct SweepRow {
    #[serde(rename = "N")]
    pub n: usize,
    pub p: f64,
    pub mean: f64,
    pub std: f64,
    pub n_samples: usize,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct RunManifest {
    pub tool_version: String,
    #[serde(flatten)]
    pub plan: Plan,
    pub started_at: String,
    pub finished_at: String,
    pub output_paths: Vec<String>,
}

#[derive(Debug, Default)]
pub struct Outputs {
    files: Vec<(String, Vec<u8>)>,
}

impl Outputs {
    pub fn add(&mut self, name: impl Into<String>, bytes: impl Into<Vec<u8>>) {
        self.files.push((name.into(), bytes.into()));
    }

    pub fn names(&self) -> Vec<String> {
        self.files.iter().map(|(n, _)| n.clone()).collect()
    }

    /// Writes each file via a temporary name and rename.
    pub fn write_all(&self, dir: &Path) -> anyhow::Result<()> {
        fs::create_dir_all(dir).with_context(|| format!("creating {}", dir.display()))?;
        for (name, bytes) in &self.files {
            let path = dir.join(name);
            let tmp = dir.join(format!(".{name}.tmp"));
            fs::write(&tmp, bytes).with_context(|| format!("writing {}", tmp.display()))?;
            fs::rename(&tmp, &path).with_context(|| format!("renaming to {}", path.display()))?;
        }
        Ok(())
    }
}

fn csv_bytes<R: Serialize>(rows: impl IntoIterator<Item = R>) -> anyhow::Result<Vec<u8>> {
    let mut w = csv::WriterBuilder::new()
        .terminator(csv::Terminator::Any(b'\n'))
        .from_writer(Vec::new());
    for row in rows {
        w.serialize(row)?;
    }
    Ok(w.into_inner()
        .map_err(|e| anyhow::anyhow!("flushing csv: {e}"))?)
}

/// `sample_index,negativity,normalized_negativity`
pub fn records_csv(records: &[SampleRecord]) -> anyhow::Result<Vec<u8>> {
    csv_bytes(records)
}

/// `N,p,mean,std,n_samples`
pub fn sweep_csv(rows: &[SweepRow]) -> anyhow::Result<Vec<u8>> {
    csv_bytes(rows)
}

pub fn json_bytes<S: Serialize>(value: &S) -> anyhow::Result<Vec<u8>> {
    let mut bytes = serde_json::to_vec_pretty(value)?;
    bytes.push(b'\n');
    Ok(bytes)
}

/// Short, filename-safe rendering of a probability: `0.3`, `1`, `0.3935`.
pub fn p_label(p: f64) -> String {
    let s = format!("{p:.4}");
    let s = s.trim_end_matches('0').trim_end_matches('.');
    if s.is_empty() {
        "0".into()
    } else {
        s.to_string()
    }
}

pub fn now_rfc3339() -> String {
    chrono::Utc::now().to_rfc3339_opts(chrono::SecondsFormat::Millis, true)
}
