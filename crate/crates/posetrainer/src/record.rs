//! Evaluation and metrics records, and per-series plot data.

use std::fmt::Write as _;
use std::path::{Path, PathBuf};

use posetrainer_core::classifier::SplitOutcome;
use posetrainer_core::heuristics::Evaluation;
use posetrainer_core::ExerciseKind;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::store::check_version;

pub const RECORD_SCHEMA_VERSION: u64 = 1;

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct EvaluationRecord {
    pub schema_version: u64,
    pub source_id: String,
    pub evaluation: Evaluation,
}

impl EvaluationRecord {
    pub fn new(source_id: &str, evaluation: Evaluation) -> EvaluationRecord {
        EvaluationRecord {
            schema_version: RECORD_SCHEMA_VERSION,
            source_id: source_id.into(),
            evaluation,
        }
    }

    pub fn to_json(&self) -> Result<String> {
        to_json(self)
    }

    pub fn from_json(text: &str) -> Result<EvaluationRecord> {
        from_json(text)
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct MetricsRecord {
    pub schema_version: u64,
    pub exercise: ExerciseKind,
    pub outcome: SplitOutcome,
}

impl MetricsRecord {
    pub fn new(exercise: ExerciseKind, outcome: SplitOutcome) -> MetricsRecord {
        MetricsRecord {
            schema_version: RECORD_SCHEMA_VERSION,
            exercise,
            outcome,
        }
    }

    pub fn to_json(&self) -> Result<String> {
        to_json(self)
    }

    pub fn from_json(text: &str) -> Result<MetricsRecord> {
        from_json(text)
    }
}

fn to_json<T: Serialize>(value: &T) -> Result<String> {
    let mut text = serde_json::to_string_pretty(value).map_err(|e| Error::Parse(e.to_string()))?;
    text.push('\n');
    Ok(text)
}

fn from_json<T: for<'de> Deserialize<'de>>(text: &str) -> Result<T> {
    check_version(text, RECORD_SCHEMA_VERSION)?;
    serde_json::from_str(text).map_err(|e| Error::Parse(e.to_string()))
}

pub(crate) fn write_file(path: &Path, text: &str) -> Result<()> {
    std::fs::write(path, text).map_err(Error::io(path))
}

/// `frame,value` rows with values rounded to 6 decimals.
pub fn plot_csv(values: &[f64]) -> String {
    let mut out = String::from("frame,value\n");
    for (i, v) in values.iter().enumerate() {
        let _ = writeln!(out, "{i},{v:.6}");
    }
    out
}

/// Writes one CSV per dumped series into `dir`, returning the paths in name
/// order.
pub fn write_plots(dir: &Path, evaluation: &Evaluation) -> Result<Vec<PathBuf>> {
    std::fs::create_dir_all(dir).map_err(Error::io(dir))?;
    let mut written = Vec::with_capacity(evaluation.series_dump.len());
    for (name, series) in &evaluation.series_dump {
        let path = dir.join(format!("{}.csv", file_safe(name)));
        write_file(&path, &plot_csv(series.values()))?;
        written.push(path);
    }
    Ok(written)
}

pub(crate) fn file_safe(name: &str) -> String {
    name.chars()
        .map(|c| if c.is_ascii_alphanumeric() || matches!(c, '_' | '-' | '.') { c } else { '_' })
        .collect()
}
