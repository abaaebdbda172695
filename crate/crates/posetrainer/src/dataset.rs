//! Labelled training sets: manifests, file-name labels and the dataset index
//! written by `train`.

use std::collections::BTreeMap;
use std::path::{Path, PathBuf};

use posetrainer_core::classifier::{featurize_with, FeatureConfig, FeatureSeries, LabeledDataset, LabeledEntry};
use posetrainer_core::geometry::prepare;
use posetrainer_core::{ExerciseKind, Label, PoseSequence};
use serde::{Deserialize, Serialize};
use sha2::{Digest, Sha256};

use crate::error::{Error, Result};
use crate::openpose::load_folder;
use crate::record::write_file;
use crate::store::{check_version, load_saved};

pub const INDEX_FILE: &str = "dataset_index.json";
pub const INDEX_SCHEMA_VERSION: u64 = 1;

/// `good` or `bad` as a separate word of the file name, e.g.
/// `shrug_good_3.json` or `bad-curl-02`.
pub fn infer_label(name: &str) -> Option<Label> {
    let mut found = None;
    for word in name.split(|c: char| !c.is_ascii_alphanumeric()) {
        let label = match word.to_ascii_lowercase().as_str() {
            "good" => Label::Correct,
            "bad" => Label::Incorrect,
            _ => continue,
        };
        if found.is_some_and(|f| f != label) {
            return None;
        }
        found = Some(label);
    }
    found
}

/// Parses `path,label,exercise` lines. Relative paths are taken from `base`;
/// entries for other exercises are skipped.
pub fn parse_manifest(text: &str, base: &Path, exercise: ExerciseKind) -> Result<Vec<(PathBuf, Label)>> {
    let mut out = Vec::new();
    for (n, raw) in text.lines().enumerate() {
        let line = raw.split('#').next().unwrap_or("").trim();
        if line.is_empty() {
            continue;
        }
        let err = |message: String| Error::Manifest { line: n + 1, message };
        let fields: Vec<&str> = line.split(',').map(str::trim).collect();
        let [path, label, kind] = fields[..] else {
            return Err(err(format!("expected `path,label,exercise`, got {line:?}")));
        };
        let label: Label = label.parse().map_err(|e: posetrainer_core::Error| err(e.to_string()))?;
        let kind: ExerciseKind = kind.parse().map_err(|e: posetrainer_core::Error| err(e.to_string()))?;
        if kind == exercise {
            out.push((base.join(path), label));
        }
    }
    Ok(out)
}

pub fn load_manifest(path: &Path, exercise: ExerciseKind) -> Result<Vec<(PathBuf, Label)>> {
    let text = std::fs::read_to_string(path).map_err(Error::io(path))?;
    let base = path.parent().unwrap_or(Path::new("."));
    parse_manifest(&text, base, exercise).map_err(|e| e.in_file(path))
}

/// Sequences directly inside `folder`: saved `.json` sequence files and
/// frame-file subdirectories, in name order, with labels taken from their
/// names. Unlabelled ones come back as `None`.
pub fn discover(folder: &Path) -> Result<Vec<(PathBuf, Option<Label>)>> {
    let read = std::fs::read_dir(folder).map_err(Error::io(folder))?;
    let mut found = Vec::new();
    for entry in read {
        let path = entry.map_err(Error::io(folder))?.path();
        let is_saved = path.is_file() && path.extension().is_some_and(|e| e == "json");
        if path.is_dir() || is_saved {
            let name = path.file_stem().map(|s| s.to_string_lossy().into_owned()).unwrap_or_default();
            found.push((path, infer_label(&name)));
        }
    }
    found.sort_by(|a, b| a.0.file_name().cmp(&b.0.file_name()));
    Ok(found)
}

/// Merges folder and manifest candidates. Manifest labels win for paths
/// listed in both; unlabelled folder entries are skipped with a warning.
pub fn merge_candidates(folder: Vec<(PathBuf, Option<Label>)>, manifest: Vec<(PathBuf, Label)>) -> Vec<(PathBuf, Label)> {
    let key = |p: &Path| p.canonicalize().unwrap_or_else(|_| p.to_path_buf());
    let listed: BTreeMap<PathBuf, Label> = manifest.iter().map(|(p, l)| (key(p), *l)).collect();
    let mut out = Vec::new();
    for (path, label) in folder {
        if listed.contains_key(&key(&path)) {
            continue;
        }
        match label {
            Some(label) => out.push((path, label)),
            None => log::warn!("{}: no good/bad in the name and not in the manifest, skipped", path.display()),
        }
    }
    out.extend(manifest);
    out
}

/// A directory of frame files or a saved sequence file.
pub fn load_input(path: &Path, frame_glob: &str) -> Result<PoseSequence> {
    if path.is_dir() {
        Ok(load_folder(path, frame_glob)?.sequence)
    } else if path.is_file() {
        load_saved(path)
    } else {
        Err(Error::InFile {
            path: path.to_path_buf(),
            message: "no such file or directory".into(),
        })
    }
}

pub fn features_for(seq: &PoseSequence, exercise: ExerciseKind, cfg: &FeatureConfig) -> Result<FeatureSeries> {
    Ok(featurize_with(&prepare(seq, exercise)?, exercise, cfg)?)
}

/// SHA-256 of the feature configuration's text form.
pub fn feature_config_hash(cfg: &FeatureConfig, exercise: ExerciseKind) -> String {
    hex::encode(Sha256::digest(cfg.describe(exercise).as_bytes()))
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct IndexEntry {
    pub path: PathBuf,
    pub label: Label,
    pub source_id: String,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct DatasetIndex {
    pub schema_version: u64,
    pub exercise: ExerciseKind,
    pub feature_config_hash: String,
    pub entries: Vec<IndexEntry>,
}

impl DatasetIndex {
    /// Loads and featurizes every candidate, failing on the first sequence
    /// that cannot be used.
    pub fn build(
        candidates: &[(PathBuf, Label)],
        exercise: ExerciseKind,
        cfg: &FeatureConfig,
        frame_glob: &str,
    ) -> Result<(DatasetIndex, LabeledDataset)> {
        if candidates.is_empty() {
            return Err(posetrainer_core::Error::EmptyDataset.into());
        }
        let mut entries = Vec::with_capacity(candidates.len());
        let mut data = LabeledDataset::new(exercise);
        for (path, label) in candidates {
            let seq = load_input(path, frame_glob)?;
            let series = features_for(&seq, exercise, cfg).map_err(|e| e.in_file(path))?;
            let path = path.canonicalize().map_err(Error::io(path))?;
            data.push(LabeledEntry {
                series,
                label: *label,
                source_id: seq.source_id().into(),
            })?;
            entries.push(IndexEntry {
                path,
                label: *label,
                source_id: seq.source_id().into(),
            });
        }
        let index = DatasetIndex {
            schema_version: INDEX_SCHEMA_VERSION,
            exercise,
            feature_config_hash: feature_config_hash(cfg, exercise),
            entries,
        };
        Ok((index, data))
    }

    pub fn count(&self, label: Label) -> usize {
        self.entries.iter().filter(|e| e.label == label).count()
    }

    pub fn save(&self, dir: &Path) -> Result<PathBuf> {
        std::fs::create_dir_all(dir).map_err(Error::io(dir))?;
        let path = dir.join(INDEX_FILE);
        let mut text = serde_json::to_string_pretty(self).map_err(|e| Error::Parse(e.to_string()))?;
        text.push('\n');
        write_file(&path, &text)?;
        Ok(path)
    }

    pub fn load(dir: &Path) -> Result<DatasetIndex> {
        let path = dir.join(INDEX_FILE);
        let text = std::fs::read_to_string(&path).map_err(Error::io(&path))?;
        check_version(&text, INDEX_SCHEMA_VERSION).map_err(|e| e.in_file(&path))?;
        serde_json::from_str(&text).map_err(|e| Error::Parse(e.to_string()).in_file(&path))
    }

    /// Fails if the index was built for another exercise or with another
    /// feature configuration.
    pub fn check(&self, exercise: ExerciseKind, cfg: &FeatureConfig) -> Result<()> {
        if self.exercise != exercise {
            return Err(posetrainer_core::Error::ExerciseMismatch {
                expected: self.exercise,
                found: exercise,
            }
            .into());
        }
        let current = feature_config_hash(cfg, exercise);
        if current != self.feature_config_hash {
            return Err(Error::StaleIndex {
                indexed: self.feature_config_hash.clone(),
                current,
            });
        }
        Ok(())
    }

    /// Reloads and featurizes the indexed sequences.
    pub fn load_dataset(&self, cfg: &FeatureConfig, frame_glob: &str) -> Result<LabeledDataset> {
        let mut data = LabeledDataset::new(self.exercise);
        for entry in &self.entries {
            let seq = load_input(&entry.path, frame_glob)?;
            let series = features_for(&seq, self.exercise, cfg).map_err(|e| e.in_file(&entry.path))?;
            data.push(LabeledEntry {
                series,
                label: entry.label,
                source_id: entry.source_id.clone(),
            })?;
        }
        Ok(data)
    }
}
