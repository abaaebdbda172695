use alloc::string::String;
use alloc::vec::Vec;

use super::{dtw_distance, FeatureSeries};
use crate::error::{Error, Result};
use crate::keypoints::{ExerciseKind, Label};

#[derive(Debug, Clone, PartialEq)]
pub struct LabeledEntry {
    pub series: FeatureSeries,
    pub label: Label,
    pub source_id: String,
}

/// Reference sequences of one exercise.
#[derive(Debug, Clone, PartialEq)]
pub struct LabeledDataset {
    exercise: ExerciseKind,
    entries: Vec<LabeledEntry>,
}

impl LabeledDataset {
    pub fn new(exercise: ExerciseKind) -> LabeledDataset {
        LabeledDataset {
            exercise,
            entries: Vec::new(),
        }
    }

    pub fn from_entries(exercise: ExerciseKind, entries: Vec<LabeledEntry>) -> Result<LabeledDataset> {
        let mut data = LabeledDataset::new(exercise);
        for entry in entries {
            data.push(entry)?;
        }
        Ok(data)
    }

    pub fn push(&mut self, entry: LabeledEntry) -> Result<()> {
        if entry.series.exercise() != self.exercise {
            return Err(Error::ExerciseMismatch {
                expected: self.exercise,
                found: entry.series.exercise(),
            });
        }
        self.entries.push(entry);
        Ok(())
    }

    pub fn exercise(&self) -> ExerciseKind {
        self.exercise
    }

    pub fn entries(&self) -> &[LabeledEntry] {
        &self.entries
    }

    pub fn len(&self) -> usize {
        self.entries.len()
    }

    pub fn is_empty(&self) -> bool {
        self.entries.is_empty()
    }

    pub fn count(&self, label: Label) -> usize {
        self.entries.iter().filter(|e| e.label == label).count()
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct Prediction {
    pub label: Label,
    pub distance: f64,
    pub nearest_source_id: String,
}

/// 1-nearest-neighbour by DTW distance.
///
/// The first minimum in training order wins, except that an exact tie with
/// an `incorrect` entry always resolves to `incorrect`.
pub fn classify(query: &FeatureSeries, train: &LabeledDataset) -> Result<Prediction> {
    classify_entries(query, train.exercise(), train.entries().iter())
}

pub(crate) fn classify_entries<'a>(
    query: &FeatureSeries,
    exercise: ExerciseKind,
    entries: impl Iterator<Item = &'a LabeledEntry>,
) -> Result<Prediction> {
    if query.exercise() != exercise {
        return Err(Error::ExerciseMismatch {
            expected: exercise,
            found: query.exercise(),
        });
    }
    let mut best: Option<(f64, &LabeledEntry)> = None;
    for entry in entries {
        let d = dtw_distance(query, &entry.series)?;
        let better = match best {
            None => true,
            Some((best_d, best_entry)) => {
                d < best_d || (d == best_d && best_entry.label == Label::Correct && entry.label == Label::Incorrect)
            }
        };
        if better {
            best = Some((d, entry));
        }
    }
    let (distance, entry) = best.ok_or(Error::EmptyDataset)?;
    Ok(Prediction {
        label: entry.label,
        distance,
        nearest_source_id: entry.source_id.clone(),
    })
}
