use alloc::format;
use alloc::string::String;
use alloc::vec::Vec;
use core::fmt;

use rand::seq::SliceRandom;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

use super::nearest::classify_entries;
use super::LabeledDataset;
use crate::error::{Error, Result};
use crate::keypoints::Label;

/// Precision, recall and F1 for one class.
#[derive(Debug, Clone, Copy, PartialEq, Default)]
#[cfg_attr(feature = "serde", derive(serde::Serialize, serde::Deserialize))]
pub struct ClassMetrics {
    pub precision: f64,
    pub recall: f64,
    pub f1: f64,
    pub support: usize,
}

impl ClassMetrics {
    /// Undefined ratios (zero denominators) are reported as 0.
    pub fn from_counts(tp: usize, fp: usize, fn_: usize) -> ClassMetrics {
        let ratio = |num: usize, den: usize| if den == 0 { 0.0 } else { num as f64 / den as f64 };
        let precision = ratio(tp, tp + fp);
        let recall = ratio(tp, tp + fn_);
        let f1 = if precision + recall > 0.0 {
            2.0 * precision * recall / (precision + recall)
        } else {
            0.0
        };
        ClassMetrics {
            precision,
            recall,
            f1,
            support: tp + fn_,
        }
    }
}

/// Per-class metrics plus the support-weighted average.
#[derive(Debug, Clone, Copy, PartialEq)]
#[cfg_attr(feature = "serde", derive(serde::Serialize, serde::Deserialize))]
pub struct SplitMetrics {
    pub correct: ClassMetrics,
    pub incorrect: ClassMetrics,
    pub weighted: ClassMetrics,
}

impl SplitMetrics {
    /// Builds metrics from `(truth, predicted)` pairs.
    pub fn from_pairs(pairs: &[(Label, Label)]) -> SplitMetrics {
        let per_class = |label: Label| {
            let tp = pairs.iter().filter(|(t, p)| *t == label && *p == label).count();
            let fp = pairs.iter().filter(|(t, p)| *t != label && *p == label).count();
            let fn_ = pairs.iter().filter(|(t, p)| *t == label && *p != label).count();
            ClassMetrics::from_counts(tp, fp, fn_)
        };
        let correct = per_class(Label::Correct);
        let incorrect = per_class(Label::Incorrect);
        let total = correct.support + incorrect.support;
        let weighted = if total == 0 {
            ClassMetrics::default()
        } else {
            let w = |f: fn(&ClassMetrics) -> f64| {
                (f(&correct) * correct.support as f64 + f(&incorrect) * incorrect.support as f64) / total as f64
            };
            ClassMetrics {
                precision: w(|m| m.precision),
                recall: w(|m| m.recall),
                f1: w(|m| m.f1),
                support: total,
            }
        };
        SplitMetrics {
            correct,
            incorrect,
            weighted,
        }
    }
}

impl fmt::Display for SplitMetrics {
    /// Table with rows Correct, Incorrect, Avg/Total.
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        writeln!(f, "{:<12}{:>10}{:>10}{:>10}{:>10}", "", "Precision", "Recall", "F1 Score", "Examples")?;
        for (name, m) in [("Correct", &self.correct), ("Incorrect", &self.incorrect), ("Avg/Total", &self.weighted)] {
            writeln!(
                f,
                "{:<12}{:>10.2}{:>10.2}{:>10.2}{:>10}",
                name, m.precision, m.recall, m.f1, m.support
            )?;
        }
        Ok(())
    }
}

#[derive(Debug, Clone, PartialEq)]
#[cfg_attr(feature = "serde", derive(serde::Serialize, serde::Deserialize))]
pub struct TestPrediction {
    pub source_id: String,
    pub truth: Label,
    pub predicted: Label,
    pub distance: f64,
    pub nearest_source_id: String,
}

#[derive(Debug, Clone, PartialEq)]
#[cfg_attr(feature = "serde", derive(serde::Serialize, serde::Deserialize))]
pub struct SplitOutcome {
    pub seed: u64,
    pub train_fraction: f64,
    pub train_ids: Vec<String>,
    pub predictions: Vec<TestPrediction>,
    pub metrics: SplitMetrics,
}

/// Seeded stratified train/test split followed by 1-NN classification of
/// every test entry.
///
/// Each label group is shuffled independently and contributes
/// `floor(len * train_fraction)` entries to training. Training and test
/// entries keep dataset order.
pub fn evaluate_split(data: &LabeledDataset, seed: u64, train_fraction: f64) -> Result<SplitOutcome> {
    if !(train_fraction > 0.0 && train_fraction < 1.0) {
        return Err(Error::Split(format!("train fraction {train_fraction} outside (0, 1)")));
    }
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut in_train = alloc::vec![false; data.len()];
    for label in [Label::Correct, Label::Incorrect] {
        let mut group: Vec<usize> = data
            .entries()
            .iter()
            .enumerate()
            .filter(|(_, e)| e.label == label)
            .map(|(i, _)| i)
            .collect();
        group.shuffle(&mut rng);
        let take = libm::floor(group.len() as f64 * train_fraction + 1e-9) as usize;
        if take == 0 {
            return Err(Error::Split(format!("no {label} examples in the training portion")));
        }
        for &i in &group[..take] {
            in_train[i] = true;
        }
    }
    if in_train.iter().all(|&t| t) {
        return Err(Error::Split("test portion is empty".into()));
    }

    let (train, test): (Vec<_>, Vec<_>) = data
        .entries()
        .iter()
        .zip(&in_train)
        .partition(|(_, &t)| t);
    let train: Vec<_> = train.into_iter().map(|(e, _)| e).collect();

    let mut predictions = Vec::with_capacity(test.len());
    for (entry, _) in test {
        let p = classify_entries(&entry.series, data.exercise(), train.iter().copied())?;
        predictions.push(TestPrediction {
            source_id: entry.source_id.clone(),
            truth: entry.label,
            predicted: p.label,
            distance: p.distance,
            nearest_source_id: p.nearest_source_id,
        });
    }
    let pairs: Vec<(Label, Label)> = predictions.iter().map(|p| (p.truth, p.predicted)).collect();
    Ok(SplitOutcome {
        seed,
        train_fraction,
        train_ids: train.iter().map(|e| e.source_id.clone()).collect(),
        metrics: SplitMetrics::from_pairs(&pairs),
        predictions,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::classifier::{FeatureSeries, LabeledEntry};
    use crate::keypoints::ExerciseKind;
    use alloc::string::ToString;

    fn close(a: f64, b: f64) -> bool {
        (a - b).abs() < 1e-9
    }

    #[test]
    fn counts_to_metrics() {
        let m = ClassMetrics::from_counts(2, 1, 0);
        assert!(close(m.precision, 2.0 / 3.0));
        assert!(close(m.recall, 1.0));
        assert!(close(m.f1, 0.8));
        assert_eq!(ClassMetrics::from_counts(0, 0, 0), ClassMetrics::default());
    }

    #[test]
    fn perfect_predictions_on_twelve() {
        let pairs: Vec<_> = (0..12)
            .map(|i| if i % 2 == 0 { (Label::Correct, Label::Correct) } else { (Label::Incorrect, Label::Incorrect) })
            .collect();
        let m = SplitMetrics::from_pairs(&pairs);
        assert_eq!(m.weighted, ClassMetrics { precision: 1.0, recall: 1.0, f1: 1.0, support: 12 });
        let table = m.to_string();
        assert!(table.lines().last().unwrap().starts_with("Avg/Total"));
        assert!(table.lines().last().unwrap().ends_with("1.00      1.00      1.00        12"));
    }

    #[test]
    fn reproduces_bicep_table_row() {
        // 4 correct (all recalled), 3 incorrect of which one predicted correct
        let pairs = [
            (Label::Correct, Label::Correct),
            (Label::Correct, Label::Correct),
            (Label::Correct, Label::Correct),
            (Label::Correct, Label::Correct),
            (Label::Incorrect, Label::Incorrect),
            (Label::Incorrect, Label::Incorrect),
            (Label::Incorrect, Label::Correct),
        ];
        let m = SplitMetrics::from_pairs(&pairs);
        let rounded = |v: f64| libm::round(v * 100.0) / 100.0;
        assert_eq!((rounded(m.correct.precision), rounded(m.correct.recall), rounded(m.correct.f1)), (0.8, 1.0, 0.89));
        assert_eq!((rounded(m.incorrect.precision), rounded(m.incorrect.recall), rounded(m.incorrect.f1)), (1.0, 0.67, 0.8));
        assert_eq!((rounded(m.weighted.precision), rounded(m.weighted.recall), rounded(m.weighted.f1)), (0.89, 0.86, 0.85));
    }

    #[test]
    fn single_class_test_set() {
        let m = SplitMetrics::from_pairs(&[(Label::Correct, Label::Correct), (Label::Correct, Label::Correct)]);
        assert_eq!(m.incorrect.support, 0);
        assert_eq!(m.weighted, m.correct);
    }

    fn data(labels: &[Label]) -> LabeledDataset {
        let entries = labels
            .iter()
            .enumerate()
            .map(|(i, &label)| LabeledEntry {
                series: FeatureSeries::from_flat(
                    alloc::vec![if label == Label::Correct { 0.0 } else { 10.0 } + i as f64 * 0.01; 3],
                    1,
                    ExerciseKind::BicepCurl,
                )
                .unwrap(),
                label,
                source_id: i.to_string(),
            })
            .collect();
        LabeledDataset::from_entries(ExerciseKind::BicepCurl, entries).unwrap()
    }

    #[test]
    fn split_is_reproducible_and_stratified() {
        let labels: Vec<Label> = (0..20).map(|i| if i < 10 { Label::Correct } else { Label::Incorrect }).collect();
        let d = data(&labels);
        let a = evaluate_split(&d, 7, 0.6).unwrap();
        let b = evaluate_split(&d, 7, 0.6).unwrap();
        assert_eq!(a, b);
        assert_eq!(a.train_ids.len(), 12);
        assert_eq!(a.predictions.len(), 8);
        assert_eq!(a.metrics.weighted.f1, 1.0);
        let c = evaluate_split(&d, 8, 0.6).unwrap();
        assert_ne!(a.train_ids, c.train_ids);
    }

    #[test]
    fn degenerate_splits() {
        let d = data(&[Label::Correct, Label::Incorrect, Label::Incorrect, Label::Incorrect]);
        assert!(matches!(evaluate_split(&d, 0, 0.99), Err(Error::Split(_))));
        let d = data(&[Label::Correct, Label::Incorrect]);
        assert!(matches!(evaluate_split(&d, 0, 0.99), Err(Error::Split(_))));
        let d = data(&[Label::Correct, Label::Correct]);
        assert!(matches!(evaluate_split(&d, 0, 0.5), Err(Error::Split(_))));
        assert!(matches!(evaluate_split(&d, 0, 1.0), Err(Error::Split(_))));
    }
}
