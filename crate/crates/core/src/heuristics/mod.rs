//! Per-exercise geometric form checks.
//!
//! Each evaluator turns a [`NormalizedSequence`] into smoothed per-frame
//! series, reduces them to one statistic per rule, and compares the statistic
//! with a threshold from [`ThresholdConfig`]. The verdict is correct only when
//! every rule passes.

mod config;
mod exercises;

pub use config::{
    BicepCurlThresholds, FrontRaiseThresholds, ShoulderPressThresholds, ShoulderShrugThresholds,
    ThresholdConfig,
};
pub use exercises::{
    evaluate_bicep_curl, evaluate_front_raise, evaluate_shoulder_press, evaluate_shoulder_shrug,
};

use alloc::collections::BTreeMap;
use alloc::format;
use alloc::string::String;
use alloc::vec::Vec;
use core::fmt;

use crate::error::Result;
use crate::geometry::{prepare, NormalizedSequence, Series};
use crate::keypoints::{ExerciseKind, PoseSequence, Side};

pub mod feedback {
    pub const BICEP_SUCCESS: &str = "Exercise performed correctly! Weight was lifted fully up, and upper arm did not move significantly.";
    pub const BICEP_UPPER_ARM: &str = "Your upper arm shows significant rotation around the shoulder when curling. Try holding your upper arm still, parallel to your chest, and concentrate on rotating around your elbow only.";
    pub const BICEP_NOT_CURLED: &str = "You are not curling the weight all the way to the top, up to your shoulders. Try to curl your arm completely so that your forearm is parallel with your torso. It may help to use lighter weight.";

    pub const FRONT_RAISE_SUCCESS: &str = "Exercise performed correctly! Back stayed still and weights were lifted fully up.";
    pub const FRONT_RAISE_BACK: &str = "Your back shows significant movement. Try keeping your back straight and still when you lift the weight. Consider using lighter weight.";
    pub const FRONT_RAISE_HEIGHT: &str = "You are not lifting the weight all the way up. Finish with wrists at or slightly above shoulder level.";

    pub const SHRUG_SUCCESS: &str = "Exercise performed correctly! Shoulders moved through their full range while arms stayed straight.";
    pub const SHRUG_RANGE: &str = "Your shoulders do not go through enough motion. Squeeze and raise your shoulders more through the exercise.";
    pub const SHRUG_ARMS: &str = "Your arms are bending when lifting. Keep your arms straight and still, and focus on moving only the shoulders.";

    pub const PRESS_SUCCESS: &str = "Exercise performed correctly! Back stayed straight and arms were fully extended at the top.";
    pub const PRESS_BACK: &str = "Your back shows significant movement while pressing. Try keeping your back straight and still when you lift the weight.";
    pub const PRESS_ELBOWS: &str = "You are rolling your shoulders when you lift the weights. Try to steady your shoulders and keep them parallel.";
    pub const PRESS_LOCKOUT: &str = "You are not lifting the weight all the way up. Extend your arms through the full range of motion. Lower the weight if necessary.";

    pub const CORRECT_HEADER: &str = "Exercise performed correctly!";
    pub const IMPROVE_HEADER: &str = "Exercise could be improved:";
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
#[cfg_attr(feature = "serde", derive(serde::Serialize, serde::Deserialize))]
#[cfg_attr(feature = "serde", serde(rename_all = "lowercase"))]
pub enum Verdict {
    Correct,
    Incorrect,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
#[cfg_attr(feature = "serde", derive(serde::Serialize, serde::Deserialize))]
#[cfg_attr(feature = "serde", serde(rename_all = "snake_case"))]
pub enum Unit {
    Degrees,
    TorsoUnits,
}

/// Which side of the threshold passes.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
#[cfg_attr(feature = "serde", derive(serde::Serialize, serde::Deserialize))]
#[cfg_attr(feature = "serde", serde(rename_all = "snake_case"))]
pub enum Comparator {
    /// `statistic <= threshold`
    AtMost,
    /// `statistic < threshold`
    Below,
    /// `statistic >= threshold`
    AtLeast,
}

impl Comparator {
    pub fn passes(self, statistic: f64, threshold: f64) -> bool {
        match self {
            Comparator::AtMost => statistic <= threshold,
            Comparator::Below => statistic < threshold,
            Comparator::AtLeast => statistic >= threshold,
        }
    }
}

#[derive(Debug, Clone, PartialEq)]
#[cfg_attr(feature = "serde", derive(serde::Serialize, serde::Deserialize))]
pub struct RuleResult {
    pub rule_id: String,
    /// Human-readable name of the statistic, as printed in the transcript.
    pub label: String,
    pub statistic: f64,
    pub unit: Unit,
    pub threshold: f64,
    pub comparator: Comparator,
    pub passed: bool,
    /// Empty when the rule passed.
    pub feedback: String,
}

impl RuleResult {
    pub(crate) fn check(
        rule_id: &str,
        label: &str,
        statistic: f64,
        unit: Unit,
        threshold: f64,
        comparator: Comparator,
        failure: &str,
    ) -> RuleResult {
        let passed = comparator.passes(statistic, threshold);
        RuleResult {
            rule_id: rule_id.into(),
            label: label.into(),
            statistic,
            unit,
            threshold,
            comparator,
            passed,
            feedback: if passed { String::new() } else { failure.into() },
        }
    }
}

#[derive(Debug, Clone, PartialEq)]
#[cfg_attr(feature = "serde", derive(serde::Serialize, serde::Deserialize))]
pub struct Evaluation {
    pub exercise: ExerciseKind,
    pub side: Side,
    pub verdict: Verdict,
    pub rules: Vec<RuleResult>,
    /// The success message when correct, otherwise the failed rules' feedback.
    pub feedback: Vec<String>,
    /// Raw (gap-filled) and smoothed per-frame series by name.
    pub series_dump: BTreeMap<String, Series>,
}

impl Evaluation {
    pub(crate) fn from_rules(
        exercise: ExerciseKind,
        side: Side,
        rules: Vec<RuleResult>,
        success: &str,
        series_dump: BTreeMap<String, Series>,
    ) -> Evaluation {
        let verdict = if rules.iter().all(|r| r.passed) {
            Verdict::Correct
        } else {
            Verdict::Incorrect
        };
        let feedback = match verdict {
            Verdict::Correct => alloc::vec![String::from(success)],
            Verdict::Incorrect => rules
                .iter()
                .filter(|r| !r.passed)
                .map(|r| r.feedback.clone())
                .collect(),
        };
        Evaluation {
            exercise,
            side,
            verdict,
            rules,
            feedback,
            series_dump,
        }
    }

    pub fn is_correct(&self) -> bool {
        self.verdict == Verdict::Correct
    }

    pub fn rule(&self, rule_id: &str) -> Option<&RuleResult> {
        self.rules.iter().find(|r| r.rule_id == rule_id)
    }

    /// Console report: detected arm, one line per statistic, verdict and
    /// feedback.
    pub fn transcript(&self) -> Transcript<'_> {
        Transcript(self)
    }
}

pub struct Transcript<'a>(&'a Evaluation);

impl fmt::Display for Transcript<'_> {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let eval = self.0;
        if eval.side != Side::Both {
            writeln!(f, "Exercise arm detected as: {}.", eval.side)?;
        }
        for rule in &eval.rules {
            writeln!(f, "{}: {:?}", rule.label, rule.statistic)?;
        }
        let header = match eval.verdict {
            Verdict::Correct => feedback::CORRECT_HEADER,
            Verdict::Incorrect => feedback::IMPROVE_HEADER,
        };
        writeln!(f, "{header}")?;
        for line in &eval.feedback {
            writeln!(f, "{line}")?;
        }
        Ok(())
    }
}

/// Dispatches to the evaluator for `exercise`.
pub fn evaluate(seq: &NormalizedSequence, exercise: ExerciseKind, cfg: &ThresholdConfig) -> Result<Evaluation> {
    match exercise {
        ExerciseKind::BicepCurl => evaluate_bicep_curl(seq, cfg),
        ExerciseKind::FrontRaise => evaluate_front_raise(seq, cfg),
        ExerciseKind::ShoulderShrug => evaluate_shoulder_shrug(seq, cfg),
        ExerciseKind::ShoulderPress => evaluate_shoulder_press(seq, cfg),
    }
}

/// Normalizes a raw pixel sequence and evaluates it.
pub fn evaluate_sequence(seq: &PoseSequence, exercise: ExerciseKind, cfg: &ThresholdConfig) -> Result<Evaluation> {
    evaluate(&prepare(seq, exercise)?, exercise, cfg)
}

pub(crate) fn series_name(prefix: Option<Side>, name: &str) -> String {
    match prefix {
        Some(side) if side != Side::Both => format!("{}_{}", side.name(), name),
        _ => name.into(),
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn comparators_at_boundary() {
        assert!(Comparator::AtMost.passes(35.0, 35.0));
        assert!(!Comparator::AtMost.passes(35.000001, 35.0));
        assert!(!Comparator::Below.passes(70.0, 70.0));
        assert!(Comparator::Below.passes(69.999, 70.0));
        assert!(Comparator::AtLeast.passes(90.0, 90.0));
    }

    fn rule(passed: bool) -> RuleResult {
        RuleResult::check(
            "r",
            "Stat",
            if passed { 1.0 } else { 3.0 },
            Unit::Degrees,
            2.0,
            Comparator::AtMost,
            "fix it",
        )
    }

    #[test]
    fn verdict_is_conjunction() {
        let ok = Evaluation::from_rules(ExerciseKind::FrontRaise, Side::Both, vec![rule(true), rule(true)], "yay", BTreeMap::new());
        assert_eq!(ok.verdict, Verdict::Correct);
        assert_eq!(ok.feedback, vec!["yay".to_string()]);
        let bad = Evaluation::from_rules(ExerciseKind::FrontRaise, Side::Both, vec![rule(true), rule(false)], "yay", BTreeMap::new());
        assert_eq!(bad.verdict, Verdict::Incorrect);
        assert_eq!(bad.feedback, vec!["fix it".to_string()]);
        assert!(bad.rules[0].feedback.is_empty());
    }

    #[test]
    fn transcript_layout() {
        let eval = Evaluation::from_rules(ExerciseKind::BicepCurl, Side::Right, vec![rule(false)], "yay", BTreeMap::new());
        assert_eq!(
            eval.transcript().to_string(),
            "Exercise arm detected as: right.\nStat: 3.0\nExercise could be improved:\nfix it\n"
        );
    }
}
