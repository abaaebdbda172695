use alloc::string::String;
use alloc::vec::Vec;
use core::fmt;

use crate::keypoints::{ExerciseKind, Joint};

pub type Result<T, E = Error> = core::result::Result<T, E>;

#[derive(Debug, Clone, PartialEq, thiserror::Error)]
pub enum Error {
    #[error("zero-length vector has no direction")]
    DegenerateVector,

    #[error("torso length undefined: neck or both hips not visible")]
    UndefinedTorso,

    #[error("torso length defined in only {defined} of {total} frames (need at least half)")]
    Normalization { defined: usize, total: usize },

    #[error("cannot detect perspective: no arm keypoints visible on either side")]
    UndetectablePerspective,

    #[error("median filter window must be odd and positive, got {0}")]
    InvalidWindow(usize),

    #[error("series is empty")]
    EmptySeries,

    #[error("insufficient data: need at least {needed}, got {got}")]
    InsufficientData { needed: usize, got: usize },

    #[error("required joints missing: {}", JointList(.0))]
    MissingJoints(Vec<Joint>),

    #[error("feature dimensionality mismatch: {left} vs {right}")]
    DimensionMismatch { left: usize, right: usize },

    #[error("invalid sequence: {0}")]
    InvalidSequence(String),

    #[error("training set is empty")]
    EmptyDataset,

    #[error("exercise mismatch: expected {expected}, found {found}")]
    ExerciseMismatch {
        expected: ExerciseKind,
        found: ExerciseKind,
    },

    #[error("degenerate split: {0}")]
    Split(String),

    #[error("unknown exercise `{0}`")]
    UnknownExercise(String),

    #[error("unknown label `{0}`")]
    UnknownLabel(String),

    #[error("unknown joint `{0}`")]
    UnknownJoint(String),

    #[error("unknown configuration key `{0}`")]
    UnknownKey(String),

    #[error("invalid value {value} for `{key}`")]
    InvalidThreshold { key: String, value: f64 },
}

struct JointList<'a>(&'a [Joint]);

impl fmt::Display for JointList<'_> {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        for (i, joint) in self.0.iter().enumerate() {
            if i > 0 {
                f.write_str(", ")?;
            }
            f.write_str(joint.name())?;
        }
        Ok(())
    }
}
