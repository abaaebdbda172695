//! Nearest-neighbour form classification over DTW distances.
//!
//! Sequences are turned into [`FeatureSeries`] (neck-relative joint
//! coordinates in torso units, gap-filled and median-smoothed per channel),
//! compared with [`dtw_distance`], and labelled by their single nearest
//! training sequence.

mod dtw;
mod metrics;
mod nearest;

pub use dtw::{dtw_distance, frame_distance};
pub use metrics::{evaluate_split, ClassMetrics, SplitMetrics, SplitOutcome, TestPrediction};
pub use nearest::{classify, LabeledDataset, LabeledEntry, Prediction};

use alloc::format;
use alloc::string::String;
use alloc::vec::Vec;

use crate::error::{Error, Result};
use crate::geometry::{fill_gaps, hip_center, smooth_with, NormalizedSequence, SMOOTHING_PASSES, SMOOTHING_WINDOW};
use crate::keypoints::{Arm, ExerciseKind, Joint, Pose, Side};

/// Per-frame feature vectors of fixed dimensionality.
#[derive(Debug, Clone, PartialEq)]
pub struct FeatureSeries {
    values: Vec<f64>,
    dim: usize,
    exercise: ExerciseKind,
}

impl FeatureSeries {
    pub fn new(frames: Vec<Vec<f64>>, exercise: ExerciseKind) -> Result<FeatureSeries> {
        let dim = frames.first().map_or(0, Vec::len);
        if let Some(bad) = frames.iter().find(|f| f.len() != dim) {
            return Err(Error::DimensionMismatch {
                left: dim,
                right: bad.len(),
            });
        }
        FeatureSeries::from_flat(frames.concat(), dim.max(1), exercise)
    }

    /// Frames laid out back to back, `dim` values each.
    pub fn from_flat(values: Vec<f64>, dim: usize, exercise: ExerciseKind) -> Result<FeatureSeries> {
        if dim == 0 || !values.len().is_multiple_of(dim) {
            return Err(Error::InvalidSequence(format!(
                "{} values do not split into frames of {}",
                values.len(),
                dim
            )));
        }
        if values.iter().any(|v| !v.is_finite()) {
            return Err(Error::InvalidSequence("non-finite feature value".into()));
        }
        Ok(FeatureSeries { values, dim, exercise })
    }

    pub fn dim(&self) -> usize {
        self.dim
    }

    /// Number of frames.
    pub fn len(&self) -> usize {
        self.values.len() / self.dim
    }

    pub fn is_empty(&self) -> bool {
        self.values.is_empty()
    }

    pub fn exercise(&self) -> ExerciseKind {
        self.exercise
    }

    pub fn frame(&self, index: usize) -> &[f64] {
        &self.values[index * self.dim..(index + 1) * self.dim]
    }

    pub fn frames(&self) -> core::slice::ChunksExact<'_, f64> {
        self.values.chunks_exact(self.dim)
    }
}

/// Which joints feed the classifier and how their tracks are smoothed.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct FeatureConfig {
    pub median_window: usize,
    pub median_passes: usize,
}

impl Default for FeatureConfig {
    fn default() -> Self {
        FeatureConfig {
            median_window: SMOOTHING_WINDOW,
            median_passes: SMOOTHING_PASSES,
        }
    }
}

/// Joint slot in a feature frame. `HipCenter` is the midpoint of the visible
/// hips.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum FeatureJoint {
    Joint(Joint),
    HipCenter,
}

impl FeatureJoint {
    fn name(self) -> &'static str {
        match self {
            FeatureJoint::Joint(j) => j.name(),
            FeatureJoint::HipCenter => "hip",
        }
    }

    fn locate(self, pose: &Pose) -> Option<(f64, f64)> {
        match self {
            FeatureJoint::Joint(j) => pose.visible(j).map(|p| (p.x, p.y)),
            FeatureJoint::HipCenter => hip_center(pose),
        }
    }

    fn source_joints(self) -> Vec<Joint> {
        match self {
            FeatureJoint::Joint(j) => alloc::vec![j],
            FeatureJoint::HipCenter => alloc::vec![Joint::RHip, Joint::LHip],
        }
    }
}

impl FeatureConfig {
    /// Keys accepted by [`FeatureConfig::set`].
    pub const KEYS: [&'static str; 2] = ["features.median_window", "features.median_passes"];

    pub fn set(&mut self, key: &str, value: f64) -> Result<()> {
        let invalid = || Error::InvalidThreshold {
            key: key.into(),
            value,
        };
        if !(value.is_finite() && value >= 1.0 && libm::trunc(value) == value) {
            return Err(invalid());
        }
        let v = value as usize;
        match key {
            "features.median_window" if v % 2 == 1 => self.median_window = v,
            "features.median_window" => return Err(invalid()),
            "features.median_passes" => self.median_passes = v,
            _ => return Err(Error::UnknownKey(key.into())),
        }
        Ok(())
    }

    /// Joint slots for `exercise` in feature order.
    pub fn joints(&self, exercise: ExerciseKind, side: Side) -> Vec<FeatureJoint> {
        use FeatureJoint::Joint as J;
        match (exercise, Arm::of(side)) {
            (ExerciseKind::BicepCurl, Some(arm)) => alloc::vec![
                J(arm.shoulder),
                J(arm.elbow),
                J(arm.wrist),
                J(Joint::Neck),
                FeatureJoint::HipCenter,
            ],
            (ExerciseKind::BicepCurl, None) => Vec::new(),
            _ => alloc::vec![
                J(Joint::RShoulder),
                J(Joint::RElbow),
                J(Joint::RWrist),
                J(Joint::LShoulder),
                J(Joint::LElbow),
                J(Joint::LWrist),
                J(Joint::Neck),
                J(Joint::RHip),
                J(Joint::LHip),
            ],
        }
    }

    /// Stable text form of everything that changes feature values; stored
    /// with dataset indexes to detect stale ones.
    pub fn describe(&self, exercise: ExerciseKind) -> String {
        let side = if exercise.is_side_dependent() { Side::Right } else { Side::Both };
        let joints: Vec<&str> = self.joints(exercise, side).iter().map(|j| j.name()).collect();
        format!(
            "features/v1 exercise={} joints={} relative=neck mirror_left=true window={} passes={}",
            exercise,
            joints.join(","),
            self.median_window,
            self.median_passes
        )
    }
}

/// [`featurize_with`] using the default configuration.
pub fn featurize(seq: &NormalizedSequence, exercise: ExerciseKind) -> Result<FeatureSeries> {
    featurize_with(seq, exercise, &FeatureConfig::default())
}

/// Builds neck-relative joint coordinates per frame, then gap-fills and
/// smooths each channel.
///
/// Left-side bicep sequences have x negated so both arms share one frame of
/// reference.
pub fn featurize_with(seq: &NormalizedSequence, exercise: ExerciseKind, cfg: &FeatureConfig) -> Result<FeatureSeries> {
    if exercise.is_side_dependent() && seq.side() == Side::Both {
        return Err(Error::UndetectablePerspective);
    }
    let joints = cfg.joints(exercise, seq.side());
    let mirror = if seq.side() == Side::Left { -1.0 } else { 1.0 };
    let frames = seq.frames();

    let mut channels: Vec<Vec<f64>> = Vec::with_capacity(joints.len() * 2);
    let mut missing = Vec::new();
    for joint in &joints {
        let rel: Vec<Option<(f64, f64)>> = frames
            .iter()
            .map(|p| {
                let neck = p.visible(Joint::Neck)?;
                let (x, y) = joint.locate(p)?;
                Some(((x - neck.x) * mirror, y - neck.y))
            })
            .collect();
        let xs: Vec<Option<f64>> = rel.iter().map(|v| v.map(|v| v.0)).collect();
        let ys: Vec<Option<f64>> = rel.iter().map(|v| v.map(|v| v.1)).collect();
        match (fill_gaps(&xs), fill_gaps(&ys)) {
            (Ok(x), Ok(y)) => {
                channels.push(smooth_with(&x, cfg.median_window, cfg.median_passes)?.into_values());
                channels.push(smooth_with(&y, cfg.median_window, cfg.median_passes)?.into_values());
            }
            _ => {
                let mut sources = joint.source_joints();
                sources.push(Joint::Neck);
                for j in sources {
                    if !missing.contains(&j) {
                        missing.push(j);
                    }
                }
            }
        }
    }
    if !missing.is_empty() {
        return Err(Error::MissingJoints(missing));
    }

    let dim = channels.len();
    let mut values = Vec::with_capacity(dim * frames.len());
    for t in 0..frames.len() {
        values.extend(channels.iter().map(|c| c[t]));
    }
    FeatureSeries::from_flat(values, dim, exercise)
}
