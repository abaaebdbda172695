use alloc::string::String;
use alloc::vec::Vec;

use super::torso_length;
use crate::error::{Error, Result};
use crate::keypoints::{Arm, ExerciseKind, Pose, PoseSequence, Side};

/// A pose sequence expressed in torso units.
#[derive(Debug, Clone, PartialEq)]
pub struct NormalizedSequence {
    frames: Vec<Pose>,
    source_id: String,
    torso_length_px: f64,
    torso_length_spread: f64,
    side: Side,
}

impl NormalizedSequence {
    pub fn frames(&self) -> &[Pose] {
        &self.frames
    }

    pub fn len(&self) -> usize {
        self.frames.len()
    }

    pub fn is_empty(&self) -> bool {
        self.frames.is_empty()
    }

    pub fn source_id(&self) -> &str {
        &self.source_id
    }

    /// The divisor applied to every visible coordinate.
    pub fn torso_length_px(&self) -> f64 {
        self.torso_length_px
    }

    /// Coefficient of variation (population standard deviation over mean) of
    /// the per-frame torso length. Zero for a rigid subject.
    pub fn torso_length_spread(&self) -> f64 {
        self.torso_length_spread
    }

    pub fn side(&self) -> Side {
        self.side
    }

    pub fn with_side(mut self, side: Side) -> NormalizedSequence {
        self.side = side;
        self
    }

    /// Re-wraps the normalized frames as a plain sequence.
    pub fn to_sequence(&self) -> PoseSequence {
        PoseSequence::from_poses(self.frames.clone(), self.source_id.clone())
    }
}

fn median(sorted: &[f64]) -> f64 {
    let n = sorted.len();
    if n % 2 == 1 {
        sorted[n / 2]
    } else {
        (sorted[n / 2 - 1] + sorted[n / 2]) / 2.0
    }
}

/// Divides every visible coordinate by the median per-frame torso length.
///
/// Requires the torso to be measurable in at least half of the frames.
pub fn normalize_sequence(seq: &PoseSequence) -> Result<NormalizedSequence> {
    let lengths: Vec<f64> = seq
        .frames()
        .iter()
        .filter_map(|pose| torso_length(pose).ok())
        .filter(|len| *len > 0.0 && len.is_finite())
        .collect();
    let total = seq.len();
    if lengths.is_empty() || lengths.len() * 2 < total {
        return Err(Error::Normalization {
            defined: lengths.len(),
            total,
        });
    }

    let mut sorted = lengths.clone();
    sorted.sort_by(f64::total_cmp);
    let divisor = median(&sorted);

    let n = lengths.len() as f64;
    let mean = lengths.iter().sum::<f64>() / n;
    let variance = lengths.iter().map(|l| (l - mean) * (l - mean)).sum::<f64>() / n;
    let spread = libm::sqrt(variance) / mean;

    let frames = seq
        .frames()
        .iter()
        .map(|pose| pose.map_points(|x, y| (x / divisor, y / divisor)))
        .collect();

    Ok(NormalizedSequence {
        frames,
        source_id: seq.source_id().into(),
        torso_length_px: divisor,
        torso_length_spread: spread,
        side: Side::Both,
    })
}

/// Picks the arm whose keypoints are most visible over the whole sequence.
///
/// Exercises that are not performed one-sided return [`Side::Both`]. Equal
/// sums resolve to [`Side::Right`].
pub fn detect_side(seq: &PoseSequence, exercise: ExerciseKind) -> Result<Side> {
    if !exercise.is_side_dependent() {
        return Ok(Side::Both);
    }
    if seq.is_empty() {
        return Err(Error::EmptySeries);
    }
    let arm_confidence = |arm: Arm| -> f64 {
        seq.frames()
            .iter()
            .flat_map(|pose| arm.joints().map(|j| pose.part(j).confidence))
            .sum()
    };
    let left = arm_confidence(Arm::LEFT);
    let right = arm_confidence(Arm::RIGHT);
    if left <= 0.0 && right <= 0.0 {
        return Err(Error::UndetectablePerspective);
    }
    Ok(if left > right { Side::Left } else { Side::Right })
}

/// Validates, detects the active side and normalizes a raw sequence.
pub fn prepare(seq: &PoseSequence, exercise: ExerciseKind) -> Result<NormalizedSequence> {
    seq.ensure_evaluable()?;
    let side = detect_side(seq, exercise)?;
    Ok(normalize_sequence(seq)?.with_side(side))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::keypoints::{Joint, Part, JOINT_COUNT};

    fn frame(points: &[(Joint, f64, f64, f64)]) -> Pose {
        let mut parts = [Part::invisible(); JOINT_COUNT];
        for &(j, x, y, c) in points {
            parts[j.index()] = Part::new(x, y, c);
        }
        Pose::new(parts, 0)
    }

    fn torso_frame(torso: f64, arm_px: f64) -> Pose {
        frame(&[
            (Joint::Neck, 100.0, 100.0, 0.9),
            (Joint::RHip, 100.0, 100.0 + torso, 0.9),
            (Joint::LHip, 100.0, 100.0 + torso, 0.9),
            (Joint::RShoulder, 100.0, 110.0, 0.9),
            (Joint::RElbow, 100.0, 110.0 + arm_px, 0.9),
        ])
    }

    fn seq(frames: Vec<Pose>) -> PoseSequence {
        PoseSequence::from_poses(frames, "test")
    }

    #[test]
    fn upper_arm_ratio() {
        let s = seq(vec![torso_frame(80.0, 48.0); 4]);
        let n = normalize_sequence(&s).unwrap();
        assert_eq!(n.torso_length_px(), 80.0);
        let f = &n.frames()[0];
        let upper = f.relbow().y - f.rshoulder().y;
        assert!((upper - 0.6).abs() < 1e-12);
        assert_eq!(n.torso_length_spread(), 0.0);
    }

    #[test]
    fn uniform_scaling_gives_identical_coordinates() {
        let s = seq(vec![torso_frame(80.0, 48.0), torso_frame(82.0, 40.0), torso_frame(79.0, 30.0)]);
        let a = normalize_sequence(&s).unwrap();
        let b = normalize_sequence(&s.map_points(|x, y| (2.0 * x, 2.0 * y))).unwrap();
        assert_eq!(b.torso_length_px(), 2.0 * a.torso_length_px());
        for (fa, fb) in a.frames().iter().zip(b.frames()) {
            for (pa, pb) in fa.parts.iter().zip(fb.parts.iter()) {
                assert!((pa.x - pb.x).abs() < 1e-12 && (pa.y - pb.y).abs() < 1e-12);
            }
        }
    }

    #[test]
    fn missing_hips_fail() {
        let no_hips = frame(&[(Joint::Neck, 1.0, 1.0, 0.9)]);
        assert_eq!(
            normalize_sequence(&seq(vec![no_hips.clone(), no_hips])),
            Err(Error::Normalization { defined: 0, total: 2 })
        );
    }

    #[test]
    fn half_defined_is_enough() {
        let no_hips = frame(&[(Joint::Neck, 1.0, 1.0, 0.9)]);
        assert!(normalize_sequence(&seq(vec![torso_frame(50.0, 10.0), no_hips.clone()])).is_ok());
        assert!(normalize_sequence(&seq(vec![torso_frame(50.0, 10.0), no_hips.clone(), no_hips])).is_err());
    }

    #[test]
    fn renormalizing_is_idempotent() {
        let s = seq(vec![torso_frame(80.0, 48.0), torso_frame(84.0, 40.0), torso_frame(77.0, 30.0)]);
        let once = normalize_sequence(&s).unwrap();
        let twice = normalize_sequence(&once.to_sequence()).unwrap();
        assert!((twice.torso_length_px() - 1.0).abs() < 1e-9);
        for (fa, fb) in once.frames().iter().zip(twice.frames()) {
            for (pa, pb) in fa.parts.iter().zip(fb.parts.iter()) {
                assert!((pa.x - pb.x).abs() < 1e-9 && (pa.y - pb.y).abs() < 1e-9);
            }
        }
    }

    fn arm_frame(left: f64, right: f64) -> Pose {
        frame(&[
            (Joint::LShoulder, 1.0, 1.0, left),
            (Joint::LElbow, 1.0, 2.0, left),
            (Joint::LWrist, 1.0, 3.0, left),
            (Joint::RShoulder, 2.0, 1.0, right),
            (Joint::RElbow, 2.0, 2.0, right),
            (Joint::RWrist, 2.0, 3.0, right),
        ])
    }

    #[test]
    fn side_detection() {
        let bicep = ExerciseKind::BicepCurl;
        let s = seq(vec![arm_frame(0.9, 0.1); 3]);
        assert_eq!(detect_side(&s, bicep), Ok(Side::Left));
        assert_eq!(detect_side(&s.mirrored(0.0), bicep), Ok(Side::Right));
        assert_eq!(detect_side(&seq(vec![arm_frame(0.5, 0.5); 3]), bicep), Ok(Side::Right));
        assert_eq!(
            detect_side(&seq(vec![arm_frame(0.0, 0.0); 3]), bicep),
            Err(Error::UndetectablePerspective)
        );
        assert_eq!(detect_side(&s, ExerciseKind::ShoulderShrug), Ok(Side::Both));
    }
}
