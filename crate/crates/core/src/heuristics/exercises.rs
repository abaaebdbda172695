use alloc::collections::BTreeMap;
use alloc::format;
use alloc::string::String;
use alloc::vec::Vec;

use super::{feedback, series_name, Comparator, Evaluation, RuleResult, ThresholdConfig, Unit};
use crate::error::{Error, Result};
use crate::geometry::{angle_between, fill_gaps, hip_center, smooth, torso_vector, NormalizedSequence, Series, Vec2};
use crate::keypoints::{Arm, ExerciseKind, Joint, Pose, Side};

/// Builds smoothed channels from a normalized sequence and keeps a copy of
/// every raw and smoothed series for export.
struct Channels<'a> {
    seq: &'a NormalizedSequence,
    min_defined: usize,
    dump: BTreeMap<String, Series>,
}

impl<'a> Channels<'a> {
    /// Channels need at least two defined frames.
    fn sparse(seq: &'a NormalizedSequence) -> Self {
        Channels {
            seq,
            min_defined: 2,
            dump: BTreeMap::new(),
        }
    }

    /// Channels need at least half of the frames defined.
    fn half(seq: &'a NormalizedSequence) -> Self {
        Channels {
            seq,
            min_defined: seq.len().div_ceil(2).max(2),
            dump: BTreeMap::new(),
        }
    }

    fn visible_count(&self, joint: Joint) -> usize {
        self.seq
            .frames()
            .iter()
            .filter(|p| p.part(joint).visible)
            .count()
    }

    fn under_covered(&self, joints: &[Joint]) -> Vec<Joint> {
        joints
            .iter()
            .copied()
            .filter(|&j| self.visible_count(j) < self.min_defined)
            .collect()
    }

    fn channel(&mut self, name: String, joints: &[Joint], f: impl Fn(&Pose) -> Option<f64>) -> Result<Series> {
        let raw: Vec<Option<f64>> = self.seq.frames().iter().map(f).collect();
        let defined = raw.iter().filter(|v| v.is_some()).count();
        if defined < self.min_defined {
            let mut missing = self.under_covered(joints);
            if missing.is_empty() {
                missing = joints.to_vec();
            }
            return Err(Error::MissingJoints(missing));
        }
        let filled = fill_gaps(&raw)?;
        let smoothed = smooth(&filled)?;
        self.dump.insert(format!("{name}_raw"), filled);
        self.dump.insert(name, smoothed.clone());
        Ok(smoothed)
    }

    /// Arms whose three joints all meet the coverage requirement.
    fn usable_arms(&self) -> Result<Vec<(Side, Arm)>> {
        let arms: Vec<(Side, Arm)> = [(Side::Right, Arm::RIGHT), (Side::Left, Arm::LEFT)]
            .into_iter()
            .filter(|(_, arm)| self.under_covered(&arm.joints()).is_empty())
            .collect();
        if arms.is_empty() {
            let mut missing = self.under_covered(&Arm::RIGHT.joints());
            missing.extend(self.under_covered(&Arm::LEFT.joints()));
            return Err(Error::MissingJoints(missing));
        }
        Ok(arms)
    }
}

const TORSO_JOINTS: [Joint; 3] = [Joint::Neck, Joint::RHip, Joint::LHip];

fn angle(u: Option<Vec2>, v: Option<Vec2>) -> Option<f64> {
    angle_between(u?, v?).ok()
}

/// Interior elbow angle: 180 for a straight arm.
fn elbow_angle(pose: &Pose, arm: Arm) -> Option<f64> {
    angle(
        Vec2::joints(pose, arm.elbow, arm.shoulder),
        Vec2::joints(pose, arm.elbow, arm.wrist),
    )
}

/// Horizontal offset of the neck from the hip midpoint.
fn back_offset(pose: &Pose) -> Option<f64> {
    let neck = pose.visible(Joint::Neck)?;
    let (hx, _) = hip_center(pose)?;
    Some(neck.x - hx)
}

fn stat(value: Option<f64>) -> Result<f64> {
    value.ok_or(Error::EmptySeries)
}

/// Upper arm must stay close to the torso; the elbow must close below the
/// curl threshold.
pub fn evaluate_bicep_curl(seq: &NormalizedSequence, cfg: &ThresholdConfig) -> Result<Evaluation> {
    let side = seq.side();
    let arm = Arm::of(side).ok_or(Error::UndetectablePerspective)?;
    let t = cfg.bicep_curl;
    let mut ch = Channels::sparse(seq);

    let upper_arm = ch.channel(
        "upper_arm_torso_angle".into(),
        &[arm.shoulder, arm.elbow, Joint::Neck, Joint::RHip, Joint::LHip],
        |p| angle(Vec2::joints(p, arm.shoulder, arm.elbow), torso_vector(p)),
    )?;
    let elbow = ch.channel("upper_arm_forearm_angle".into(), &arm.joints(), |p| elbow_angle(p, arm))?;

    let rules = alloc::vec![
        RuleResult::check(
            "upper_arm_range",
            "Upper arm and torso angle range",
            stat(upper_arm.range())?,
            Unit::Degrees,
            t.upper_arm_range,
            Comparator::AtMost,
            feedback::BICEP_UPPER_ARM,
        ),
        RuleResult::check(
            "curl_min",
            "Upper arm and forearm minimum angle",
            stat(elbow.min())?,
            Unit::Degrees,
            t.curl_min,
            Comparator::Below,
            feedback::BICEP_NOT_CURLED,
        ),
    ];
    Ok(Evaluation::from_rules(ExerciseKind::BicepCurl, side, rules, feedback::BICEP_SUCCESS, ch.dump))
}

/// Back must not sway horizontally; every tracked arm must reach the raise
/// angle relative to the torso.
pub fn evaluate_front_raise(seq: &NormalizedSequence, cfg: &ThresholdConfig) -> Result<Evaluation> {
    let t = cfg.front_raise;
    let mut ch = Channels::half(seq);

    let back = ch.channel("back_offset".into(), &TORSO_JOINTS, back_offset)?;
    let origin = back[0];
    let sway = back.iter().map(|v| libm::fabs(v - origin)).fold(0.0, f64::max);

    let mut reach = f64::INFINITY;
    for (side, arm) in ch.usable_arms()? {
        let joints = [arm.shoulder, arm.wrist, Joint::Neck, Joint::RHip, Joint::LHip];
        let series = ch.channel(series_name(Some(side), "torso_arm_angle"), &joints, |p| {
            angle(torso_vector(p), Vec2::joints(p, arm.shoulder, arm.wrist))
        })?;
        reach = reach.min(stat(series.max())?);
    }

    let rules = alloc::vec![
        RuleResult::check(
            "back_sway",
            "Back horizontal sway",
            sway,
            Unit::TorsoUnits,
            t.back_sway,
            Comparator::AtMost,
            feedback::FRONT_RAISE_BACK,
        ),
        RuleResult::check(
            "raise_angle",
            "Torso and arm maximum angle",
            reach,
            Unit::Degrees,
            t.raise_angle,
            Comparator::AtLeast,
            feedback::FRONT_RAISE_HEIGHT,
        ),
    ];
    Ok(Evaluation::from_rules(ExerciseKind::FrontRaise, Side::Both, rules, feedback::FRONT_RAISE_SUCCESS, ch.dump))
}

/// Shoulders must travel vertically; arms must stay straight.
pub fn evaluate_shoulder_shrug(seq: &NormalizedSequence, cfg: &ThresholdConfig) -> Result<Evaluation> {
    let t = cfg.shoulder_shrug;
    let mut ch = Channels::half(seq);

    let arms = ch.usable_arms()?;
    let mut ranges = Vec::with_capacity(arms.len());
    let mut straightest_bend = f64::INFINITY;
    for (side, arm) in arms {
        let height = ch.channel(series_name(Some(side), "shoulder_y"), &[arm.shoulder], |p| {
            p.visible(arm.shoulder).map(|s| s.y)
        })?;
        ranges.push(stat(height.range())?);
        let elbow = ch.channel(series_name(Some(side), "upper_arm_forearm_angle"), &arm.joints(), |p| {
            elbow_angle(p, arm)
        })?;
        straightest_bend = straightest_bend.min(stat(elbow.min())?);
    }
    let range = ranges.iter().sum::<f64>() / ranges.len() as f64;

    let rules = alloc::vec![
        RuleResult::check(
            "shrug_range",
            "Shoulder vertical range",
            range,
            Unit::TorsoUnits,
            t.shrug_range,
            Comparator::AtLeast,
            feedback::SHRUG_RANGE,
        ),
        RuleResult::check(
            "straight_arm",
            "Upper arm and forearm minimum angle",
            straightest_bend,
            Unit::Degrees,
            t.straight_arm,
            Comparator::AtLeast,
            feedback::SHRUG_ARMS,
        ),
    ];
    Ok(Evaluation::from_rules(ExerciseKind::ShoulderShrug, Side::Both, rules, feedback::SHRUG_SUCCESS, ch.dump))
}

/// +1 when the subject faces increasing x, -1 otherwise.
///
/// Uses the nose (or eyes) relative to the neck; an undecidable sequence is
/// treated as facing +x.
fn facing(seq: &NormalizedSequence) -> f64 {
    let lean: f64 = seq
        .frames()
        .iter()
        .filter_map(|p| {
            let neck = p.visible(Joint::Neck)?;
            let head = p.visible(Joint::Nose).map(|n| n.x).or_else(|| {
                let eyes: Vec<f64> = [Joint::REye, Joint::LEye]
                    .into_iter()
                    .filter_map(|e| p.visible(e).map(|e| e.x))
                    .collect();
                (!eyes.is_empty()).then(|| eyes.iter().sum::<f64>() / eyes.len() as f64)
            })?;
            Some(head - neck.x)
        })
        .sum();
    if lean < 0.0 {
        -1.0
    } else {
        1.0
    }
}

/// Back must stay still, elbows must not drift behind the neck, and the arms
/// must lock out at the top.
pub fn evaluate_shoulder_press(seq: &NormalizedSequence, cfg: &ThresholdConfig) -> Result<Evaluation> {
    let t = cfg.shoulder_press;
    let mut ch = Channels::half(seq);

    let back = ch.channel("back_offset".into(), &TORSO_JOINTS, back_offset)?;
    let back_range = stat(back.range())?;

    let forward = facing(seq);
    let mut behind = f64::NEG_INFINITY;
    let mut lockout = f64::INFINITY;
    for (side, arm) in ch.usable_arms()? {
        let elbow_back = ch.channel(
            series_name(Some(side), "elbow_behind_neck"),
            &[arm.elbow, Joint::Neck],
            |p| {
                let elbow = p.visible(arm.elbow)?;
                let neck = p.visible(Joint::Neck)?;
                Some(-(elbow.x - neck.x) * forward)
            },
        )?;
        behind = behind.max(stat(elbow_back.max())?);
        let elbow = ch.channel(series_name(Some(side), "upper_arm_forearm_angle"), &arm.joints(), |p| {
            elbow_angle(p, arm)
        })?;
        lockout = lockout.min(stat(elbow.max())?);
    }

    let rules = alloc::vec![
        RuleResult::check(
            "back_sway",
            "Back horizontal range",
            back_range,
            Unit::TorsoUnits,
            t.back_sway,
            Comparator::AtMost,
            feedback::PRESS_BACK,
        ),
        RuleResult::check(
            "elbow_back",
            "Elbow distance behind neck",
            behind,
            Unit::TorsoUnits,
            t.elbow_back,
            Comparator::AtMost,
            feedback::PRESS_ELBOWS,
        ),
        RuleResult::check(
            "lockout_angle",
            "Upper arm and forearm maximum angle",
            lockout,
            Unit::Degrees,
            t.lockout_angle,
            Comparator::AtLeast,
            feedback::PRESS_LOCKOUT,
        ),
    ];
    Ok(Evaluation::from_rules(ExerciseKind::ShoulderPress, Side::Both, rules, feedback::PRESS_SUCCESS, ch.dump))
}
