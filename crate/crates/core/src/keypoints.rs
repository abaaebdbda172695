//! Typed pose keypoints in the 18-joint COCO layout.
//!
//! A [`Part`] is a single joint estimate, a [`Pose`] is one frame of 18
//! parts, and a [`PoseSequence`] chains the poses of one video. Parts with
//! zero confidence are invisible and carry zeroed coordinates.

use alloc::format;
use alloc::string::String;
use alloc::vec::Vec;
use core::fmt;
use core::str::FromStr;

use crate::error::{Error, Result};

/// Number of joints emitted per person by the estimator.
pub const JOINT_COUNT: usize = 18;

/// Joints in estimator output order.
#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash)]
#[cfg_attr(feature = "serde", derive(serde::Serialize, serde::Deserialize))]
#[cfg_attr(feature = "serde", serde(rename_all = "lowercase"))]
#[repr(u8)]
pub enum Joint {
    Nose = 0,
    Neck,
    RShoulder,
    RElbow,
    RWrist,
    LShoulder,
    LElbow,
    LWrist,
    RHip,
    RKnee,
    RAnkle,
    LHip,
    LKnee,
    LAnkle,
    REye,
    LEye,
    REar,
    LEar,
}

impl Joint {
    pub const ALL: [Joint; JOINT_COUNT] = [
        Joint::Nose,
        Joint::Neck,
        Joint::RShoulder,
        Joint::RElbow,
        Joint::RWrist,
        Joint::LShoulder,
        Joint::LElbow,
        Joint::LWrist,
        Joint::RHip,
        Joint::RKnee,
        Joint::RAnkle,
        Joint::LHip,
        Joint::LKnee,
        Joint::LAnkle,
        Joint::REye,
        Joint::LEye,
        Joint::REar,
        Joint::LEar,
    ];

    pub const fn index(self) -> usize {
        self as usize
    }

    pub fn from_index(index: usize) -> Option<Joint> {
        Self::ALL.get(index).copied()
    }

    pub const fn name(self) -> &'static str {
        match self {
            Joint::Nose => "nose",
            Joint::Neck => "neck",
            Joint::RShoulder => "rshoulder",
            Joint::RElbow => "relbow",
            Joint::RWrist => "rwrist",
            Joint::LShoulder => "lshoulder",
            Joint::LElbow => "lelbow",
            Joint::LWrist => "lwrist",
            Joint::RHip => "rhip",
            Joint::RKnee => "rknee",
            Joint::RAnkle => "rankle",
            Joint::LHip => "lhip",
            Joint::LKnee => "lknee",
            Joint::LAnkle => "lankle",
            Joint::REye => "reye",
            Joint::LEye => "leye",
            Joint::REar => "rear",
            Joint::LEar => "lear",
        }
    }

    /// The same joint on the opposite side of the body. Midline joints map to
    /// themselves.
    pub const fn mirrored(self) -> Joint {
        match self {
            Joint::RShoulder => Joint::LShoulder,
            Joint::RElbow => Joint::LElbow,
            Joint::RWrist => Joint::LWrist,
            Joint::LShoulder => Joint::RShoulder,
            Joint::LElbow => Joint::RElbow,
            Joint::LWrist => Joint::RWrist,
            Joint::RHip => Joint::LHip,
            Joint::RKnee => Joint::LKnee,
            Joint::RAnkle => Joint::LAnkle,
            Joint::LHip => Joint::RHip,
            Joint::LKnee => Joint::RKnee,
            Joint::LAnkle => Joint::RAnkle,
            Joint::REye => Joint::LEye,
            Joint::LEye => Joint::REye,
            Joint::REar => Joint::LEar,
            Joint::LEar => Joint::REar,
            other => other,
        }
    }
}

impl fmt::Display for Joint {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

impl FromStr for Joint {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        Joint::ALL
            .iter()
            .copied()
            .find(|j| j.name() == s)
            .ok_or_else(|| Error::UnknownJoint(s.into()))
    }
}

/// One joint keypoint.
///
/// Invisible parts (confidence 0) have `x == y == 0` and must not take part
/// in geometry.
#[derive(Debug, Clone, Copy, PartialEq, Default)]
#[cfg_attr(feature = "serde", derive(serde::Serialize, serde::Deserialize))]
pub struct Part {
    pub x: f64,
    pub y: f64,
    pub confidence: f64,
    pub visible: bool,
}

impl Part {
    pub fn new(x: f64, y: f64, confidence: f64) -> Part {
        if confidence > 0.0 {
            Part {
                x,
                y,
                confidence,
                visible: true,
            }
        } else {
            Part::invisible()
        }
    }

    pub const fn invisible() -> Part {
        Part {
            x: 0.0,
            y: 0.0,
            confidence: 0.0,
            visible: false,
        }
    }
}

/// The 18 parts of one frame.
#[derive(Debug, Clone, PartialEq)]
#[cfg_attr(feature = "serde", derive(serde::Serialize, serde::Deserialize))]
pub struct Pose {
    pub parts: [Part; JOINT_COUNT],
    pub frame_index: usize,
}

macro_rules! joint_accessors {
    ($($name:ident => $joint:ident),* $(,)?) => {
        $(
            pub fn $name(&self) -> &Part {
                &self.parts[Joint::$joint.index()]
            }
        )*
    };
}

impl Pose {
    pub fn new(parts: [Part; JOINT_COUNT], frame_index: usize) -> Pose {
        Pose { parts, frame_index }
    }

    /// Builds a pose from a flat `[x0, y0, c0, ..., x17, y17, c17]` array.
    pub fn from_flat(values: &[f64], frame_index: usize) -> Result<Pose> {
        if values.len() != JOINT_COUNT * 3 {
            return Err(Error::InvalidSequence(format!(
                "expected {} keypoint values, got {}",
                JOINT_COUNT * 3,
                values.len()
            )));
        }
        let mut parts = [Part::invisible(); JOINT_COUNT];
        for (part, chunk) in parts.iter_mut().zip(values.chunks_exact(3)) {
            *part = Part::new(chunk[0], chunk[1], chunk[2]);
        }
        Ok(Pose::new(parts, frame_index))
    }

    pub fn to_flat(&self) -> Vec<f64> {
        self.parts
            .iter()
            .flat_map(|p| [p.x, p.y, p.confidence])
            .collect()
    }

    pub fn part(&self, joint: Joint) -> &Part {
        &self.parts[joint.index()]
    }

    /// The part if it is visible.
    pub fn visible(&self, joint: Joint) -> Option<&Part> {
        let part = self.part(joint);
        part.visible.then_some(part)
    }

    pub fn total_confidence(&self) -> f64 {
        self.parts.iter().map(|p| p.confidence).sum()
    }

    /// Applies `f` to the coordinates of every visible part.
    pub fn map_points(&self, mut f: impl FnMut(f64, f64) -> (f64, f64)) -> Pose {
        let mut parts = self.parts;
        for part in parts.iter_mut().filter(|p| p.visible) {
            let (x, y) = f(part.x, part.y);
            part.x = x;
            part.y = y;
        }
        Pose::new(parts, self.frame_index)
    }

    /// Swaps left and right joints and negates x about `axis_x`.
    pub fn mirrored(&self, axis_x: f64) -> Pose {
        let mut parts = [Part::invisible(); JOINT_COUNT];
        for joint in Joint::ALL {
            let mut part = *self.part(joint);
            if part.visible {
                part.x = 2.0 * axis_x - part.x;
            }
            parts[joint.mirrored().index()] = part;
        }
        Pose::new(parts, self.frame_index)
    }

    joint_accessors! {
        nose => Nose,
        neck => Neck,
        rshoulder => RShoulder,
        relbow => RElbow,
        rwrist => RWrist,
        lshoulder => LShoulder,
        lelbow => LElbow,
        lwrist => LWrist,
        rhip => RHip,
        rknee => RKnee,
        rankle => RAnkle,
        lhip => LHip,
        lknee => LKnee,
        lankle => LAnkle,
        reye => REye,
        leye => LEye,
        rear => REar,
        lear => LEar,
    }
}

/// Ordered poses of one video.
#[derive(Debug, Clone, PartialEq)]
#[cfg_attr(feature = "serde", derive(serde::Serialize, serde::Deserialize))]
pub struct PoseSequence {
    frames: Vec<Pose>,
    source_id: String,
    frames_per_second: Option<f64>,
}

impl PoseSequence {
    /// Wraps frames whose indices are already `0, 1, 2, ...`.
    pub fn new(frames: Vec<Pose>, source_id: impl Into<String>) -> Result<PoseSequence> {
        if let Some((pos, pose)) = frames
            .iter()
            .enumerate()
            .find(|(i, pose)| pose.frame_index != *i)
        {
            return Err(Error::InvalidSequence(format!(
                "frame at position {} has index {}",
                pos, pose.frame_index
            )));
        }
        Ok(PoseSequence {
            frames,
            source_id: source_id.into(),
            frames_per_second: None,
        })
    }

    /// Wraps frames and renumbers them contiguously from 0.
    pub fn from_poses(frames: Vec<Pose>, source_id: impl Into<String>) -> PoseSequence {
        let frames = frames
            .into_iter()
            .enumerate()
            .map(|(i, mut pose)| {
                pose.frame_index = i;
                pose
            })
            .collect();
        PoseSequence {
            frames,
            source_id: source_id.into(),
            frames_per_second: None,
        }
    }

    pub fn with_frames_per_second(mut self, fps: Option<f64>) -> PoseSequence {
        self.frames_per_second = fps;
        self
    }

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

    pub fn frames_per_second(&self) -> Option<f64> {
        self.frames_per_second
    }

    /// Entry points that evaluate a sequence require at least two frames.
    pub fn ensure_evaluable(&self) -> Result<()> {
        if self.frames.len() < 2 {
            return Err(Error::InsufficientData {
                needed: 2,
                got: self.frames.len(),
            });
        }
        Ok(())
    }

    pub fn map_points(&self, mut f: impl FnMut(f64, f64) -> (f64, f64)) -> PoseSequence {
        PoseSequence {
            frames: self.frames.iter().map(|p| p.map_points(&mut f)).collect(),
            source_id: self.source_id.clone(),
            frames_per_second: self.frames_per_second,
        }
    }

    pub fn mirrored(&self, axis_x: f64) -> PoseSequence {
        PoseSequence {
            frames: self.frames.iter().map(|p| p.mirrored(axis_x)).collect(),
            source_id: self.source_id.clone(),
            frames_per_second: self.frames_per_second,
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord)]
#[cfg_attr(feature = "serde", derive(serde::Serialize, serde::Deserialize))]
#[cfg_attr(feature = "serde", serde(rename_all = "snake_case"))]
pub enum ExerciseKind {
    BicepCurl,
    FrontRaise,
    ShoulderShrug,
    ShoulderPress,
}

impl ExerciseKind {
    pub const ALL: [ExerciseKind; 4] = [
        ExerciseKind::BicepCurl,
        ExerciseKind::FrontRaise,
        ExerciseKind::ShoulderShrug,
        ExerciseKind::ShoulderPress,
    ];

    pub const fn name(self) -> &'static str {
        match self {
            ExerciseKind::BicepCurl => "bicep_curl",
            ExerciseKind::FrontRaise => "front_raise",
            ExerciseKind::ShoulderShrug => "shoulder_shrug",
            ExerciseKind::ShoulderPress => "shoulder_press",
        }
    }

    /// Whether the exercise is performed with one arm seen from the side.
    pub const fn is_side_dependent(self) -> bool {
        matches!(self, ExerciseKind::BicepCurl)
    }
}

impl fmt::Display for ExerciseKind {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

impl FromStr for ExerciseKind {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        ExerciseKind::ALL
            .iter()
            .copied()
            .find(|e| e.name() == s)
            .ok_or_else(|| Error::UnknownExercise(s.into()))
    }
}

/// Body side facing the camera.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
#[cfg_attr(feature = "serde", derive(serde::Serialize, serde::Deserialize))]
#[cfg_attr(feature = "serde", serde(rename_all = "lowercase"))]
pub enum Side {
    Left,
    Right,
    /// Perspective detection does not apply.
    Both,
}

impl Side {
    pub const fn name(self) -> &'static str {
        match self {
            Side::Left => "left",
            Side::Right => "right",
            Side::Both => "both",
        }
    }

    pub const fn flipped(self) -> Side {
        match self {
            Side::Left => Side::Right,
            Side::Right => Side::Left,
            Side::Both => Side::Both,
        }
    }
}

impl fmt::Display for Side {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

/// The three joints of one arm.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct Arm {
    pub shoulder: Joint,
    pub elbow: Joint,
    pub wrist: Joint,
}

impl Arm {
    pub const RIGHT: Arm = Arm {
        shoulder: Joint::RShoulder,
        elbow: Joint::RElbow,
        wrist: Joint::RWrist,
    };
    pub const LEFT: Arm = Arm {
        shoulder: Joint::LShoulder,
        elbow: Joint::LElbow,
        wrist: Joint::LWrist,
    };

    /// `None` for [`Side::Both`].
    pub const fn of(side: Side) -> Option<Arm> {
        match side {
            Side::Left => Some(Arm::LEFT),
            Side::Right => Some(Arm::RIGHT),
            Side::Both => None,
        }
    }

    pub const fn joints(&self) -> [Joint; 3] {
        [self.shoulder, self.elbow, self.wrist]
    }
}

/// Ground-truth or predicted form label.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord)]
#[cfg_attr(feature = "serde", derive(serde::Serialize, serde::Deserialize))]
#[cfg_attr(feature = "serde", serde(rename_all = "lowercase"))]
pub enum Label {
    Correct,
    Incorrect,
}

impl Label {
    pub const fn name(self) -> &'static str {
        match self {
            Label::Correct => "correct",
            Label::Incorrect => "incorrect",
        }
    }
}

impl fmt::Display for Label {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

impl FromStr for Label {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s {
            "correct" | "good" => Ok(Label::Correct),
            "incorrect" | "bad" => Ok(Label::Incorrect),
            other => Err(Error::UnknownLabel(other.into())),
        }
    }
}
