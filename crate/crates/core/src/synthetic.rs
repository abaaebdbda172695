//! Synthetic exercise sequences with known form parameters.
//!
//! Each generator draws a stick figure in pixel space, moves it along a
//! smooth rest → top → rest profile, and holds every extreme for `hold`
//! frames. Holding for at least three frames means the double median filter
//! leaves the extremes untouched, so the statistics the evaluators report
//! equal the generator parameters.
//!
//! Angles are in degrees and lengths in torso units unless stated otherwise.

use alloc::format;
use alloc::vec::Vec;
use core::f64::consts::PI;

use rand::Rng;
use rand_distr::{Distribution, Normal};

use crate::keypoints::{Joint, Label, Part, Pose, PoseSequence, Side, JOINT_COUNT};

const UPPER_ARM: f64 = 0.55;
const FOREARM: f64 = 0.5;

/// Where the figure stands and how large it is.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Placement {
    /// Neck position at rest, pixels.
    pub neck: (f64, f64),
    /// Neck-to-hip distance, pixels.
    pub torso_px: f64,
}

impl Default for Placement {
    fn default() -> Self {
        Placement {
            neck: (320.0, 160.0),
            torso_px: 200.0,
        }
    }
}

/// Timing of the movement.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Timing {
    /// Frames held at rest and at the top of every repetition.
    pub hold: usize,
    /// Frames spent raising (and again lowering).
    pub ramp: usize,
    pub reps: usize,
}

impl Default for Timing {
    fn default() -> Self {
        Timing {
            hold: 6,
            ramp: 16,
            reps: 1,
        }
    }
}

impl Timing {
    /// Movement progress per frame in `[0, 1]`: rest, raise, hold at top,
    /// lower, repeated, ending at rest.
    pub fn profile(&self) -> Vec<f64> {
        let ramp = self.ramp.max(1);
        let mut out = Vec::new();
        for _ in 0..self.reps.max(1) {
            out.extend(core::iter::repeat_n(0.0, self.hold));
            out.extend((1..ramp).map(|k| ease(k as f64 / ramp as f64)));
            out.extend(core::iter::repeat_n(1.0, self.hold));
            out.extend((1..ramp).map(|k| ease(1.0 - k as f64 / ramp as f64)));
        }
        out.extend(core::iter::repeat_n(0.0, self.hold));
        out
    }
}

fn ease(t: f64) -> f64 {
    (1.0 - libm::cos(PI * t)) / 2.0
}

fn lerp(a: f64, b: f64, s: f64) -> f64 {
    a + (b - a) * s
}

/// Unit vector at `deg` from straight down, rotated toward +x.
fn down_rotated(deg: f64) -> (f64, f64) {
    let r = deg.to_radians();
    (libm::sin(r), libm::cos(r))
}

/// Rotates `v` by `deg` toward +x (clockwise on screen).
fn rotate_forward(v: (f64, f64), deg: f64) -> (f64, f64) {
    let r = deg.to_radians();
    let (s, c) = (libm::sin(r), libm::cos(r));
    (v.0 * c + v.1 * s, -v.0 * s + v.1 * c)
}

fn offset(p: (f64, f64), dir: (f64, f64), len: f64) -> (f64, f64) {
    (p.0 + dir.0 * len, p.1 + dir.1 * len)
}

struct Figure {
    parts: [Part; JOINT_COUNT],
}

impl Figure {
    fn new() -> Figure {
        Figure {
            parts: [Part::invisible(); JOINT_COUNT],
        }
    }

    fn set(&mut self, joint: Joint, p: (f64, f64), confidence: f64) -> &mut Self {
        self.parts[joint.index()] = Part::new(p.0, p.1, confidence);
        self
    }

    fn pose(&self) -> Pose {
        Pose::new(self.parts, 0)
    }
}

/// Head and legs of a side-view figure facing +x.
fn side_view_body(fig: &mut Figure, neck: (f64, f64), hip: (f64, f64), t: f64, near: f64, far: f64) {
    fig.set(Joint::Nose, (neck.0 + 0.18 * t, neck.1 - 0.3 * t), near)
        .set(Joint::REye, (neck.0 + 0.14 * t, neck.1 - 0.36 * t), near)
        .set(Joint::REar, (neck.0 + 0.02 * t, neck.1 - 0.33 * t), near)
        .set(Joint::LEye, (neck.0 + 0.15 * t, neck.1 - 0.36 * t), far)
        .set(Joint::RKnee, (hip.0 + 0.02 * t, hip.1 + 0.9 * t), near)
        .set(Joint::RAnkle, (hip.0, hip.1 + 1.8 * t), near)
        .set(Joint::LKnee, (hip.0 + 0.03 * t, hip.1 + 0.9 * t), far)
        .set(Joint::LAnkle, (hip.0 + 0.01 * t, hip.1 + 1.8 * t), far);
}

/// Single-arm bicep curl filmed from the side.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct CurlSpec {
    /// Arm performing the curl. Right faces +x; Left is the mirror image.
    pub side: Side,
    /// Upper-arm/torso angle at rest.
    pub base_angle: f64,
    /// Extra upper-arm rotation reached at the top; equals the reported
    /// angle range.
    pub swing: f64,
    /// Elbow angle at rest.
    pub rest_elbow: f64,
    /// Elbow angle at the top; equals the reported minimum.
    pub min_elbow: f64,
    pub confidence: f64,
    /// Confidence of the arm facing away from the camera.
    pub off_side_confidence: f64,
    pub timing: Timing,
    pub placement: Placement,
}

impl Default for CurlSpec {
    fn default() -> Self {
        CurlSpec {
            side: Side::Right,
            base_angle: 5.0,
            swing: 10.0,
            rest_elbow: 165.0,
            min_elbow: 40.0,
            confidence: 0.9,
            off_side_confidence: 0.2,
            timing: Timing::default(),
            placement: Placement::default(),
        }
    }
}

impl CurlSpec {
    pub fn generate(&self, source_id: &str) -> PoseSequence {
        let t = self.placement.torso_px;
        let neck = self.placement.neck;
        let hip = (neck.0, neck.1 + t);
        let frames = self
            .timing
            .profile()
            .into_iter()
            .map(|s| {
                let theta = self.base_angle + self.swing * s;
                let phi = lerp(self.rest_elbow, self.min_elbow, s);
                let shoulder = (neck.0, neck.1 + 0.05 * t);
                let elbow = offset(shoulder, down_rotated(theta), UPPER_ARM * t);
                let wrist = offset(elbow, down_rotated(theta + 180.0 - phi), FOREARM * t);
                let (near, far) = (self.confidence, self.off_side_confidence);
                let mut fig = Figure::new();
                fig.set(Joint::Neck, neck, near)
                    .set(Joint::RHip, hip, near)
                    .set(Joint::LHip, hip, far.max(0.05))
                    .set(Joint::RShoulder, shoulder, near)
                    .set(Joint::RElbow, elbow, near)
                    .set(Joint::RWrist, wrist, near)
                    .set(Joint::LShoulder, (shoulder.0 - 0.02 * t, shoulder.1), far)
                    .set(Joint::LElbow, (elbow.0 - 0.02 * t, elbow.1), far)
                    .set(Joint::LWrist, (wrist.0 - 0.02 * t, wrist.1), far);
                side_view_body(&mut fig, neck, hip, t, near, far.max(0.05));
                fig.pose()
            })
            .collect();
        let seq = PoseSequence::from_poses(frames, source_id);
        match self.side {
            Side::Left => seq.mirrored(neck.0),
            _ => seq,
        }
    }
}

/// Two-arm front raise filmed from the side, facing +x.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct FrontRaiseSpec {
    /// Torso/arm angle at rest.
    pub rest_angle: f64,
    /// Torso/arm angle at the top.
    pub max_angle: f64,
    /// Horizontal neck displacement at the top.
    pub sway: f64,
    pub timing: Timing,
    pub placement: Placement,
}

impl Default for FrontRaiseSpec {
    fn default() -> Self {
        FrontRaiseSpec {
            rest_angle: 10.0,
            max_angle: 100.0,
            sway: 0.02,
            timing: Timing::default(),
            placement: Placement::default(),
        }
    }
}

impl FrontRaiseSpec {
    pub fn generate(&self, source_id: &str) -> PoseSequence {
        let t = self.placement.torso_px;
        let rest_neck = self.placement.neck;
        let hip = (rest_neck.0, rest_neck.1 + t);
        let frames = self
            .timing
            .profile()
            .into_iter()
            .map(|s| {
                let neck = (rest_neck.0 + self.sway * t * s, rest_neck.1);
                let len = libm::hypot(hip.0 - neck.0, hip.1 - neck.1);
                let down = ((hip.0 - neck.0) / len, (hip.1 - neck.1) / len);
                let arm = rotate_forward(down, lerp(self.rest_angle, self.max_angle, s));
                let shoulder = offset(neck, down, 0.05 * t);
                let elbow = offset(shoulder, arm, UPPER_ARM * t);
                let wrist = offset(shoulder, arm, (UPPER_ARM + FOREARM) * t);
                let mut fig = Figure::new();
                fig.set(Joint::Neck, neck, 0.9)
                    .set(Joint::RHip, hip, 0.9)
                    .set(Joint::LHip, hip, 0.6)
                    .set(Joint::RShoulder, shoulder, 0.9)
                    .set(Joint::RElbow, elbow, 0.9)
                    .set(Joint::RWrist, wrist, 0.9)
                    .set(Joint::LShoulder, shoulder, 0.6)
                    .set(Joint::LElbow, elbow, 0.6)
                    .set(Joint::LWrist, wrist, 0.6);
                side_view_body(&mut fig, neck, hip, t, 0.9, 0.6);
                fig.pose()
            })
            .collect();
        PoseSequence::from_poses(frames, source_id)
    }
}

/// Shoulder shrug filmed from the front.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct ShrugSpec {
    /// Vertical shoulder travel.
    pub range: f64,
    /// Elbow angle at rest.
    pub rest_elbow: f64,
    /// Elbow angle at the top; equals the reported minimum.
    pub min_elbow: f64,
    pub timing: Timing,
    pub placement: Placement,
}

impl Default for ShrugSpec {
    fn default() -> Self {
        ShrugSpec {
            range: 0.12,
            rest_elbow: 178.0,
            min_elbow: 172.0,
            timing: Timing::default(),
            placement: Placement::default(),
        }
    }
}

impl ShrugSpec {
    pub fn generate(&self, source_id: &str) -> PoseSequence {
        let t = self.placement.torso_px;
        let neck = self.placement.neck;
        // hips placed so each neck-to-hip distance is exactly one torso
        let hip_dx = 0.2 * t;
        let hip_dy = libm::sqrt(t * t - hip_dx * hip_dx);
        let frames = self
            .timing
            .profile()
            .into_iter()
            .map(|s| {
                let lift = self.range * t * s;
                let bend = 180.0 - lerp(self.rest_elbow, self.min_elbow, s);
                let mut fig = Figure::new();
                fig.set(Joint::Neck, neck, 0.9)
                    .set(Joint::Nose, (neck.0, neck.1 - 0.3 * t), 0.9)
                    .set(Joint::REye, (neck.0 - 0.06 * t, neck.1 - 0.36 * t), 0.9)
                    .set(Joint::LEye, (neck.0 + 0.06 * t, neck.1 - 0.36 * t), 0.9);
                // subject's right arm appears at smaller x
                for (sign, [shoulder_j, elbow_j, wrist_j], hip_j) in [
                    (-1.0, [Joint::RShoulder, Joint::RElbow, Joint::RWrist], Joint::RHip),
                    (1.0, [Joint::LShoulder, Joint::LElbow, Joint::LWrist], Joint::LHip),
                ] {
                    let shoulder = (neck.0 + sign * 0.4 * t, neck.1 + 0.05 * t - lift);
                    let elbow = offset(shoulder, (0.0, 1.0), UPPER_ARM * t);
                    // forearm bends toward the midline
                    let (fx, fy) = down_rotated(bend);
                    let wrist = offset(elbow, (-sign * fx, fy), FOREARM * t);
                    let hip = (neck.0 + sign * hip_dx, neck.1 + hip_dy);
                    fig.set(shoulder_j, shoulder, 0.9)
                        .set(elbow_j, elbow, 0.9)
                        .set(wrist_j, wrist, 0.9)
                        .set(hip_j, hip, 0.9);
                }
                fig.pose()
            })
            .collect();
        PoseSequence::from_poses(frames, source_id)
    }
}

/// Two-arm shoulder press filmed from the side, facing +x.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct PressSpec {
    /// Horizontal neck displacement at the top.
    pub back_range: f64,
    /// Upper-arm angle from straight up at the top; negative tilts the elbow
    /// behind the neck.
    pub top_lean: f64,
    /// Elbow angle at the top; equals the reported maximum.
    pub max_elbow: f64,
    pub timing: Timing,
    pub placement: Placement,
}

impl Default for PressSpec {
    fn default() -> Self {
        PressSpec {
            back_range: 0.03,
            top_lean: 10.0,
            max_elbow: 170.0,
            timing: Timing::default(),
            placement: Placement::default(),
        }
    }
}

impl PressSpec {
    const REST_UPPER_ARM: f64 = 70.0;
    const REST_ELBOW: f64 = 90.0;

    pub fn generate(&self, source_id: &str) -> PoseSequence {
        let t = self.placement.torso_px;
        let rest_neck = self.placement.neck;
        let hip = (rest_neck.0, rest_neck.1 + t);
        let frames = self
            .timing
            .profile()
            .into_iter()
            .map(|s| {
                let neck = (rest_neck.0 + self.back_range * t * s, rest_neck.1);
                let delta = lerp(Self::REST_UPPER_ARM, 180.0 - self.top_lean, s);
                let phi = lerp(Self::REST_ELBOW, self.max_elbow, s);
                let shoulder = (neck.0, neck.1 + 0.05 * t);
                let elbow = offset(shoulder, down_rotated(delta), UPPER_ARM * t);
                let wrist = offset(elbow, down_rotated(delta + 180.0 - phi), FOREARM * t);
                let mut fig = Figure::new();
                fig.set(Joint::Neck, neck, 0.9)
                    .set(Joint::RHip, hip, 0.9)
                    .set(Joint::LHip, hip, 0.6)
                    .set(Joint::RShoulder, shoulder, 0.9)
                    .set(Joint::RElbow, elbow, 0.9)
                    .set(Joint::RWrist, wrist, 0.9)
                    .set(Joint::LShoulder, shoulder, 0.6)
                    .set(Joint::LElbow, elbow, 0.6)
                    .set(Joint::LWrist, wrist, 0.6);
                side_view_body(&mut fig, neck, hip, t, 0.9, 0.6);
                fig.pose()
            })
            .collect();
        PoseSequence::from_poses(frames, source_id)
    }
}

/// Estimator-style corruption applied to visible keypoints.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Corruption {
    /// Gaussian jitter standard deviation, torso units.
    pub sigma: f64,
    /// Probability that a keypoint in a frame is replaced by a spike.
    pub spike_probability: f64,
    /// Spike displacement, torso units.
    pub spike_magnitude: f64,
}

impl Corruption {
    pub const NONE: Corruption = Corruption {
        sigma: 0.0,
        spike_probability: 0.0,
        spike_magnitude: 0.0,
    };

    /// Applies jitter and spikes; `torso_px` converts torso units to pixels.
    pub fn apply<R: Rng + ?Sized>(&self, seq: &PoseSequence, torso_px: f64, rng: &mut R) -> PoseSequence {
        let sigma = self.sigma * torso_px;
        let normal = Normal::new(0.0, if sigma > 0.0 { sigma } else { 1.0 }).ok();
        let frames = seq
            .frames()
            .iter()
            .map(|pose| {
                pose.map_points(|x, y| {
                    let (mut x, mut y) = (x, y);
                    if sigma > 0.0 {
                        if let Some(n) = &normal {
                            x += n.sample(rng);
                            y += n.sample(rng);
                        }
                    }
                    if self.spike_probability > 0.0 && rng.gen_bool(self.spike_probability.min(1.0)) {
                        let angle = rng.gen_range(0.0..2.0 * PI);
                        let len = self.spike_magnitude * torso_px;
                        x += len * libm::cos(angle);
                        y += len * libm::sin(angle);
                    }
                    (x, y)
                })
            })
            .collect();
        PoseSequence::from_poses(frames, seq.source_id()).with_frames_per_second(seq.frames_per_second())
    }
}

/// One labelled synthetic sequence and the parameters that produced it.
#[derive(Debug, Clone, PartialEq)]
pub struct SyntheticCurl {
    pub spec: CurlSpec,
    pub label: Label,
    pub sequence: PoseSequence,
}

/// Labelled bicep curls for the classification experiment.
///
/// Correct curls swing the upper arm by 3–18° and close the elbow to 30–55°.
/// Incorrect curls swing 40–60°, stop the elbow at 85–110°, or both. Side,
/// size, position and tempo are randomized; every sequence then receives
/// `corruption`.
pub fn bicep_dataset<R: Rng + ?Sized>(
    rng: &mut R,
    correct: usize,
    incorrect: usize,
    corruption: Corruption,
) -> Vec<SyntheticCurl> {
    let mut out = Vec::with_capacity(correct + incorrect);
    for i in 0..correct + incorrect {
        let label = if i < correct { Label::Correct } else { Label::Incorrect };
        let (swing, min_elbow) = match label {
            Label::Correct => (rng.gen_range(3.0..18.0), rng.gen_range(30.0..55.0)),
            Label::Incorrect => match rng.gen_range(0..3) {
                0 => (rng.gen_range(40.0..60.0), rng.gen_range(30.0..55.0)),
                1 => (rng.gen_range(3.0..18.0), rng.gen_range(85.0..110.0)),
                _ => (rng.gen_range(40.0..60.0), rng.gen_range(85.0..110.0)),
            },
        };
        let torso_px = rng.gen_range(120.0..260.0);
        let spec = CurlSpec {
            side: if rng.gen_bool(0.5) { Side::Left } else { Side::Right },
            base_angle: rng.gen_range(0.0..8.0),
            swing,
            rest_elbow: rng.gen_range(155.0..172.0),
            min_elbow,
            confidence: rng.gen_range(0.7..0.95),
            off_side_confidence: rng.gen_range(0.05..0.3),
            timing: Timing {
                hold: rng.gen_range(4..10),
                ramp: rng.gen_range(12..26),
                reps: 1,
            },
            placement: Placement {
                neck: (rng.gen_range(200.0..440.0), rng.gen_range(80.0..200.0)),
                torso_px,
            },
        };
        let name = format!("bicep_{}_{}", if label == Label::Correct { "good" } else { "bad" }, i);
        let clean = spec.generate(&name);
        let sequence = corruption.apply(&clean, torso_px, rng);
        out.push(SyntheticCurl { spec, label, sequence });
    }
    out
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn profile_holds_extremes() {
        let p = Timing { hold: 4, ramp: 5, reps: 2 }.profile();
        assert_eq!(p.len(), 2 * (4 + 4 + 4 + 4) + 4);
        assert_eq!(&p[..4], &[0.0; 4]);
        assert_eq!(&p[8..12], &[1.0; 4]);
        assert!(p.iter().all(|s| (0.0..=1.0).contains(s)));
    }

    #[test]
    fn left_curl_mirrors_right() {
        let right = CurlSpec::default().generate("r");
        let left = CurlSpec { side: Side::Left, ..CurlSpec::default() }.generate("r");
        assert_eq!(left, right.mirrored(CurlSpec::default().placement.neck.0));
    }

    #[test]
    fn corruption_none_is_identity() {
        let mut rng = rand_chacha::ChaCha8Rng::seed_from_u64(1);
        let seq = CurlSpec::default().generate("x");
        assert_eq!(Corruption::NONE.apply(&seq, 200.0, &mut rng), seq);
    }

    use rand::SeedableRng;
}
