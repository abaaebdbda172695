//! Body-vector math, torso normalization, perspective detection and
//! per-frame series smoothing.

mod filter;
mod normalize;

pub use filter::{fill_gaps, median_filter, smooth, smooth_with, Series, SMOOTHING_PASSES, SMOOTHING_WINDOW};
pub use normalize::{detect_side, normalize_sequence, prepare, NormalizedSequence};

use crate::error::{Error, Result};
use crate::keypoints::{Joint, Part, Pose};

/// A 2D displacement between two keypoints.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Vec2 {
    pub dx: f64,
    pub dy: f64,
}

impl Vec2 {
    pub const fn new(dx: f64, dy: f64) -> Vec2 {
        Vec2 { dx, dy }
    }

    /// Vector from `from` to `to`, or `None` if either part is invisible.
    pub fn between(from: &Part, to: &Part) -> Option<Vec2> {
        (from.visible && to.visible).then(|| Vec2::new(to.x - from.x, to.y - from.y))
    }

    pub fn joints(pose: &Pose, from: Joint, to: Joint) -> Option<Vec2> {
        Vec2::between(pose.part(from), pose.part(to))
    }

    pub fn dot(self, other: Vec2) -> f64 {
        self.dx * other.dx + self.dy * other.dy
    }

    pub fn norm(self) -> f64 {
        libm::hypot(self.dx, self.dy)
    }
}

/// Unsigned angle between two vectors in degrees, in `[0, 180]`.
pub fn angle_between(u: Vec2, v: Vec2) -> Result<f64> {
    let nu = u.norm();
    let nv = v.norm();
    if !(nu > 0.0 && nv > 0.0) || !nu.is_finite() || !nv.is_finite() {
        return Err(Error::DegenerateVector);
    }
    // atan2 of (|cross|, dot) equals the arccos of the normalized dot product
    // but stays well conditioned near 0 and 180 degrees.
    let cross = u.dx * v.dy - u.dy * v.dx;
    Ok(libm::atan2(libm::fabs(cross), u.dot(v)).to_degrees().clamp(0.0, 180.0))
}

fn distance(a: &Part, b: &Part) -> f64 {
    libm::hypot(b.x - a.x, b.y - a.y)
}

/// Mean neck-to-hip distance over the visible hips.
pub fn torso_length(pose: &Pose) -> Result<f64> {
    let neck = pose.visible(Joint::Neck).ok_or(Error::UndefinedTorso)?;
    let (sum, count) = [Joint::RHip, Joint::LHip]
        .into_iter()
        .filter_map(|hip| pose.visible(hip))
        .fold((0.0, 0), |(sum, count), hip| (sum + distance(neck, hip), count + 1));
    if count == 0 {
        return Err(Error::UndefinedTorso);
    }
    Ok(sum / count as f64)
}

/// Midpoint of the visible hips.
pub fn hip_center(pose: &Pose) -> Option<(f64, f64)> {
    let (sx, sy, n) = [Joint::RHip, Joint::LHip]
        .into_iter()
        .filter_map(|hip| pose.visible(hip))
        .fold((0.0, 0.0, 0u32), |(sx, sy, n), p| (sx + p.x, sy + p.y, n + 1));
    (n > 0).then(|| (sx / f64::from(n), sy / f64::from(n)))
}

/// Neck-to-hip-center vector.
pub fn torso_vector(pose: &Pose) -> Option<Vec2> {
    let neck = pose.visible(Joint::Neck)?;
    let (hx, hy) = hip_center(pose)?;
    Some(Vec2::new(hx - neck.x, hy - neck.y))
}
