use alloc::string::{String, ToString};

use crate::error::{Error, Result};
use crate::keypoints::ExerciseKind;

#[derive(Debug, Clone, Copy, PartialEq)]
#[cfg_attr(feature = "serde", derive(serde::Serialize, serde::Deserialize))]
pub struct BicepCurlThresholds {
    /// Largest allowed range of the upper-arm/torso angle, degrees.
    pub upper_arm_range: f64,
    /// The elbow angle must drop strictly below this, degrees.
    pub curl_min: f64,
}

#[derive(Debug, Clone, Copy, PartialEq)]
#[cfg_attr(feature = "serde", derive(serde::Serialize, serde::Deserialize))]
pub struct FrontRaiseThresholds {
    /// Torso units.
    pub back_sway: f64,
    /// Degrees between torso and arm that must be reached.
    pub raise_angle: f64,
}

#[derive(Debug, Clone, Copy, PartialEq)]
#[cfg_attr(feature = "serde", derive(serde::Serialize, serde::Deserialize))]
pub struct ShoulderShrugThresholds {
    /// Minimum vertical shoulder travel, torso units.
    pub shrug_range: f64,
    /// Elbow angle must stay at or above this, degrees.
    pub straight_arm: f64,
}

#[derive(Debug, Clone, Copy, PartialEq)]
#[cfg_attr(feature = "serde", derive(serde::Serialize, serde::Deserialize))]
pub struct ShoulderPressThresholds {
    /// Torso units.
    pub back_sway: f64,
    /// How far an elbow may drift behind the neck, torso units.
    pub elbow_back: f64,
    /// Elbow angle that must be reached at the top, degrees.
    pub lockout_angle: f64,
}

/// Per-exercise rule thresholds.
///
/// Only the bicep curl values come from measured data; the rest are
/// engineering defaults and meant to be tuned through a config file.
#[derive(Debug, Clone, Copy, PartialEq)]
#[cfg_attr(feature = "serde", derive(serde::Serialize, serde::Deserialize))]
pub struct ThresholdConfig {
    pub bicep_curl: BicepCurlThresholds,
    pub front_raise: FrontRaiseThresholds,
    pub shoulder_shrug: ShoulderShrugThresholds,
    pub shoulder_press: ShoulderPressThresholds,
}

impl Default for ThresholdConfig {
    fn default() -> Self {
        ThresholdConfig {
            bicep_curl: BicepCurlThresholds {
                upper_arm_range: 35.0,
                curl_min: 70.0,
            },
            front_raise: FrontRaiseThresholds {
                back_sway: 0.15,
                raise_angle: 90.0,
            },
            shoulder_shrug: ShoulderShrugThresholds {
                shrug_range: 0.08,
                straight_arm: 150.0,
            },
            shoulder_press: ShoulderPressThresholds {
                back_sway: 0.15,
                elbow_back: 0.05,
                lockout_angle: 150.0,
            },
        }
    }
}

#[derive(Clone, Copy, PartialEq, Eq)]
enum Kind {
    Angle,
    Length,
}

impl ThresholdConfig {
    /// Every `exercise.rule` key accepted by [`ThresholdConfig::set`].
    pub const KEYS: [&'static str; 9] = [
        "bicep_curl.upper_arm_range",
        "bicep_curl.curl_min",
        "front_raise.back_sway",
        "front_raise.raise_angle",
        "shoulder_shrug.shrug_range",
        "shoulder_shrug.straight_arm",
        "shoulder_press.back_sway",
        "shoulder_press.elbow_back",
        "shoulder_press.lockout_angle",
    ];

    fn slot(&mut self, key: &str) -> Option<(&mut f64, Kind)> {
        let (exercise, rule) = key.split_once('.')?;
        let exercise: ExerciseKind = exercise.parse().ok()?;
        Some(match (exercise, rule) {
            (ExerciseKind::BicepCurl, "upper_arm_range") => (&mut self.bicep_curl.upper_arm_range, Kind::Angle),
            (ExerciseKind::BicepCurl, "curl_min") => (&mut self.bicep_curl.curl_min, Kind::Angle),
            (ExerciseKind::FrontRaise, "back_sway") => (&mut self.front_raise.back_sway, Kind::Length),
            (ExerciseKind::FrontRaise, "raise_angle") => (&mut self.front_raise.raise_angle, Kind::Angle),
            (ExerciseKind::ShoulderShrug, "shrug_range") => (&mut self.shoulder_shrug.shrug_range, Kind::Length),
            (ExerciseKind::ShoulderShrug, "straight_arm") => (&mut self.shoulder_shrug.straight_arm, Kind::Angle),
            (ExerciseKind::ShoulderPress, "back_sway") => (&mut self.shoulder_press.back_sway, Kind::Length),
            (ExerciseKind::ShoulderPress, "elbow_back") => (&mut self.shoulder_press.elbow_back, Kind::Length),
            (ExerciseKind::ShoulderPress, "lockout_angle") => (&mut self.shoulder_press.lockout_angle, Kind::Angle),
            _ => return None,
        })
    }

    pub fn get(&self, key: &str) -> Result<f64> {
        let mut copy = *self;
        copy.slot(key)
            .map(|(v, _)| *v)
            .ok_or_else(|| Error::UnknownKey(key.into()))
    }

    /// Overrides one threshold. Angles must lie in `(0, 180)`, lengths must
    /// be finite and non-negative.
    pub fn set(&mut self, key: &str, value: f64) -> Result<()> {
        let (slot, kind) = self.slot(key).ok_or_else(|| Error::UnknownKey(key.into()))?;
        let valid = value.is_finite()
            && match kind {
                Kind::Angle => value > 0.0 && value < 180.0,
                Kind::Length => value >= 0.0,
            };
        if !valid {
            return Err(Error::InvalidThreshold {
                key: key.to_string(),
                value,
            });
        }
        *slot = value;
        Ok(())
    }

    /// Renders the config in the `exercise.rule = value` file format.
    pub fn to_text(&self) -> String {
        let mut out = String::new();
        for key in Self::KEYS {
            // get cannot fail for listed keys
            let value = self.get(key).unwrap_or(f64::NAN);
            out.push_str(&alloc::format!("{key} = {value}\n"));
        }
        out
    }
}
