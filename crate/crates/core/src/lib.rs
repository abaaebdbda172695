//! Exercise form evaluation from 2D pose keypoint sequences.
//!
//! The pipeline runs in four stages:
//!
//! 1. [`keypoints`]: typed 18-joint poses and sequences.
//! 2. [`geometry`]: torso-length normalization, perspective detection,
//!    gap filling and median smoothing.
//! 3. [`heuristics`]: per-exercise geometric rules with thresholds and
//!    user-facing feedback.
//! 4. [`classifier`]: DTW distance, 1-nearest-neighbour labelling and a
//!    train/test harness with precision, recall and F1.
//!
//! [`synthetic`] generates sequences with known form parameters for testing.
//!
//! The crate is `no_std` and only needs `alloc`. File formats, estimator
//! invocation and the command-line interface live in the `posetrainer` crate.

#![cfg_attr(not(test), no_std)]

extern crate alloc;

pub mod classifier;
pub mod error;
pub mod geometry;
pub mod heuristics;
pub mod keypoints;
pub mod synthetic;

pub use error::{Error, Result};
pub use keypoints::{Arm, ExerciseKind, Joint, Label, Part, Pose, PoseSequence, Side};
