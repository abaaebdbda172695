//! File formats, pose estimator ingestion and the `posetrainer` command line
//! on top of `posetrainer-core`.

pub mod cli;
pub mod config;
pub mod dataset;
pub mod error;
pub mod openpose;
pub mod record;
pub mod store;

pub use error::{Error, Result};
