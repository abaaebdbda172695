//! Saved sequence files.
//!
//! ```json
//! {"schema_version": 1, "source_id": "curl_good_1", "frames_per_second": 30.0,
//!  "frames": [{"frame_index": 0, "keypoints": [x0, y0, c0, ...]}]}
//! ```

use std::path::Path;

use posetrainer_core::{Pose, PoseSequence};
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

pub const SEQUENCE_SCHEMA_VERSION: u64 = 1;

#[derive(Serialize, Deserialize)]
struct SavedFrame {
    frame_index: usize,
    keypoints: Vec<f64>,
}

#[derive(Serialize, Deserialize)]
struct SavedSequence {
    schema_version: u64,
    source_id: String,
    frames_per_second: Option<f64>,
    frames: Vec<SavedFrame>,
}

#[derive(Deserialize)]
struct VersionProbe {
    schema_version: u64,
}

pub fn sequence_to_string(seq: &PoseSequence) -> Result<String> {
    let saved = SavedSequence {
        schema_version: SEQUENCE_SCHEMA_VERSION,
        source_id: seq.source_id().into(),
        frames_per_second: seq.frames_per_second(),
        frames: seq
            .frames()
            .iter()
            .map(|p| SavedFrame {
                frame_index: p.frame_index,
                keypoints: p.to_flat(),
            })
            .collect(),
    };
    if saved.frames.iter().flat_map(|f| &f.keypoints).any(|v| !v.is_finite()) {
        return Err(Error::Parse("cannot save non-finite keypoint values".into()));
    }
    serde_json::to_string(&saved).map_err(|e| Error::Parse(e.to_string()))
}

pub fn sequence_from_str(text: &str) -> Result<PoseSequence> {
    check_version(text, SEQUENCE_SCHEMA_VERSION)?;
    let saved: SavedSequence = serde_json::from_str(text).map_err(|e| Error::Parse(e.to_string()))?;
    let frames = saved
        .frames
        .iter()
        .map(|f| {
            if f.keypoints.iter().any(|v| !v.is_finite()) {
                return Err(Error::Parse(format!("frame {} has non-finite values", f.frame_index)));
            }
            Ok(Pose::from_flat(&f.keypoints, f.frame_index)?)
        })
        .collect::<Result<Vec<_>>>()?;
    Ok(PoseSequence::new(frames, saved.source_id)?.with_frames_per_second(saved.frames_per_second))
}

/// Rejects documents whose `schema_version` is not `expected` before the
/// rest of the document is interpreted.
pub(crate) fn check_version(text: &str, expected: u64) -> Result<()> {
    let probe: VersionProbe = serde_json::from_str(text).map_err(|e| Error::Parse(e.to_string()))?;
    if probe.schema_version != expected {
        return Err(Error::SchemaVersion {
            found: probe.schema_version,
            expected,
        });
    }
    Ok(())
}

pub fn save_sequence(seq: &PoseSequence, path: &Path) -> Result<()> {
    let text = sequence_to_string(seq)?;
    std::fs::write(path, text).map_err(Error::io(path))
}

pub fn load_saved(path: &Path) -> Result<PoseSequence> {
    let text = std::fs::read_to_string(path).map_err(Error::io(path))?;
    sequence_from_str(&text).map_err(|e| e.in_file(path))
}
