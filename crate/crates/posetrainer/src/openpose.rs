//! Reading the pose estimator's per-frame JSON output and running the
//! estimator on a video.
//!
//! Each frame file holds `{"people": [{"pose_keypoints_2d": [x0, y0, c0, ...]}]}`
//! with 54 numbers per person in COCO-18 order.

use std::path::{Path, PathBuf};
use std::process::Command;

use posetrainer_core::keypoints::JOINT_COUNT;
use posetrainer_core::{Pose, PoseSequence};
use serde::Deserialize;

use crate::error::{Error, Result};

pub const DEFAULT_FRAME_GLOB: &str = "*.json";
pub const ESTIMATOR_ENV: &str = "POSETRAINER_OPENPOSE_BIN";

#[derive(Deserialize)]
struct FrameFile {
    people: Vec<Person>,
}

#[derive(Deserialize)]
struct Person {
    pose_keypoints_2d: Vec<f64>,
}

/// Parses one frame file and keeps the person with the highest summed
/// confidence. Ties keep the earlier entry.
pub fn parse_frame_file(content: &str) -> Result<Pose> {
    parse_frame_bytes(content.as_bytes())
}

pub fn parse_frame_bytes(content: &[u8]) -> Result<Pose> {
    let frame: FrameFile = serde_json::from_slice(content).map_err(|e| Error::Parse(e.to_string()))?;
    let mut best: Option<(f64, &[f64])> = None;
    for (i, person) in frame.people.iter().enumerate() {
        let kp = &person.pose_keypoints_2d;
        if kp.len() != JOINT_COUNT * 3 {
            return Err(Error::Parse(format!(
                "person {i} has {} keypoint values, expected {} (COCO-18 layout)",
                kp.len(),
                JOINT_COUNT * 3
            )));
        }
        if let Some(v) = kp.iter().find(|v| !v.is_finite()) {
            return Err(Error::Parse(format!("person {i} has non-finite value {v}")));
        }
        if let Some(c) = kp.iter().skip(2).step_by(3).find(|c| !(0.0..=1.0).contains(*c)) {
            return Err(Error::Parse(format!("person {i} has confidence {c} outside [0, 1]")));
        }
        let total: f64 = kp.iter().skip(2).step_by(3).sum();
        if best.is_none_or(|(b, _)| total > b) {
            best = Some((total, kp));
        }
    }
    let (_, kp) = best.ok_or(Error::EmptyFrame)?;
    Ok(Pose::from_flat(kp, 0)?)
}

/// Frames that made it into a sequence and the files that were skipped for
/// having no person.
#[derive(Debug)]
pub struct LoadReport {
    pub sequence: PoseSequence,
    pub dropped: Vec<PathBuf>,
}

/// Loads frame files in the given order. Files without a person are dropped
/// with a warning; any other problem aborts.
pub fn load_sequence<P: AsRef<Path>>(paths: &[P], source_id: &str) -> Result<LoadReport> {
    let mut frames = Vec::with_capacity(paths.len());
    let mut dropped = Vec::new();
    for path in paths {
        let path = path.as_ref();
        let bytes = std::fs::read(path).map_err(Error::io(path))?;
        match parse_frame_bytes(&bytes) {
            Ok(pose) => frames.push(pose),
            Err(Error::EmptyFrame) => {
                log::warn!("{}: no person detected, frame dropped", path.display());
                dropped.push(path.to_path_buf());
            }
            Err(e) => return Err(e.in_file(path)),
        }
    }
    if frames.len() < 2 {
        return Err(posetrainer_core::Error::InsufficientData {
            needed: 2,
            got: frames.len(),
        }
        .into());
    }
    Ok(LoadReport {
        sequence: PoseSequence::from_poses(frames, source_id),
        dropped,
    })
}

/// Frame files in `dir` matching `pattern`, in file-name order.
pub fn frame_files(dir: &Path, pattern: &str) -> Result<Vec<PathBuf>> {
    if !dir.is_dir() {
        return Err(Error::InFile {
            path: dir.to_path_buf(),
            message: "not a directory".into(),
        });
    }
    let full = dir.join(pattern);
    let full = full
        .to_str()
        .ok_or_else(|| Error::Usage(format!("non UTF-8 path {}", dir.display())))?;
    let entries = glob::glob(full).map_err(|e| Error::Usage(format!("bad frame glob {pattern:?}: {e}")))?;
    let mut files: Vec<PathBuf> = entries.filter_map(|e| e.ok()).filter(|p| p.is_file()).collect();
    files.sort_by(|a, b| a.file_name().cmp(&b.file_name()));
    Ok(files)
}

/// Loads a folder of frame files; the folder name becomes the source id.
pub fn load_folder(dir: &Path, pattern: &str) -> Result<LoadReport> {
    let files = frame_files(dir, pattern)?;
    load_sequence(&files, &source_id_for(dir)).map_err(|e| e.in_file(dir))
}

pub(crate) fn source_id_for(path: &Path) -> String {
    path.file_stem()
        .or_else(|| path.file_name())
        .map(|s| s.to_string_lossy().into_owned())
        .unwrap_or_else(|| "sequence".into())
}

/// Runs the estimator on `video`, writing frame files into `out_dir`.
pub fn run_estimator(bin: &Path, video: &Path, out_dir: &Path) -> Result<()> {
    if !video.is_file() {
        return Err(Error::InFile {
            path: video.to_path_buf(),
            message: "video file not found".into(),
        });
    }
    let status = Command::new(bin)
        .arg("--video")
        .arg(video)
        .arg("--write_json")
        .arg(out_dir)
        .args(["--model_pose", "COCO", "--display", "0", "--render_pose", "0"])
        .status()
        .map_err(|e| Error::Estimator(format!("cannot run {}: {e}", bin.display())))?;
    if !status.success() {
        return Err(Error::Estimator(format!("{} exited with {status}", bin.display())));
    }
    Ok(())
}

/// Runs the estimator into a temporary directory and loads the frames.
pub fn load_video(bin: &Path, video: &Path, pattern: &str) -> Result<LoadReport> {
    let dir = tempfile::tempdir().map_err(Error::io(std::env::temp_dir()))?;
    run_estimator(bin, video, dir.path())?;
    let files = frame_files(dir.path(), pattern)?;
    load_sequence(&files, &source_id_for(video))
}
