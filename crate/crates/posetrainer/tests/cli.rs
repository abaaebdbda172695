use std::path::{Path, PathBuf};

use posetrainer::cli::{main_with, EXIT_ERROR, EXIT_INCORRECT, EXIT_OK};
use posetrainer::dataset::DatasetIndex;
use posetrainer::record::EvaluationRecord;
use posetrainer::store::save_sequence;
use posetrainer_core::heuristics::feedback;
use posetrainer_core::synthetic::{bicep_dataset, Corruption, CurlSpec, ShrugSpec};
use posetrainer_core::{Label, PoseSequence};
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

struct Run {
    code: i32,
    out: String,
    err: String,
}

fn run(args: &[&str]) -> Run {
    let (mut out, mut err) = (Vec::new(), Vec::new());
    let argv = std::iter::once("posetrainer").chain(args.iter().copied());
    let code = main_with(argv, &mut out, &mut err);
    Run {
        code,
        out: String::from_utf8(out).unwrap(),
        err: String::from_utf8(err).unwrap(),
    }
}

fn p(path: &Path) -> &str {
    path.to_str().unwrap()
}

fn save(dir: &Path, seq: &PoseSequence) -> PathBuf {
    let path = dir.join(format!("{}.json", seq.source_id()));
    save_sequence(seq, &path).unwrap();
    path
}

fn curl_set(dir: &Path, n: usize) {
    let mut rng = ChaCha8Rng::seed_from_u64(3);
    for s in bicep_dataset(&mut rng, n / 2, n - n / 2, Corruption::NONE) {
        save(dir, &s.sequence);
    }
}

#[test]
fn evaluate_good_and_bad() {
    let dir = tempfile::tempdir().unwrap();
    let good = save(dir.path(), &CurlSpec { swing: 12.0, min_elbow: 40.0, ..Default::default() }.generate("good_curl"));
    let bad = save(dir.path(), &CurlSpec { swing: 45.0, min_elbow: 40.0, ..Default::default() }.generate("bad_curl"));
    let out_dir = dir.path().join("out");

    let r = run(&["--mode", "evaluate", "--exercise", "bicep_curl", "--sequence", p(&good), "--output_folder", p(&out_dir)]);
    assert_eq!(r.code, EXIT_OK, "{}", r.err);
    let lines: Vec<&str> = r.out.lines().collect();
    assert_eq!(lines[0], "processing sequence file...");
    assert_eq!(lines[1], "Exercise arm detected as: right.");
    assert!(lines[2].starts_with("Upper arm and torso angle range: "));
    assert!(lines[3].starts_with("Upper arm and forearm minimum angle: "));
    assert_eq!(&lines[4..], &[feedback::CORRECT_HEADER, feedback::BICEP_SUCCESS]);

    let text = std::fs::read_to_string(out_dir.join("good_curl.evaluation.json")).unwrap();
    let record = EvaluationRecord::from_json(&text).unwrap();
    assert!(record.evaluation.is_correct());
    for rule in &record.evaluation.rules {
        assert!(r.out.contains(&format!("{}: {:?}", rule.label, rule.statistic)));
    }
    assert!(out_dir.join("good_curl_plots/upper_arm_torso_angle.csv").is_file());

    let r = run(&["--mode", "evaluate", "--exercise", "bicep_curl", "--sequence", p(&bad)]);
    assert_eq!(r.code, EXIT_INCORRECT);
    assert!(r.out.ends_with(&format!("{}\n{}\n", feedback::IMPROVE_HEADER, feedback::BICEP_UPPER_ARM)));
}

#[test]
fn evaluate_frame_folder_and_missing_input() {
    let dir = tempfile::tempdir().unwrap();
    let frames = dir.path().join("shrug_clip");
    std::fs::create_dir(&frames).unwrap();
    for (i, pose) in ShrugSpec::default().generate("x").frames().iter().enumerate() {
        let json = format!("{{\"people\":[{{\"pose_keypoints_2d\":{:?}}}]}}", pose.to_flat());
        std::fs::write(frames.join(format!("shrug_clip_{i:012}_keypoints.json")), json).unwrap();
    }
    let r = run(&["--mode", "evaluate", "--exercise", "shoulder_shrug", "--input_folder", p(&frames)]);
    assert_eq!(r.code, EXIT_OK, "{}", r.err);
    assert!(r.out.starts_with("processing keypoint folder...\nShoulder vertical range: "));

    let r = run(&["--mode", "evaluate", "--exercise", "bicep_curl", "--sequence", p(&dir.path().join("nope.json"))]);
    assert_eq!(r.code, EXIT_ERROR);
    assert_eq!(r.err.lines().count(), 1);
    assert!(r.err.starts_with("error: "));

    let r = run(&["--mode", "evaluate", "--exercise", "bicep_curl", "--input_folder", p(&dir.path().join("nope"))]);
    assert_eq!(r.code, EXIT_ERROR);
}

#[cfg(unix)]
#[test]
fn evaluate_video_through_estimator() {
    use std::os::unix::fs::PermissionsExt;
    let dir = tempfile::tempdir().unwrap();
    let frames = dir.path().join("canned");
    std::fs::create_dir(&frames).unwrap();
    for (i, pose) in CurlSpec::default().generate("x").frames().iter().enumerate() {
        let json = format!("{{\"people\":[{{\"pose_keypoints_2d\":{:?}}}]}}", pose.to_flat());
        std::fs::write(frames.join(format!("f_{i:012}_keypoints.json")), json).unwrap();
    }
    // stands in for the estimator: copies canned frames to --write_json
    let script = dir.path().join("fake_openpose.sh");
    std::fs::write(
        &script,
        format!(
            "#!/bin/sh\nwhile [ $# -gt 0 ]; do\n  if [ \"$1\" = --write_json ]; then out=\"$2\"; fi\n  shift\ndone\ncp {}/*.json \"$out\"/\n",
            frames.display()
        ),
    )
    .unwrap();
    std::fs::set_permissions(&script, std::fs::Permissions::from_mode(0o755)).unwrap();
    let video = dir.path().join("curl.mp4");
    std::fs::write(&video, b"not really a video").unwrap();

    let r = run(&["--mode", "evaluate", "--exercise", "bicep_curl", "--video", p(&video), "--openpose_bin", p(&script)]);
    assert_eq!(r.code, EXIT_OK, "{}", r.err);
    assert!(r.out.starts_with("processing video file...\nExercise arm detected as: right.\n"));

    let r = run(&["--mode", "ingest", "--video", p(&video), "--openpose_bin", p(&script), "--output_folder", p(dir.path())]);
    assert_eq!(r.code, EXIT_OK, "{}", r.err);
    assert!(dir.path().join("curl.json").is_file());

    let r = run(&["--mode", "evaluate", "--exercise", "bicep_curl", "--video", p(&video), "--openpose_bin", p(&dir.path().join("absent"))]);
    assert_eq!(r.code, EXIT_ERROR);
    assert!(r.err.contains("pose estimator"), "{}", r.err);
}

#[test]
fn train_classify_report() {
    let dir = tempfile::tempdir().unwrap();
    let data = dir.path().join("data");
    let out = dir.path().join("out");
    std::fs::create_dir(&data).unwrap();
    curl_set(&data, 16);

    let r = run(&["--mode", "train", "--exercise", "bicep_curl", "--input_folder", p(&data), "--output_folder", p(&out)]);
    assert_eq!(r.code, EXIT_OK, "{}", r.err);
    let index = DatasetIndex::load(&out).unwrap();
    assert_eq!(index.entries.len(), 16);
    assert_eq!(index.count(Label::Correct), 8);

    let query = index.entries.iter().find(|e| e.label == Label::Correct).unwrap();
    let r = run(&["--mode", "classify", "--exercise", "bicep_curl", "--sequence", p(&query.path), "--output_folder", p(&out)]);
    assert_eq!(r.code, EXIT_OK, "{}", r.err);
    assert_eq!(r.out, format!("Predicted label: correct\nNearest neighbour: {}\nDTW distance: 0.0\n", query.source_id));

    let wrong = run(&["--mode", "classify", "--exercise", "front_raise", "--sequence", p(&query.path), "--output_folder", p(&out)]);
    assert_eq!(wrong.code, EXIT_ERROR);

    let config = dir.path().join("smooth3.cfg");
    std::fs::write(&config, "features.median_window = 3\n").unwrap();
    let stale = run(&["--mode", "classify", "--exercise", "bicep_curl", "--sequence", p(&query.path), "--output_folder", p(&out), "--config", p(&config)]);
    assert_eq!(stale.code, EXIT_ERROR);
    assert!(stale.err.contains("stale"), "{}", stale.err);

    let a = run(&["--mode", "report", "--output_folder", p(&out), "--seed", "5"]);
    assert_eq!(a.code, EXIT_OK, "{}", a.err);
    let metrics_a = std::fs::read(out.join("metrics.json")).unwrap();
    let b = run(&["--mode", "report", "--output_folder", p(&out), "--seed", "5"]);
    assert_eq!(a.out, b.out);
    assert_eq!(metrics_a, std::fs::read(out.join("metrics.json")).unwrap());
    assert!(a.out.contains("Precision    Recall  F1 Score  Examples"));
    assert!(a.out.lines().last().unwrap().starts_with("Avg/Total"));
}

#[test]
fn train_edge_cases() {
    let dir = tempfile::tempdir().unwrap();
    let empty = dir.path().join("empty");
    std::fs::create_dir(&empty).unwrap();
    let out = dir.path().join("out");
    let r = run(&["--mode", "train", "--exercise", "bicep_curl", "--input_folder", p(&empty), "--output_folder", p(&out)]);
    assert_eq!(r.code, EXIT_ERROR);

    let data = dir.path().join("data");
    std::fs::create_dir(&data).unwrap();
    let spec = CurlSpec::default();
    save(&data, &spec.generate("shrug_good_3"));
    save(&data, &spec.generate("curl_7"));
    let manifest = dir.path().join("manifest.csv");
    std::fs::write(&manifest, "# path,label,exercise\ndata/curl_7.json,incorrect,bicep_curl\ndata/curl_7.json,correct,front_raise\n").unwrap();
    let r = run(&[
        "--mode", "train", "--exercise", "bicep_curl", "--input_folder", p(&data), "--manifest", p(&manifest), "--output_folder", p(&out),
    ]);
    assert_eq!(r.code, EXIT_OK, "{}", r.err);
    let index = DatasetIndex::load(&out).unwrap();
    let labels: Vec<(String, Label)> = index.entries.iter().map(|e| (e.source_id.clone(), e.label)).collect();
    assert_eq!(labels, vec![("shrug_good_3".to_string(), Label::Correct), ("curl_7".to_string(), Label::Incorrect)]);

    // one example per label leaves nothing to train on
    let degenerate = run(&["--mode", "report", "--output_folder", p(&out), "--train_fraction", "0.99"]);
    assert_eq!(degenerate.code, EXIT_ERROR);
    assert!(degenerate.err.contains("training portion"), "{}", degenerate.err);
}

#[test]
fn usage_errors_exit_one() {
    assert_eq!(run(&["--mode", "evaluate"]).code, EXIT_ERROR);
    assert_eq!(run(&["--exercise", "bicep_curl"]).code, EXIT_ERROR);
    assert_eq!(run(&["--mode", "evaluate", "--exercise", "deadlift", "--sequence", "x"]).code, EXIT_ERROR);
    assert_eq!(run(&["--help"]).code, EXIT_OK);
}
