use posetrainer_core::classifier::{classify, evaluate_split, featurize, LabeledDataset, LabeledEntry};
use posetrainer_core::geometry::prepare;
use posetrainer_core::synthetic::{bicep_dataset, Corruption, CurlSpec, FrontRaiseSpec, Timing};
use posetrainer_core::{ExerciseKind, Joint, Label, PoseSequence, Side};
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

fn features(seq: &PoseSequence, exercise: ExerciseKind) -> posetrainer_core::classifier::FeatureSeries {
    featurize(&prepare(seq, exercise).unwrap(), exercise).unwrap()
}

fn still_curl() -> PoseSequence {
    CurlSpec { swing: 0.0, rest_elbow: 150.0, min_elbow: 150.0, ..Default::default() }.generate("still")
}

#[test]
fn motionless_subject_has_constant_features() {
    let f = features(&still_curl(), ExerciseKind::BicepCurl);
    assert_eq!(f.dim(), 10);
    let first = f.frame(0).to_vec();
    assert!(f.frames().all(|fr| fr == &first[..]));
}

#[test]
fn translation_leaves_features_unchanged() {
    let seq = CurlSpec { swing: 20.0, min_elbow: 45.0, ..Default::default() }.generate("t");
    let moved = seq.map_points(|x, y| (x + 37.0, y - 12.0));
    let a = features(&seq, ExerciseKind::BicepCurl);
    let b = features(&moved, ExerciseKind::BicepCurl);
    for (x, y) in a.frames().flatten().zip(b.frames().flatten()) {
        assert!((x - y).abs() < 1e-9);
    }
}

#[test]
fn single_frame_wrist_spike_is_filtered() {
    let seq = still_curl();
    let clean = features(&seq, ExerciseKind::BicepCurl);
    let mut frames = seq.frames().to_vec();
    frames[10].parts[Joint::RWrist.index()].x += 300.0;
    let spiked = features(&PoseSequence::from_poses(frames, "spiked"), ExerciseKind::BicepCurl);
    assert_eq!(clean.frames().collect::<Vec<_>>(), spiked.frames().collect::<Vec<_>>());
}

#[test]
fn left_and_right_curls_share_a_frame() {
    let spec = CurlSpec { swing: 12.0, min_elbow: 40.0, ..Default::default() };
    let r = features(&spec.generate("r"), ExerciseKind::BicepCurl);
    let l = features(&CurlSpec { side: Side::Left, ..spec }.generate("l"), ExerciseKind::BicepCurl);
    for (x, y) in r.frames().flatten().zip(l.frames().flatten()) {
        assert!((x - y).abs() < 1e-9);
    }
}

#[test]
fn both_arm_exercises_use_eighteen_channels() {
    let f = features(&FrontRaiseSpec::default().generate("f"), ExerciseKind::FrontRaise);
    assert_eq!(f.dim(), 18);
}

#[test]
fn nearest_neighbour_prefers_matching_form() {
    let exercise = ExerciseKind::BicepCurl;
    let mut train = LabeledDataset::new(exercise);
    for (name, swing, min_elbow, label) in [("good", 8.0, 40.0, Label::Correct), ("bad", 50.0, 100.0, Label::Incorrect)] {
        let seq = CurlSpec { swing, min_elbow, ..Default::default() }.generate(name);
        train
            .push(LabeledEntry { series: features(&seq, exercise), label, source_id: name.into() })
            .unwrap();
    }
    let query = CurlSpec { swing: 10.0, min_elbow: 45.0, timing: Timing { hold: 8, ramp: 22, reps: 1 }, ..Default::default() }
        .generate("q");
    let p = classify(&features(&query, exercise), &train).unwrap();
    assert_eq!(p.label, Label::Correct);
    assert_eq!(p.nearest_source_id, "good");
}

#[test]
fn noisy_synthetic_experiment() {
    let mut rng = ChaCha8Rng::seed_from_u64(2024);
    let corruption = Corruption { sigma: 0.01, spike_probability: 0.01, spike_magnitude: 0.5 };
    let exercise = ExerciseKind::BicepCurl;
    let mut data = LabeledDataset::new(exercise);
    for s in bicep_dataset(&mut rng, 20, 20, corruption) {
        let series = features(&s.sequence, exercise);
        data.push(LabeledEntry { series, label: s.label, source_id: s.sequence.source_id().into() }).unwrap();
    }
    let outcome = evaluate_split(&data, 7, 0.6).unwrap();
    assert_eq!(outcome.predictions.len(), 16);
    assert!(outcome.metrics.weighted.f1 >= 0.9, "{}", outcome.metrics);
}
