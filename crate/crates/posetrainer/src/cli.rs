//! The `posetrainer` command line.
//!
//! Exit codes: 0 when the sequence is judged correct (or the command has no
//! verdict and succeeded), 2 when it is judged incorrect, 1 on any error.

use std::ffi::OsString;
use std::io::Write;
use std::path::{Path, PathBuf};

use clap::{Parser, ValueEnum};
use posetrainer_core::classifier::{classify, evaluate_split};
use posetrainer_core::heuristics::evaluate_sequence;
use posetrainer_core::{ExerciseKind, Label, PoseSequence};

use crate::config::Settings;
use crate::dataset::{discover, features_for, load_manifest, merge_candidates, DatasetIndex};
use crate::error::{Error, Result};
use crate::openpose::{load_folder, load_video, DEFAULT_FRAME_GLOB, ESTIMATOR_ENV};
use crate::record::{file_safe, write_file, write_plots, EvaluationRecord, MetricsRecord};
use crate::store::{load_saved, save_sequence};

pub const EXIT_OK: i32 = 0;
pub const EXIT_ERROR: i32 = 1;
pub const EXIT_INCORRECT: i32 = 2;

pub const METRICS_FILE: &str = "metrics.json";

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum Mode {
    /// Rule-based form check with feedback
    Evaluate,
    /// Nearest-neighbour label against a trained dataset index
    Classify,
    /// Build a dataset index from labelled sequences
    Train,
    /// Seeded train/test split over a dataset index
    Report,
    /// Convert a video or frame folder into a saved sequence file
    Ingest,
}

#[derive(Debug, Clone, Parser)]
#[command(name = "posetrainer", version, about = "Exercise form evaluation from pose keypoints")]
pub struct Args {
    #[arg(long, value_enum)]
    pub mode: Mode,
    #[arg(long)]
    pub exercise: Option<ExerciseKind>,
    /// Video file; needs the pose estimator
    #[arg(long)]
    pub video: Option<PathBuf>,
    /// Folder of per-frame keypoint files (evaluate, classify, ingest) or of
    /// labelled sequences (train)
    #[arg(long = "input_folder")]
    pub input_folder: Option<PathBuf>,
    /// Saved sequence file
    #[arg(long)]
    pub sequence: Option<PathBuf>,
    #[arg(long = "output_folder")]
    pub output_folder: Option<PathBuf>,
    /// Threshold and feature settings, `key = value` per line
    #[arg(long)]
    pub config: Option<PathBuf>,
    #[arg(long = "openpose_bin", env = ESTIMATOR_ENV)]
    pub openpose_bin: Option<PathBuf>,
    #[arg(long, default_value_t = 0)]
    pub seed: u64,
    #[arg(long = "train_fraction", default_value_t = 0.6)]
    pub train_fraction: f64,
    /// `path,label,exercise` lines
    #[arg(long)]
    pub manifest: Option<PathBuf>,
    #[arg(long = "frame_glob", default_value = DEFAULT_FRAME_GLOB)]
    pub frame_glob: String,
}

/// Parses `argv` (including the program name) and runs the command.
pub fn main_with<I, T>(argv: I, out: &mut dyn Write, err: &mut dyn Write) -> i32
where
    I: IntoIterator<Item = T>,
    T: Into<OsString> + Clone,
{
    match Args::try_parse_from(argv) {
        Ok(args) => run(&args, out, err),
        Err(e) => {
            let _ = write!(err, "{}", e.render());
            if e.use_stderr() {
                EXIT_ERROR
            } else {
                let _ = write!(out, "{}", e.render());
                EXIT_OK
            }
        }
    }
}

/// Runs one command, printing results to `out` and a one-line cause to
/// `err` on failure.
pub fn run(args: &Args, out: &mut dyn Write, err: &mut dyn Write) -> i32 {
    let result = validate(args).and_then(|()| match args.mode {
        Mode::Evaluate => cmd_evaluate(args, out),
        Mode::Classify => cmd_classify(args, out),
        Mode::Train => cmd_train(args, out),
        Mode::Report => cmd_report(args, out),
        Mode::Ingest => cmd_ingest(args, out),
    });
    match result {
        Ok(code) => code,
        Err(e) => {
            let _ = writeln!(err, "error: {e}");
            EXIT_ERROR
        }
    }
}

fn usage(message: &str) -> Error {
    Error::Usage(message.into())
}

fn validate(args: &Args) -> Result<()> {
    let inputs = [args.video.is_some(), args.input_folder.is_some(), args.sequence.is_some()]
        .iter()
        .filter(|&&b| b)
        .count();
    let single_input = || match inputs {
        1 => Ok(()),
        0 => Err(usage("one of --video, --input_folder or --sequence is required")),
        _ => Err(usage("give only one of --video, --input_folder or --sequence")),
    };
    let exercise = || args.exercise.map(|_| ()).ok_or_else(|| usage("--exercise is required"));
    let output = || args.output_folder.as_ref().map(|_| ()).ok_or_else(|| usage("--output_folder is required"));
    match args.mode {
        Mode::Evaluate => {
            exercise()?;
            single_input()
        }
        Mode::Ingest => {
            output()?;
            single_input()
        }
        Mode::Classify => {
            exercise()?;
            output()?;
            single_input()
        }
        Mode::Train => {
            exercise()?;
            output()?;
            if args.input_folder.is_none() && args.manifest.is_none() {
                return Err(usage("train needs --input_folder or --manifest"));
            }
            Ok(())
        }
        Mode::Report => {
            output()?;
            if !(args.train_fraction > 0.0 && args.train_fraction < 1.0) {
                return Err(usage("--train_fraction must be strictly between 0 and 1"));
            }
            Ok(())
        }
    }
}

fn exercise_of(args: &Args) -> ExerciseKind {
    // checked in validate
    args.exercise.unwrap_or(ExerciseKind::BicepCurl)
}

fn output_dir(args: &Args) -> &Path {
    args.output_folder.as_deref().unwrap_or(Path::new("."))
}

/// Loads the single query input, announcing what is being read.
fn load_query(args: &Args, out: &mut dyn Write, announce: bool) -> Result<PoseSequence> {
    let mut say = |msg: &str| -> Result<()> {
        if announce {
            writeln!(out, "{msg}").map_err(Error::io("<stdout>"))?;
        }
        Ok(())
    };
    if let Some(video) = &args.video {
        say("processing video file...")?;
        let bin = args.openpose_bin.as_ref().ok_or_else(|| {
            Error::Estimator(format!("no estimator executable; pass --openpose_bin or set {ESTIMATOR_ENV}"))
        })?;
        Ok(load_video(bin, video, &args.frame_glob)?.sequence)
    } else if let Some(folder) = &args.input_folder {
        say("processing keypoint folder...")?;
        Ok(load_folder(folder, &args.frame_glob)?.sequence)
    } else if let Some(path) = &args.sequence {
        say("processing sequence file...")?;
        load_saved(path)
    } else {
        Err(usage("no input given"))
    }
}

fn cmd_evaluate(args: &Args, out: &mut dyn Write) -> Result<i32> {
    let settings = Settings::load_optional(args.config.as_deref())?;
    let exercise = exercise_of(args);
    let seq = load_query(args, out, true)?;
    let evaluation = evaluate_sequence(&seq, exercise, &settings.thresholds)?;
    write!(out, "{}", evaluation.transcript()).map_err(Error::io("<stdout>"))?;
    let code = if evaluation.is_correct() { EXIT_OK } else { EXIT_INCORRECT };

    if let Some(dir) = &args.output_folder {
        std::fs::create_dir_all(dir).map_err(Error::io(dir))?;
        let id = file_safe(seq.source_id());
        let plots = write_plots(&dir.join(format!("{id}_plots")), &evaluation)?;
        let path = dir.join(format!("{id}.evaluation.json"));
        write_file(&path, &EvaluationRecord::new(seq.source_id(), evaluation).to_json()?)?;
        log::info!("wrote {} and {} plot files", path.display(), plots.len());
    }
    Ok(code)
}

fn cmd_ingest(args: &Args, out: &mut dyn Write) -> Result<i32> {
    let seq = load_query(args, out, false)?;
    let dir = output_dir(args);
    std::fs::create_dir_all(dir).map_err(Error::io(dir))?;
    let path = dir.join(format!("{}.json", file_safe(seq.source_id())));
    save_sequence(&seq, &path)?;
    writeln!(out, "saved {} frames to {}", seq.len(), path.display()).map_err(Error::io("<stdout>"))?;
    Ok(EXIT_OK)
}

fn cmd_train(args: &Args, out: &mut dyn Write) -> Result<i32> {
    let settings = Settings::load_optional(args.config.as_deref())?;
    let exercise = exercise_of(args);
    let folder = match &args.input_folder {
        Some(dir) => discover(dir)?,
        None => Vec::new(),
    };
    let manifest = match &args.manifest {
        Some(path) => load_manifest(path, exercise)?,
        None => Vec::new(),
    };
    let candidates = merge_candidates(folder, manifest);
    let (index, _) = DatasetIndex::build(&candidates, exercise, &settings.features, &args.frame_glob)?;
    let (correct, incorrect) = (index.count(Label::Correct), index.count(Label::Incorrect));
    if correct == 0 || incorrect == 0 {
        log::warn!("dataset has only one label; every prediction will be that label");
    }
    let path = index.save(output_dir(args))?;
    writeln!(
        out,
        "indexed {} {} sequences ({correct} correct, {incorrect} incorrect) in {}",
        index.entries.len(),
        exercise,
        path.display()
    )
    .map_err(Error::io("<stdout>"))?;
    Ok(EXIT_OK)
}

fn cmd_classify(args: &Args, out: &mut dyn Write) -> Result<i32> {
    let settings = Settings::load_optional(args.config.as_deref())?;
    let exercise = exercise_of(args);
    let index = DatasetIndex::load(output_dir(args))?;
    index.check(exercise, &settings.features)?;
    let query = load_query(args, out, false)?;
    let series = features_for(&query, exercise, &settings.features)?;
    let data = index.load_dataset(&settings.features, &args.frame_glob)?;
    let p = classify(&series, &data)?;
    writeln!(out, "Predicted label: {}", p.label).map_err(Error::io("<stdout>"))?;
    writeln!(out, "Nearest neighbour: {}", p.nearest_source_id).map_err(Error::io("<stdout>"))?;
    writeln!(out, "DTW distance: {:?}", p.distance).map_err(Error::io("<stdout>"))?;
    Ok(if p.label == Label::Correct { EXIT_OK } else { EXIT_INCORRECT })
}

fn cmd_report(args: &Args, out: &mut dyn Write) -> Result<i32> {
    let settings = Settings::load_optional(args.config.as_deref())?;
    let dir = output_dir(args);
    let index = DatasetIndex::load(dir)?;
    let exercise = args.exercise.unwrap_or(index.exercise);
    index.check(exercise, &settings.features)?;
    let data = index.load_dataset(&settings.features, &args.frame_glob)?;
    let outcome = evaluate_split(&data, args.seed, args.train_fraction)?;
    writeln!(
        out,
        "{exercise}: {} training, {} test sequences (seed {}, train fraction {})",
        outcome.train_ids.len(),
        outcome.predictions.len(),
        args.seed,
        args.train_fraction
    )
    .map_err(Error::io("<stdout>"))?;
    write!(out, "{}", outcome.metrics).map_err(Error::io("<stdout>"))?;
    let record = MetricsRecord::new(exercise, outcome);
    write_file(&dir.join(METRICS_FILE), &record.to_json()?)?;
    Ok(EXIT_OK)
}
