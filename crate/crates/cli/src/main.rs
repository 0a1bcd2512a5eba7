//! `obbkit` command-line harness.
//!
//! Every subcommand accepts `--seed`, `--config <key=value file>` and
//! `--out <path>`; tables go to `--out` or stdout as comma-separated text
//! with a header row. `OBBKIT_THREADS` caps worker threads (0 = auto).

mod commands;
mod settings;

use std::path::PathBuf;
use std::process::ExitCode;

use anyhow::{Context, Result};
use clap::{Args, Parser, Subcommand};

#[derive(Parser)]
#[command(name = "obbkit", version, about = "Rotated-box geometry, losses and evaluation tools")]
struct Cli {
    #[command(subcommand)]
    cmd: Command,
}

#[derive(Args, Debug, Clone, Default)]
pub struct Common {
    #[arg(long)]
    pub seed: Option<u64>,
    /// Flat key=value file; command-line flags take precedence.
    #[arg(long)]
    pub config: Option<PathBuf>,
    #[arg(long)]
    pub out: Option<PathBuf>,
}

#[derive(Subcommand)]
enum Command {
    /// Convex hull of a point file (one `x y` per line).
    Hull(commands::HullArgs),
    /// Minimum-area rectangle of a point file.
    Minrect(commands::MinrectArgs),
    /// Convex-hull GIoU between a point set and a target box.
    Ciou(commands::CiouArgs),
    /// Analytic gradient against central differences on random draws.
    Gradcheck(commands::GradcheckArgs),
    /// Level, refine or second-stage label assignment.
    Assign(commands::AssignArgs),
    /// Per-category or per-image repeat factors of an annotation set.
    RepeatFactors(commands::RepeatFactorsArgs),
    /// One resampled epoch of image ids.
    Epoch(commands::EpochArgs),
    /// Fit a point set to a box by gradient ascent on hull GIoU.
    Fit(commands::FitArgs),
    /// Rotated non-maximum suppression of a detection file.
    Nms(commands::NmsArgs),
    /// Per-category AP (11-point and all-point) and mAP.
    Eval(commands::EvalArgs),
    /// Proposal recall at several top-k cut-offs.
    Recall(commands::RecallArgs),
    /// Five-parameter angle jumps against corner displacement.
    BoundaryDemo(commands::BoundaryArgs),
    /// Synthetic annotations and detections.
    Gen(commands::GenArgs),
}

fn init_threads() -> Result<()> {
    let Ok(raw) = std::env::var("OBBKIT_THREADS") else { return Ok(()) };
    let n: usize = raw.trim().parse().with_context(|| format!("OBBKIT_THREADS={raw:?} is not a count"))?;
    rayon::ThreadPoolBuilder::new().num_threads(n).build_global().context("configuring worker threads")?;
    Ok(())
}

fn run(cli: Cli) -> Result<()> {
    init_threads()?;
    match cli.cmd {
        Command::Hull(a) => commands::hull(a),
        Command::Minrect(a) => commands::minrect(a),
        Command::Ciou(a) => commands::ciou(a),
        Command::Gradcheck(a) => commands::gradcheck(a),
        Command::Assign(a) => commands::assign(a),
        Command::RepeatFactors(a) => commands::repeat_factors(a),
        Command::Epoch(a) => commands::epoch(a),
        Command::Fit(a) => commands::fit(a),
        Command::Nms(a) => commands::nms(a),
        Command::Eval(a) => commands::eval(a),
        Command::Recall(a) => commands::recall(a),
        Command::BoundaryDemo(a) => commands::boundary(a),
        Command::Gen(a) => commands::gen(a),
    }
}

fn main() -> ExitCode {
    match run(Cli::parse()) {
        Ok(()) => ExitCode::SUCCESS,
        Err(e) => {
            eprintln!("obbkit: error: {e:#}");
            ExitCode::FAILURE
        }
    }
}
