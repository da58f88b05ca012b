//! `smeans`: generate data and meshes, fit, prune, measure and draw.

mod commands;
mod failure;
mod render;

use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand, ValueEnum};
use simplicial_means::presets::{Preset, Projection};

use crate::failure::Failure;

#[derive(Parser, Debug)]
#[command(name = "smeans", version, about = "Fit simplicial complexes to point clouds")]
struct Cli {
    /// Worker threads for the parallel stages (default: all cores).
    #[arg(long, global = true, value_parser = clap::value_parser!(u16).range(1..))]
    threads: Option<u16>,
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand, Debug)]
enum Command {
    /// Sample a point cloud from a preset or a sample spec.
    GenData(GenData),
    /// Build a mesh from a mesh spec.
    GenComplex(GenComplex),
    /// Fit a complex to a cloud.
    Fit(FitArgs),
    /// Prune a fitted complex and write per-point codes.
    Prune(PruneArgs),
    /// Mean squared distance and Hausdorff distance of a fit.
    Metrics(MetricsArgs),
    /// Draw a fit as a 2-D SVG.
    Render(RenderArgs),
    /// Run a built-in figure preset end to end.
    Demo(DemoArgs),
}

#[derive(Args, Debug)]
#[group(required = true, multiple = false, id = "source")]
struct Source {
    /// Built-in preset, `fig1` to `fig10`.
    #[arg(long, value_parser = preset_name)]
    preset: Option<String>,
    /// Sample spec JSON file.
    #[arg(long)]
    spec: Option<PathBuf>,
}

#[derive(Args, Debug)]
struct GenData {
    #[command(flatten)]
    source: Source,
    /// Replaces the seed of the preset or spec.
    #[arg(long)]
    seed: Option<u64>,
    #[arg(long)]
    out: PathBuf,
}

#[derive(Args, Debug)]
struct GenComplex {
    /// Mesh spec JSON file.
    #[arg(long)]
    spec: PathBuf,
    #[arg(long)]
    out: PathBuf,
    #[arg(long)]
    positions: PathBuf,
}

#[derive(Clone, Copy, Debug, ValueEnum)]
enum ModeArg {
    Interior,
    Closed,
}

#[derive(Args, Debug)]
struct FitArgs {
    #[arg(long)]
    cloud: PathBuf,
    #[arg(long)]
    complex: PathBuf,
    #[arg(long)]
    positions: PathBuf,
    /// Learning rate.
    #[arg(long, default_value_t = 0.1, allow_negative_numbers = true)]
    s: f64,
    #[arg(long, value_enum, default_value_t = ModeArg::Interior)]
    mode: ModeArg,
    #[arg(long, default_value_t = 200)]
    iters: usize,
    /// Stop once no vertex moves farther than this (default: 1e-6 of the
    /// bounding-box diagonal).
    #[arg(long, allow_negative_numbers = true)]
    tol: Option<f64>,
    #[arg(long)]
    out: PathBuf,
    #[arg(long)]
    trace: Option<PathBuf>,
    /// Directory for vertex-position checkpoints.
    #[arg(long)]
    snapshots: Option<PathBuf>,
    /// Checkpoint every this many iterations.
    #[arg(long, default_value_t = 10, requires = "snapshots")]
    every: usize,
}

#[derive(Clone, Copy, Debug, ValueEnum)]
enum PruneModeArg {
    Euclidean,
    BaryMin,
}

#[derive(Args, Debug)]
struct PruneArgs {
    #[arg(long)]
    fit: PathBuf,
    #[arg(long, allow_negative_numbers = true)]
    alpha: f64,
    #[arg(long, value_enum, default_value_t = PruneModeArg::Euclidean)]
    mode: PruneModeArg,
    /// Multiplies alpha after every accepted step.
    #[arg(long, default_value_t = 1.0, allow_negative_numbers = true)]
    decay: f64,
    #[arg(long)]
    out: PathBuf,
    /// JSON-lines file with one code per point.
    #[arg(long)]
    codes: Option<PathBuf>,
}

#[derive(Args, Debug)]
struct MetricsArgs {
    #[arg(long)]
    cloud: PathBuf,
    #[arg(long)]
    fit: PathBuf,
    #[arg(long, default_value_t = simplicial_means::metrics::DEFAULT_SAMPLE_DENSITY)]
    density: usize,
    #[arg(long)]
    out: PathBuf,
}

#[derive(Args, Debug)]
struct RenderArgs {
    #[arg(long)]
    fit: PathBuf,
    #[arg(long)]
    cloud: PathBuf,
    #[arg(long)]
    out: PathBuf,
    #[arg(long, value_parser = projection, default_value = "xy")]
    proj: Projection,
}

#[derive(Args, Debug)]
struct DemoArgs {
    #[arg(long, value_parser = clap::value_parser!(u8).range(1..=10))]
    figure: u8,
    /// Replaces the preset's seed.
    #[arg(long)]
    seed: Option<u64>,
    #[arg(long)]
    outdir: PathBuf,
}

fn preset_name(s: &str) -> Result<String, String> {
    if Preset::names().any(|n| n == s) {
        Ok(s.to_string())
    } else {
        Err(format!("expected one of {}", Preset::names().collect::<Vec<_>>().join(", ")))
    }
}

fn projection(s: &str) -> Result<Projection, String> {
    s.parse().map_err(|_| "expected xy, xz, yz or pca2".to_string())
}

fn run(cli: Cli) -> Result<(), Failure> {
    if let Some(n) = cli.threads {
        rayon::ThreadPoolBuilder::new()
            .num_threads(n.into())
            .build_global()
            .map_err(|e| Failure::Usage(format!("cannot set up {n} threads: {e}")))?;
    }
    match cli.command {
        Command::GenData(a) => commands::gen_data(a),
        Command::GenComplex(a) => commands::gen_complex(a),
        Command::Fit(a) => commands::fit(a),
        Command::Prune(a) => commands::prune(a),
        Command::Metrics(a) => commands::metrics(a),
        Command::Render(a) => commands::render(a),
        Command::Demo(a) => commands::demo(a),
    }
}

fn main() -> ExitCode {
    env_logger::Builder::from_env(env_logger::Env::default().default_filter_or("warn")).init();
    let cli = match Cli::try_parse() {
        Ok(cli) => cli,
        Err(e) => {
            let _ = e.print();
            return ExitCode::from(if e.use_stderr() { 1 } else { 0 });
        }
    };
    match run(cli) {
        Ok(()) => ExitCode::SUCCESS,
        Err(f) => {
            eprintln!("smeans: {f}");
            ExitCode::from(f.code())
        }
    }
}
