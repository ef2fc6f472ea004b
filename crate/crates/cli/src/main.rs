//! `bifurjet`: generate events, cluster them with Durham or an Ising solver,
//! and write the tables behind efficiency, energy and mass studies.

mod commands;
mod records;

use std::path::{Path, PathBuf};
use std::process::ExitCode;

use anyhow::{bail, Context, Result};
use bifurjet::{AnnealSchedule, DistanceMetric, Process};
use clap::{Args, Parser, Subcommand, ValueEnum};
use serde::Serialize;

#[derive(Parser, Serialize)]
#[command(name = "bifurjet", version, about = "Jet clustering with simulated bifurcation")]
struct Cli {
    /// Worker threads (events and shots run concurrently up to this cap).
    #[arg(long, global = true, env = "BIFURJET_THREADS")]
    #[serde(skip)]
    threads: Option<usize>,

    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand, Serialize)]
#[serde(tag = "command", rename_all = "lowercase")]
enum Command {
    /// Generate synthetic events as JSON lines.
    Gen(GenArgs),
    /// Exclusive Durham clustering of every event.
    Durham(DurhamArgs),
    /// Multijet QUBO clustering with an Ising solver.
    Cluster(ClusterArgs),
    /// Best-so-far energy and efficiency versus time for one event.
    Bench(BenchArgs),
    /// Invariant masses from a jets file written by `durham` or `cluster`.
    Mass(MassArgs),
    /// Statevector annealing of a simplified event.
    Anneal(AnnealArgs),
    /// Annealing time-to-solution over a range of sweep times.
    Tts(TtsArgs),
}

#[derive(Args, Serialize)]
pub struct GenArgs {
    #[arg(long, value_parser = clap::value_parser!(Process))]
    pub process: Process,
    /// Number of events.
    #[arg(long)]
    pub events: usize,
    #[arg(long, default_value_t = 0)]
    pub seed: u64,
    #[arg(long)]
    pub out: PathBuf,
    /// Centre-of-mass energy in GeV (process default if omitted).
    #[arg(long)]
    pub sqrt_s: Option<f64>,
    #[arg(long, default_value_t = 3)]
    pub min_particles: usize,
    #[arg(long, default_value_t = 8)]
    pub max_particles: usize,
    /// Fragment cone width in radians.
    #[arg(long, default_value_t = 0.1)]
    pub spread: f64,
    /// Relative Gaussian energy smear.
    #[arg(long, default_value_t = 0.0)]
    pub smear: f64,
}

#[derive(Args, Serialize)]
pub struct EventSelection {
    /// JSON-lines event file.
    #[arg(long = "events")]
    pub events: PathBuf,
    /// Jet multiplicity (taken from the event's process if omitted).
    #[arg(long)]
    pub njet: Option<usize>,
}

#[derive(Args, Serialize)]
pub struct DurhamArgs {
    #[command(flatten)]
    pub input: EventSelection,
    #[arg(long)]
    pub out: PathBuf,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, ValueEnum, Serialize)]
#[serde(rename_all = "lowercase")]
pub enum SolverKind {
    Bsb,
    Dsb,
    Sa,
}

#[derive(Clone, Copy, Debug, ValueEnum, Serialize)]
#[serde(rename_all = "lowercase")]
pub enum MetricArg {
    Eekt,
    Angle,
}

impl From<MetricArg> for DistanceMetric {
    fn from(m: MetricArg) -> Self {
        match m {
            MetricArg::Eekt => DistanceMetric::EeKt,
            MetricArg::Angle => DistanceMetric::Angle,
        }
    }
}

#[derive(Args, Serialize)]
pub struct SolverArgs {
    #[arg(long, value_enum, default_value_t = MetricArg::Eekt)]
    pub metric: MetricArg,
    /// Shots per event (100 for two jets, 50 otherwise).
    #[arg(long)]
    pub shots: Option<usize>,
    /// SB steps or SA sweeps per shot.
    #[arg(long, default_value_t = 1000)]
    pub steps: usize,
    /// SB time step.
    #[arg(long, default_value_t = 0.25)]
    pub dt: f64,
    /// SB coupling strength (automatic if omitted).
    #[arg(long)]
    pub c0: Option<f64>,
    #[arg(long, default_value_t = 0.1)]
    pub beta_min: f64,
    #[arg(long, default_value_t = 10.0)]
    pub beta_max: f64,
    /// One-hot penalty (1.1 N max Q if omitted).
    #[arg(long)]
    pub lambda: Option<f64>,
    #[arg(long, default_value_t = 0)]
    pub seed: u64,
}

#[derive(Args, Serialize)]
pub struct ClusterArgs {
    #[command(flatten)]
    pub input: EventSelection,
    #[arg(long, value_enum, default_value_t = SolverKind::Bsb)]
    pub solver: SolverKind,
    #[command(flatten)]
    pub solve: SolverArgs,
    #[arg(long)]
    pub out: PathBuf,
}

#[derive(Args, Serialize)]
pub struct BenchArgs {
    #[command(flatten)]
    pub input: EventSelection,
    /// Index of the event to benchmark.
    #[arg(long, default_value_t = 0)]
    pub event: usize,
    /// Comma-separated solvers.
    #[arg(long, value_enum, value_delimiter = ',', default_value = "bsb")]
    pub solver: Vec<SolverKind>,
    #[command(flatten)]
    pub solve: SolverArgs,
    #[arg(long, default_value_t = 10)]
    pub record_every: usize,
    #[arg(long)]
    pub out: PathBuf,
}

#[derive(Args, Serialize)]
pub struct MassArgs {
    /// Output of `durham` or `cluster`.
    #[arg(long)]
    pub jets: PathBuf,
    #[arg(long)]
    pub out: PathBuf,
}

#[derive(Clone, Copy, Debug, ValueEnum, Serialize)]
#[serde(rename_all = "lowercase")]
pub enum ScheduleArg {
    Linear,
    Quadratic,
}

impl From<ScheduleArg> for AnnealSchedule {
    fn from(s: ScheduleArg) -> Self {
        match s {
            ScheduleArg::Linear => AnnealSchedule::Linear,
            ScheduleArg::Quadratic => AnnealSchedule::Quadratic,
        }
    }
}

#[derive(Args, Serialize)]
pub struct AnnealProblemArgs {
    #[command(flatten)]
    pub input: EventSelection,
    #[arg(long, default_value_t = 0)]
    pub event: usize,
    /// Particles kept after simplification (12 / njet if omitted).
    #[arg(long)]
    pub keep: Option<usize>,
    #[arg(long, value_enum, default_value_t = MetricArg::Eekt)]
    pub metric: MetricArg,
    #[arg(long)]
    pub lambda: Option<f64>,
    #[arg(long, value_enum, default_value_t = ScheduleArg::Linear)]
    pub schedule: ScheduleArg,
}

#[derive(Args, Serialize)]
pub struct AnnealArgs {
    #[command(flatten)]
    pub problem: AnnealProblemArgs,
    /// Total evolution time.
    #[arg(long, default_value_t = 100.0)]
    pub time: f64,
    #[arg(long, default_value_t = 10_000)]
    pub steps: usize,
    #[arg(long, default_value_t = 100)]
    pub record_every: usize,
    #[arg(long)]
    pub out: PathBuf,
}

#[derive(Args, Serialize)]
pub struct TtsArgs {
    #[command(flatten)]
    pub problem: AnnealProblemArgs,
    /// Comma-separated total evolution times.
    #[arg(long, value_delimiter = ',', default_value = "1,2,4,8,16,32,64,128")]
    pub times: Vec<f64>,
    /// Integration steps per unit of evolution time.
    #[arg(long, default_value_t = 20.0)]
    pub steps_per_time: f64,
    #[arg(long, default_value_t = 0.99)]
    pub target: f64,
    #[arg(long)]
    pub out: PathBuf,
}

impl Command {
    fn out(&self) -> &Path {
        match self {
            Self::Gen(a) => &a.out,
            Self::Durham(a) => &a.out,
            Self::Cluster(a) => &a.out,
            Self::Bench(a) => &a.out,
            Self::Mass(a) => &a.out,
            Self::Anneal(a) => &a.out,
            Self::Tts(a) => &a.out,
        }
    }

    fn run(&self) -> Result<()> {
        match self {
            Self::Gen(a) => commands::gen(a),
            Self::Durham(a) => commands::durham(a),
            Self::Cluster(a) => commands::cluster(a),
            Self::Bench(a) => commands::bench(a),
            Self::Mass(a) => commands::mass(a),
            Self::Anneal(a) => commands::anneal(a),
            Self::Tts(a) => commands::tts(a),
        }
    }
}

/// `<out>.<suffix>` next to the main output.
pub fn sidecar(out: &Path, suffix: &str) -> PathBuf {
    let mut s = out.as_os_str().to_owned();
    s.push(".");
    s.push(suffix);
    PathBuf::from(s)
}

fn run(cli: Cli) -> Result<()> {
    let threads = match cli.threads {
        Some(0) => bail!("--threads must be >= 1"),
        Some(n) => n,
        None => std::thread::available_parallelism().map_or(1, |n| n.get()),
    };
    let pool = rayon::ThreadPoolBuilder::new()
        .num_threads(threads)
        .build()
        .context("building thread pool")?;

    let echo = serde_json::to_string_pretty(&cli.command)?;
    let config = sidecar(cli.command.out(), "config.json");
    std::fs::write(&config, echo + "\n").with_context(|| format!("writing {}", config.display()))?;

    pool.install(|| cli.command.run())
}

fn main() -> ExitCode {
    match run(Cli::parse()) {
        Ok(()) => ExitCode::SUCCESS,
        Err(e) => {
            eprintln!("error: {e:#}");
            ExitCode::FAILURE
        }
    }
}
