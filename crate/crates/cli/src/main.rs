use std::fs;
use std::io;
use std::path::{Path, PathBuf};

use anyhow::{bail, Context};
use clap::{Args, Parser, Subcommand};
use pdifmp_core::Method;

use pdifmp_cli::presets::{self, Cell, PresetKind, LS_STEP, PDIFMP_STEP};
use pdifmp_cli::rows::{BENCH_HEADER, PATH_HEADER, RESULT_HEADER};
use pdifmp_cli::run::{preset_kind, timed_price_cell};
use pdifmp_cli::{
    bench, mean_times, result_row, run_experiment, scenario_runs, simulate_paths, write_csv, write_csv_file,
    ExperimentSpec, RayonExecutor,
};

/// American option pricing with Longstaff-Schwartz and piecewise diffusion paths.
#[derive(Parser)]
#[command(name = "pdifmp", version)]
struct Cli {
    /// Worker threads (default: one per CPU). Results do not depend on it.
    #[arg(long, global = true)]
    threads: Option<usize>,
    #[command(subcommand)]
    cmd: Cmd,
}

#[derive(Subcommand)]
enum Cmd {
    /// Price one option with one method.
    Price(PriceArgs),
    /// Run every cell of a results table.
    Experiment(PresetArgs),
    /// Time the methods of a benchmark preset.
    Bench {
        #[command(flatten)]
        preset: PresetArgs,
        #[arg(long, default_value_t = 3)]
        trials: usize,
    },
    /// Dump fine-grid paths with jump markers.
    Simulate(SimulateArgs),
    /// List the known presets.
    List,
}

#[derive(Args)]
struct PresetArgs {
    id: String,
    /// Parameter override `key=value`, repeatable (keys as in `price`).
    #[arg(long = "set", value_name = "KEY=VALUE")]
    set: Vec<String>,
    #[arg(long, default_value_t = 42)]
    seed: u64,
    /// Output file (a directory for scenario presets). Defaults to stdout.
    #[arg(long)]
    out: Option<PathBuf>,
    /// Fill the runtime_s column.
    #[arg(long)]
    timing: bool,
}

#[derive(Args)]
struct ModelArgs {
    #[arg(long, default_value_t = 36.0)]
    s0: f64,
    #[arg(long, default_value_t = 40.0)]
    strike: f64,
    #[arg(long, default_value_t = 0.06)]
    r: f64,
    #[arg(long, default_value_t = 0.2)]
    sigma: f64,
    #[arg(long, default_value_t = 1.0)]
    maturity: f64,
    #[arg(long, default_value_t = 0.06)]
    mu0: f64,
    #[arg(long, default_value_t = 5.0)]
    lambda0: f64,
    #[arg(long, default_value_t = 0.0)]
    eta: f64,
    #[arg(long, default_value_t = 1e-6)]
    alpha: f64,
    #[arg(long, default_value_t = 0.01)]
    b: f64,
    #[arg(long, default_value_t = 0.0)]
    beta: f64,
    /// `strike`, `initial` or a number.
    #[arg(long, default_value = "initial")]
    delta: String,
}

impl ModelArgs {
    fn cell(&self) -> anyhow::Result<Cell> {
        let mut cell = Cell::default();
        for (k, v) in [
            ("s0", self.s0),
            ("strike", self.strike),
            ("r", self.r),
            ("sigma", self.sigma),
            ("maturity", self.maturity),
            ("mu0", self.mu0),
            ("lambda0", self.lambda0),
            ("eta", self.eta),
            ("alpha", self.alpha),
            ("b", self.b),
            ("beta", self.beta),
        ] {
            cell.apply(k, &v.to_string())?;
        }
        cell.apply("delta", &self.delta)?;
        Ok(cell)
    }
}

#[derive(Args)]
struct PriceArgs {
    #[arg(long, default_value = "ls-pdifmp")]
    method: Method,
    #[arg(long, default_value = "put")]
    option: String,
    #[command(flatten)]
    model: ModelArgs,
    #[arg(long, default_value_t = 10_000)]
    paths: usize,
    #[arg(long, default_value_t = 50)]
    exercise_points: usize,
    /// Fine-grid step (default 0.02 for `ls`, 0.001 otherwise).
    #[arg(long)]
    step: Option<f64>,
    #[arg(long, default_value_t = 42)]
    seed: u64,
    #[arg(long)]
    out: Option<PathBuf>,
    #[arg(long)]
    timing: bool,
}

#[derive(Args)]
struct SimulateArgs {
    /// Scenario preset; when given, model flags are ignored and `--set` applies.
    #[arg(long)]
    preset: Option<String>,
    #[arg(long = "set", value_name = "KEY=VALUE")]
    set: Vec<String>,
    #[command(flatten)]
    model: ModelArgs,
    /// Number of paths.
    #[arg(short, long, default_value_t = 1)]
    n: usize,
    #[arg(long, default_value_t = PDIFMP_STEP)]
    step: f64,
    /// Keep every k-th grid point (jumps and maturity are always kept).
    #[arg(long, default_value_t = 1)]
    stride: usize,
    #[arg(long, default_value_t = 42)]
    seed: u64,
    /// Output file, or directory for a preset. Defaults to stdout.
    #[arg(long)]
    out: Option<PathBuf>,
}

fn emit<T: serde::Serialize>(out: Option<&Path>, header: &[&str], rows: &[T]) -> anyhow::Result<()> {
    match out {
        Some(path) => write_csv_file(path, header, rows)?,
        None => write_csv(io::stdout().lock(), header, rows)?,
    }
    Ok(())
}

fn preset_spec(args: &PresetArgs) -> anyhow::Result<ExperimentSpec> {
    let mut spec = ExperimentSpec::new(&args.id, args.seed);
    for s in &args.set {
        let (k, v) = presets::split_override(s)?;
        spec = spec.with_override(k, v);
    }
    spec.out_path = args.out.clone();
    Ok(spec)
}

fn main() {
    let cli = match Cli::try_parse() {
        Ok(cli) => cli,
        Err(e) if !e.use_stderr() => e.exit(),
        Err(e) => {
            // clap appends usage hints; keep only the diagnostic line
            let text = e.to_string();
            eprintln!("{}", text.lines().next().unwrap_or("invalid arguments"));
            std::process::exit(2);
        }
    };
    if let Err(e) = run(cli) {
        eprintln!("error: {e:#}");
        std::process::exit(1);
    }
}

fn run(cli: Cli) -> anyhow::Result<()> {
    let exec = RayonExecutor::new(cli.threads)?;
    match cli.cmd {
        Cmd::List => {
            for p in presets::PRESETS {
                let kind = match p.kind {
                    PresetKind::Table => "table",
                    PresetKind::Bench => "bench",
                    PresetKind::Scenario => "paths",
                };
                println!("{:<10} {:<6} {}", p.id, kind, p.about);
            }
        }
        Cmd::Price(a) => {
            let mut cell = a.model.cell()?;
            cell.apply("option", &a.option)?;
            cell.n_paths = a.paths;
            cell.n_exercise = a.exercise_points;
            cell.ls_step = a.step.unwrap_or(LS_STEP);
            cell.pdifmp_step = a.step.unwrap_or(PDIFMP_STEP);
            let res = timed_price_cell(&cell, a.method, a.seed, &exec)?;
            emit(
                a.out.as_deref(),
                RESULT_HEADER,
                &[result_row(&cell, &res, a.timing)],
            )?;
        }
        Cmd::Experiment(a) => {
            if preset_kind(&a.id)? == PresetKind::Scenario {
                bail!(
                    "`{}` is a path scenario, use `pdifmp simulate --preset {}`",
                    a.id,
                    a.id
                );
            }
            let spec = preset_spec(&a)?;
            let rows = run_experiment(&spec, &exec, a.timing)?;
            emit(a.out.as_deref(), RESULT_HEADER, &rows)?;
        }
        Cmd::Bench { preset, trials } => {
            if preset_kind(&preset.id)? == PresetKind::Scenario {
                bail!("`{}` is a path scenario, not a benchmark", preset.id);
            }
            let spec = preset_spec(&preset)?;
            let rows = bench(&spec, trials, &exec)?;
            emit(preset.out.as_deref(), BENCH_HEADER, &rows)?;
            eprintln!("mean seconds per trial ({} threads):", exec.threads());
            for (method, lambda0, secs) in mean_times(&rows) {
                eprintln!("  {method:<10} lambda0={lambda0:<5} {secs:.3}");
            }
        }
        Cmd::Simulate(a) => match &a.preset {
            Some(id) => {
                let mut spec = ExperimentSpec::new(id, a.seed);
                for s in &a.set {
                    let (k, v) = presets::split_override(s)?;
                    spec = spec.with_override(k, v);
                }
                let dir = a.out.clone().context("--out <DIR> is required with --preset")?;
                fs::create_dir_all(&dir).with_context(|| format!("creating {}", dir.display()))?;
                for run in scenario_runs(&spec)? {
                    let rows = simulate_paths(
                        &run.market,
                        &run.pdifmp,
                        run.n_paths,
                        run.step,
                        a.seed,
                        a.stride,
                        &exec,
                    )?;
                    let path = dir.join(format!("{}.csv", run.label));
                    write_csv_file(&path, PATH_HEADER, &rows)?;
                    eprintln!("wrote {}", path.display());
                }
            }
            None => {
                let cell = a.model.cell()?;
                let rows = simulate_paths(&cell.market, &cell.pdifmp, a.n, a.step, a.seed, a.stride, &exec)?;
                emit(a.out.as_deref(), PATH_HEADER, &rows)?;
            }
        },
    }
    Ok(())
}
