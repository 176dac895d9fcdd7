//! Pricing runs, benchmarks and path dumps behind the command-line front end.

use std::path::PathBuf;
use std::time::Instant;

use pdifmp_core::{
    price_ls_classic, price_ls_pdifmp, price_pdifmp, simulate_pdifmp_path, MarketParams, Method, OptionKind,
    PathExecutor, PdifmpParams, PricingResult, SimConfig,
};

use crate::error::{Error, Result};
use crate::presets::{self, Cell, PresetKind, ScenarioRun};
use crate::rows::{BenchRow, PathRow, ResultRow};

/// A named preset plus `key=value` overrides applied to each of its cells.
#[derive(Debug, Clone, PartialEq)]
pub struct ExperimentSpec {
    pub id: String,
    pub overrides: Vec<(String, String)>,
    pub out_path: Option<PathBuf>,
    pub seed: u64,
}

impl ExperimentSpec {
    pub fn new(id: impl Into<String>, seed: u64) -> Self {
        Self {
            id: id.into(),
            overrides: Vec::new(),
            out_path: None,
            seed,
        }
    }

    pub fn with_override(mut self, key: &str, value: &str) -> Self {
        self.overrides.push((key.to_string(), value.to_string()));
        self
    }

    pub fn cells(&self) -> Result<Vec<Cell>> {
        let mut cells = presets::cells(&self.id)?;
        for cell in &mut cells {
            for (k, v) in &self.overrides {
                cell.apply(k, v)?;
            }
        }
        Ok(cells)
    }
}

fn option_name(kind: OptionKind) -> &'static str {
    match kind {
        OptionKind::Put => "put",
        OptionKind::Call => "call",
    }
}

/// Prices one cell with one method.
pub fn price_cell<E: PathExecutor>(
    cell: &Cell,
    method: Method,
    seed: u64,
    exec: &E,
) -> Result<PricingResult> {
    let cfg = cell.sim_config(method, seed);
    let spec = cell.option();
    let res = match method {
        Method::LsClassic => price_ls_classic(&cell.market, &spec, cell.pdifmp.mu0, &cfg, exec)?,
        Method::LsPdifmp => price_ls_pdifmp(&cell.market, &cell.pdifmp, &spec, &cfg, exec)?,
        Method::PdifmpDirect => price_pdifmp(&cell.market, &cell.pdifmp, &spec, &cfg, exec)?,
    };
    Ok(res)
}

/// Same as [`price_cell`], also measuring wall-clock seconds.
pub fn timed_price_cell<E: PathExecutor>(
    cell: &Cell,
    method: Method,
    seed: u64,
    exec: &E,
) -> Result<PricingResult> {
    let start = Instant::now();
    let mut res = price_cell(cell, method, seed, exec)?;
    res.runtime_s = start.elapsed().as_secs_f64();
    Ok(res)
}

pub fn result_row(cell: &Cell, res: &PricingResult, timed: bool) -> ResultRow {
    let (m, p) = (&cell.market, &cell.pdifmp);
    ResultRow {
        method: res.method.as_str().to_string(),
        option: option_name(cell.kind).to_string(),
        s0: m.s0,
        strike: m.strike,
        r: m.r,
        sigma: m.sigma,
        lambda0: p.lambda0,
        eta: p.eta,
        alpha: p.alpha,
        b: p.b,
        beta: p.beta,
        delta: p.delta_mode.resolve(m),
        n_paths: res.n_paths,
        n_exercise: cell.n_exercise,
        seed: res.seed,
        price: res.price,
        std_error: res.std_error,
        runtime_s: timed.then_some(res.runtime_s),
        flagged_paths: res.flagged_paths,
    }
}

/// Runs every (cell, method) pair of a table preset, in table order.
pub fn run_experiment<E: PathExecutor>(
    spec: &ExperimentSpec,
    exec: &E,
    timed: bool,
) -> Result<Vec<ResultRow>> {
    let mut rows = Vec::new();
    for cell in spec.cells()? {
        for &method in &cell.methods {
            let res = timed_price_cell(&cell, method, spec.seed, exec)?;
            rows.push(result_row(&cell, &res, timed));
        }
    }
    Ok(rows)
}

/// Times each method `trials` times on every cell. Trial `i` uses seed `seed + i`.
pub fn bench<E: PathExecutor>(spec: &ExperimentSpec, trials: usize, exec: &E) -> Result<Vec<BenchRow>> {
    if trials == 0 {
        return Err(Error::Override("trials must be at least 1".into()));
    }
    let mut rows = Vec::new();
    for cell in spec.cells()? {
        for &method in &cell.methods {
            for trial in 0..trials {
                let seed = spec.seed.wrapping_add(trial as u64);
                let res = timed_price_cell(&cell, method, seed, exec)?;
                rows.push(BenchRow {
                    method: method.as_str().to_string(),
                    option: option_name(cell.kind).to_string(),
                    s0: cell.market.s0,
                    strike: cell.market.strike,
                    lambda0: cell.pdifmp.lambda0,
                    eta: cell.pdifmp.eta,
                    alpha: cell.pdifmp.alpha,
                    n_paths: cell.n_paths,
                    trial: trial + 1,
                    seed,
                    price: res.price,
                    runtime_s: res.runtime_s,
                });
            }
        }
    }
    Ok(rows)
}

/// Mean seconds per trial for each (method, lambda0) pair, in first-seen order.
pub fn mean_times(rows: &[BenchRow]) -> Vec<(String, f64, f64)> {
    let mut out: Vec<(String, f64, f64, usize)> = Vec::new();
    for r in rows {
        match out.iter_mut().find(|o| o.0 == r.method && o.1 == r.lambda0) {
            Some(o) => {
                o.2 += r.runtime_s;
                o.3 += 1;
            }
            None => out.push((r.method.clone(), r.lambda0, r.runtime_s, 1)),
        }
    }
    out.into_iter().map(|(m, l, t, n)| (m, l, t / n as f64)).collect()
}

/// Fine-grid dump of `n` piecewise-process paths. Only every `stride`-th grid
/// point is kept, plus jump points and maturity.
pub fn simulate_paths<E: PathExecutor>(
    market: &MarketParams,
    pdifmp: &PdifmpParams,
    n: usize,
    step: f64,
    seed: u64,
    stride: usize,
    exec: &E,
) -> Result<Vec<PathRow>> {
    let stride = stride.max(1);
    market.validate()?;
    pdifmp.validate()?;
    // exercise dates play no role here; one per grid step always divides the grid
    let n_steps = (market.maturity / step).round() as usize;
    let cfg = SimConfig {
        h: step,
        n_paths: n.max(1),
        n_exercise: n_steps.max(2),
        seed,
    };
    cfg.grid(market.maturity)?;
    let per_path = exec.map_indexed(n, |i| -> Result<Vec<PathRow>> {
        let path = simulate_pdifmp_path(market, pdifmp, &cfg, i)?;
        let last = path.times.len() - 1;
        let mut rows = Vec::new();
        let mut jumps = path.jump_steps[..path.n_jumps].iter().peekable();
        for (k, (&t, &s)) in path.times.iter().zip(&path.prices).enumerate() {
            let is_jump = jumps.next_if_eq(&&k).is_some();
            if is_jump || k % stride == 0 || k == last {
                rows.push(PathRow {
                    path: i,
                    step: k,
                    t,
                    price: s,
                    is_jump: is_jump as u8,
                    n_jumps: path.n_jumps,
                });
            }
        }
        Ok(rows)
    });
    let mut rows = Vec::new();
    for r in per_path {
        rows.extend(r?);
    }
    Ok(rows)
}

/// Runs of a scenario preset with overrides applied.
pub fn scenario_runs(spec: &ExperimentSpec) -> Result<Vec<ScenarioRun>> {
    let mut runs = presets::scenario(&spec.id)?;
    for run in &mut runs {
        let mut cell = Cell {
            market: run.market,
            pdifmp: run.pdifmp,
            ..Cell::default()
        };
        cell.n_paths = run.n_paths;
        cell.pdifmp_step = run.step;
        for (k, v) in &spec.overrides {
            cell.apply(k, v)?;
        }
        run.market = cell.market;
        run.pdifmp = cell.pdifmp;
        run.n_paths = cell.n_paths;
        run.step = cell.pdifmp_step;
    }
    Ok(runs)
}

pub fn preset_kind(id: &str) -> Result<PresetKind> {
    Ok(presets::find(id)?.kind)
}
