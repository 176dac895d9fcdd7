//! Path engines: geometric Brownian motion, the piecewise diffusion process
//! with state-dependent drift switching, and sampling onto exercise dates.
//!
//! Within a drift regime the price is advanced with the exact lognormal step
//! `S <- S * exp((mu - sigma^2/2) dt + sigma sqrt(dt) Z)`. Jump times come from
//! a unit exponential clock `-ln U` compared against the left-point Riemann sum
//! of the intensity along the fine grid, so every jump lands on a grid time.

use alloc::format;
use alloc::vec::Vec;

use rand::Rng;

use crate::error::{config, invalid, Result};
use crate::exec::PathExecutor;
use crate::model::{
    laplace_quantile, rate_at, GridShape, MarketParams, PdifmpParams, PdifmpState, SimConfig,
};
use crate::rng::{open01, standard_normal, stream, PathStreams, Purpose};

/// A path is flagged when its running maximum exceeds this multiple of its start.
pub const FLAG_MULTIPLE: f64 = 3.0;

/// Anything with a fine time grid and prices on it.
pub trait FineGridPath {
    fn times(&self) -> &[f64];
    fn prices(&self) -> &[f64];
}

#[derive(Debug, Clone, PartialEq)]
pub struct GbmPath {
    pub times: Vec<f64>,
    pub prices: Vec<f64>,
}

impl FineGridPath for GbmPath {
    fn times(&self) -> &[f64] {
        &self.times
    }
    fn prices(&self) -> &[f64] {
        &self.prices
    }
}

/// One trajectory of the piecewise process.
///
/// `jump_times` holds the regime switches followed by the maturity, and
/// `jump_steps` the matching indices into `times`/`prices`. `drifts[0]` is the
/// initial regime and `drifts[i]` the drift drawn at the `i`-th switch.
#[derive(Debug, Clone, PartialEq)]
pub struct PdifmpPath {
    pub times: Vec<f64>,
    pub prices: Vec<f64>,
    pub jump_times: Vec<f64>,
    pub jump_steps: Vec<usize>,
    pub drifts: Vec<f64>,
    pub n_jumps: usize,
    /// Kernel draws that landed below zero.
    pub negative_drifts: usize,
}

impl FineGridPath for PdifmpPath {
    fn times(&self) -> &[f64] {
        &self.times
    }
    fn prices(&self) -> &[f64] {
        &self.prices
    }
}

impl PdifmpPath {
    /// `(time, price)` at every recorded jump time, maturity included.
    pub fn opportunities(&self) -> impl Iterator<Item = (f64, f64)> + '_ {
        self.jump_times
            .iter()
            .zip(&self.jump_steps)
            .map(|(&t, &k)| (t, self.prices[k]))
    }
}

/// Prices of `n_paths` paths at the exercise dates `exercise_times`, row-major.
#[derive(Debug, Clone, PartialEq)]
pub struct PathMatrix {
    pub n_paths: usize,
    pub exercise_times: Vec<f64>,
    pub values: Vec<f64>,
    pub flags: Vec<bool>,
}

impl PathMatrix {
    /// Builds a matrix from explicit rows; no path is flagged.
    pub fn from_rows(exercise_times: Vec<f64>, rows: &[Vec<f64>]) -> Result<Self> {
        let n_ex = exercise_times.len();
        if n_ex == 0 {
            return Err(invalid("at least one exercise date is required"));
        }
        let increasing = exercise_times.windows(2).all(|w| w[0] < w[1]);
        if !increasing || !(exercise_times[0] > 0.0) {
            return Err(invalid("exercise dates must be positive and strictly increasing"));
        }
        let mut values = Vec::with_capacity(rows.len() * n_ex);
        for (i, row) in rows.iter().enumerate() {
            if row.len() != n_ex {
                return Err(invalid(format!(
                    "row {i} has {} values, expected {n_ex}",
                    row.len()
                )));
            }
            if row.iter().any(|v| !(*v > 0.0 && v.is_finite())) {
                return Err(invalid(format!("row {i} contains a non-positive price")));
            }
            values.extend_from_slice(row);
        }
        Ok(Self {
            n_paths: rows.len(),
            exercise_times,
            values,
            flags: alloc::vec![false; rows.len()],
        })
    }

    #[inline]
    pub fn n_exercise(&self) -> usize {
        self.exercise_times.len()
    }

    #[inline]
    pub fn row(&self, i: usize) -> &[f64] {
        let n = self.n_exercise();
        &self.values[i * n..(i + 1) * n]
    }

    #[inline]
    pub fn value(&self, path: usize, date: usize) -> f64 {
        self.values[path * self.n_exercise() + date]
    }

    pub fn maturity(&self) -> f64 {
        *self.exercise_times.last().expect("non-empty exercise grid")
    }

    pub fn flagged_count(&self) -> usize {
        self.flags.iter().filter(|f| **f).count()
    }
}

#[inline]
fn lognormal_step(drift: f64, sigma: f64, dt: f64) -> (f64, f64) {
    ((drift - 0.5 * sigma * sigma) * dt, sigma * libm::sqrt(dt))
}

/// Builds a GBM path on `grid` from explicit standard normal draws.
pub fn gbm_path_from_normals<I>(s0: f64, drift: f64, sigma: f64, grid: &GridShape, normals: I) -> GbmPath
where
    I: IntoIterator<Item = f64>,
{
    let (mean, vol) = lognormal_step(drift, sigma, grid.dt);
    let mut prices = Vec::with_capacity(grid.n_steps + 1);
    prices.push(s0);
    let mut s = s0;
    for z in normals.into_iter().take(grid.n_steps) {
        s *= libm::exp(mean + vol * z);
        prices.push(s);
    }
    assert_eq!(
        prices.len(),
        grid.n_steps + 1,
        "not enough normal draws for the grid"
    );
    GbmPath {
        times: (0..=grid.n_steps).map(|k| grid.time(k)).collect(),
        prices,
    }
}

fn gbm_on_grid(m: &MarketParams, drift: f64, grid: &GridShape, seed: u64, path_index: usize) -> GbmPath {
    let mut wiener = stream(seed, path_index as u64, Purpose::Wiener);
    gbm_path_from_normals(
        m.s0,
        drift,
        m.sigma,
        grid,
        core::iter::repeat_with(move || standard_normal(&mut wiener)),
    )
}

/// Simulates path `path_index` of a GBM batch with constant `drift`.
pub fn simulate_gbm_path(
    m: &MarketParams,
    drift: f64,
    cfg: &SimConfig,
    path_index: usize,
) -> Result<GbmPath> {
    m.validate()?;
    let grid = cfg.grid(m.maturity)?;
    if path_index >= cfg.n_paths {
        return Err(invalid(format!(
            "path index {path_index} out of range for {} paths",
            cfg.n_paths
        )));
    }
    Ok(gbm_on_grid(m, drift, &grid, cfg.seed, path_index))
}

/// Outcome of advancing one drift regime along the grid.
#[derive(Debug, Clone, Copy, PartialEq)]
pub(crate) struct RegimeEnd {
    pub steps: usize,
    pub price: f64,
    pub jumped: bool,
    pub integral: f64,
    pub integral_before: f64,
}

/// Advances the flow with fixed `drift` until the accumulated intensity reaches
/// `threshold` or `max_steps` steps have been taken. `on_step(k, s)` sees the
/// price after the `k`-th step (1-based).
#[allow(clippy::too_many_arguments)]
#[inline]
pub(crate) fn advance_regime<R, F>(
    s_start: f64,
    drift: f64,
    p: &PdifmpParams,
    delta: f64,
    sigma: f64,
    dt: f64,
    max_steps: usize,
    threshold: f64,
    wiener: &mut R,
    mut on_step: F,
) -> RegimeEnd
where
    R: Rng + ?Sized,
    F: FnMut(usize, f64),
{
    let (mean, vol) = lognormal_step(drift, sigma, dt);
    let mut s = s_start;
    let mut integral = 0.0;
    let mut before = 0.0;
    for k in 1..=max_steps {
        before = integral;
        integral += rate_at(s, p, delta) * dt;
        s *= libm::exp(mean + vol * standard_normal(wiener));
        on_step(k, s);
        if integral >= threshold {
            return RegimeEnd {
                steps: k,
                price: s,
                jumped: true,
                integral,
                integral_before: before,
            };
        }
    }
    RegimeEnd {
        steps: max_steps,
        price: s,
        jumped: false,
        integral,
        integral_before: before,
    }
}

/// One inter-jump interval produced by grid thinning.
#[derive(Debug, Clone, PartialEq)]
pub struct InterJump {
    /// Waiting time to the jump, `None` when the clock did not ring within the horizon.
    pub waiting_time: Option<f64>,
    /// Grid steps advanced (up to and including the jump step).
    pub steps: usize,
    /// Prices after each advanced step; the last entry is the flow endpoint.
    pub prices: Vec<f64>,
    /// Exponential clock level `-ln U`.
    pub threshold: f64,
    /// Accumulated intensity integral at the last advanced grid time.
    pub integral: f64,
    /// Accumulated intensity integral one grid time earlier.
    pub integral_before: f64,
}

/// Draws the next waiting time from `state`, whose `mu` is the regime drift.
///
/// The intensity is held constant over each grid cell at its left-point value
/// and the jump is declared at the first grid time where the integral reaches
/// `-ln(u)`. At most `horizon_steps` steps of width `h` are taken.
#[allow(clippy::too_many_arguments)]
pub fn sample_interjump<R: Rng + ?Sized>(
    state: &PdifmpState,
    p: &PdifmpParams,
    delta: f64,
    m: &MarketParams,
    h: f64,
    horizon_steps: usize,
    u: f64,
    wiener: &mut R,
) -> Result<InterJump> {
    if !(h > 0.0 && h.is_finite()) {
        return Err(invalid(format!("step size must be positive, got {h}")));
    }
    if !(u > 0.0 && u < 1.0) {
        return Err(invalid(format!("clock uniform must lie in (0, 1), got {u}")));
    }
    if !(state.s > 0.0) {
        return Err(invalid(format!("price must be positive, got {}", state.s)));
    }
    let threshold = -libm::log(u);
    let mut prices = Vec::new();
    let end = advance_regime(
        state.s,
        state.mu,
        p,
        delta,
        m.sigma,
        h,
        horizon_steps,
        threshold,
        wiener,
        |_, s| prices.push(s),
    );
    Ok(InterJump {
        waiting_time: end.jumped.then_some(end.steps as f64 * h),
        steps: end.steps,
        prices,
        threshold,
        integral: end.integral,
        integral_before: end.integral_before,
    })
}

/// Receives the events of a piecewise path as it is generated.
pub(crate) trait PathSink {
    fn step(&mut self, _step: usize, _price: f64) {}
    /// A regime switch at grid index `step`; `drift` is the newly drawn regime.
    fn jump(&mut self, step: usize, price: f64, drift: f64);
    fn maturity(&mut self, step: usize, price: f64);
}

#[derive(Debug, Clone, Copy, Default, PartialEq, Eq)]
pub(crate) struct WalkSummary {
    pub n_jumps: usize,
    pub negative_drifts: usize,
}

/// Generates one piecewise path and streams its events into `sink`.
pub(crate) fn walk_pdifmp<S: PathSink>(
    m: &MarketParams,
    p: &PdifmpParams,
    delta: f64,
    grid: &GridShape,
    streams: &mut PathStreams,
    sink: &mut S,
) -> WalkSummary {
    let mut summary = WalkSummary::default();
    let mut s = m.s0;
    let mut mu = p.mu0;
    let mut at = 0;
    loop {
        let threshold = -libm::log(open01(&mut streams.clock));
        let offset = at;
        let end = advance_regime(
            s,
            mu,
            p,
            delta,
            m.sigma,
            grid.dt,
            grid.n_steps - at,
            threshold,
            &mut streams.wiener,
            |k, price| sink.step(offset + k, price),
        );
        at += end.steps;
        s = end.price;
        if !end.jumped || at >= grid.n_steps {
            break;
        }
        mu = laplace_quantile(
            crate::model::laplace_location(s, p, delta),
            p.b,
            open01(&mut streams.kernel),
        );
        if mu < 0.0 {
            summary.negative_drifts += 1;
        }
        summary.n_jumps += 1;
        sink.jump(at, s, mu);
    }
    sink.maturity(grid.n_steps, s);
    summary
}

struct Recorder<'a> {
    grid: &'a GridShape,
    path: PdifmpPath,
}

impl PathSink for Recorder<'_> {
    fn step(&mut self, _step: usize, price: f64) {
        self.path.prices.push(price);
    }

    fn jump(&mut self, step: usize, _price: f64, drift: f64) {
        self.path.jump_times.push(self.grid.time(step));
        self.path.jump_steps.push(step);
        self.path.drifts.push(drift);
    }

    fn maturity(&mut self, step: usize, _price: f64) {
        self.path.jump_times.push(self.grid.time(step));
        self.path.jump_steps.push(step);
    }
}

pub(crate) fn pdifmp_on_grid(
    m: &MarketParams,
    p: &PdifmpParams,
    delta: f64,
    grid: &GridShape,
    seed: u64,
    path_index: usize,
) -> PdifmpPath {
    let mut prices = Vec::with_capacity(grid.n_steps + 1);
    prices.push(m.s0);
    let mut rec = Recorder {
        grid,
        path: PdifmpPath {
            times: (0..=grid.n_steps).map(|k| grid.time(k)).collect(),
            prices,
            jump_times: Vec::new(),
            jump_steps: Vec::new(),
            drifts: alloc::vec![p.mu0],
            n_jumps: 0,
            negative_drifts: 0,
        },
    };
    let mut streams = PathStreams::new(seed, path_index as u64);
    let summary = walk_pdifmp(m, p, delta, grid, &mut streams, &mut rec);
    rec.path.n_jumps = summary.n_jumps;
    rec.path.negative_drifts = summary.negative_drifts;
    rec.path
}

/// Simulates path `path_index` of a piecewise-process batch on the fine grid.
pub fn simulate_pdifmp_path(
    m: &MarketParams,
    p: &PdifmpParams,
    cfg: &SimConfig,
    path_index: usize,
) -> Result<PdifmpPath> {
    m.validate()?;
    p.validate()?;
    let grid = cfg.grid(m.maturity)?;
    if path_index >= cfg.n_paths {
        return Err(invalid(format!(
            "path index {path_index} out of range for {} paths",
            cfg.n_paths
        )));
    }
    Ok(pdifmp_on_grid(
        m,
        p,
        p.delta_mode.resolve(m),
        &grid,
        cfg.seed,
        path_index,
    ))
}

/// Writes the prices at every `stride`-th grid point (skipping t = 0) into
/// `out` and reports whether the path's running maximum breached the flag level.
fn sample_row(prices: &[f64], stride: usize, n_exercise: usize, out: &mut Vec<f64>) -> bool {
    out.extend((1..=n_exercise).map(|k| prices[k * stride]));
    let limit = FLAG_MULTIPLE * prices[0];
    prices.iter().any(|&s| s > limit)
}

/// Samples fine-grid paths at `n_exercise` equally spaced dates `k T / n_exercise`.
pub fn sample_on_grid<P: FineGridPath>(paths: &[P], n_exercise: usize) -> Result<PathMatrix> {
    if n_exercise == 0 {
        return Err(config("at least one exercise date is required"));
    }
    let first = paths.first().ok_or_else(|| invalid("no paths to sample"))?;
    let times = first.times();
    let n_steps = times.len().saturating_sub(1);
    if n_steps == 0 || n_steps % n_exercise != 0 {
        return Err(config(format!(
            "{n_exercise} exercise dates do not lie on a grid of {n_steps} steps"
        )));
    }
    let stride = n_steps / n_exercise;
    let maturity = times[n_steps];
    let exercise_times: Vec<f64> = (1..=n_exercise).map(|k| times[k * stride]).collect();
    for (k, &t) in exercise_times.iter().enumerate() {
        let target = (k + 1) as f64 * maturity / n_exercise as f64;
        if (t - target).abs() > 1e-9 * maturity {
            return Err(config(format!("exercise date {target} is not on the fine grid")));
        }
    }

    let mut values = Vec::with_capacity(paths.len() * n_exercise);
    let mut flags = Vec::with_capacity(paths.len());
    for (i, path) in paths.iter().enumerate() {
        if path.times().len() != times.len() || path.prices().len() != times.len() {
            return Err(config(format!("path {i} does not share the first path's grid")));
        }
        flags.push(sample_row(path.prices(), stride, n_exercise, &mut values));
    }
    Ok(PathMatrix {
        n_paths: paths.len(),
        exercise_times,
        values,
        flags,
    })
}

fn exercise_times(grid: &GridShape) -> Vec<f64> {
    (1..=grid.n_steps / grid.stride)
        .map(|k| grid.time(k * grid.stride))
        .collect()
}

fn assemble(grid: &GridShape, rows: Vec<(Vec<f64>, bool)>) -> PathMatrix {
    let n_paths = rows.len();
    let mut values = Vec::with_capacity(n_paths * grid.n_steps / grid.stride);
    let mut flags = Vec::with_capacity(n_paths);
    for (row, flag) in rows {
        values.extend_from_slice(&row);
        flags.push(flag);
    }
    PathMatrix {
        n_paths,
        exercise_times: exercise_times(grid),
        values,
        flags,
    }
}

/// Simulates a GBM batch and samples it at the exercise dates.
pub fn gbm_matrix<E: PathExecutor>(
    m: &MarketParams,
    drift: f64,
    cfg: &SimConfig,
    exec: &E,
) -> Result<PathMatrix> {
    m.validate()?;
    let grid = cfg.grid(m.maturity)?;
    let n_ex = cfg.n_exercise;
    let rows = exec.map_indexed(cfg.n_paths, |i| {
        let path = gbm_on_grid(m, drift, &grid, cfg.seed, i);
        let mut row = Vec::with_capacity(n_ex);
        let flag = sample_row(&path.prices, grid.stride, n_ex, &mut row);
        (row, flag)
    });
    Ok(assemble(&grid, rows))
}

/// Simulates a piecewise-process batch on the fine grid and samples it at the
/// exercise dates. Also returns the total count of negative kernel draws.
pub fn pdifmp_matrix<E: PathExecutor>(
    m: &MarketParams,
    p: &PdifmpParams,
    cfg: &SimConfig,
    exec: &E,
) -> Result<(PathMatrix, usize)> {
    m.validate()?;
    p.validate()?;
    let grid = cfg.grid(m.maturity)?;
    let delta = p.delta_mode.resolve(m);
    let n_ex = cfg.n_exercise;
    let rows = exec.map_indexed(cfg.n_paths, |i| {
        let path = pdifmp_on_grid(m, p, delta, &grid, cfg.seed, i);
        let mut row = Vec::with_capacity(n_ex);
        let flag = sample_row(&path.prices, grid.stride, n_ex, &mut row);
        (row, flag, path.negative_drifts)
    });
    let negative = rows.iter().map(|r| r.2).sum();
    let rows = rows.into_iter().map(|(row, flag, _)| (row, flag)).collect();
    Ok((assemble(&grid, rows), negative))
}
