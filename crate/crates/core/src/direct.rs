//! Direct pricing from the jump times of the piecewise process.
//!
//! Each jump time and the maturity is an exercise opportunity; a path is worth
//! the largest discounted intrinsic value over its opportunities. The maximum
//! looks at the whole path, so this is not a stopping rule.

use crate::error::Result;
use crate::exec::PathExecutor;
use crate::model::{intrinsic, MarketParams, OptionSpec, PdifmpParams, SimConfig};
use crate::paths::{walk_pdifmp, PathSink, PdifmpPath};
use crate::pricing::{Estimate, Method, PricingResult};
use crate::rng::PathStreams;

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct PathPayoff {
    pub best_value: f64,
    /// Time of the best opportunity, `None` when no opportunity was in the money.
    pub best_time: Option<f64>,
    pub n_opportunities: usize,
}

impl PathPayoff {
    const EMPTY: PathPayoff = PathPayoff {
        best_value: 0.0,
        best_time: None,
        n_opportunities: 0,
    };

    #[inline]
    fn offer(&mut self, spec: &OptionSpec, r: f64, t: f64, s: f64) {
        self.n_opportunities += 1;
        let value = libm::exp(-r * t) * intrinsic(spec, s);
        if value > self.best_value {
            self.best_value = value;
            self.best_time = Some(t);
        }
    }
}

/// Best discounted intrinsic value over arbitrary `(time, price)` opportunities.
pub fn best_discounted_payoff<I>(opportunities: I, spec: &OptionSpec, r: f64) -> PathPayoff
where
    I: IntoIterator<Item = (f64, f64)>,
{
    let mut out = PathPayoff::EMPTY;
    for (t, s) in opportunities {
        out.offer(spec, r, t, s);
    }
    out
}

/// Best discounted intrinsic value over the recorded jump times of `path`,
/// maturity included and inception excluded.
pub fn path_best_discounted_payoff(path: &PdifmpPath, spec: &OptionSpec, r: f64) -> PathPayoff {
    best_discounted_payoff(path.opportunities(), spec, r)
}

/// Evaluates opportunities as the path is generated, without storing it.
struct Tracker<'a> {
    spec: &'a OptionSpec,
    r: f64,
    dt: f64,
    maturity: f64,
    payoff: PathPayoff,
    peak: f64,
}

impl PathSink for Tracker<'_> {
    #[inline]
    fn step(&mut self, _step: usize, price: f64) {
        self.peak = self.peak.max(price);
    }

    fn jump(&mut self, step: usize, price: f64, _drift: f64) {
        self.payoff.offer(self.spec, self.r, step as f64 * self.dt, price);
    }

    fn maturity(&mut self, _step: usize, price: f64) {
        self.payoff.offer(self.spec, self.r, self.maturity, price);
    }
}

/// Mean over `cfg.n_paths` paths of the best discounted intrinsic value.
///
/// Paths are streamed rather than stored. The result is bit-identical to
/// applying [`path_best_discounted_payoff`] to [`crate::simulate_pdifmp_path`]
/// for every index.
pub fn price_pdifmp<E: PathExecutor>(
    m: &MarketParams,
    p: &PdifmpParams,
    spec: &OptionSpec,
    cfg: &SimConfig,
    exec: &E,
) -> Result<PricingResult> {
    m.validate()?;
    p.validate()?;
    spec.validate()?;
    let grid = cfg.grid(m.maturity)?;
    let delta = p.delta_mode.resolve(m);
    let flag_level = crate::paths::FLAG_MULTIPLE * m.s0;

    let per_path = exec.map_indexed(cfg.n_paths, |i| {
        let mut streams = PathStreams::new(cfg.seed, i as u64);
        let mut tracker = Tracker {
            spec,
            r: m.r,
            dt: grid.dt,
            maturity: grid.maturity,
            payoff: PathPayoff::EMPTY,
            peak: m.s0,
        };
        let summary = walk_pdifmp(m, p, delta, &grid, &mut streams, &mut tracker);
        (
            tracker.payoff.best_value,
            tracker.peak > flag_level,
            summary.negative_drifts,
        )
    });

    let values: alloc::vec::Vec<f64> = per_path.iter().map(|v| v.0).collect();
    let flagged = per_path.iter().filter(|v| v.1).count();
    let negative = per_path.iter().map(|v| v.2).sum();
    let est = Estimate::from_values(&values)?;
    Ok(PricingResult::new(
        est,
        Method::PdifmpDirect,
        cfg.seed,
        flagged,
        negative,
    ))
}
