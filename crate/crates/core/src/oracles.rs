//! Reference pricers used to cross-check the Monte Carlo engines.

use alloc::vec::Vec;

use crate::error::{invalid, Result};
use crate::lsm::regress_quadratic;
use crate::model::{discount, intrinsic, MarketParams, OptionKind, OptionSpec};
use crate::paths::PathMatrix;

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum OracleMethod {
    BsClosedForm,
    CrrBinomial(usize),
    FixtureDp,
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct OraclePrice {
    pub value: f64,
    pub method: OracleMethod,
}

/// Standard normal CDF.
pub fn norm_cdf(x: f64) -> f64 {
    0.5 * libm::erfc(-x * core::f64::consts::FRAC_1_SQRT_2)
}

/// Black-Scholes price of a European option; `sigma = 0` gives the
/// deterministic forward limit.
pub fn bs_european(m: &MarketParams, spec: &OptionSpec) -> Result<OraclePrice> {
    m.validate()?;
    spec.validate()?;
    let k = spec.strike;
    let df = libm::exp(-m.r * m.maturity);
    let value = if m.sigma == 0.0 {
        match spec.kind {
            OptionKind::Put => (k * df - m.s0).max(0.0),
            OptionKind::Call => (m.s0 - k * df).max(0.0),
        }
    } else {
        let vol = m.sigma * libm::sqrt(m.maturity);
        let d1 = (libm::log(m.s0 / k) + (m.r + 0.5 * m.sigma * m.sigma) * m.maturity) / vol;
        let d2 = d1 - vol;
        match spec.kind {
            OptionKind::Call => m.s0 * norm_cdf(d1) - k * df * norm_cdf(d2),
            OptionKind::Put => k * df * norm_cdf(-d2) - m.s0 * norm_cdf(-d1),
        }
    };
    Ok(OraclePrice {
        value: value.max(0.0),
        method: OracleMethod::BsClosedForm,
    })
}

/// American option on a Cox-Ross-Rubinstein tree with early exercise at every node.
pub fn crr_american(m: &MarketParams, spec: &OptionSpec, steps: usize) -> Result<OraclePrice> {
    m.validate()?;
    spec.validate()?;
    if steps == 0 {
        return Err(invalid("the binomial tree needs at least one step"));
    }
    let dt = m.maturity / steps as f64;
    let disc = libm::exp(-m.r * dt);
    let method = OracleMethod::CrrBinomial(steps);

    if m.sigma == 0.0 {
        // single deterministic node per level, growing at the risk-free rate
        let growth = libm::exp(m.r * dt);
        let prices: Vec<f64> = core::iter::successors(Some(m.s0), |s| Some(s * growth))
            .take(steps + 1)
            .collect();
        let mut v = intrinsic(spec, prices[steps]);
        for s in prices[..steps].iter().rev() {
            v = intrinsic(spec, *s).max(disc * v);
        }
        return Ok(OraclePrice { value: v, method });
    }

    let up = libm::exp(m.sigma * libm::sqrt(dt));
    let down = 1.0 / up;
    let prob = (libm::exp(m.r * dt) - down) / (up - down);
    let (pu, pd) = (disc * prob, disc * (1.0 - prob));

    // node j at level i has price s0 * up^(2j - i)
    let powers: Vec<f64> = (0..=2 * steps)
        .map(|k| libm::pow(up, k as f64 - steps as f64))
        .collect();
    let price = |i: usize, j: usize| m.s0 * powers[steps + 2 * j - i];
    let mut v: Vec<f64> = (0..=steps).map(|j| intrinsic(spec, price(steps, j))).collect();
    for i in (0..steps).rev() {
        for j in 0..=i {
            let cont = pd * v[j] + pu * v[j + 1];
            v[j] = cont.max(intrinsic(spec, price(i, j)));
        }
    }
    Ok(OraclePrice { value: v[0], method })
}

/// Largest matrix the fixture evaluator accepts.
pub const FIXTURE_MAX_PATHS: usize = 16;
pub const FIXTURE_MAX_DATES: usize = 4;

/// Re-derives the Longstaff-Schwartz value of a small path matrix by tracking
/// each path's stopping date instead of a cash-flow matrix.
///
/// The exercise policy is the same one [`crate::ls_price`] applies (same
/// regression, strict inequality, dates visited from second-to-last down to
/// the second); discounting uses direct exponentials of elapsed time.
pub fn fixture_dp(paths: &PathMatrix, spec: &OptionSpec, r: f64) -> Result<OraclePrice> {
    spec.validate()?;
    let n_paths = paths.n_paths;
    let n_dates = paths.n_exercise();
    if n_paths == 0 || n_paths > FIXTURE_MAX_PATHS {
        return Err(invalid("fixture evaluator expects between 1 and 16 paths"));
    }
    if !(2..=FIXTURE_MAX_DATES).contains(&n_dates) {
        return Err(invalid(
            "fixture evaluator expects between 2 and 4 exercise dates",
        ));
    }
    let dt = paths.maturity() / n_dates as f64;

    // (stopping date, payoff at that date)
    let mut stop: Vec<Option<(usize, f64)>> = (0..n_paths)
        .map(|i| {
            let payoff = intrinsic(spec, paths.value(i, n_dates - 1));
            (payoff > 0.0).then_some((n_dates - 1, payoff))
        })
        .collect();

    for t in (1..n_dates - 1).rev() {
        let mut candidates = Vec::new();
        for (i, stopped) in stop.iter().enumerate() {
            let x = paths.value(i, t);
            if intrinsic(spec, x) > 0.0 {
                let y = match *stopped {
                    Some((k, payoff)) => payoff * discount((k - t) as f64 * dt, r)?,
                    None => 0.0,
                };
                candidates.push((i, x, y));
            }
        }
        if candidates.is_empty() {
            continue;
        }
        let xs: Vec<f64> = candidates.iter().map(|c| c.1).collect();
        let ys: Vec<f64> = candidates.iter().map(|c| c.2).collect();
        let fit = regress_quadratic(&xs, &ys)?;
        for &(i, x, _) in &candidates {
            let exercise = intrinsic(spec, x);
            if exercise > fit.continuation(x) {
                stop[i] = Some((t, exercise));
            }
        }
    }

    let mut total = 0.0;
    for stopped in &stop {
        if let Some((k, payoff)) = *stopped {
            total += payoff * discount((k + 1) as f64 * dt, r)?;
        }
    }
    Ok(OraclePrice {
        value: total / n_paths as f64,
        method: OracleMethod::FixtureDp,
    })
}
