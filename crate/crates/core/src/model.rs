//! Domain types and the closed-form model functions: jump intensity,
//! Laplace drift kernel, discounting and intrinsic payoff.

use alloc::format;

use crate::error::{config, invalid, Result};

/// Contract and market inputs shared by every pricing method.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct MarketParams {
    pub s0: f64,
    pub strike: f64,
    /// Risk-free rate per year.
    pub r: f64,
    /// Diffusion coefficient per sqrt-year.
    pub sigma: f64,
    /// Maturity in years.
    pub maturity: f64,
}

impl MarketParams {
    pub fn validate(&self) -> Result<()> {
        if !(self.s0 > 0.0 && self.s0.is_finite()) {
            return Err(invalid(format!("s0 must be positive, got {}", self.s0)));
        }
        if !(self.strike > 0.0 && self.strike.is_finite()) {
            return Err(invalid(format!("strike must be positive, got {}", self.strike)));
        }
        if !(self.sigma >= 0.0 && self.sigma.is_finite()) {
            return Err(invalid(format!("sigma must be non-negative, got {}", self.sigma)));
        }
        if !(self.maturity > 0.0 && self.maturity.is_finite()) {
            return Err(invalid(format!(
                "maturity must be positive, got {}",
                self.maturity
            )));
        }
        if !(self.r >= 0.0 && self.r.is_finite()) {
            return Err(invalid(format!("r must be non-negative, got {}", self.r)));
        }
        Ok(())
    }
}

/// Reference price from which the jump rate and kernel location measure deviations.
#[derive(Debug, Clone, Copy, PartialEq)]
pub enum DeltaMode {
    Strike,
    Initial,
    Custom(f64),
}

impl DeltaMode {
    pub fn resolve(&self, market: &MarketParams) -> f64 {
        match *self {
            DeltaMode::Strike => market.strike,
            DeltaMode::Initial => market.s0,
            DeltaMode::Custom(v) => v,
        }
    }
}

/// Jump mechanism: intensity `lambda0 + eta * max(0, |s - delta| - beta)` and a
/// Laplace kernel with location `mu0 + alpha * (s - delta)` and scale `b`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct PdifmpParams {
    /// Baseline drift, also the drift of the first regime.
    pub mu0: f64,
    pub lambda0: f64,
    pub eta: f64,
    /// Half-width of the buffer zone around delta.
    pub beta: f64,
    pub alpha: f64,
    /// Laplace scale.
    pub b: f64,
    pub delta_mode: DeltaMode,
}

impl PdifmpParams {
    pub fn validate(&self) -> Result<()> {
        let finite = [self.mu0, self.lambda0, self.eta, self.beta, self.alpha, self.b]
            .iter()
            .all(|v| v.is_finite());
        if !finite {
            return Err(invalid("jump parameters must be finite"));
        }
        if self.lambda0 < 0.0 {
            return Err(invalid(format!(
                "lambda0 must be non-negative, got {}",
                self.lambda0
            )));
        }
        if self.eta < 0.0 {
            return Err(invalid(format!("eta must be non-negative, got {}", self.eta)));
        }
        if self.beta < 0.0 {
            return Err(invalid(format!("beta must be non-negative, got {}", self.beta)));
        }
        if self.b <= 0.0 {
            return Err(invalid(format!(
                "Laplace scale b must be positive, got {}",
                self.b
            )));
        }
        if let DeltaMode::Custom(v) = self.delta_mode {
            if !v.is_finite() {
                return Err(invalid("custom delta must be finite"));
            }
        }
        Ok(())
    }
}

/// Joint state of the piecewise process: asset price and current drift regime.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct PdifmpState {
    pub s: f64,
    pub mu: f64,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum OptionKind {
    Put,
    Call,
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct OptionSpec {
    pub kind: OptionKind,
    pub strike: f64,
}

impl OptionSpec {
    pub fn put(strike: f64) -> Self {
        Self {
            kind: OptionKind::Put,
            strike,
        }
    }

    pub fn call(strike: f64) -> Self {
        Self {
            kind: OptionKind::Call,
            strike,
        }
    }

    pub fn validate(&self) -> Result<()> {
        if !(self.strike > 0.0 && self.strike.is_finite()) {
            return Err(invalid(format!("strike must be positive, got {}", self.strike)));
        }
        Ok(())
    }

    /// Strictly positive intrinsic value.
    #[inline]
    pub fn in_the_money(&self, s: f64) -> bool {
        match self.kind {
            OptionKind::Put => s < self.strike,
            OptionKind::Call => s > self.strike,
        }
    }
}

/// Monte Carlo discretisation: fine step `h`, path count, exercise dates and seed.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct SimConfig {
    pub h: f64,
    pub n_paths: usize,
    pub n_exercise: usize,
    pub seed: u64,
}

/// Resolved fine grid: `n_steps` steps of width `maturity / n_steps`,
/// with an exercise date every `stride` steps.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct GridShape {
    pub n_steps: usize,
    pub stride: usize,
    pub dt: f64,
    pub maturity: f64,
}

impl GridShape {
    #[inline]
    pub fn time(&self, step: usize) -> f64 {
        if step == self.n_steps {
            self.maturity
        } else {
            step as f64 * self.dt
        }
    }
}

impl SimConfig {
    /// Checks the invariants against `maturity` and resolves the grid.
    pub fn grid(&self, maturity: f64) -> Result<GridShape> {
        if !(self.h > 0.0 && self.h.is_finite()) {
            return Err(config(format!("step size must be positive, got {}", self.h)));
        }
        if self.h > maturity * (1.0 + 1e-12) {
            return Err(config(format!(
                "step size {} exceeds maturity {}",
                self.h, maturity
            )));
        }
        if self.n_paths == 0 {
            return Err(config("at least one path is required"));
        }
        if self.n_exercise < 2 {
            return Err(config(format!(
                "at least two exercise dates are required, got {}",
                self.n_exercise
            )));
        }
        let ratio = maturity / self.h;
        let n_steps = libm::round(ratio);
        if (ratio - n_steps).abs() > 1e-9 * ratio.max(1.0) || n_steps < 1.0 {
            return Err(config(format!(
                "maturity {maturity} is not an integral multiple of step {}",
                self.h
            )));
        }
        let n_steps = n_steps as usize;
        if n_steps % self.n_exercise != 0 {
            return Err(config(format!(
                "{} exercise dates do not lie on a grid of {n_steps} steps",
                self.n_exercise
            )));
        }
        Ok(GridShape {
            n_steps,
            stride: n_steps / self.n_exercise,
            dt: maturity / n_steps as f64,
            maturity,
        })
    }
}

/// State-dependent jump intensity; never below `lambda0`.
#[inline]
pub fn jump_rate(state: &PdifmpState, p: &PdifmpParams, delta: f64) -> f64 {
    rate_at(state.s, p, delta)
}

#[inline]
pub(crate) fn rate_at(s: f64, p: &PdifmpParams, delta: f64) -> f64 {
    p.lambda0 + p.eta * ((s - delta).abs() - p.beta).max(0.0)
}

/// Location of the post-jump drift kernel.
#[inline]
pub fn laplace_location(s: f64, p: &PdifmpParams, delta: f64) -> f64 {
    p.mu0 + p.alpha * (s - delta)
}

/// Inverse-CDF draw from Laplace(`laplace_location(s)`, `b`) for `u` in (0, 1).
pub fn sample_drift(s: f64, p: &PdifmpParams, delta: f64, u: f64) -> Result<f64> {
    if !(u > 0.0 && u < 1.0) {
        return Err(invalid(format!("uniform draw must lie in (0, 1), got {u}")));
    }
    Ok(laplace_quantile(laplace_location(s, p, delta), p.b, u))
}

#[inline]
pub(crate) fn laplace_quantile(location: f64, scale: f64, u: f64) -> f64 {
    let c = u - 0.5;
    // ln(1 - 2|c|) through log1p keeps precision near the median.
    location - scale * c.signum() * libm::log1p(-2.0 * c.abs())
}

/// Present-value factor `exp(-r t)`.
pub fn discount(t: f64, r: f64) -> Result<f64> {
    if !(t >= 0.0) {
        return Err(invalid(format!("discount horizon must be non-negative, got {t}")));
    }
    Ok(libm::exp(-r * t))
}

#[inline]
pub fn intrinsic(spec: &OptionSpec, s: f64) -> f64 {
    match spec.kind {
        OptionKind::Put => (spec.strike - s).max(0.0),
        OptionKind::Call => (s - spec.strike).max(0.0),
    }
}
