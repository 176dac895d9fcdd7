//! Longstaff-Schwartz backward induction with a quadratic regression basis.

use alloc::format;
use alloc::vec::Vec;

use crate::error::{invalid, Result};
use crate::exec::PathExecutor;
use crate::model::{discount, intrinsic, MarketParams, OptionSpec, PdifmpParams, SimConfig};
use crate::paths::{gbm_matrix, pdifmp_matrix, PathMatrix};
use crate::pricing::{Estimate, Method, PricingResult};

/// Least-squares fit of `y` on `{1, x, x^2}`.
///
/// A degenerate fit (fewer than three observations or a rank-deficient
/// design) carries `c0 = mean(y)` and zero slopes.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct RegressionFit {
    pub c0: f64,
    pub c1: f64,
    pub c2: f64,
    pub n_obs: usize,
    pub degenerate: bool,
}

impl RegressionFit {
    #[inline]
    pub fn continuation(&self, x: f64) -> f64 {
        self.c0 + x * (self.c1 + x * self.c2)
    }
}

// Relative pivot size below which the standardized normal equations count as singular.
const PIVOT_TOL: f64 = 1e-10;

pub fn regress_quadratic(x: &[f64], y: &[f64]) -> Result<RegressionFit> {
    if x.len() != y.len() {
        return Err(invalid(format!(
            "regression inputs differ in length: {} vs {}",
            x.len(),
            y.len()
        )));
    }
    let n = x.len();
    let fallback = |n: usize| {
        let c0 = if n == 0 {
            0.0
        } else {
            y.iter().sum::<f64>() / n as f64
        };
        RegressionFit {
            c0,
            c1: 0.0,
            c2: 0.0,
            n_obs: n,
            degenerate: true,
        }
    };
    if n < 3 {
        return Ok(fallback(n));
    }

    // Standardize x so the normal equations stay well conditioned for prices ~ 40.
    let center = x.iter().sum::<f64>() / n as f64;
    let scale = x.iter().map(|v| (v - center).abs()).fold(0.0, f64::max);
    if !(scale > 0.0) || !scale.is_finite() {
        return Ok(fallback(n));
    }

    let mut a = [[0.0f64; 4]; 3];
    for (&xi, &yi) in x.iter().zip(y) {
        let z = (xi - center) / scale;
        let basis = [1.0, z, z * z];
        for r in 0..3 {
            for c in 0..3 {
                a[r][c] += basis[r] * basis[c];
            }
            a[r][3] += basis[r] * yi;
        }
    }
    let Some(d) = solve3(a, PIVOT_TOL * n as f64) else {
        return Ok(fallback(n));
    };

    // y = d0 + d1 z + d2 z^2 with z = (x - center) / scale
    let (m, s) = (center, scale);
    let c2 = d[2] / (s * s);
    let c1 = d[1] / s - 2.0 * d[2] * m / (s * s);
    let c0 = d[0] - d[1] * m / s + d[2] * m * m / (s * s);
    Ok(RegressionFit {
        c0,
        c1,
        c2,
        n_obs: n,
        degenerate: false,
    })
}

/// Gaussian elimination with partial pivoting on an augmented 3x4 system.
fn solve3(mut a: [[f64; 4]; 3], tol: f64) -> Option<[f64; 3]> {
    for col in 0..3 {
        let pivot = (col..3)
            .max_by(|&i, &j| a[i][col].abs().total_cmp(&a[j][col].abs()))
            .unwrap_or(col);
        if !(a[pivot][col].abs() > tol) {
            return None;
        }
        a.swap(col, pivot);
        for row in col + 1..3 {
            let f = a[row][col] / a[col][col];
            let pivot_row = a[col];
            for (x, p) in a[row][col..].iter_mut().zip(&pivot_row[col..]) {
                *x -= f * p;
            }
        }
    }
    let mut out = [0.0; 3];
    for row in (0..3).rev() {
        let mut acc = a[row][3];
        for k in row + 1..3 {
            acc -= a[row][k] * out[k];
        }
        out[row] = acc / a[row][row];
    }
    out.iter().all(|v| v.is_finite()).then_some(out)
}

/// Undiscounted cash flows of every path at every exercise date, row-major.
#[derive(Debug, Clone, PartialEq)]
pub struct CashFlows {
    pub n_paths: usize,
    pub n_dates: usize,
    pub values: Vec<f64>,
}

impl CashFlows {
    #[inline]
    pub fn row(&self, i: usize) -> &[f64] {
        &self.values[i * self.n_dates..(i + 1) * self.n_dates]
    }
}

/// Runs the backward pass and returns the cash-flow matrix.
///
/// Terminal cash flows are the intrinsic values at maturity. Dates are visited
/// from the second-to-last down to the second; the first exercise date is never
/// an early-exercise candidate. At each visited date the in-the-money paths
/// regress their discounted future cash flow on the current price, and a path
/// exercises when its intrinsic value strictly exceeds the fitted continuation.
pub fn ls_cash_flows(paths: &PathMatrix, spec: &OptionSpec, r: f64) -> Result<CashFlows> {
    spec.validate()?;
    let n_paths = paths.n_paths;
    let n_dates = paths.n_exercise();
    if n_paths == 0 || n_dates == 0 {
        return Err(invalid("path matrix is empty"));
    }
    if n_dates < 2 {
        return Err(invalid("at least two exercise dates are required"));
    }
    let dt = paths.maturity() / n_dates as f64;
    let step = discount(dt, r)?;
    let mut powers = Vec::with_capacity(n_dates + 1);
    powers.push(1.0);
    for j in 1..=n_dates {
        powers.push(powers[j - 1] * step);
    }

    let mut cf = alloc::vec![0.0; n_paths * n_dates];
    for i in 0..n_paths {
        cf[i * n_dates + n_dates - 1] = intrinsic(spec, paths.value(i, n_dates - 1));
    }

    let mut itm = Vec::with_capacity(n_paths);
    let mut xs = Vec::with_capacity(n_paths);
    let mut ys = Vec::with_capacity(n_paths);
    for t in (1..n_dates - 1).rev() {
        itm.clear();
        xs.clear();
        ys.clear();
        for i in 0..n_paths {
            let x = paths.value(i, t);
            if spec.in_the_money(x) {
                let row = &cf[i * n_dates..(i + 1) * n_dates];
                let y: f64 = (t + 1..n_dates)
                    .filter(|&k| row[k] != 0.0)
                    .map(|k| row[k] * powers[k - t])
                    .sum();
                itm.push(i);
                xs.push(x);
                ys.push(y);
            }
        }
        if itm.is_empty() {
            continue;
        }
        let fit = regress_quadratic(&xs, &ys)?;
        for (&i, &x) in itm.iter().zip(&xs) {
            let inner = intrinsic(spec, x);
            let row = &mut cf[i * n_dates..(i + 1) * n_dates];
            if inner > fit.continuation(x) {
                row[t] = inner;
                row[t + 1..].fill(0.0);
            } else {
                row[t] = 0.0;
            }
        }
    }
    Ok(CashFlows {
        n_paths,
        n_dates,
        values: cf,
    })
}

/// Per-path present values of the cash flows chosen by the backward pass.
pub fn ls_path_values(paths: &PathMatrix, spec: &OptionSpec, r: f64) -> Result<Vec<f64>> {
    let cf = ls_cash_flows(paths, spec, r)?;
    let dt = paths.maturity() / cf.n_dates as f64;
    let step = discount(dt, r)?;
    let mut to_zero = Vec::with_capacity(cf.n_dates);
    let mut acc = 1.0;
    for _ in 0..cf.n_dates {
        acc *= step;
        to_zero.push(acc);
    }
    Ok((0..cf.n_paths)
        .map(|i| cf.row(i).iter().zip(&to_zero).map(|(c, d)| c * d).sum())
        .collect())
}

/// Longstaff-Schwartz estimate on a path matrix: mean and standard error of
/// the per-path discounted cash flows.
pub fn ls_price(paths: &PathMatrix, spec: &OptionSpec, r: f64) -> Result<Estimate> {
    Estimate::from_values(&ls_path_values(paths, spec, r)?)
}

/// Longstaff-Schwartz on GBM paths with constant `drift`, simulated on the
/// `cfg.h` grid and sampled at the exercise dates.
pub fn price_ls_classic<E: PathExecutor>(
    m: &MarketParams,
    spec: &OptionSpec,
    drift: f64,
    cfg: &SimConfig,
    exec: &E,
) -> Result<PricingResult> {
    spec.validate()?;
    let matrix = gbm_matrix(m, drift, cfg, exec)?;
    let est = ls_price(&matrix, spec, m.r)?;
    Ok(PricingResult::new(
        est,
        Method::LsClassic,
        cfg.seed,
        matrix.flagged_count(),
        0,
    ))
}

/// Longstaff-Schwartz on piecewise-process paths.
pub fn price_ls_pdifmp<E: PathExecutor>(
    m: &MarketParams,
    p: &PdifmpParams,
    spec: &OptionSpec,
    cfg: &SimConfig,
    exec: &E,
) -> Result<PricingResult> {
    spec.validate()?;
    let (matrix, negative) = pdifmp_matrix(m, p, cfg, exec)?;
    let est = ls_price(&matrix, spec, m.r)?;
    Ok(PricingResult::new(
        est,
        Method::LsPdifmp,
        cfg.seed,
        matrix.flagged_count(),
        negative,
    ))
}
