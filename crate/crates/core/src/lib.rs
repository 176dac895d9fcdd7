//! American option pricing by least-squares Monte Carlo and by piecewise
//! diffusion Markov processes (PDifMPs) whose jump times serve as exercise
//! opportunities.
//!
//! The crate is `no_std` with `alloc`. Parallelism is supplied by the caller
//! through [`PathExecutor`]; [`Serial`] runs everything on the current thread.
//! Every path is a pure function of `(seed, path_index)` and reductions run in
//! path order, so results do not depend on the executor.

#![no_std]
// `!(x > 0.0)` is how validation rejects NaN along with non-positive values
#![allow(clippy::neg_cmp_op_on_partial_ord)]

extern crate alloc;

pub mod direct;
pub mod error;
pub mod exec;
pub mod lsm;
pub mod model;
pub mod oracles;
pub mod paths;
pub mod pricing;
pub mod rng;

pub use direct::{best_discounted_payoff, path_best_discounted_payoff, price_pdifmp, PathPayoff};
pub use error::{Error, Result};
pub use exec::{PathExecutor, Serial};
pub use lsm::{
    ls_cash_flows, ls_path_values, ls_price, price_ls_classic, price_ls_pdifmp, regress_quadratic, CashFlows,
    RegressionFit,
};
pub use model::{
    discount, intrinsic, jump_rate, laplace_location, sample_drift, DeltaMode, GridShape, MarketParams,
    OptionKind, OptionSpec, PdifmpParams, PdifmpState, SimConfig,
};
pub use oracles::{bs_european, crr_american, fixture_dp, norm_cdf, OracleMethod, OraclePrice};
pub use paths::{
    gbm_matrix, gbm_path_from_normals, pdifmp_matrix, sample_interjump, sample_on_grid, simulate_gbm_path,
    simulate_pdifmp_path, FineGridPath, GbmPath, InterJump, PathMatrix, PdifmpPath, FLAG_MULTIPLE,
};
pub use pricing::{Estimate, Method, PricingResult};
