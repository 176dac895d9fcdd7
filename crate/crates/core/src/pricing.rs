use crate::error::{invalid, Result};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum Method {
    /// Longstaff-Schwartz on GBM paths.
    LsClassic,
    /// Longstaff-Schwartz on piecewise-process paths.
    LsPdifmp,
    /// Best discounted intrinsic value over the jump times.
    PdifmpDirect,
}

impl Method {
    pub const ALL: [Method; 3] = [Method::LsClassic, Method::LsPdifmp, Method::PdifmpDirect];

    pub fn as_str(&self) -> &'static str {
        match self {
            Method::LsClassic => "ls",
            Method::LsPdifmp => "ls-pdifmp",
            Method::PdifmpDirect => "pdifmp",
        }
    }
}

impl core::str::FromStr for Method {
    type Err = crate::Error;

    fn from_str(s: &str) -> Result<Self> {
        match s {
            "ls" => Ok(Method::LsClassic),
            "ls-pdifmp" => Ok(Method::LsPdifmp),
            "pdifmp" => Ok(Method::PdifmpDirect),
            other => Err(invalid(alloc::format!("unknown method `{other}`"))),
        }
    }
}

impl core::fmt::Display for Method {
    fn fmt(&self, f: &mut core::fmt::Formatter<'_>) -> core::fmt::Result {
        f.write_str(self.as_str())
    }
}

/// Sample mean and standard error of a batch of per-path values.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Estimate {
    pub mean: f64,
    pub std_error: f64,
    pub n: usize,
}

impl Estimate {
    /// Sequential two-pass reduction, so the result only depends on the order of `values`.
    pub fn from_values(values: &[f64]) -> Result<Self> {
        let n = values.len();
        if n == 0 {
            return Err(invalid("cannot average an empty batch"));
        }
        let mean = values.iter().sum::<f64>() / n as f64;
        let std_error = if n > 1 {
            let ss: f64 = values.iter().map(|v| (v - mean) * (v - mean)).sum();
            libm::sqrt(ss / (n - 1) as f64) / libm::sqrt(n as f64)
        } else {
            0.0
        };
        Ok(Self { mean, std_error, n })
    }
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct PricingResult {
    pub price: f64,
    pub std_error: f64,
    pub n_paths: usize,
    /// Wall-clock seconds; the core never measures time, so this stays 0 unless a
    /// caller fills it in.
    pub runtime_s: f64,
    pub flagged_paths: usize,
    pub negative_drifts: usize,
    pub seed: u64,
    pub method: Method,
}

impl PricingResult {
    pub(crate) fn new(
        est: Estimate,
        method: Method,
        seed: u64,
        flagged_paths: usize,
        negative_drifts: usize,
    ) -> Self {
        Self {
            price: est.mean,
            std_error: est.std_error,
            n_paths: est.n,
            runtime_s: 0.0,
            flagged_paths,
            negative_drifts,
            seed,
            method,
        }
    }
}
