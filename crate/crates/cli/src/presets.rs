//! Parameter grids for the pricing tables, timing benchmarks and path scenarios.

use pdifmp_core::{DeltaMode, MarketParams, Method, OptionKind, OptionSpec, PdifmpParams, SimConfig};

use crate::error::{Error, Result};

const K: f64 = 40.0;
const R: f64 = 0.06;
const SIGMA: f64 = 0.2;
const MU0: f64 = 0.06;
const B: f64 = 0.01;
const PATHS: usize = 10_000;
const EXERCISE: usize = 50;
pub const LS_STEP: f64 = 0.02;
pub const PDIFMP_STEP: f64 = 1e-3;

const S0_SWEEP: [f64; 5] = [36.0, 38.0, 40.0, 42.0, 44.0];

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum PresetKind {
    /// Prices for every cell of a results table.
    Table,
    /// Per-trial timings.
    Bench,
    /// Sample paths for plotting.
    Scenario,
}

#[derive(Debug, Clone, Copy)]
pub struct Preset {
    pub id: &'static str,
    pub kind: PresetKind,
    pub about: &'static str,
}

pub const PRESETS: &[Preset] = &[
    Preset {
        id: "table4",
        kind: PresetKind::Table,
        about: "put, LS vs LS+PDifMP, alpha=1e-6, lambda0=5, eta=0.5, delta K or s0",
    },
    Preset {
        id: "table5",
        kind: PresetKind::Table,
        about: "put, eta=0, alpha=0.01, lambda0 in {0.4,0.6,0.8}",
    },
    Preset {
        id: "table6",
        kind: PresetKind::Table,
        about: "put, eta=0, alpha=-0.01, lambda0 in {0.4,0.6,0.8}",
    },
    Preset {
        id: "table7",
        kind: PresetKind::Table,
        about: "put, lambda0=0.4, eta=0.005, alpha in {0.01,-0.01}",
    },
    Preset {
        id: "table8",
        kind: PresetKind::Table,
        about: "put, alpha=0.01, (lambda0, eta) in {(0.5,0),(1,0),(0.5,0.01)}",
    },
    Preset {
        id: "table9",
        kind: PresetKind::Table,
        about: "put, alpha=1e-6, (lambda0, eta) in {(5,0),(5,0.3),(5,0.5),(10,0.6)}",
    },
    Preset {
        id: "table10",
        kind: PresetKind::Table,
        about: "put, eta=0, alpha=0, lambda0 in {0.4,0.6,0.8}",
    },
    Preset {
        id: "table11",
        kind: PresetKind::Table,
        about: "put, eta=0, alpha=0.01, far from the money s0 in {32,34,46,48}",
    },
    Preset {
        id: "table12",
        kind: PresetKind::Table,
        about: "put, lambda0=0.4, alpha=0.01, eta in {0.001,0.005,0.01}",
    },
    Preset {
        id: "table13",
        kind: PresetKind::Table,
        about: "call, eta=0, alpha=0.01, lambda0 in {0.01,0.1,0.2}",
    },
    Preset {
        id: "table14",
        kind: PresetKind::Bench,
        about: "put timings, s0=36, lambda0 in {0.4,0.6,0.8}",
    },
    Preset {
        id: "table15",
        kind: PresetKind::Bench,
        about: "call timings, s0=36, lambda0 in {0.01,0.1,0.2}",
    },
    Preset {
        id: "table16",
        kind: PresetKind::Bench,
        about: "call timings, LS vs PDifMP, lambda0 in {0.6,0.8,1,1.2}",
    },
    Preset {
        id: "scenarioA",
        kind: PresetKind::Scenario,
        about: "lambda0=5, eta in {0,0.3,0.5,1}",
    },
    Preset {
        id: "scenarioB",
        kind: PresetKind::Scenario,
        about: "eta=1, lambda0 in {5,1,0.1,0.01}",
    },
    Preset {
        id: "scenarioC",
        kind: PresetKind::Scenario,
        about: "(lambda0, eta) in {(20,0),(50,0.3)}",
    },
    Preset {
        id: "scenarioD",
        kind: PresetKind::Scenario,
        about: "s0=36, delta=s0, (lambda0, eta) in {(10,0),(10,0.5),(1,0.5),(1,1)}",
    },
    Preset {
        id: "scenarioE",
        kind: PresetKind::Scenario,
        about: "s0=44, delta=s0, (lambda0, eta) in {(10,0),(10,0.5),(1,0.5),(1,1)}",
    },
];

pub fn find(id: &str) -> Result<&'static Preset> {
    PRESETS
        .iter()
        .find(|p| p.id == id)
        .ok_or_else(|| Error::UnknownPreset {
            id: id.to_string(),
            known: PRESETS.iter().map(|p| p.id).collect::<Vec<_>>().join(", "),
        })
}

/// One parameter combination together with the methods to run on it.
#[derive(Debug, Clone, PartialEq)]
pub struct Cell {
    pub market: MarketParams,
    pub pdifmp: PdifmpParams,
    pub kind: OptionKind,
    pub methods: Vec<Method>,
    pub n_paths: usize,
    pub n_exercise: usize,
    /// Fine-grid step for GBM paths.
    pub ls_step: f64,
    /// Fine-grid step for piecewise-process paths.
    pub pdifmp_step: f64,
}

impl Default for Cell {
    fn default() -> Self {
        Cell {
            market: MarketParams {
                s0: 36.0,
                strike: K,
                r: R,
                sigma: SIGMA,
                maturity: 1.0,
            },
            pdifmp: PdifmpParams {
                mu0: MU0,
                lambda0: 5.0,
                eta: 0.0,
                beta: 0.0,
                alpha: 1e-6,
                b: B,
                delta_mode: DeltaMode::Initial,
            },
            kind: OptionKind::Put,
            methods: Method::ALL.to_vec(),
            n_paths: PATHS,
            n_exercise: EXERCISE,
            ls_step: LS_STEP,
            pdifmp_step: PDIFMP_STEP,
        }
    }
}

impl Cell {
    fn new(s0: f64, lambda0: f64, eta: f64, alpha: f64, methods: &[Method]) -> Self {
        let mut c = Cell {
            methods: methods.to_vec(),
            ..Cell::default()
        };
        c.market.s0 = s0;
        c.pdifmp.lambda0 = lambda0;
        c.pdifmp.eta = eta;
        c.pdifmp.alpha = alpha;
        c
    }

    fn with_delta(mut self, delta: DeltaMode) -> Self {
        self.pdifmp.delta_mode = delta;
        self
    }

    fn call(mut self) -> Self {
        self.kind = OptionKind::Call;
        self
    }

    pub fn option(&self) -> OptionSpec {
        OptionSpec {
            kind: self.kind,
            strike: self.market.strike,
        }
    }

    pub fn step(&self, method: Method) -> f64 {
        match method {
            Method::LsClassic => self.ls_step,
            Method::LsPdifmp | Method::PdifmpDirect => self.pdifmp_step,
        }
    }

    pub fn sim_config(&self, method: Method, seed: u64) -> SimConfig {
        SimConfig {
            h: self.step(method),
            n_paths: self.n_paths,
            n_exercise: self.n_exercise,
            seed,
        }
    }

    /// Applies one `key=value` override. Keys follow the `price` flag names.
    pub fn apply(&mut self, key: &str, value: &str) -> Result<()> {
        let bad = || Error::Override(format!("{key}={value}"));
        let num = || value.parse::<f64>().map_err(|_| bad());
        let count = || value.parse::<usize>().map_err(|_| bad());
        match key {
            "s0" => self.market.s0 = num()?,
            "strike" | "K" => self.market.strike = num()?,
            "r" => self.market.r = num()?,
            "sigma" => self.market.sigma = num()?,
            "maturity" => self.market.maturity = num()?,
            "mu0" => self.pdifmp.mu0 = num()?,
            "lambda0" => self.pdifmp.lambda0 = num()?,
            "eta" => self.pdifmp.eta = num()?,
            "alpha" => self.pdifmp.alpha = num()?,
            "b" => self.pdifmp.b = num()?,
            "beta" => self.pdifmp.beta = num()?,
            "delta" => self.pdifmp.delta_mode = parse_delta(value).ok_or_else(bad)?,
            "paths" => self.n_paths = count()?,
            "exercise-points" => self.n_exercise = count()?,
            "step" => {
                self.ls_step = num()?;
                self.pdifmp_step = self.ls_step;
            }
            "ls-step" => self.ls_step = num()?,
            "pdifmp-step" => self.pdifmp_step = num()?,
            "option" => self.kind = parse_option(value).ok_or_else(bad)?,
            "method" => {
                self.methods = value
                    .split(',')
                    .map(|m| m.trim().parse::<Method>())
                    .collect::<std::result::Result<_, _>>()
                    .map_err(|_| bad())?
            }
            _ => return Err(Error::Override(format!("unknown key `{key}`"))),
        }
        Ok(())
    }
}

pub fn parse_delta(s: &str) -> Option<DeltaMode> {
    match s {
        "strike" | "K" => Some(DeltaMode::Strike),
        "initial" | "s0" => Some(DeltaMode::Initial),
        other => other
            .parse::<f64>()
            .ok()
            .filter(|v| v.is_finite())
            .map(DeltaMode::Custom),
    }
}

pub fn parse_option(s: &str) -> Option<OptionKind> {
    match s {
        "put" => Some(OptionKind::Put),
        "call" => Some(OptionKind::Call),
        _ => None,
    }
}

/// Splits `key=value`.
pub fn split_override(s: &str) -> Result<(&str, &str)> {
    s.split_once('=')
        .map(|(k, v)| (k.trim(), v.trim()))
        .filter(|(k, v)| !k.is_empty() && !v.is_empty())
        .ok_or_else(|| Error::Override(s.to_string()))
}

const LS_PAIR: [Method; 2] = [Method::LsClassic, Method::LsPdifmp];
const ALL: [Method; 3] = Method::ALL;

fn sweep(lambdas: &[f64], eta: f64, alpha: f64, methods: &[Method]) -> Vec<Cell> {
    let mut cells = Vec::new();
    for &lambda0 in lambdas {
        for s0 in S0_SWEEP {
            cells.push(Cell::new(s0, lambda0, eta, alpha, methods));
        }
    }
    cells
}

/// Cells of a pricing table or benchmark, before overrides.
pub fn cells(id: &str) -> Result<Vec<Cell>> {
    let preset = find(id)?;
    if preset.kind == PresetKind::Scenario {
        return Err(Error::Override(format!(
            "`{id}` is a path scenario, use the simulate command"
        )));
    }
    let cells = match id {
        "table4" => [
            (36.0, DeltaMode::Strike),
            (36.0, DeltaMode::Initial),
            (38.0, DeltaMode::Strike),
            (38.0, DeltaMode::Initial),
            (40.0, DeltaMode::Initial),
            (42.0, DeltaMode::Strike),
            (42.0, DeltaMode::Initial),
            (44.0, DeltaMode::Strike),
            (44.0, DeltaMode::Initial),
        ]
        .into_iter()
        .map(|(s0, d)| Cell::new(s0, 5.0, 0.5, 1e-6, &LS_PAIR).with_delta(d))
        .collect(),
        "table5" => sweep(&[0.4, 0.6, 0.8], 0.0, 0.01, &ALL),
        "table6" => sweep(&[0.4, 0.6, 0.8], 0.0, -0.01, &ALL),
        "table7" => {
            let mut cells = Vec::new();
            for alpha in [0.01, -0.01] {
                for s0 in S0_SWEEP {
                    cells.push(Cell::new(s0, 0.4, 0.005, alpha, &ALL));
                }
            }
            cells
        }
        "table8" => {
            let mut cells = Vec::new();
            for (lambda0, eta) in [(0.5, 0.0), (1.0, 0.0), (0.5, 0.01)] {
                cells.extend(sweep(&[lambda0], eta, 0.01, &LS_PAIR));
            }
            cells
        }
        "table9" => {
            let mut cells = Vec::new();
            for (lambda0, eta) in [(5.0, 0.0), (5.0, 0.3), (5.0, 0.5), (10.0, 0.6)] {
                cells.extend(sweep(&[lambda0], eta, 1e-6, &LS_PAIR));
            }
            cells
        }
        "table10" => sweep(&[0.4, 0.6, 0.8], 0.0, 0.0, &ALL),
        "table11" => {
            let mut cells = Vec::new();
            for s0 in [32.0, 34.0] {
                for lambda0 in [0.4, 0.6, 0.8, 1.0, 1.2] {
                    cells.push(Cell::new(s0, lambda0, 0.0, 0.01, &ALL));
                }
            }
            for s0 in [46.0, 48.0] {
                for lambda0 in [0.4, 0.6, 0.8] {
                    cells.push(Cell::new(s0, lambda0, 0.0, 0.01, &ALL));
                }
            }
            cells
        }
        "table12" => {
            let mut cells = Vec::new();
            for eta in [0.001, 0.005, 0.01] {
                cells.extend(sweep(&[0.4], eta, 0.01, &ALL));
            }
            cells
        }
        "table13" => sweep(&[0.01, 0.1, 0.2], 0.0, 0.01, &ALL)
            .into_iter()
            .map(Cell::call)
            .collect(),
        "table14" => [0.4, 0.6, 0.8]
            .map(|l| Cell::new(36.0, l, 0.0, 0.01, &ALL))
            .to_vec(),
        "table15" => [0.01, 0.1, 0.2]
            .map(|l| Cell::new(36.0, l, 0.0, 0.01, &ALL).call())
            .to_vec(),
        "table16" => [0.6, 0.8, 1.0, 1.2]
            .map(|l| Cell::new(36.0, l, 0.0, 0.01, &[Method::LsClassic, Method::PdifmpDirect]).call())
            .to_vec(),
        _ => unreachable!("every table preset is listed"),
    };
    Ok(cells)
}

/// One set of sample paths, written to its own file.
#[derive(Debug, Clone, PartialEq)]
pub struct ScenarioRun {
    /// File stem, e.g. `scenarioA_eta0.3`.
    pub label: String,
    pub market: MarketParams,
    pub pdifmp: PdifmpParams,
    pub n_paths: usize,
    pub step: f64,
}

pub fn scenario(id: &str) -> Result<Vec<ScenarioRun>> {
    let preset = find(id)?;
    if preset.kind != PresetKind::Scenario {
        return Err(Error::Override(format!("`{id}` is not a path scenario")));
    }
    let base = Cell::default();
    let run = |label: String, s0: f64, lambda0: f64, eta: f64, delta: DeltaMode, n: usize| {
        let mut market = base.market;
        market.s0 = s0;
        let mut pdifmp = base.pdifmp;
        pdifmp.lambda0 = lambda0;
        pdifmp.eta = eta;
        pdifmp.delta_mode = delta;
        ScenarioRun {
            label,
            market,
            pdifmp,
            n_paths: n,
            step: PDIFMP_STEP,
        }
    };
    let pairs = [(10.0, 0.0), (10.0, 0.5), (1.0, 0.5), (1.0, 1.0)];
    let runs = match id {
        "scenarioA" => [0.0, 0.3, 0.5, 1.0]
            .iter()
            .map(|&eta| run(format!("{id}_eta{eta}"), 36.0, 5.0, eta, DeltaMode::Strike, 1))
            .collect(),
        "scenarioB" => [5.0, 1.0, 0.1, 0.01]
            .iter()
            .map(|&l| run(format!("{id}_lambda{l}"), 36.0, l, 1.0, DeltaMode::Strike, 1))
            .collect(),
        "scenarioC" => [(20.0, 0.0), (50.0, 0.3)]
            .iter()
            .map(|&(l, eta)| {
                run(
                    format!("{id}_lambda{l}_eta{eta}"),
                    36.0,
                    l,
                    eta,
                    DeltaMode::Strike,
                    1,
                )
            })
            .collect(),
        "scenarioD" | "scenarioE" => {
            let s0 = if id == "scenarioD" { 36.0 } else { 44.0 };
            pairs
                .iter()
                .map(|&(l, eta)| {
                    run(
                        format!("{id}_lambda{l}_eta{eta}"),
                        s0,
                        l,
                        eta,
                        DeltaMode::Initial,
                        5,
                    )
                })
                .collect()
        }
        _ => unreachable!("every scenario preset is listed"),
    };
    Ok(runs)
}
