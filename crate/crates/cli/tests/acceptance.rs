//! End-to-end acceptance checks. Runs sequentially (timings are compared) and
//! prints one PASS/FAIL line per criterion; exits nonzero if any fails.

use std::process::Command;

use pdifmp_cli::presets::Cell;
use pdifmp_cli::run::price_cell;
use pdifmp_cli::{bench, run_experiment, BenchRow, ExperimentSpec, RayonExecutor};
use pdifmp_core::rng::{open01, stream, Purpose};
use pdifmp_core::*;
use rand::Rng;

const SEED: u64 = 42;

struct Report {
    failures: Vec<usize>,
}

impl Report {
    fn record(&mut self, id: usize, title: &str, checks: Vec<(String, bool)>) {
        for (line, ok) in &checks {
            println!("    [{}] {line}", if *ok { "ok" } else { "!!" });
        }
        let pass = !checks.is_empty() && checks.iter().all(|c| c.1);
        println!(
            "{} criterion {id:>2}: {title}",
            if pass { "PASS" } else { "FAIL" }
        );
        if !pass {
            self.failures.push(id);
        }
    }
}

fn put_cell(s0: f64, lambda0: f64, alpha: f64) -> Cell {
    let mut c = Cell::default();
    c.market.s0 = s0;
    c.pdifmp.lambda0 = lambda0;
    c.pdifmp.eta = 0.0;
    c.pdifmp.alpha = alpha;
    c.pdifmp.delta_mode = DeltaMode::Initial;
    c
}

/// Our estimate against a reference value that carries its own, unreported,
/// Monte Carlo error of about the same size as ours.
fn against_reference(
    label: &str,
    got: &PricingResult,
    reference: f64,
    floor: f64,
    combined: bool,
) -> (String, bool) {
    let se = if combined {
        got.std_error * 2f64.sqrt()
    } else {
        got.std_error
    };
    let tol = (3.0 * se).max(floor);
    let diff = (got.price - reference).abs();
    (
        format!(
            "{label}: {:.4} vs {reference} (diff {diff:.4}, tol {tol:.4})",
            got.price
        ),
        diff <= tol,
    )
}

fn criterion_1(exec: &RayonExecutor) -> Vec<(String, bool)> {
    let reference = [
        (36.0, 4.472),
        (38.0, 3.244),
        (40.0, 2.313),
        (42.0, 1.617),
        (44.0, 1.118),
    ];
    let mut checks = Vec::new();
    for (s0, value) in reference {
        let start = std::time::Instant::now();
        let res = price_cell(&put_cell(s0, 5.0, 1e-6), Method::LsClassic, SEED, exec).unwrap();
        let secs = start.elapsed().as_secs_f64();
        checks.push(against_reference(
            &format!("LS put s0={s0}"),
            &res,
            value,
            0.05,
            false,
        ));
        checks.push((format!("LS put s0={s0} runtime {secs:.2}s <= 60s"), secs <= 60.0));
    }
    checks
}

fn criterion_2_3(
    exec: &RayonExecutor,
    method: Method,
    reference: [f64; 3],
    floor: f64,
) -> Vec<(String, bool)> {
    [0.4, 0.6, 0.8]
        .iter()
        .zip(reference)
        .map(|(&lambda0, value)| {
            let res = price_cell(&put_cell(36.0, lambda0, 0.01), method, SEED, exec).unwrap();
            against_reference(
                &format!("{method} put s0=36 lambda0={lambda0}"),
                &res,
                value,
                floor,
                true,
            )
        })
        .collect()
}

fn criterion_4(exec: &RayonExecutor) -> Vec<(String, bool)> {
    let call = |lambda0: f64| {
        let mut c = put_cell(44.0, lambda0, 0.01);
        c.kind = OptionKind::Call;
        c
    };
    let ls = price_cell(&call(0.01), Method::LsClassic, SEED, exec).unwrap();
    let mut checks = vec![against_reference("LS call s0=44", &ls, 7.330, 0.15, true)];
    for (lambda0, value) in [(0.01, 7.419), (0.1, 7.461), (0.2, 7.702)] {
        let res = price_cell(&call(lambda0), Method::PdifmpDirect, SEED, exec).unwrap();
        checks.push(against_reference(
            &format!("pdifmp call s0=44 lambda0={lambda0}"),
            &res,
            value,
            0.15,
            true,
        ));
    }
    checks
}

fn criterion_5(exec: &RayonExecutor) -> Vec<(String, bool)> {
    let spec = ExperimentSpec::new("table4", SEED).with_override("method", "ls");
    let rows = run_experiment(&spec, exec, false).unwrap();
    assert_eq!(rows.len(), 9);
    rows.iter()
        .map(|row| {
            let m = MarketParams {
                s0: row.s0,
                strike: row.strike,
                r: row.r,
                sigma: row.sigma,
                maturity: 1.0,
            };
            let put = OptionSpec::put(row.strike);
            let lo = bs_european(&m, &put).unwrap().value - 3.0 * row.std_error;
            let hi = crr_american(&m, &put, 5000).unwrap().value + 3.0 * row.std_error;
            (
                format!(
                    "s0={} delta={}: {lo:.4} <= {:.4} <= {hi:.4}",
                    row.s0, row.delta, row.price
                ),
                lo <= row.price && row.price <= hi,
            )
        })
        .collect()
}

fn criterion_6() -> Vec<(String, bool)> {
    let mut worst: f64 = 0.0;
    let n = 200;
    for seed in 0..n {
        let mut rng = stream(1000 + seed, 0, Purpose::Wiener);
        let paths = rng.gen_range(1..=16);
        let dates = rng.gen_range(2..=4);
        let rows: Vec<Vec<f64>> = (0..paths)
            .map(|_| (0..dates).map(|_| rng.gen_range(28.0..52.0)).collect())
            .collect();
        let times = (1..=dates).map(|k| k as f64 / dates as f64).collect();
        let mx = PathMatrix::from_rows(times, &rows).unwrap();
        let spec = if seed % 2 == 0 {
            OptionSpec::put(40.0)
        } else {
            OptionSpec::call(40.0)
        };
        let ls = ls_price(&mx, &spec, 0.06).unwrap().mean;
        let dp = fixture_dp(&mx, &spec, 0.06).unwrap().value;
        worst = worst.max((ls - dp).abs());
    }
    vec![(
        format!("{n} random matrices, max |ls - dp| = {worst:e}"),
        worst <= 1e-12,
    )]
}

fn criterion_7() -> Vec<(String, bool)> {
    const Z_1PCT: f64 = 2.5758;
    let lambda0 = 5.0;
    let m = MarketParams {
        s0: 36.0,
        strike: 40.0,
        r: 0.06,
        sigma: 0.2,
        maturity: 1.0,
    };
    let p = PdifmpParams {
        lambda0,
        eta: 0.0,
        ..Cell::default().pdifmp
    };
    let n = 10_000;
    let cfg = SimConfig {
        h: 1e-3,
        n_paths: n,
        n_exercise: 50,
        seed: SEED,
    };
    let counts: f64 = (0..n)
        .map(|i| simulate_pdifmp_path(&m, &p, &cfg, i).unwrap().n_jumps as f64)
        .sum();
    let mean = counts / n as f64;
    let z = (mean - lambda0) / (lambda0 / n as f64).sqrt();

    let state = PdifmpState { s: m.s0, mu: p.mu0 };
    let mut clock = stream(SEED, 0, Purpose::JumpClock);
    let mut wiener = stream(SEED, 0, Purpose::Wiener);
    let taus: f64 = (0..n)
        .map(|_| {
            let u = open01(&mut clock);
            sample_interjump(&state, &p, m.s0, &m, 1e-3, usize::MAX, u, &mut wiener)
                .unwrap()
                .waiting_time
                .unwrap()
        })
        .sum();
    let tau_mean = taus / n as f64;
    let z_tau = (tau_mean - 1.0 / lambda0) / (1.0 / lambda0 / (n as f64).sqrt());
    vec![
        (format!("jump count mean {mean:.4}, z = {z:.3}"), z.abs() < Z_1PCT),
        (
            format!("inter-jump mean {tau_mean:.5}, z = {z_tau:.3}"),
            z_tau.abs() < Z_1PCT,
        ),
    ]
}

fn criterion_8(exec: &RayonExecutor) -> Vec<(String, bool)> {
    let m = MarketParams {
        s0: 36.0,
        strike: 40.0,
        r: 0.06,
        sigma: 0.2,
        maturity: 1.0,
    };
    let cfg = SimConfig {
        h: 0.02,
        n_paths: 100_000,
        n_exercise: 50,
        seed: SEED,
    };
    let mx = gbm_matrix(&m, m.r, &cfg, exec).unwrap();
    let df = (-m.r).exp();
    let v: Vec<f64> = (0..mx.n_paths).map(|i| df * mx.value(i, 49)).collect();
    let est = Estimate::from_values(&v).unwrap();
    let diff = (est.mean - m.s0).abs();
    vec![(
        format!(
            "mean e^-rT S_T = {:.4} vs {} (3 SE = {:.4})",
            est.mean,
            m.s0,
            3.0 * est.std_error
        ),
        diff <= 3.0 * est.std_error,
    )]
}

fn criterion_9() -> Vec<(String, bool)> {
    let h = 1e-3;
    let m = MarketParams {
        s0: 36.0,
        strike: 40.0,
        r: 0.06,
        sigma: 0.2,
        maturity: 1.0,
    };
    let mut checks = Vec::new();
    for lambda0 in [0.4, 5.0, 20.0] {
        let p = PdifmpParams {
            lambda0,
            eta: 0.0,
            ..Cell::default().pdifmp
        };
        let state = PdifmpState { s: m.s0, mu: p.mu0 };
        let mut wiener = stream(SEED, 0, Purpose::Wiener);
        let mut worst: f64 = 0.0;
        for k in 0..1000 {
            let u = (k as f64 + 0.5) / 1000.0;
            let tau = sample_interjump(&state, &p, m.s0, &m, h, usize::MAX, u, &mut wiener)
                .unwrap()
                .waiting_time
                .unwrap();
            worst = worst.max((tau - (-u.ln() / lambda0)).abs());
        }
        checks.push((
            format!("lambda0={lambda0}: max |tau - (-ln U)/lambda| = {worst:.2e} <= h"),
            worst <= h + 1e-12,
        ));
    }
    checks
}

fn median(mut xs: Vec<f64>) -> f64 {
    xs.sort_by(f64::total_cmp);
    let n = xs.len();
    if n % 2 == 1 {
        xs[n / 2]
    } else {
        0.5 * (xs[n / 2 - 1] + xs[n / 2])
    }
}

fn per_trial(rows: &[BenchRow], method: &str, lambda0: f64) -> f64 {
    median(
        rows.iter()
            .filter(|r| r.method == method && r.lambda0 == lambda0)
            .map(|r| r.runtime_s)
            .collect(),
    )
}

/// Interleaved timings: each pass runs every (cell, method) once, so slow
/// stretches of the machine hit all of them alike. The first pass is a warm-up.
fn interleaved_bench(id: &str, trials: u64, exec: &RayonExecutor) -> Vec<BenchRow> {
    let spec = ExperimentSpec::new(id, SEED);
    bench(&spec, 1, exec).unwrap();
    let mut rows = Vec::new();
    for t in 0..trials {
        rows.extend(
            bench(
                &ExperimentSpec {
                    seed: SEED + t,
                    ..spec.clone()
                },
                1,
                exec,
            )
            .unwrap(),
        );
    }
    rows
}

fn criterion_10() -> Vec<(String, bool)> {
    let exec = RayonExecutor::new(Some(1)).unwrap();
    let trials = 7;
    let mut checks = Vec::new();

    let rows = interleaved_bench("table14", trials, &exec);
    for lambda0 in [0.4, 0.6, 0.8] {
        let direct = per_trial(&rows, "pdifmp", lambda0);
        let ls = per_trial(&rows, "ls-pdifmp", lambda0);
        checks.push((
            format!("put lambda0={lambda0}: pdifmp {direct:.3}s < ls-pdifmp {ls:.3}s"),
            direct < ls,
        ));
    }

    let rows = interleaved_bench("table16", trials, &exec);
    let times: Vec<(f64, f64)> = [0.6, 0.8, 1.0, 1.2]
        .iter()
        .map(|&l| (l, per_trial(&rows, "pdifmp", l)))
        .collect();
    for w in times.windows(2) {
        let ((l0, t0), (l1, t1)) = (w[0], w[1]);
        checks.push((
            format!(
                "call pdifmp lambda0 {l0} -> {l1}: {t0:.3}s -> {t1:.3}s (limit {:.3}s)",
                1.1 * t0
            ),
            t1 <= 1.1 * t0,
        ));
    }
    checks
}

fn criterion_11() -> Vec<(String, bool)> {
    let run = |threads: &str| {
        let out = Command::new(env!("CARGO_BIN_EXE_pdifmp"))
            .args([
                "--threads",
                threads,
                "experiment",
                "table5",
                "--set",
                "paths=2000",
                "--seed",
                "42",
            ])
            .output()
            .unwrap();
        assert!(out.status.success(), "{}", String::from_utf8_lossy(&out.stderr));
        out.stdout
    };
    let (one, three, again) = (run("1"), run("3"), run("1"));
    vec![
        (
            format!("table5 with 1 and 3 threads: {} bytes each", one.len()),
            one == three,
        ),
        ("repeat run with 1 thread".to_string(), one == again),
    ]
}

fn main() {
    let exec = RayonExecutor::new(None).unwrap();
    let mut report = Report { failures: Vec::new() };
    report.record(1, "LS classic put prices", criterion_1(&exec));
    report.record(
        2,
        "LS+PDifMP put prices, eta=0, alpha=0.01",
        criterion_2_3(&exec, Method::LsPdifmp, [4.443, 4.429, 4.418], 0.10),
    );
    report.record(
        3,
        "direct PDifMP put prices, eta=0, alpha=0.01",
        criterion_2_3(&exec, Method::PdifmpDirect, [4.179, 4.488, 4.591], 0.15),
    );
    report.record(4, "call prices", criterion_4(&exec));
    report.record(5, "European and binomial bounds on LS", criterion_5(&exec));
    report.record(6, "LS equals the fixture evaluator", criterion_6());
    report.record(7, "homogeneous jump statistics", criterion_7());
    report.record(8, "discounted GBM martingale", criterion_8(&exec));
    report.record(9, "survival inverse for constant rate", criterion_9());
    report.record(10, "runtime orderings", criterion_10());
    report.record(11, "determinism across thread caps", criterion_11());

    if report.failures.is_empty() {
        println!("all acceptance criteria passed");
    } else {
        println!("failed criteria: {:?}", report.failures);
        std::process::exit(1);
    }
}
