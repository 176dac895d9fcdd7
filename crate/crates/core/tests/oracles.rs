use pdifmp_core::rng::{stream, Purpose};
use pdifmp_core::*;
use rand::Rng;

fn market(s0: f64) -> MarketParams {
    MarketParams {
        s0,
        strike: 40.0,
        r: 0.06,
        sigma: 0.2,
        maturity: 1.0,
    }
}

/// Discounted put payoff integrated against the normal density (composite
/// Simpson in the Gaussian variable, up to the exercise boundary).
fn put_by_quadrature(m: &MarketParams) -> f64 {
    let drift = (m.r - 0.5 * m.sigma * m.sigma) * m.maturity;
    let vol = m.sigma * m.maturity.sqrt();
    let z_star = ((m.strike / m.s0).ln() - drift) / vol;
    let (a, n) = (-12.0, 200_000);
    let h = (z_star - a) / n as f64;
    let f = |z: f64| {
        let s = m.s0 * (drift + vol * z).exp();
        (m.strike - s) * (-0.5 * z * z).exp() / (2.0 * std::f64::consts::PI).sqrt()
    };
    let mut sum = f(a) + f(z_star);
    for i in 1..n {
        sum += f(a + i as f64 * h) * if i % 2 == 1 { 4.0 } else { 2.0 };
    }
    (-m.r * m.maturity).exp() * sum * h / 3.0
}

// high-precision quadrature, put, s0 in {36, 38, 40, 42, 44}
const BS_PUT: [f64; 5] = [
    3.84430779159684,
    2.85193211803948,
    2.06640100442034,
    1.46450394108644,
    1.01691522642827,
];
// CRR tree with 5000 steps, put, same s0
const CRR_PUT: [f64; 5] = [
    4.486709524798794,
    3.2571772745073013,
    2.3195163592211,
    1.6212531346103372,
    1.1129850487868753,
];
const S0S: [f64; 5] = [36.0, 38.0, 40.0, 42.0, 44.0];

#[test]
fn european_put_matches_quadrature() {
    for (s0, frozen) in S0S.iter().zip(BS_PUT) {
        let m = market(*s0);
        let quad = put_by_quadrature(&m);
        assert!(
            (quad - frozen).abs() < 1e-8,
            "s0={s0}: quadrature {quad} vs {frozen}"
        );
        let bs = bs_european(&m, &OptionSpec::put(40.0)).unwrap();
        assert_eq!(bs.method, OracleMethod::BsClosedForm);
        assert!(
            (bs.value - frozen).abs() < 1e-8,
            "s0={s0}: closed form {} vs {frozen}",
            bs.value
        );
    }
}

#[test]
fn american_put_tree_reference_values() {
    for (s0, frozen) in S0S.iter().zip(CRR_PUT) {
        let v = crr_american(&market(*s0), &OptionSpec::put(40.0), 5000)
            .unwrap()
            .value;
        assert!((v - frozen).abs() < 1e-9, "s0={s0}: {v} vs {frozen}");
    }
}

#[test]
fn early_exercise_premium_is_non_negative() {
    for s0 in [30.0, 36.0, 40.0, 44.0, 50.0] {
        for sigma in [0.1, 0.2, 0.4] {
            let m = MarketParams { sigma, ..market(s0) };
            let am = crr_american(&m, &OptionSpec::put(40.0), 500).unwrap().value;
            let eu = bs_european(&m, &OptionSpec::put(40.0)).unwrap().value;
            assert!(am >= eu - 1e-3, "s0={s0} sigma={sigma}: {am} < {eu}");
        }
    }
}

#[test]
fn tree_converges_between_2000_and_4000_steps() {
    let m = market(36.0);
    let a = crr_american(&m, &OptionSpec::put(40.0), 2000).unwrap().value;
    let b = crr_american(&m, &OptionSpec::put(40.0), 4000).unwrap().value;
    assert!((a - 4.486687133110599).abs() < 1e-9);
    assert!((b - 4.486711528288261).abs() < 1e-9);
    assert!((a - b).abs() < 1e-4);
}

/// The classic eight-path least-squares example: strike 1.10,
/// rate 6% per period, dates 1, 2, 3.
fn hand_fixture() -> PathMatrix {
    let rows = [
        [1.09, 1.08, 1.34],
        [1.16, 1.26, 1.54],
        [1.22, 1.07, 1.03],
        [0.93, 0.97, 0.92],
        [1.11, 1.56, 1.52],
        [0.76, 0.77, 0.90],
        [0.92, 0.84, 1.01],
        [0.88, 1.22, 1.34],
    ];
    let rows: Vec<Vec<f64>> = rows.iter().map(|r| r.to_vec()).collect();
    PathMatrix::from_rows(vec![1.0, 2.0, 3.0], &rows).unwrap()
}

#[test]
fn hand_fixture_agrees_with_dp_and_hand_calculation() {
    let mx = hand_fixture();
    let spec = OptionSpec::put(1.1);
    let ls = ls_price(&mx, &spec, 0.06).unwrap().mean;
    let dp = fixture_dp(&mx, &spec, 0.06).unwrap();
    assert_eq!(dp.method, OracleMethod::FixtureDp);
    assert!((ls - dp.value).abs() < 1e-12);
    // Only date 2 is an early-exercise candidate: paths 4, 6 and 7 exercise
    // there, path 3 keeps its maturity payoff.
    let hand = (0.07 * (-0.18f64).exp() + (0.13 + 0.33 + 0.26) * (-0.12f64).exp()) / 8.0;
    assert!((ls - hand).abs() < 1e-12, "{ls} vs {hand}");
}

fn random_matrix(seed: u64, call: bool) -> (PathMatrix, OptionSpec) {
    let mut rng = stream(seed, 0, Purpose::Wiener);
    let n = rng.gen_range(1..=16);
    let d = rng.gen_range(2..=4);
    let rows: Vec<Vec<f64>> = (0..n)
        .map(|_| (0..d).map(|_| rng.gen_range(30.0..50.0)).collect())
        .collect();
    let times = (1..=d).map(|k| k as f64 * 0.25).collect();
    let spec = if call {
        OptionSpec::call(40.0)
    } else {
        OptionSpec::put(40.0)
    };
    (PathMatrix::from_rows(times, &rows).unwrap(), spec)
}

#[test]
fn randomized_fixtures_agree_with_dp() {
    for seed in 0..40 {
        let (mx, spec) = random_matrix(seed, seed % 2 == 1);
        let ls = ls_price(&mx, &spec, 0.06).unwrap().mean;
        let dp = fixture_dp(&mx, &spec, 0.06).unwrap().value;
        assert!((ls - dp).abs() < 1e-12, "seed {seed}: {ls} vs {dp}");
    }
}

#[test]
fn regression_residuals_are_orthogonal_to_basis() {
    let mut rng = stream(7, 0, Purpose::Kernel);
    let x: Vec<f64> = (0..1000).map(|_| rng.gen_range(25.0..40.0)).collect();
    let y: Vec<f64> = x
        .iter()
        .map(|v| (40.0 - v) * 0.9 + rng.gen_range(-2.0..2.0))
        .collect();
    let fit = regress_quadratic(&x, &y).unwrap();
    assert!(!fit.degenerate);
    assert_eq!(fit.n_obs, 1000);
    for power in 0..3 {
        let basis = |v: f64| v.powi(power);
        let dot: f64 = x
            .iter()
            .zip(&y)
            .map(|(&xi, &yi)| (yi - fit.continuation(xi)) * basis(xi))
            .sum();
        let scale: f64 = x.iter().zip(&y).map(|(&xi, &yi)| (yi * basis(xi)).abs()).sum();
        assert!(dot.abs() < 1e-8 * scale, "power {power}: {dot} vs {scale}");
    }
}
