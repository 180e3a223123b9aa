//! Acceptance suite: one test per criterion, each printing a single
//! `[PASS]`/`[FAIL]` line. Run with
//! `cargo test -p svshrink --test acceptance -- --nocapture`.

use std::sync::OnceLock;

use faer::Mat;
use svshrink::contaminate::contaminate;
use svshrink::core::{
    bulk_edge, displace, inverse_displace, numerical_worst_case, optimal_shrinker, optimal_threshold, shrinker_amse,
    threshold_amse, threshold_design_point, threshold_keep_branch, transition_level, EffectiveParams, Estimator,
    ModeDescriptor, MpLaw,
};
use svshrink::linalg::singular_values;
use svshrink::sim::{
    self, additive_missing, brute_force_shrinker, brute_to_csv, make_signal, median, records_to_csv,
    run_critical_sweep, run_displacement_check, trial_rng, BruteConfig, BruteRow, DisplacementConfig, ExperimentRecord,
    SignalSpec, SweepConfig, SweepResult,
};

const SEED: u64 = sim::DEFAULT_SEED;

fn verdict(criterion: u32, pass: bool, detail: String) {
    let tag = if pass { "PASS" } else { "FAIL" };
    println!("[{tag}] criterion {criterion}: {detail}");
    assert!(pass, "criterion {criterion} failed: {detail}");
}

fn unit(mu_a: f64, sigma_b: f64, beta: f64) -> EffectiveParams {
    EffectiveParams::new(mu_a, sigma_b, beta).unwrap()
}

// ---- experiments shared with the determinism check ----

fn displacement_config(x: f64) -> DisplacementConfig {
    DisplacementConfig {
        m: 1000,
        n: 1000,
        x: vec![x],
        mode: ModeDescriptor::additive_noise(1.0),
        trials: 20,
        seed: SEED,
    }
}

fn amse_config() -> DisplacementConfig {
    DisplacementConfig {
        m: 1000,
        n: 1000,
        x: vec![6.0, 5.0, 4.0, 3.0],
        mode: additive_missing(1.0, 0.7),
        trials: 20,
        seed: SEED,
    }
}

fn sweep_config() -> SweepConfig {
    SweepConfig {
        x: vec![6.0, 5.0, 4.0, 3.0, 2.0],
        ..SweepConfig::default()
    }
}

fn brute_config() -> BruteConfig {
    BruteConfig::default()
}

const ESTIMATION_SIGMA: f64 = 1.3;
const ESTIMATION_SPIKE: [f64; 5] = [8.0, 6.5, 5.0, 3.5, 2.0];

/// `(spiked, seed, σ̂_B)` rows for pure-noise and rank-5 draws.
fn estimation_run() -> Vec<(bool, u64, f64)> {
    let mode = ModeDescriptor::additive_noise(ESTIMATION_SIGMA);
    let mut rows = Vec::new();
    for spiked in [false, true] {
        for seed in 0..10u64 {
            let mut rng = trial_rng(SEED + spiked as u64, seed);
            let x = if spiked {
                let spec = SignalSpec::new(1000, 1000, ESTIMATION_SPIKE.to_vec()).unwrap();
                make_signal(&spec, &mut rng).unwrap().matrix
            } else {
                Mat::<f64>::zeros(1000, 1000)
            };
            let y = contaminate(&x, &mode, &mut rng).unwrap();
            let values = singular_values(&y).unwrap();
            rows.push((spiked, seed, svshrink::core::estimate_sigma_b(&values, 1.0).unwrap()));
        }
    }
    rows
}

fn estimation_csv(rows: &[(bool, u64, f64)]) -> String {
    let mut out = String::from("spiked,seed,sigma_b_hat\n");
    for (spiked, seed, s) in rows {
        out.push_str(&format!("{spiked},{seed},{s}\n"));
    }
    out
}

struct Runs {
    supercritical: Vec<ExperimentRecord>,
    subcritical: Vec<ExperimentRecord>,
}

fn displacement_runs() -> &'static Runs {
    static RUNS: OnceLock<Runs> = OnceLock::new();
    RUNS.get_or_init(|| Runs {
        supercritical: run_displacement_check(&displacement_config(2.5)).unwrap(),
        subcritical: run_displacement_check(&displacement_config(0.5)).unwrap(),
    })
}

fn amse_run() -> &'static Vec<ExperimentRecord> {
    static RUN: OnceLock<Vec<ExperimentRecord>> = OnceLock::new();
    RUN.get_or_init(|| run_displacement_check(&amse_config()).unwrap())
}

fn sweep_run() -> &'static SweepResult {
    static RUN: OnceLock<SweepResult> = OnceLock::new();
    RUN.get_or_init(|| run_critical_sweep(&sweep_config()).unwrap())
}

fn brute_run() -> &'static Vec<BruteRow> {
    static RUN: OnceLock<Vec<BruteRow>> = OnceLock::new();
    RUN.get_or_init(|| brute_force_shrinker(&brute_config()).unwrap())
}

fn estimation_rows() -> &'static Vec<(bool, u64, f64)> {
    static RUN: OnceLock<Vec<(bool, u64, f64)>> = OnceLock::new();
    RUN.get_or_init(estimation_run)
}

// ---- criteria ----

#[test]
fn criterion_01_optimal_threshold_closed_form() {
    let lambda = optimal_threshold(&unit(1.0, 1.0, 1.0));
    let mut worst: f64 = 0.0;
    for beta in [0.25, 0.5, 1.0] {
        for (mu, sigma) in [(1.0, 1.0), (0.7, 1.3), (0.4, 0.2)] {
            let p = unit(mu, sigma, beta);
            let gap = (optimal_threshold(&p) - displace(threshold_design_point(&p), &p)).abs();
            worst = worst.max(gap);
        }
    }
    let pass = (lambda - 2.309401).abs() <= 1e-6 && worst <= 1e-9;
    verdict(
        1,
        pass,
        format!("lambda*(1,1) = {lambda:.9}, max |lambda* - displace(x_est)| = {worst:.2e}"),
    );
}

#[test]
fn criterion_02_displacement_and_cosines() {
    let runs = displacement_runs();
    let p = unit(1.0, 1.0, 1.0);
    let sup = &runs.supercritical;
    let y_pred = displace(2.5, &p);
    let y_err = median(
        &sup.iter()
            .map(|r| (r.singular_values[0] - y_pred).abs())
            .collect::<Vec<_>>(),
    );
    let cl = median(
        &sup.iter()
            .map(|r| (r.cos2_left[0] - r.theory.cos2_left[0]).abs())
            .collect::<Vec<_>>(),
    );
    let cr = median(
        &sup.iter()
            .map(|r| (r.cos2_right[0] - r.theory.cos2_right[0]).abs())
            .collect::<Vec<_>>(),
    );
    let sub = median(
        &runs
            .subcritical
            .iter()
            .map(|r| r.singular_values[0])
            .collect::<Vec<_>>(),
    );
    let pass = y_err <= 0.05 && cl <= 0.05 && cr <= 0.05 && (sub - 2.0).abs() <= 0.05;
    verdict(
        2,
        pass,
        format!(
            "x=2.5: median |y1 - {y_pred:.4}| = {y_err:.4}, median cos2 error left {cl:.4} right {cr:.4}; \
             x=0.5: median y1 = {sub:.4}"
        ),
    );
}

#[test]
fn criterion_03_amse_decomposition() {
    let records = amse_run();
    let predicted = records[0].theory.amse.shrinker;
    let observed = median(&records.iter().map(|r| r.mse.shrinker).collect::<Vec<_>>());
    let rel = (observed - predicted).abs() / predicted;
    verdict(
        3,
        rel <= 0.10,
        format!(
            "median MSE {observed:.4} vs predicted {predicted:.4} (relative gap {:.2}%)",
            100.0 * rel
        ),
    );
}

#[test]
fn criterion_04_worst_case_constants() {
    let mut details = Vec::new();
    let mut pass = true;
    for (mu, sigma) in [(1.0, 1.0), (0.6, 1.5)] {
        let p = unit(mu, sigma, 1.0);
        let u2 = (sigma / mu) * (sigma / mu);
        let thr = numerical_worst_case(Estimator::OptimalThreshold, &p).unwrap();
        let tsvd = numerical_worst_case(Estimator::Tsvd, &p).unwrap();
        let shrink_sup = (0..=100_000)
            .map(|i| 1.0 + 99.0 * i as f64 / 100_000.0)
            .map(|t| shrinker_amse(t * sigma / mu, &p))
            .fold(f64::MIN, f64::max);
        let ok = (thr.value - 3.0 * u2).abs() <= 1e-6
            && (mu * thr.x - sigma * 3f64.sqrt()).abs() <= 1e-6
            && (tsvd.value - 5.0 * u2).abs() <= 1e-6
            && (mu * tsvd.x - sigma).abs() <= 1e-6
            && (shrink_sup - 2.0 * u2).abs() <= 0.01 * 2.0 * u2;
        pass &= ok;
        details.push(format!(
            "(mu={mu}, sigma={sigma}): thr {:.7}/u2 at xbar {:.6}, tsvd {:.7}/u2 at xbar {:.6}, shrink {:.5}/u2",
            thr.value / u2,
            mu * thr.x / sigma,
            tsvd.value / u2,
            mu * tsvd.x / sigma,
            shrink_sup / u2
        ));
    }
    verdict(4, pass, details.join("; "));
}

#[test]
fn criterion_05_critical_sweep() {
    let result = sweep_run();
    let mut pass = true;
    let mut parts = Vec::new();
    for (k, predicted) in result.predicted_cutoffs.iter().enumerate() {
        let got = result.empirical_cutoffs[k];
        let ok = got.is_some_and(|g| (g - predicted).abs() <= 0.05);
        pass &= ok;
        parts.push(format!(
            "k={}: {} vs {predicted:.4}",
            k + 1,
            got.map_or("none".into(), |g| format!("{g:.2}"))
        ));
    }
    verdict(
        5,
        pass,
        format!("transition kappa (empirical vs predicted) {}", parts.join(", ")),
    );
}

#[test]
fn criterion_06_brute_force_shrinker() {
    let cfg = brute_config();
    let p = svshrink::core::compile_mode(&additive_missing(cfg.sigma, cfg.kappa), 1.0).unwrap();
    let lo = bulk_edge(&p) + 0.3;
    let rows: Vec<&BruteRow> = brute_run().iter().filter(|r| r.y1 >= lo && r.y1 <= 6.0).collect();
    let worst = rows.iter().map(|r| (r.eta_hat - r.eta_opt).abs()).fold(0.0, f64::max);
    let pass = !rows.is_empty() && worst <= 0.15;
    verdict(
        6,
        pass,
        format!(
            "{} grid points with y1 in [{lo:.3}, 6]: max |eta_hat - eta*(y1)| = {worst:.4}",
            rows.len()
        ),
    );
}

/// Independent mass check: midpoint rule in `θ` with `t = a + (b − a) sin²θ`.
fn mp_mass_midpoint(law: &MpLaw) -> f64 {
    let (a, b) = (law.lower_edge(), law.upper_edge());
    let n = 200_000;
    let h = std::f64::consts::FRAC_PI_2 / n as f64;
    (0..n)
        .map(|i| {
            let th = (i as f64 + 0.5) * h;
            let t = a + (b - a) * th.sin().powi(2);
            law.density(t) * (b - a) * (2.0 * th).sin() * h
        })
        .sum()
}

#[test]
fn criterion_07_mp_law_and_estimation() {
    let mut mass_err: f64 = 0.0;
    let mut equiv_err: f64 = 0.0;
    for beta in [0.1, 0.25, 0.5, 1.0] {
        let law = MpLaw::new(beta, 1.0).unwrap();
        mass_err = mass_err
            .max((law.total_mass() - 1.0).abs())
            .max((mp_mass_midpoint(&law) - 1.0).abs());
        for sigma in [0.3, 2.0, 7.5] {
            let scaled = MpLaw::new(beta, sigma).unwrap().median();
            equiv_err = equiv_err.max((scaled - sigma * law.median()).abs() / scaled);
        }
    }
    let rows = estimation_rows();
    let rel = |spiked: bool| {
        rows.iter()
            .filter(|r| r.0 == spiked)
            .map(|r| (r.2 - ESTIMATION_SIGMA).abs() / ESTIMATION_SIGMA)
            .fold(0.0, f64::max)
    };
    let (pure, spike) = (rel(false), rel(true));
    let pass = mass_err <= 1e-6 && equiv_err <= 1e-9 && pure <= 0.02 && spike <= 0.03;
    verdict(
        7,
        pass,
        format!(
            "mass error {mass_err:.2e}, median equivariance {equiv_err:.2e}, \
             sigma_b recovery max error pure {:.2}% / rank-5 {:.2}%",
            100.0 * pure,
            100.0 * spike
        ),
    );
}

/// `η*` right limit at the edge by Richardson extrapolation in `√h`.
fn shrinker_right_limit(p: &EffectiveParams) -> f64 {
    let edge = bulk_edge(p);
    let h = 1e-8 * edge;
    2.0 * optimal_shrinker(edge + h / 4.0, p) - optimal_shrinker(edge + h, p)
}

#[test]
fn criterion_08_round_trip_and_branches() {
    let mut round_trip: f64 = 0.0;
    let mut continuity: f64 = 0.0;
    let mut crossings = Vec::new();
    for beta in [0.25, 0.5, 1.0] {
        for (mu, sigma) in [(1.0, 1.0), (0.7, 1.3)] {
            let p = unit(mu, sigma, beta);
            let level = transition_level(&p);
            for i in 1..=2000 {
                let x = level * (1.0 + 1e-3) * (1.0 + i as f64 * 0.01);
                round_trip = round_trip.max((inverse_displace(displace(x, &p), &p) - x).abs() / x);
            }
            let edge = bulk_edge(&p);
            let at = optimal_shrinker(edge, &p);
            let left = optimal_shrinker(edge * (1.0 - 1e-12), &p);
            continuity = continuity.max(at.abs()).max((left - shrinker_right_limit(&p)).abs());
            let unit_x = sigma / mu;
            let grid: Vec<f64> = (1..=10_000).map(|i| unit_x * 10.0 * i as f64 / 10_000.0).collect();
            let sign: Vec<bool> = grid.iter().map(|&x| threshold_keep_branch(x, &p) > x * x).collect();
            crossings.push(sign.windows(2).filter(|w| w[0] != w[1]).count());
        }
    }
    let pass = round_trip <= 1e-10 && continuity <= 1e-9 && crossings.iter().all(|c| *c == 1);
    verdict(
        8,
        pass,
        format!("round trip {round_trip:.2e}, edge continuity {continuity:.2e}, keep/kill crossings {crossings:?}"),
    );
}

#[test]
fn criterion_09_dominance() {
    let mut worst = f64::MIN;
    for beta in [0.5, 1.0] {
        for (mu, sigma) in [(1.0, 1.0), (0.7, 1.3)] {
            let p = unit(mu, sigma, beta);
            let edge = bulk_edge(&p);
            for i in 0..200 {
                let x = (sigma / mu) * 6.0 * (i as f64 + 0.5) / 200.0;
                let s = shrinker_amse(x, &p);
                for j in 0..50 {
                    let lambda = edge * (1.0 + 2.0 * j as f64 / 49.0);
                    worst = worst.max(s - threshold_amse(x, lambda, &p).unwrap());
                }
            }
        }
    }
    verdict(
        9,
        worst <= 1e-9,
        format!("max shrinker - threshold AMSE over grid = {worst:.3e}"),
    );
}

#[test]
fn criterion_10_determinism() {
    let runs = displacement_runs();
    let mut checks = vec![
        (
            "displacement x=2.5",
            records_to_csv(&runs.supercritical).unwrap(),
            records_to_csv(&run_displacement_check(&displacement_config(2.5)).unwrap()).unwrap(),
        ),
        (
            "displacement x=0.5",
            records_to_csv(&runs.subcritical).unwrap(),
            records_to_csv(&run_displacement_check(&displacement_config(0.5)).unwrap()).unwrap(),
        ),
        (
            "amse",
            records_to_csv(amse_run()).unwrap(),
            records_to_csv(&run_displacement_check(&amse_config()).unwrap()).unwrap(),
        ),
    ];
    checks.push((
        "critical sweep",
        sweep_run().to_csv().unwrap(),
        run_critical_sweep(&sweep_config()).unwrap().to_csv().unwrap(),
    ));
    checks.push((
        "brute shrinker",
        brute_to_csv(brute_run()).unwrap(),
        brute_to_csv(&brute_force_shrinker(&brute_config()).unwrap()).unwrap(),
    ));
    checks.push((
        "estimation",
        estimation_csv(estimation_rows()),
        estimation_csv(&estimation_run()),
    ));
    let differing: Vec<&str> = checks.iter().filter(|c| c.1 != c.2).map(|c| c.0).collect();
    verdict(
        10,
        differing.is_empty(),
        format!("{} CSV outputs rerun, differing: {differing:?}", checks.len()),
    );
}
