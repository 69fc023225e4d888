//! Acceptance criteria 1-8. Run with `--nocapture` to see one PASS/FAIL
//! line per criterion.

use std::f64::consts::PI;
use std::time::{Duration, Instant};

use entmap::concurrence::{simulate_series, SimulationMode};
use entmap::gate_error::{
    effective_error, ising_pulse_pair, measurements_for_threshold, sqrtswap_pulse_pair, Budget,
    Gate,
};
use entmap::measure::{prepare_input, PrepSpec};
use entmap::quantum::{closed_form_c2, concurrence_sq, evolve, oracle_evolve, PairFrequency, C64};
use entmap::recon::{characterize, plans_for, CharacterizeOptions};
use entmap::runner::{cmd_characterize, robustness_dt, robustness_sweep, ExperimentConfig};
use entmap::spectral::{
    dft, find_peak, fractional_uncertainty, plan_observation, refine_frequency, SamplingPlan,
    Strategy,
};
use entmap::{HamiltonianParams, InputState, PureState};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

fn report(n: u32, pass: bool, elapsed: Duration, detail: &str) {
    let verdict = if pass { "PASS" } else { "FAIL" };
    println!(
        "criterion {n}: {verdict} ({:.2} s) {detail}",
        elapsed.as_secs_f64()
    );
    assert!(pass, "criterion {n} failed: {detail}");
}

fn random_h(rng: &mut ChaCha8Rng) -> HamiltonianParams {
    HamiltonianParams::new(
        rng.random_range(-2.0..=2.0),
        rng.random_range(-2.0..=2.0),
        rng.random_range(-2.0..=2.0),
    )
}

fn reference_h() -> HamiltonianParams {
    HamiltonianParams::new(1.2, 0.6, 1.4)
}

#[test]
fn criterion_1_closed_forms() {
    let start = Instant::now();
    let mut rng = ChaCha8Rng::seed_from_u64(1);
    let mut worst = 0.0f64;
    for _ in 0..50 {
        let h = random_h(&mut rng);
        for _ in 0..20 {
            let t = rng.random_range(0.0..20.0);
            for input in InputState::ALL {
                let psi = evolve(&h, &prepare_input(&PrepSpec::ideal(input)), t).unwrap();
                worst = worst.max((concurrence_sq(&psi) - closed_form_c2(input, &h, t)).abs());
            }
        }
    }
    let elapsed = start.elapsed();
    let pass = worst <= 1e-10 && elapsed < Duration::from_secs(5);
    report(
        1,
        pass,
        elapsed,
        &format!("max |C² - closed form| = {worst:.2e} over 50 h x 20 t x 4 inputs"),
    );
}

#[test]
fn criterion_2_oracle() {
    let start = Instant::now();
    let mut rng = ChaCha8Rng::seed_from_u64(2);
    let mut worst = 0.0f64;
    for _ in 0..100 {
        let h = random_h(&mut rng);
        let amps =
            [(); 4].map(|_| C64::new(rng.random_range(-1.0..1.0), rng.random_range(-1.0..1.0)));
        let psi0 = PureState::normalized(amps).unwrap();
        let t = rng.random_range(-50.0..=50.0);
        let a = evolve(&h, &psi0, t).unwrap().amplitudes();
        let b = oracle_evolve(&h, &psi0, t).unwrap().amplitudes();
        for (x, y) in a.iter().zip(&b) {
            worst = worst.max((x - y).norm());
        }
    }
    let elapsed = start.elapsed();
    let pass = worst <= 1e-9 && elapsed < Duration::from_secs(5);
    report(
        2,
        pass,
        elapsed,
        &format!("max amplitude difference {worst:.2e} over 100 instances"),
    );
}

#[test]
fn criterion_3_reference_run() {
    let start = Instant::now();
    let h = reference_h();
    let expected = [2.4, 7.2, 3.2, 8.0];
    let plans = plans_for(&h, 200, 10, Strategy::Uniform).unwrap();
    let mut peaks_ok = true;
    let mut within = 0;
    let mut failures = Vec::new();
    for seed in 0..20 {
        let c = match characterize(&h, &plans, &CharacterizeOptions::default(), seed) {
            Ok(c) => c,
            Err(e) => {
                failures.push(format!("seed {seed}: {e}"));
                continue;
            }
        };
        for (e, want) in c.experiments.iter().zip(expected) {
            let peak = e.peak.map_or(0.0, |p| p.omega);
            if (peak - want).abs() > e.spectrum.resolution() + 1e-9 {
                peaks_ok = false;
                failures.push(format!("seed {seed}: {:?} peak {peak:.4}", e.input));
            }
        }
        let r = &c.result;
        let ok = r
            .c_hat
            .as_array()
            .iter()
            .zip(h.as_array())
            .zip(r.sigma)
            .all(|((x, y), s)| (x - y).abs() <= 3.0 * s);
        if ok {
            within += 1;
        } else {
            failures.push(format!(
                "seed {seed}: c_hat {:?} sigma {:?}",
                r.c_hat.as_array(),
                r.sigma
            ));
        }
    }
    let elapsed = start.elapsed();
    let pass = peaks_ok && within >= 18 && elapsed < Duration::from_secs(30);
    report(
        3,
        pass,
        elapsed,
        &format!("peaks within one bin: {peaks_ok}; c_hat within 3 sigma in {within}/20 seeds {failures:?}"),
    );
}

fn log_slope(xs: &[f64], ys: &[f64]) -> f64 {
    let n = xs.len() as f64;
    let (lx, ly): (Vec<f64>, Vec<f64>) = xs.iter().zip(ys).map(|(x, y)| (x.ln(), y.ln())).unzip();
    let mx = lx.iter().sum::<f64>() / n;
    let my = ly.iter().sum::<f64>() / n;
    let sxy: f64 = lx.iter().zip(&ly).map(|(x, y)| (x - mx) * (y - my)).sum();
    let sxx: f64 = lx.iter().map(|x| (x - mx).powi(2)).sum();
    sxy / sxx
}

fn frequency_estimates(
    h: &HamiltonianParams,
    plan: &SamplingPlan,
    seeds: std::ops::Range<u64>,
) -> Vec<f64> {
    let prep = PrepSpec::ideal(InputState::Psi1);
    seeds
        .map(|seed| {
            let series = simulate_series(h, &prep, plan, SimulationMode::Sampled, seed).unwrap();
            let coarse = find_peak(&dft(&series).unwrap()).map_or(0.0, |p| p.omega);
            refine_frequency(&series, coarse, plan).map_or(coarse / 4.0, |e| e.omega_hat)
        })
        .collect()
}

#[test]
fn criterion_4_scaling() {
    let start = Instant::now();
    let h = reference_h();
    let omega = h.combination(InputState::Psi1).abs();
    let nt = 200;
    let nes = [4u64, 16, 64, 256, 1024];
    let mut stds = Vec::new();
    let mut ratios = Vec::new();
    for ne in nes {
        let plan = plan_observation(omega, nt, ne, Strategy::Endpoint).unwrap();
        let estimates: Vec<f64> = std::thread::scope(|s| {
            let workers: Vec<_> = (0..4u64)
                .map(|k| {
                    let (h, plan) = (&h, &plan);
                    s.spawn(move || frequency_estimates(h, plan, 50 * k..50 * (k + 1)))
                })
                .collect();
            workers
                .into_iter()
                .flat_map(|w| w.join().unwrap())
                .collect()
        });
        let n = estimates.len() as f64;
        let mean = estimates.iter().sum::<f64>() / n;
        let var = estimates.iter().map(|x| (x - mean).powi(2)).sum::<f64>() / (n - 1.0);
        stds.push(var.sqrt() / omega);
        let mut errors: Vec<f64> = estimates.iter().map(|x| (x / omega - 1.0).abs()).collect();
        errors.sort_by(f64::total_cmp);
        ratios.push(errors[errors.len() / 2] / fractional_uncertainty(nt, ne));
    }
    let xs: Vec<f64> = nes.iter().map(|&x| x as f64).collect();
    let slope = log_slope(&xs, &stds);
    let elapsed = start.elapsed();
    let slope_ok = (-0.6..=-0.4).contains(&slope);
    let ratio_ok = ratios.iter().all(|r| (0.1..=10.0).contains(r));
    let pass = slope_ok && ratio_ok && elapsed < Duration::from_secs(300);
    let ratios: Vec<String> = ratios.iter().map(|r| format!("{r:.3}")).collect();
    report(
        4,
        pass,
        elapsed,
        &format!("slope {slope:.3} (want [-0.6, -0.4]); median error / 4/(Nt sqrt Ne) = [{}] (want [0.1, 10])", ratios.join(", ")),
    );
}

#[test]
fn criterion_5_gate_closed_forms() {
    let start = Instant::now();
    let mut worst = 0.0f64;
    for eps in [1e-3, 1e-2, 1e-1] {
        let s = (PI * eps / 4.0).sin().powi(2);
        let (im, ideal) = ising_pulse_pair(1.0, eps).unwrap();
        worst = worst.max((effective_error(&im, &ideal) - s).abs());
        let (im, ideal) = sqrtswap_pulse_pair(1.0, eps).unwrap();
        worst = worst.max((effective_error(&im, &ideal) - 0.75 * s).abs());
    }
    let elapsed = start.elapsed();
    let pass = worst <= 1e-12 && elapsed < Duration::from_secs(1);
    report(
        5,
        pass,
        elapsed,
        &format!("max deviation from closed forms {worst:.2e}"),
    );
}

#[test]
fn criterion_6_threshold() {
    let start = Instant::now();
    let gate = Gate::IsingCnot;
    let at_1e4 = gate.p_eff(Budget::new(10, 4990).epsilon());
    let b = measurements_for_threshold(1e-4, 10, gate).unwrap();
    let below = gate.p_eff(Budget::new(10, b.ne - 1).epsilon());
    let minimal = gate.p_eff(b.epsilon()) <= 1e-4 && below > 1e-4;
    let elapsed = start.elapsed();
    let pass = (at_1e4 - 1.98e-5).abs() < 0.01e-5
        && at_1e4 < 1e-4
        && minimal
        && b.n < 10_000
        && elapsed < Duration::from_secs(1);
    report(
        6,
        pass,
        elapsed,
        &format!(
            "p_eff(N = 10^4) = {at_1e4:.4e}; minimal budget Ne = {}, N = {} (Ne - 1 gives {below:.6e})",
            b.ne, b.n
        ),
    );
}

#[test]
fn criterion_7_robustness() {
    let start = Instant::now();
    let h = reference_h();
    let plan = SamplingPlan::uniform(1024, robustness_dt(&h).unwrap(), 1).unwrap();
    let rows = robustness_sweep(&h, &plan, &[0.0, 0.05], SimulationMode::Noiseless, 0).unwrap();
    let (clean, dirty) = (&rows[0], &rows[1]);
    let eta = dirty.eta;
    let first_order = |p: &PairFrequency| p.i == 3 || p.j == 3;
    let mut sidebands_ok = true;
    let mut detail = Vec::new();
    let mut second_order = 0.0;
    for s in &dirty.sidebands {
        let rel = s.relative();
        detail.push(format!("{}={rel:.4}", s.pair.tag()));
        if first_order(&s.pair) {
            sidebands_ok &= (rel - eta).abs() <= 0.01;
        } else {
            second_order = rel;
            sidebands_ok &= rel <= 4.0 * eta * eta;
        }
    }
    let main = dirty.main_relative();
    let shift = dirty.main_bin.abs_diff(clean.main_bin);
    let elapsed = start.elapsed();
    let pass = (main - 0.90).abs() <= 0.02
        && sidebands_ok
        && shift < 1
        && elapsed < Duration::from_secs(30);
    report(
        7,
        pass,
        elapsed,
        &format!(
            "main {main:.4}, sidebands [{}] (first order want {eta} +/- 0.01; c1+c2 line {second_order:.4} is second order), main bin shift {shift}",
            detail.join(", ")
        ),
    );
}

#[test]
fn criterion_8_determinism() {
    let start = Instant::now();
    let config = ExperimentConfig::from_json_str(
        r#"{"hamiltonian": {"c1": 1.2, "c2": 0.6, "c3": 1.4}, "seed": 8, "plan": {"nt": 200, "ne": 10}}"#,
    )
    .unwrap();
    let (a, b) = (tempfile::tempdir().unwrap(), tempfile::tempdir().unwrap());
    cmd_characterize(&config, a.path()).unwrap();
    cmd_characterize(&config, b.path()).unwrap();
    let read =
        |d: &tempfile::TempDir| std::fs::read(d.path().join("characterization.json")).unwrap();
    let (x, y) = (read(&a), read(&b));
    let pass = x == y;
    report(
        8,
        pass,
        start.elapsed(),
        &format!("{} bytes, identical: {pass}", x.len()),
    );
}
