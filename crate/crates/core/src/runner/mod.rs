//! Experiment orchestration behind the `entmap` command line: simulated
//! series, spectra, full characterization, gate-error budgets and the
//! input-imperfection sweep. Every command writes plot-ready CSV and JSON
//! files stamped with the config hash, plus a `manifest.json`.

mod config;
mod output;

use std::f64::consts::PI;
use std::path::{Path, PathBuf};

use serde::Serialize;
use serde_json::json;
use sha2::{Digest, Sha256};

pub use config::{
    Eta, ExperimentConfig, PlanOverrides, PlanSpec, Positive, RobustnessSpec, Shots, SweepEta,
    TimePoints,
};
pub use output::{fmt_f64, read_csv, CsvContents, CsvTable, OutputDir};

use crate::concurrence::{
    simulate_series, simulate_series_with, ConcurrencePoint, ConcurrenceSeries, Estimator,
    SimulationMode,
};
use crate::gate_error::{budget_curve, measurements_for_threshold, Budget, Gate};
use crate::measure::PrepSpec;
use crate::quantum::{eta_expansion, HamiltonianParams, InputState, PairFrequency};
use crate::recon::{characterize, detect_peak, Characterization};
use crate::spectral::{
    amplitude_at, dft, dft_windowed, find_peak, SamplingPlan, Window, NYQUIST_MARGIN,
};
use crate::{Error, Result};

pub const VERSION: &str = env!("CARGO_PKG_VERSION");

/// Cosine amplitude of an ideal `sin²` protocol signal.
pub const FULL_CONTRAST_AMPLITUDE: f64 = 0.5;

#[derive(Debug, Clone, PartialEq)]
pub struct RunArtifacts {
    pub files: Vec<PathBuf>,
    pub summary: serde_json::Value,
}

#[derive(Serialize)]
struct Manifest<'a> {
    command: &'a str,
    version: &'a str,
    seed: Option<u64>,
    config_hash: &'a str,
    config: serde_json::Value,
    files: Vec<String>,
}

fn finish(
    mut dir: OutputDir,
    command: &str,
    seed: Option<u64>,
    config_hash: &str,
    config: serde_json::Value,
    summary: serde_json::Value,
) -> Result<RunArtifacts> {
    let files: Vec<String> = dir
        .written()
        .iter()
        .filter_map(|p| p.file_name().map(|n| n.to_string_lossy().into_owned()))
        .collect();
    let manifest = Manifest {
        command,
        version: VERSION,
        seed,
        config_hash,
        config,
        files,
    };
    dir.write_json("manifest.json", &manifest)?;
    Ok(RunArtifacts {
        files: dir.into_files(),
        summary,
    })
}

fn config_value(config: &ExperimentConfig) -> serde_json::Value {
    serde_json::from_str(&config.canonical_json()).expect("canonical json parses")
}

fn series_table(hash: &str, series: &ConcurrenceSeries) -> CsvTable {
    let mut table = CsvTable::new(hash, &["t", "c2_estimate", "shots_zz", "shots_xz"]);
    for p in series.points() {
        table.row(&[
            fmt_f64(p.time),
            fmt_f64(p.c2_estimate),
            p.shots_zz.to_string(),
            p.shots_xz.to_string(),
        ]);
    }
    table
}

fn series_file(input: InputState) -> String {
    format!("series_{}.csv", input.label())
}

/// Simulated concurrence series for the four inputs, one CSV each.
pub fn cmd_simulate(config: &ExperimentConfig, out: &Path) -> Result<RunArtifacts> {
    let hash = config.hash();
    let plans = config.plans()?;
    let mut dir = OutputDir::create(out)?;
    let mut entries = Vec::new();
    for input in InputState::ALL {
        let plan = &plans[input.index()];
        let prep = PrepSpec::new(input, config.eta.0)?;
        let series = simulate_series(&config.hamiltonian, &prep, plan, config.mode, config.seed)?;
        dir.write_csv(&series_file(input), &series_table(&hash, &series))?;
        entries.push(json!({
            "input": input,
            "nt": plan.nt(),
            "dt": plan.dt(),
            "strategy": plan.strategy(),
            "total_budget": plan.total_budget(),
        }));
    }
    let summary = json!({ "config_hash": hash, "seed": config.seed, "series": entries });
    dir.write_json("simulate.json", &summary)?;
    finish(
        dir,
        "simulate",
        Some(config.seed),
        &hash,
        config_value(config),
        summary,
    )
}

fn load_series(path: &Path, hash: &str, plan: &SamplingPlan) -> Result<ConcurrenceSeries> {
    let (file_hash, header, rows) = read_csv(path)?;
    if file_hash.as_deref() != Some(hash) {
        return Err(Error::InvalidArgument(format!(
            "{} was written for config {}, current config is {hash}",
            path.display(),
            file_hash.as_deref().unwrap_or("(none)")
        )));
    }
    if header != ["t", "c2_estimate", "shots_zz", "shots_xz"] {
        return Err(Error::Io(format!(
            "{}: unexpected columns {header:?}",
            path.display()
        )));
    }
    let bad = |row: usize| Error::Io(format!("{}: malformed row {}", path.display(), row + 1));
    let points = rows
        .iter()
        .enumerate()
        .map(|(k, r)| {
            if r.len() != 4 {
                return Err(bad(k));
            }
            Ok(ConcurrencePoint {
                time: r[0].parse().map_err(|_| bad(k))?,
                c2_estimate: r[1].parse().map_err(|_| bad(k))?,
                shots_zz: r[2].parse().map_err(|_| bad(k))?,
                shots_xz: r[3].parse().map_err(|_| bad(k))?,
            })
        })
        .collect::<Result<Vec<_>>>()?;
    ConcurrenceSeries::new(plan.dt(), points)
}

/// Spectra of the four series with peak annotations. With `from`, the
/// series are read from a previous `simulate` output whose config hash
/// must match; otherwise they are simulated.
pub fn cmd_spectrum(
    config: &ExperimentConfig,
    out: &Path,
    from: Option<&Path>,
) -> Result<RunArtifacts> {
    let hash = config.hash();
    let plans = config.plans()?;
    let mut dir = OutputDir::create(out)?;
    let mut peaks = Vec::new();
    for input in InputState::ALL {
        let plan = &plans[input.index()];
        let series = match from {
            Some(src) => load_series(&src.join(series_file(input)), &hash, plan)?,
            None => {
                let prep = PrepSpec::new(input, config.eta.0)?;
                simulate_series(&config.hamiltonian, &prep, plan, config.mode, config.seed)?
            }
        };
        let spectrum = dft_windowed(&series, config.window)?;
        let peak = detect_peak(&spectrum, config.window)?;
        let mut table = CsvTable::new(&hash, &["omega", "magnitude"]);
        for (w, m) in spectrum.omegas().iter().zip(spectrum.magnitudes()) {
            table.row(&[fmt_f64(*w), fmt_f64(*m)]);
        }
        dir.write_csv(&format!("spectrum_{}.csv", input.label()), &table)?;
        peaks.push(json!({
            "input": input,
            "no_oscillation": peak.is_none(),
            "peak_bin": peak.map(|p| p.bin),
            "peak_omega": peak.map(|p| p.omega),
            "peak_magnitude": peak.map(|p| p.magnitude),
            "expected_omega": 4.0 * config.hamiltonian.combination(input).abs(),
            "resolution": spectrum.resolution(),
            "bins": spectrum.len(),
        }));
    }
    let summary = json!({ "config_hash": hash, "seed": config.seed, "peaks": peaks });
    dir.write_json("peaks.json", &summary)?;
    finish(
        dir,
        "spectrum",
        Some(config.seed),
        &hash,
        config_value(config),
        summary,
    )
}

/// JSON summary of a characterization run.
pub fn characterization_summary(
    config_hash: &str,
    seed: u64,
    c: &Characterization,
) -> serde_json::Value {
    let r = &c.result;
    let frequencies: Vec<_> = c
        .experiments
        .iter()
        .map(|e| {
            json!({
                "input": e.input,
                "omega_hat": e.omega,
                "sigma": e.sigma,
                "degenerate": e.is_degenerate(),
                "raw_peak_omega": e.estimate.map(|s| s.raw_peak_omega),
                "delta_f_over_f": e.estimate.map(|s| s.delta_f_over_f),
                "converged": e.estimate.map(|s| s.converged),
            })
        })
        .collect();
    json!({
        "config_hash": config_hash,
        "seed": seed,
        "c_hat": r.c_hat,
        "sigma": r.sigma,
        "residual": r.residual,
        "convention": r.convention,
        "candidates_considered": r.candidates_considered,
        "equivalent_solutions": r.equivalent_solutions,
        "signs": r.signs,
        "frequencies": frequencies,
    })
}

/// Full protocol; writes `characterization.json`.
pub fn cmd_characterize(config: &ExperimentConfig, out: &Path) -> Result<RunArtifacts> {
    let hash = config.hash();
    let plans = config.plans()?;
    let c = characterize(&config.hamiltonian, &plans, &config.options(), config.seed)?;
    let summary = characterization_summary(&hash, config.seed, &c);
    let mut dir = OutputDir::create(out)?;
    dir.write_json("characterization.json", &summary)?;
    finish(
        dir,
        "characterize",
        Some(config.seed),
        &hash,
        config_value(config),
        summary,
    )
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct GateErrorArgs {
    pub nts: Vec<usize>,
    pub ne_values: Vec<u64>,
    pub gate: Gate,
    pub p_target: Option<f64>,
}

/// Parses `START:STOP[:COUNT]` into `COUNT` (default 20) log-spaced
/// integers from `START` to `STOP`, duplicates removed.
pub fn parse_ne_range(text: &str) -> Result<Vec<u64>> {
    let usage = || {
        Error::InvalidArgument(format!(
            "ne range must be START:STOP[:COUNT] with 1 ≤ START ≤ STOP, got {text:?}"
        ))
    };
    let parts: Vec<&str> = text.split(':').collect();
    if !(2..=3).contains(&parts.len()) {
        return Err(usage());
    }
    let start: u64 = parts[0].trim().parse().map_err(|_| usage())?;
    let stop: u64 = parts[1].trim().parse().map_err(|_| usage())?;
    let count: usize = match parts.get(2) {
        Some(c) => c.trim().parse().map_err(|_| usage())?,
        None => 20,
    };
    if start == 0 || start > stop || count == 0 {
        return Err(usage());
    }
    if count == 1 || start == stop {
        return Ok(vec![start]);
    }
    let (a, b) = ((start as f64).ln(), (stop as f64).ln());
    let mut values: Vec<u64> = (0..count)
        .map(|k| (a + (b - a) * k as f64 / (count - 1) as f64).exp().round() as u64)
        .map(|v| v.clamp(start, stop))
        .collect();
    values.dedup();
    Ok(values)
}

/// Gate error against total measurement budget, one CSV per `nt`, and
/// optionally the minimal budget for a target error.
pub fn cmd_gate_error(args: &GateErrorArgs, out: &Path) -> Result<RunArtifacts> {
    if args.nts.is_empty() || args.ne_values.is_empty() {
        return Err(Error::InvalidArgument(
            "need at least one nt and one Ne value".into(),
        ));
    }
    let args_json = serde_json::to_value(args).expect("args serialize");
    let hash = hex::encode(Sha256::digest(args_json.to_string().as_bytes()));
    let mut dir = OutputDir::create(out)?;
    let mut curves = Vec::new();
    for &nt in &args.nts {
        let reports = budget_curve(nt, &args.ne_values, args.gate)?;
        let mut table = CsvTable::new(&hash, &["nt", "ne", "n", "epsilon", "p_eff"]);
        for r in &reports {
            let b = r.budget.expect("budget curve reports carry budgets");
            table.row(&[
                b.nt.to_string(),
                b.ne.to_string(),
                b.n.to_string(),
                fmt_f64(r.epsilon),
                fmt_f64(r.p_eff),
            ]);
        }
        dir.write_csv(&format!("gate_error_nt{nt}.csv"), &table)?;
        curves.push(json!({ "nt": nt, "points": reports.len() }));
    }
    let thresholds = match args.p_target {
        Some(p) => args
            .nts
            .iter()
            .map(|&nt| {
                let b: Budget = measurements_for_threshold(p, nt, args.gate)?;
                Ok(json!({
                    "p_target": p,
                    "nt": b.nt,
                    "ne": b.ne,
                    "n": b.n,
                    "epsilon": b.epsilon(),
                    "p_eff": args.gate.p_eff(b.epsilon()),
                }))
            })
            .collect::<Result<Vec<_>>>()?,
        None => Vec::new(),
    };
    let summary = json!({
        "config_hash": hash,
        "gate": args.gate,
        "curves": curves,
        "thresholds": thresholds,
    });
    dir.write_json("gate_error.json", &summary)?;
    finish(dir, "gate-error", None, &hash, args_json, summary)
}

/// Spectral amplitude at one predicted frequency of a robustness run.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct Sideband {
    pub pair: PairFrequency,
    pub omega: f64,
    pub amplitude: f64,
}

impl Sideband {
    pub fn relative(&self) -> f64 {
        self.amplitude / FULL_CONTRAST_AMPLITUDE
    }
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct RobustnessRow {
    pub eta: f64,
    /// DFT peak of the series.
    pub main_bin: usize,
    pub main_omega: f64,
    /// Hann-windowed amplitude at `4|c1 − c2|`.
    pub main_amplitude: f64,
    /// The five other pair frequencies.
    pub sidebands: Vec<Sideband>,
    pub series: ConcurrenceSeries,
}

impl RobustnessRow {
    pub fn main_relative(&self) -> f64 {
        self.main_amplitude / FULL_CONTRAST_AMPLITUDE
    }
}

/// Time step placing every pair frequency `4|c_i ± c_j|` below Nyquist with
/// the planning margin.
pub fn robustness_dt(h: &HamiltonianParams) -> Result<f64> {
    let fastest = h
        .pair_frequencies()
        .iter()
        .fold(0.0f64, |m, (_, w)| m.max(w.abs()));
    if fastest <= 0.0 {
        return Err(Error::InvalidPlan("all pair frequencies vanish".into()));
    }
    Ok(2.0 * PI / (2.0 * NYQUIST_MARGIN * 4.0 * fastest))
}

/// Runs `ψ1` prepared with each `η` and measures the main peak and the
/// amplitudes at the other five pair frequencies.
///
/// The single-channel `ψ1` estimator only sees the `|00⟩`/`|11⟩` block and
/// is blind to the contamination, so noiseless runs use the exact state
/// concurrence and sampled runs the two-channel estimator.
pub fn robustness_sweep(
    h: &HamiltonianParams,
    plan: &SamplingPlan,
    etas: &[f64],
    mode: SimulationMode,
    seed: u64,
) -> Result<Vec<RobustnessRow>> {
    let pairs = h.pair_frequencies();
    let main = PairFrequency::new(1, 2, false);
    etas.iter()
        .map(|&eta| {
            let prep = PrepSpec::new(InputState::Psi1, eta)?;
            let estimator = match mode {
                SimulationMode::Noiseless => Estimator::Exact,
                SimulationMode::Sampled => Estimator::TwoChannel,
            };
            let series = simulate_series_with(h, &prep, plan, mode, estimator, seed)?;
            let values = series.values();
            let peak = find_peak(&dft(&series)?)?;
            let amp = |w: f64| amplitude_at(&values, plan.dt(), 4.0 * w.abs(), Window::Hann);
            let main_w = pairs.iter().find(|(p, _)| *p == main).expect("main pair").1;
            let sidebands = pairs
                .iter()
                .filter(|(p, _)| *p != main)
                .map(|&(pair, w)| Sideband {
                    pair,
                    omega: 4.0 * w.abs(),
                    amplitude: amp(w),
                })
                .collect();
            Ok(RobustnessRow {
                eta,
                main_bin: peak.bin,
                main_omega: peak.omega,
                main_amplitude: amp(main_w),
                sidebands,
                series,
            })
        })
        .collect()
}

/// The `η` sweep configured in the `robustness` section; writes the
/// amplitude table and the series beside the first-order expansion.
pub fn cmd_robustness(config: &ExperimentConfig, out: &Path) -> Result<RunArtifacts> {
    let spec = config
        .robustness
        .as_ref()
        .ok_or_else(|| Error::InvalidArgument("config has no robustness section".into()))?;
    let hash = config.hash();
    let h = &config.hamiltonian;
    let dt = match spec.dt {
        Some(dt) => dt.0,
        None => robustness_dt(h)?,
    };
    let ne = config.plan.ne.map_or(1, |n| n.0);
    let plan = SamplingPlan::uniform(spec.nt.0, dt, ne)?;
    let etas: Vec<f64> = spec.etas.iter().map(|e| e.0).collect();
    let rows = robustness_sweep(h, &plan, &etas, config.mode, config.seed)?;

    let mut dir = OutputDir::create(out)?;
    let mut columns = vec![
        "eta".to_string(),
        "main_peak_bin".into(),
        "main_peak_omega".into(),
        "main_peak_amp".into(),
        "main_peak_rel".into(),
    ];
    if let Some(first) = rows.first() {
        for s in &first.sidebands {
            columns.push(format!("{}_omega", s.pair.tag()));
            columns.push(format!("{}_amp", s.pair.tag()));
            columns.push(format!("{}_rel", s.pair.tag()));
        }
    }
    let column_refs: Vec<&str> = columns.iter().map(String::as_str).collect();
    let mut table = CsvTable::new(&hash, &column_refs);
    let mut curve = CsvTable::new(&hash, &["eta", "t", "c2_estimate", "eta_expansion"]);
    for r in &rows {
        let mut cells = vec![
            fmt_f64(r.eta),
            r.main_bin.to_string(),
            fmt_f64(r.main_omega),
            fmt_f64(r.main_amplitude),
            fmt_f64(r.main_relative()),
        ];
        for s in &r.sidebands {
            cells.extend([
                fmt_f64(s.omega),
                fmt_f64(s.amplitude),
                fmt_f64(s.relative()),
            ]);
        }
        table.row(&cells);
        for p in r.series.points() {
            curve.row(&[
                fmt_f64(r.eta),
                fmt_f64(p.time),
                fmt_f64(p.c2_estimate),
                fmt_f64(eta_expansion(h, r.eta, p.time)?),
            ]);
        }
    }
    dir.write_csv("robustness.csv", &table)?;
    dir.write_csv("eta_expansion.csv", &curve)?;
    let summary = json!({
        "config_hash": hash,
        "seed": config.seed,
        "nt": plan.nt(),
        "dt": plan.dt(),
        "resolution": plan.resolution(),
        "rows": rows.iter().map(|r| json!({
            "eta": r.eta,
            "main_peak_bin": r.main_bin,
            "main_peak_omega": r.main_omega,
            "main_peak_rel": r.main_relative(),
            "sidebands": r.sidebands.iter().map(|s| json!({
                "pair": s.pair.tag(),
                "omega": s.omega,
                "rel": s.relative(),
            })).collect::<Vec<_>>(),
        })).collect::<Vec<_>>(),
    });
    dir.write_json("robustness.json", &summary)?;
    finish(
        dir,
        "robustness",
        Some(config.seed),
        &hash,
        config_value(config),
        summary,
    )
}
