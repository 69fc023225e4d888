//! Squared concurrence from measured outcome probabilities.
//!
//! The general estimator combines the `ZZ` table with the `XZ` table:
//!
//! ```text
//! C² = 4·[P−+·P+− + P−−·P++ − 2·√(P++·P+−·P−+·P−−)·cos(A+B)]
//! cos A = (2·P++_XZ − P++ − P−+) / (2·√(P++·P−+))
//! cos B = (2·P+−_XZ − P+− − P−−) / (2·√(P+−·P−−))
//! ```
//!
//! `A` is the relative phase of the `|00⟩`/`|10⟩` amplitudes and `B` that of
//! `|11⟩`/`|01⟩`. Only the cosines are observable, so `sin A` and `sin B`
//! are taken non-negative. The four protocol inputs never depend on that
//! choice: `ψ1`, `ψ2` zero the product prefactor and `ψ3`, `ψ4` have
//! `A = B`.
//!
//! Finite-shot tables break the algebraic constraints of exact
//! probabilities, so cosines and the result are clamped into range. The
//! product estimators are biased at small shot counts (for `ψ1`,
//! `E[Ĉ²] = (1 − 1/n)·C²`); the bias is left in the data.

use serde::{Deserialize, Serialize};

use crate::measure::{
    empirical_probs, outcome_probs, prepare_input, sample_counts, stream_rng, BasisPair, Channel,
    OutcomeCounts, PrepSpec, ProbTable,
};
use crate::quantum::{concurrence_sq, evolve, HamiltonianParams, InputState, PureState};
use crate::spectral::SamplingPlan;
use crate::{Error, Result};

fn phase_cosine(numerator: f64, p: f64, q: f64) -> f64 {
    let denominator = 2.0 * (p * q).sqrt();
    if denominator > 0.0 {
        (numerator / denominator).clamp(-1.0, 1.0)
    } else {
        // The prefactor √(∏P) vanishes with the denominator.
        0.0
    }
}

fn cos_sum(cos_a: f64, cos_b: f64) -> f64 {
    let sin_a = (1.0 - cos_a * cos_a).max(0.0).sqrt();
    let sin_b = (1.0 - cos_b * cos_b).max(0.0).sqrt();
    cos_a * cos_b - sin_a * sin_b
}

/// General two-channel estimator.
pub fn concurrence_sq_from_probs(p_zz: &ProbTable, p_xz: &ProbTable) -> f64 {
    let [pp, pm, mp, mm] = p_zz.as_array();
    let cos_a = phase_cosine(2.0 * p_xz.pp() - pp - mp, pp, mp);
    let cos_b = phase_cosine(2.0 * p_xz.pm() - pm - mm, pm, mm);
    let product = (pp * pm * mp * mm).max(0.0).sqrt();
    let c2 = 4.0 * (mp * pm + mm * pp - 2.0 * product * cos_sum(cos_a, cos_b));
    c2.clamp(0.0, 1.0)
}

/// Symmetry-reduced estimator for a protocol input, reading only the
/// channel that input needs.
///
/// `ψ1`: `4·P−−·P++` and `ψ2`: `4·P−+·P+−` from `ZZ`. `ψ3`, `ψ4`: the
/// `ZZ` table is fixed at `1/4` everywhere, leaving
/// `(1 − cos(A+B))/2` with `cos A = 4·P++_XZ − 1`, `cos B = 4·P+−_XZ − 1`.
pub fn concurrence_sq_reduced_from_probs(
    input: InputState,
    p_zz: Option<&ProbTable>,
    p_xz: Option<&ProbTable>,
) -> Result<f64> {
    let c2 = match input {
        InputState::Psi1 | InputState::Psi2 => {
            let zz = p_zz.ok_or(Error::MissingChannel {
                input,
                channel: "ZZ",
            })?;
            if input == InputState::Psi1 {
                4.0 * zz.mm() * zz.pp()
            } else {
                4.0 * zz.mp() * zz.pm()
            }
        }
        InputState::Psi3 | InputState::Psi4 => {
            let xz = p_xz.ok_or(Error::MissingChannel {
                input,
                channel: "XZ",
            })?;
            let cos_a = (4.0 * xz.pp() - 1.0).clamp(-1.0, 1.0);
            let cos_b = (4.0 * xz.pm() - 1.0).clamp(-1.0, 1.0);
            0.5 * (1.0 - cos_sum(cos_a, cos_b))
        }
    };
    Ok(c2.clamp(0.0, 1.0))
}

/// [`concurrence_sq_reduced_from_probs`] on shot counts.
pub fn concurrence_sq_reduced(
    input: InputState,
    counts_zz: Option<&OutcomeCounts>,
    counts_xz: Option<&OutcomeCounts>,
) -> Result<f64> {
    let zz = counts_zz.map(empirical_probs);
    let xz = counts_xz.map(empirical_probs);
    concurrence_sq_reduced_from_probs(input, zz.as_ref(), xz.as_ref())
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct ConcurrencePoint {
    pub time: f64,
    pub c2_estimate: f64,
    pub shots_zz: u64,
    pub shots_xz: u64,
}

impl ConcurrencePoint {
    pub fn shots(&self) -> u64 {
        self.shots_zz + self.shots_xz
    }
}

/// Uniformly sampled squared-concurrence estimates.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct ConcurrenceSeries {
    dt: f64,
    points: Vec<ConcurrencePoint>,
}

impl ConcurrenceSeries {
    pub fn new(dt: f64, points: Vec<ConcurrencePoint>) -> Result<Self> {
        if !(dt > 0.0 && dt.is_finite()) {
            return Err(Error::NonUniformGrid(format!(
                "time step {dt} is not positive"
            )));
        }
        for pair in points.windows(2) {
            let step = pair[1].time - pair[0].time;
            if (step - dt).abs() > 1e-9 * dt {
                return Err(Error::NonUniformGrid(format!(
                    "step {step} between t = {} and t = {} differs from dt = {dt}",
                    pair[0].time, pair[1].time
                )));
            }
        }
        if let Some(p) = points
            .iter()
            .find(|p| !(0.0..=1.0).contains(&p.c2_estimate))
        {
            return Err(Error::InvalidArgument(format!(
                "concurrence estimate {} at t = {} outside [0, 1]",
                p.c2_estimate, p.time
            )));
        }
        Ok(Self { dt, points })
    }

    pub fn dt(&self) -> f64 {
        self.dt
    }

    pub fn points(&self) -> &[ConcurrencePoint] {
        &self.points
    }

    pub fn len(&self) -> usize {
        self.points.len()
    }

    pub fn is_empty(&self) -> bool {
        self.points.is_empty()
    }

    pub fn times(&self) -> Vec<f64> {
        self.points.iter().map(|p| p.time).collect()
    }

    pub fn values(&self) -> Vec<f64> {
        self.points.iter().map(|p| p.c2_estimate).collect()
    }

    /// Observation time, the last sampled instant.
    pub fn t_ob(&self) -> f64 {
        self.points.last().map_or(0.0, |p| p.time)
    }
}

/// Raw counts recorded at time index `index` of a plan.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct PointCounts {
    pub index: usize,
    pub zz: Option<OutcomeCounts>,
    pub xz: Option<OutcomeCounts>,
}

/// Applies the reduced estimator to every point of `plan`.
pub fn build_series(
    plan: &SamplingPlan,
    input: InputState,
    counts: &[PointCounts],
) -> Result<ConcurrenceSeries> {
    let mut ordered: Vec<Option<&PointCounts>> = vec![None; plan.nt()];
    for c in counts {
        match ordered.get_mut(c.index) {
            Some(slot) => *slot = Some(c),
            None => {
                return Err(Error::NonUniformGrid(format!(
                    "time index {} beyond plan length {}",
                    c.index,
                    plan.nt()
                )))
            }
        }
    }
    let points = ordered
        .into_iter()
        .enumerate()
        .map(|(n, c)| {
            let c =
                c.ok_or_else(|| Error::NonUniformGrid(format!("no counts for time index {n}")))?;
            Ok(ConcurrencePoint {
                time: plan.time(n),
                c2_estimate: concurrence_sq_reduced(input, c.zz.as_ref(), c.xz.as_ref())?,
                shots_zz: c.zz.map_or(0, |z| z.shots()),
                shots_xz: c.xz.map_or(0, |x| x.shots()),
            })
        })
        .collect::<Result<Vec<_>>>()?;
    ConcurrenceSeries::new(plan.dt(), points)
}

/// Shot-noise-free series: the reduced estimator evaluated on exact
/// probability tables, with the plan's nominal shot budgets recorded.
pub fn build_series_exact(
    plan: &SamplingPlan,
    input: InputState,
    tables: &[(ProbTable, ProbTable)],
) -> Result<ConcurrenceSeries> {
    if tables.len() != plan.nt() {
        return Err(Error::NonUniformGrid(format!(
            "{} tables for a plan of {} points",
            tables.len(),
            plan.nt()
        )));
    }
    let points = tables
        .iter()
        .enumerate()
        .map(|(n, (zz, xz))| {
            let shots = plan.shots_at(n);
            let (shots_zz, shots_xz) = if input.uses_zz() {
                (shots, 0)
            } else {
                (0, shots)
            };
            Ok(ConcurrencePoint {
                time: plan.time(n),
                c2_estimate: concurrence_sq_reduced_from_probs(input, Some(zz), Some(xz))?,
                shots_zz,
                shots_xz,
            })
        })
        .collect::<Result<Vec<_>>>()?;
    ConcurrenceSeries::new(plan.dt(), points)
}

#[derive(Debug, Clone, Copy, Default, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum SimulationMode {
    /// Exact outcome probabilities, no projection noise.
    Noiseless,
    /// Finite-shot sampling from seeded per-point streams.
    #[default]
    Sampled,
}

/// How each point of a simulated series is turned into `C²`.
#[derive(Debug, Clone, Copy, Default, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Estimator {
    /// [`concurrence_sq_reduced`] on the one channel the input needs.
    #[default]
    Reduced,
    /// [`concurrence_sq_from_probs`] on both channels, each with the full
    /// per-point shot count.
    TwoChannel,
    /// Concurrence of the simulated state itself, bypassing measurement.
    Exact,
}

/// Runs one protocol input through `plan`: prepare, evolve, measure the
/// channel the input needs and estimate `C²` at every time point.
///
/// Sampled runs draw point `n` from `stream_rng(seed, input, n, channel)`,
/// so a series does not depend on which other series are simulated.
pub fn simulate_series(
    h: &HamiltonianParams,
    prep: &PrepSpec,
    plan: &SamplingPlan,
    mode: SimulationMode,
    seed: u64,
) -> Result<ConcurrenceSeries> {
    simulate_series_with(h, prep, plan, mode, Estimator::Reduced, seed)
}

/// [`simulate_series`] with a choice of estimator. `Estimator::Exact`
/// ignores `mode` and records zero shots.
pub fn simulate_series_with(
    h: &HamiltonianParams,
    prep: &PrepSpec,
    plan: &SamplingPlan,
    mode: SimulationMode,
    estimator: Estimator,
    seed: u64,
) -> Result<ConcurrenceSeries> {
    let input = prep.input();
    let psi0 = prepare_input(prep);
    let states = (0..plan.nt())
        .map(|n| evolve(h, &psi0, plan.time(n)))
        .collect::<Result<Vec<_>>>()?;
    let exact_tables = || -> Vec<(ProbTable, ProbTable)> {
        states
            .iter()
            .map(|psi| {
                (
                    outcome_probs(psi, BasisPair::ZZ),
                    outcome_probs(psi, BasisPair::XZ),
                )
            })
            .collect()
    };
    let draw = |n: usize, psi: &PureState, basis: BasisPair, channel: Channel| {
        let mut rng = stream_rng(seed, input, n, channel);
        sample_counts(&outcome_probs(psi, basis), plan.shots_at(n), &mut rng)
    };
    match (estimator, mode) {
        (Estimator::Exact, _) => {
            let points = states
                .iter()
                .enumerate()
                .map(|(n, psi)| ConcurrencePoint {
                    time: plan.time(n),
                    c2_estimate: concurrence_sq(psi),
                    shots_zz: 0,
                    shots_xz: 0,
                })
                .collect();
            ConcurrenceSeries::new(plan.dt(), points)
        }
        (Estimator::Reduced, SimulationMode::Noiseless) => {
            build_series_exact(plan, input, &exact_tables())
        }
        (Estimator::TwoChannel, SimulationMode::Noiseless) => {
            let points = exact_tables()
                .iter()
                .enumerate()
                .map(|(n, (zz, xz))| ConcurrencePoint {
                    time: plan.time(n),
                    c2_estimate: concurrence_sq_from_probs(zz, xz),
                    shots_zz: plan.shots_at(n),
                    shots_xz: plan.shots_at(n),
                })
                .collect();
            ConcurrenceSeries::new(plan.dt(), points)
        }
        (Estimator::Reduced, SimulationMode::Sampled) => {
            let (basis, channel) = if input.uses_zz() {
                (BasisPair::ZZ, Channel::Zz)
            } else {
                (BasisPair::XZ, Channel::Xz)
            };
            let counts = states
                .iter()
                .enumerate()
                .map(|(n, psi)| {
                    let c = draw(n, psi, basis, channel)?;
                    let (zz, xz) = if input.uses_zz() {
                        (Some(c), None)
                    } else {
                        (None, Some(c))
                    };
                    Ok(PointCounts { index: n, zz, xz })
                })
                .collect::<Result<Vec<_>>>()?;
            build_series(plan, input, &counts)
        }
        (Estimator::TwoChannel, SimulationMode::Sampled) => {
            let points = states
                .iter()
                .enumerate()
                .map(|(n, psi)| {
                    let zz = draw(n, psi, BasisPair::ZZ, Channel::Zz)?;
                    let xz = draw(n, psi, BasisPair::XZ, Channel::Xz)?;
                    Ok(ConcurrencePoint {
                        time: plan.time(n),
                        c2_estimate: concurrence_sq_from_probs(
                            &empirical_probs(&zz),
                            &empirical_probs(&xz),
                        ),
                        shots_zz: zz.shots(),
                        shots_xz: xz.shots(),
                    })
                })
                .collect::<Result<Vec<_>>>()?;
            ConcurrenceSeries::new(plan.dt(), points)
        }
    }
}
