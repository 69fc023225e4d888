//! Hamiltonian coefficients from the four protocol frequencies, and the
//! end-to-end characterization pipeline.
//!
//! Input `ψk` isolates one signed combination `b_k` of the coefficients:
//!
//! ```text
//! b1 = c1 − c2    b2 = c1 + c2    b3 = c2 − c3    b4 = c2 + c3
//! ```
//!
//! Only `|b_k|` is observed. The four rows are linearly dependent with
//! left null vector `n = (1, −1, 1, 1)/2`, so a sign assignment is
//! consistent exactly when `n·b = 0`, and `|n·b|` is its least-squares
//! residual. `H` and `−H` give identical data; the reported solution has
//! `c2 > 0`, or `c3 > 0` when `c2 = 0`, or `c1 ≥ 0` when both vanish.

use serde::Serialize;

use crate::concurrence::{simulate_series, ConcurrenceSeries, SimulationMode};
use crate::measure::PrepSpec;
use crate::quantum::{HamiltonianParams, InputState};
use crate::spectral::{
    dft_windowed, find_peak, plan_observation, refine_frequency, FrequencyEstimate, Peak,
    SamplingPlan, Spectrum, Strategy, Window,
};
use crate::{Error, Result};

/// Observed `|b_k|` for `ψ1..ψ4` with absolute uncertainties.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct FrequencyQuad {
    pub omegas: [f64; 4],
    pub sigmas: [f64; 4],
}

impl FrequencyQuad {
    pub fn new(omegas: [f64; 4], sigmas: [f64; 4]) -> Result<Self> {
        for (what, v) in omegas
            .iter()
            .map(|v| ("frequency", v))
            .chain(sigmas.iter().map(|v| ("uncertainty", v)))
        {
            if !v.is_finite() {
                return Err(Error::NonFinite { what, value: *v });
            }
            if *v < 0.0 {
                return Err(Error::InvalidArgument(format!(
                    "{what} must be non-negative, got {v}"
                )));
            }
        }
        Ok(Self { omegas, sigmas })
    }

    pub fn exact(omegas: [f64; 4]) -> Result<Self> {
        Self::new(omegas, [0.0; 4])
    }

    /// Frequencies with uncertainties given as fractions of each value.
    pub fn with_fractional(omegas: [f64; 4], fractions: [f64; 4]) -> Result<Self> {
        let sigmas = std::array::from_fn(|k| omegas[k] * fractions[k]);
        Self::new(omegas, sigmas)
    }

    /// Noise-free quad produced by `h`.
    pub fn from_hamiltonian(h: &HamiltonianParams) -> Self {
        Self {
            omegas: InputState::ALL.map(|input| h.combination(input).abs()),
            sigmas: [0.0; 4],
        }
    }
}

/// Coefficient whose sign fixed the global sign of the solution.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(rename_all = "lowercase")]
pub enum SignConvention {
    C2,
    C3,
    C1,
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct ReconstructionResult {
    pub c_hat: HamiltonianParams,
    pub sigma: [f64; 3],
    pub convention: SignConvention,
    /// `|n·b|` of the chosen sign assignment.
    pub residual: f64,
    pub candidates_considered: usize,
    /// Distinct parameter sets fitting the data as well as `c_hat`; more
    /// than one means the quad does not determine `H` uniquely.
    pub equivalent_solutions: usize,
    /// Signs `s_k` with `b_k = s_k·ω_k`, after the global-sign convention.
    pub signs: [i8; 4],
}

fn solve(b: [f64; 4]) -> [f64; 3] {
    [
        (b[0] + b[1]) / 2.0,
        (-b[0] + b[1] + b[2] + b[3]) / 4.0,
        (-b[2] + b[3]) / 2.0,
    ]
}

fn norm(v: &[f64]) -> f64 {
    v.iter().map(|x| x * x).sum::<f64>().sqrt()
}

fn canonical(c: [f64; 3]) -> ([f64; 3], SignConvention, bool) {
    let eps = 1e-12 * (1.0 + norm(&c));
    let (value, rule) = if c[1].abs() > eps {
        (c[1], SignConvention::C2)
    } else if c[2].abs() > eps {
        (c[2], SignConvention::C3)
    } else {
        (c[0], SignConvention::C1)
    };
    if value < 0.0 {
        (c.map(|x| -x), rule, true)
    } else {
        (c, rule, false)
    }
}

/// Standard deviations of `(c1, c2, c3)` from independent frequency
/// uncertainties; the least-squares inverse does not depend on the signs.
pub fn propagate_sigma(sigmas: &[f64; 4]) -> [f64; 3] {
    let [s1, s2, s3, s4] = sigmas.map(|s| s * s);
    [
        0.5 * (s1 + s2).sqrt(),
        0.25 * (s1 + s2 + s3 + s4).sqrt(),
        0.5 * (s3 + s4).sqrt(),
    ]
}

/// Least-squares inversion over all sixteen sign assignments.
///
/// Ties go to the first assignment in enumeration order (bit `k` of the
/// index set means `s_k = −1`). Fails with
/// [`Error::InconsistentFrequencies`] when the best residual exceeds
/// `3·‖σ‖` plus a rounding allowance.
pub fn invert_frequencies(q: &FrequencyQuad) -> Result<ReconstructionResult> {
    let w = q.omegas;
    let scale = 1e-9 * (1.0 + norm(&w));
    let candidates: Vec<([f64; 3], SignConvention, [i8; 4], f64)> = (0u8..16)
        .map(|mask| {
            let signs: [i8; 4] = std::array::from_fn(|k| if mask >> k & 1 == 1 { -1 } else { 1 });
            let b: [f64; 4] = std::array::from_fn(|k| signs[k] as f64 * w[k]);
            let residual = (b[0] - b[1] + b[2] + b[3]).abs() / 2.0;
            let (c, rule, flipped) = canonical(solve(b));
            let signs = if flipped { signs.map(|s| -s) } else { signs };
            (c, rule, signs, residual)
        })
        .collect();

    let best = candidates.iter().fold(
        &candidates[0],
        |best, c| if c.3 < best.3 - scale { c } else { best },
    );
    let tolerance = 3.0 * norm(&q.sigmas) + scale;
    if best.3 > tolerance {
        return Err(Error::InconsistentFrequencies {
            residual: best.3,
            tolerance,
        });
    }

    let mut distinct: Vec<[f64; 3]> = Vec::new();
    for (c, _, _, residual) in &candidates {
        if *residual <= best.3 + scale
            && !distinct
                .iter()
                .any(|d| norm(&[d[0] - c[0], d[1] - c[1], d[2] - c[2]]) <= scale)
        {
            distinct.push(*c);
        }
    }

    let [c1, c2, c3] = best.0;
    Ok(ReconstructionResult {
        c_hat: HamiltonianParams::new(c1, c2, c3),
        sigma: propagate_sigma(&q.sigmas),
        convention: best.1,
        residual: best.3,
        candidates_considered: candidates.len(),
        equivalent_solutions: distinct.len(),
        signs: best.2,
    })
}

/// Direct solve from three signed combinations `b1 = c1 − c2`,
/// `b2 = c1 + c2`, `b3 = c2 − c3`.
pub fn invert_three_state(b1: f64, b2: f64, b3: f64) -> HamiltonianParams {
    let c1 = (b2 + b1) / 2.0;
    let c2 = (b2 - b1) / 2.0;
    HamiltonianParams::new(c1, c2, c2 - b3)
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct CharacterizeOptions {
    pub mode: SimulationMode,
    /// Input-state imperfection applied to every input.
    pub eta: f64,
    pub window: Window,
}

impl Default for CharacterizeOptions {
    fn default() -> Self {
        Self {
            mode: SimulationMode::Sampled,
            eta: 0.0,
            window: Window::Rectangular,
        }
    }
}

const DETECTION_FRACTION: f64 = 1.0 / 16.0;

/// [`find_peak`] with a significance floor: a peak below
/// `1/16` of what a full-contrast `sin²` signal produces counts as no
/// oscillation and gives `None`.
pub fn detect_peak(spectrum: &Spectrum, window: Window) -> Result<Option<Peak>> {
    let threshold = DETECTION_FRACTION * window.weight_sum(spectrum.n_samples());
    match find_peak(spectrum) {
        Ok(p) if p.magnitude >= threshold => Ok(Some(p)),
        Ok(_) | Err(Error::NoOscillation) => Ok(None),
        Err(e) => Err(e),
    }
}

/// One input state carried from simulation to a frequency.
#[derive(Debug, Clone)]
pub struct Experiment {
    pub input: InputState,
    pub plan: SamplingPlan,
    pub series: ConcurrenceSeries,
    pub spectrum: Spectrum,
    /// Detected peak; `None` for a degenerate combination.
    pub peak: Option<Peak>,
    pub estimate: Option<FrequencyEstimate>,
    /// Estimated `|b_k|`, exactly 0 when degenerate.
    pub omega: f64,
    pub sigma: f64,
}

impl Experiment {
    pub fn is_degenerate(&self) -> bool {
        self.peak.is_none()
    }
}

/// Simulates one input and extracts its frequency. A series without a
/// significant peak above the DC neighborhood is a degenerate combination:
/// `ω = 0` with an uncertainty of one bin.
pub fn run_experiment(
    h: &HamiltonianParams,
    input: InputState,
    plan: &SamplingPlan,
    options: &CharacterizeOptions,
    seed: u64,
) -> Result<Experiment> {
    let prep = PrepSpec::new(input, options.eta)?;
    let series = simulate_series(h, &prep, plan, options.mode, seed)?;
    let spectrum = dft_windowed(&series, options.window)?;
    let peak = detect_peak(&spectrum, options.window)?;
    let (estimate, omega, sigma) = match peak {
        Some(p) => {
            let est = refine_frequency(&series, p.omega, plan)?;
            (Some(est), est.omega_hat, est.omega_hat * est.delta_f_over_f)
        }
        None => (None, 0.0, plan.resolution() / 4.0),
    };
    Ok(Experiment {
        input,
        plan: *plan,
        series,
        spectrum,
        peak,
        estimate,
        omega,
        sigma,
    })
}

#[derive(Debug, Clone)]
pub struct Characterization {
    pub experiments: Vec<Experiment>,
    pub quad: FrequencyQuad,
    pub result: ReconstructionResult,
}

/// Full protocol against a simulated `h_true`: four experiments, then
/// [`invert_frequencies`]. Deterministic in `seed`.
pub fn characterize(
    h_true: &HamiltonianParams,
    plans: &[SamplingPlan; 4],
    options: &CharacterizeOptions,
    seed: u64,
) -> Result<Characterization> {
    let experiments = InputState::ALL
        .iter()
        .zip(plans)
        .map(|(&input, plan)| run_experiment(h_true, input, plan, options, seed))
        .collect::<Result<Vec<_>>>()?;
    let quad = FrequencyQuad::new(
        std::array::from_fn(|k| experiments[k].omega),
        std::array::from_fn(|k| experiments[k].sigma),
    )?;
    let result = invert_frequencies(&quad)?;
    Ok(Characterization {
        experiments,
        quad,
        result,
    })
}

/// Nyquist plans for the four inputs from per-input frequency guesses. A
/// guess that is zero borrows the largest of the others.
pub fn plans_from_guesses(
    guesses: [f64; 4],
    nt: usize,
    ne: u64,
    strategy: Strategy,
) -> Result<[SamplingPlan; 4]> {
    let fallback = guesses.iter().fold(0.0f64, |m, g| m.max(g.abs()));
    if fallback <= 0.0 {
        return Err(Error::InvalidPlan("all frequency guesses are zero".into()));
    }
    let floor = 1e-9 * fallback;
    let plans = guesses
        .iter()
        .map(|g| {
            plan_observation(
                if g.abs() > floor { g.abs() } else { fallback },
                nt,
                ne,
                strategy,
            )
        })
        .collect::<Result<Vec<_>>>()?;
    Ok([plans[0], plans[1], plans[2], plans[3]])
}

/// Plans tuned to the true combinations of `h`.
pub fn plans_for(
    h: &HamiltonianParams,
    nt: usize,
    ne: u64,
    strategy: Strategy,
) -> Result<[SamplingPlan; 4]> {
    plans_from_guesses(InputState::ALL.map(|i| h.combination(i)), nt, ne, strategy)
}

#[cfg(test)]
mod tests {
    use super::*;

    fn close(a: HamiltonianParams, b: [f64; 3], tol: f64) -> bool {
        a.as_array()
            .iter()
            .zip(b)
            .all(|(x, y)| (x - y).abs() <= tol)
    }

    #[test]
    fn reference_quad() {
        let r = invert_frequencies(&FrequencyQuad::exact([0.6, 1.8, 0.8, 2.0]).unwrap()).unwrap();
        assert!(close(r.c_hat, [1.2, 0.6, 1.4], 1e-12), "{r:?}");
        assert!(r.residual < 1e-12);
        assert_eq!(r.convention, SignConvention::C2);
        assert_eq!(r.equivalent_solutions, 1);
        assert_eq!(r.candidates_considered, 16);
    }

    #[test]
    fn isotropic_quad() {
        let d = 0.7;
        let r = invert_frequencies(&FrequencyQuad::exact([0.0, 2.0 * d, 0.0, 2.0 * d]).unwrap())
            .unwrap();
        assert!(close(r.c_hat, [d, d, d], 1e-12));
    }

    #[test]
    fn ising_quad() {
        let j = 1.3;
        let q = FrequencyQuad::from_hamiltonian(&HamiltonianParams::ising(j));
        assert_eq!(q.omegas, [0.0, 0.0, j, j]);
        let r = invert_frequencies(&q).unwrap();
        assert!(close(r.c_hat, [0.0, 0.0, j], 1e-12), "{r:?}");
        assert_eq!(r.convention, SignConvention::C3);
    }

    #[test]
    fn equal_quad_is_ambiguous() {
        let r = invert_frequencies(&FrequencyQuad::exact([1.0; 4]).unwrap()).unwrap();
        assert!(r.residual < 1e-12);
        assert_eq!(r.equivalent_solutions, 3);
        let c = r.c_hat;
        let q = FrequencyQuad::from_hamiltonian(&c);
        assert!(q.omegas.iter().all(|w| (w - 1.0).abs() < 1e-12));
    }

    #[test]
    fn inconsistent_quad() {
        let q = FrequencyQuad::new([0.6, 1.8, 0.8, 2.5], [0.01; 4]).unwrap();
        assert!(matches!(
            invert_frequencies(&q),
            Err(Error::InconsistentFrequencies { .. })
        ));
    }

    #[test]
    fn sigma_propagation() {
        let s = propagate_sigma(&[0.1, 0.2, 0.3, 0.4]);
        assert!((s[0] - 0.5 * 0.05f64.sqrt()).abs() < 1e-15);
        assert!((s[1] - 0.25 * 0.3f64.sqrt()).abs() < 1e-15);
        assert!((s[2] - 0.5 * 0.25f64.sqrt()).abs() < 1e-15);
    }

    #[test]
    fn three_state() {
        assert!(close(
            invert_three_state(0.6, 1.8, -0.8),
            [1.2, 0.6, 1.4],
            1e-12
        ));
        assert!(close(
            invert_three_state(0.0, 1.0, 0.0),
            [0.5, 0.5, 0.5],
            1e-15
        ));
        let h = invert_three_state(0.6, 1.8, -0.8);
        let r = invert_frequencies(&FrequencyQuad::from_hamiltonian(&h)).unwrap();
        assert!(close(r.c_hat, h.as_array(), 1e-12));
    }

    #[test]
    fn noiseless_characterize() {
        let h = HamiltonianParams::new(1.2, 0.6, 1.4);
        let plans = plans_for(&h, 64, 10, Strategy::Uniform).unwrap();
        let opts = CharacterizeOptions {
            mode: SimulationMode::Noiseless,
            ..Default::default()
        };
        let c = characterize(&h, &plans, &opts, 1).unwrap();
        assert!(
            close(c.result.c_hat, [1.2, 0.6, 1.4], 1.4e-6),
            "{:?}",
            c.result
        );
    }

    #[test]
    fn isotropic_characterize() {
        let h = HamiltonianParams::isotropic(0.9);
        let plans = plans_for(&h, 64, 10, Strategy::Uniform).unwrap();
        for mode in [SimulationMode::Noiseless, SimulationMode::Sampled] {
            let opts = CharacterizeOptions {
                mode,
                ..Default::default()
            };
            let c = characterize(&h, &plans, &opts, 5).unwrap();
            assert!(c.experiments[0].is_degenerate() && c.experiments[2].is_degenerate());
            assert!(!c.experiments[1].is_degenerate() && !c.experiments[3].is_degenerate());
            let tol = if mode == SimulationMode::Noiseless {
                1e-6
            } else {
                0.05
            };
            assert!(
                close(c.result.c_hat, [0.9; 3], tol),
                "{mode:?} {:?}",
                c.result
            );
        }
    }
}
