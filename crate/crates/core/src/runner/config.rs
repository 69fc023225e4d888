use std::path::{Path, PathBuf};

use serde::{Deserialize, Serialize};
use sha2::{Digest, Sha256};

use crate::concurrence::SimulationMode;
use crate::quantum::{HamiltonianParams, InputState};
use crate::recon::CharacterizeOptions;
use crate::spectral::{plan_observation, SamplingPlan, Strategy, Window};
use crate::{Error, Result};

macro_rules! checked {
    ($(#[$meta:meta])* $name:ident($inner:ty = $repr:literal), $check:expr, $msg:literal) => {
        $(#[$meta])*
        #[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
        #[serde(try_from = $repr, into = $repr)]
        pub struct $name(pub $inner);

        impl TryFrom<$inner> for $name {
            type Error = String;
            fn try_from(v: $inner) -> std::result::Result<Self, String> {
                let check: fn($inner) -> bool = $check;
                if check(v) {
                    Ok(Self(v))
                } else {
                    Err(format!($msg, v))
                }
            }
        }

        impl From<$name> for $inner {
            fn from(v: $name) -> $inner {
                v.0
            }
        }
    };
}

checked!(
    /// Input-state imperfection, `0 ≤ η < 1`.
    Eta(f64 = "f64"), |v| (0.0..1.0).contains(&v), "eta must lie in [0, 1), got {}"
);
checked!(
    /// Sweep value for the robustness experiment, `0 ≤ η ≤ 0.2`.
    SweepEta(f64 = "f64"), |v| (0.0..=0.2).contains(&v), "sweep eta must lie in [0, 0.2], got {}"
);
checked!(
    Positive(f64 = "f64"),
    |v| v > 0.0 && v.is_finite(),
    "value must be positive, got {}"
);
checked!(
    TimePoints(usize = "usize"),
    |v| v >= 4,
    "nt must be at least 4, got {}"
);
checked!(
    Shots(u64 = "u64"),
    |v| v >= 1,
    "ne must be at least 1, got {}"
);

impl Default for Eta {
    fn default() -> Self {
        Self(0.0)
    }
}

/// Sampling plan fields; any may be left out and inherited from the
/// default plan.
#[derive(Debug, Clone, Copy, Default, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct PlanSpec {
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub nt: Option<TimePoints>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub ne: Option<Shots>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub strategy: Option<Strategy>,
    /// Explicit time step; overrides `omega_guess`.
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub dt: Option<Positive>,
    /// Frequency guess for Nyquist planning; defaults to the true
    /// combination of the simulated Hamiltonian.
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub omega_guess: Option<Positive>,
}

impl PlanSpec {
    fn merged(&self, fallback: &PlanSpec) -> PlanSpec {
        PlanSpec {
            nt: self.nt.or(fallback.nt),
            ne: self.ne.or(fallback.ne),
            strategy: self.strategy.or(fallback.strategy),
            dt: self.dt.or(fallback.dt),
            omega_guess: self.omega_guess.or(fallback.omega_guess),
        }
    }
}

#[derive(Debug, Clone, Copy, Default, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct PlanOverrides {
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub psi1: Option<PlanSpec>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub psi2: Option<PlanSpec>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub psi3: Option<PlanSpec>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub psi4: Option<PlanSpec>,
}

impl PlanOverrides {
    pub fn get(&self, input: InputState) -> Option<&PlanSpec> {
        match input {
            InputState::Psi1 => self.psi1.as_ref(),
            InputState::Psi2 => self.psi2.as_ref(),
            InputState::Psi3 => self.psi3.as_ref(),
            InputState::Psi4 => self.psi4.as_ref(),
        }
    }
}

/// `η` sweep of the `ψ1` experiment.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct RobustnessSpec {
    pub etas: Vec<SweepEta>,
    #[serde(default = "default_robustness_nt")]
    pub nt: TimePoints,
    /// Defaults to the Nyquist step of the fastest pair frequency.
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub dt: Option<Positive>,
}

fn default_robustness_nt() -> TimePoints {
    TimePoints(1024)
}

/// One experiment: simulated Hamiltonian, sampling plans, noise settings
/// and outputs.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct ExperimentConfig {
    pub hamiltonian: HamiltonianParams,
    #[serde(default)]
    pub seed: u64,
    #[serde(default)]
    pub mode: SimulationMode,
    #[serde(default)]
    pub eta: Eta,
    pub plan: PlanSpec,
    #[serde(default)]
    pub overrides: PlanOverrides,
    #[serde(default)]
    pub window: Window,
    /// Output directory; not part of the config hash.
    #[serde(default, skip_serializing)]
    pub outputs: Option<PathBuf>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub robustness: Option<RobustnessSpec>,
}

/// Value errors are reported after the terminator that ended the value;
/// move them back onto the value itself.
fn locate(text: &str, e: serde_json::Error) -> Error {
    let data = e.classify() == serde_json::error::Category::Data;
    let mut err = Error::from(e);
    if let Error::Config { line, column, .. } = &mut err {
        if data && *line > 0 && *column > 0 {
            let start: usize = text
                .split_inclusive('\n')
                .take(*line - 1)
                .map(str::len)
                .sum();
            let end = (start + *column - 1).min(text.len());
            let head = text[..end].trim_end();
            if !head.is_empty() {
                *line = head.matches('\n').count() + 1;
                *column = head.len() - head.rfind('\n').map_or(0, |k| k + 1);
            }
        }
    }
    err
}

impl ExperimentConfig {
    pub fn from_json_str(text: &str) -> Result<Self> {
        let config: Self = serde_json::from_str(text).map_err(|e| locate(text, e))?;
        if !config.hamiltonian.is_finite() {
            return Err(Error::Config {
                line: 0,
                column: 0,
                message: "hamiltonian coefficients must be finite".into(),
            });
        }
        Ok(config)
    }

    pub fn from_path(path: &Path) -> Result<Self> {
        let text = std::fs::read_to_string(path)
            .map_err(|e| Error::Io(format!("{}: {e}", path.display())))?;
        Self::from_json_str(&text)
    }

    /// Canonical JSON form, the input of [`Self::hash`].
    pub fn canonical_json(&self) -> String {
        serde_json::to_string(self).expect("config serializes")
    }

    /// Hex SHA-256 of the canonical JSON.
    pub fn hash(&self) -> String {
        hex::encode(Sha256::digest(self.canonical_json().as_bytes()))
    }

    pub fn options(&self) -> CharacterizeOptions {
        CharacterizeOptions {
            mode: self.mode,
            eta: self.eta.0,
            window: self.window,
        }
    }

    /// Per-input plans. Without `dt`, each plan is Nyquist-planned from its
    /// `omega_guess` or the true combination; a zero combination borrows
    /// the largest of the four.
    pub fn plans(&self) -> Result<[SamplingPlan; 4]> {
        let specs = InputState::ALL.map(|i| {
            self.overrides
                .get(i)
                .map_or(self.plan, |o| o.merged(&self.plan))
        });
        let guesses = InputState::ALL.map(|i| {
            specs[i.index()]
                .omega_guess
                .map_or(self.hamiltonian.combination(i).abs(), |g| g.0)
        });
        let largest = guesses.iter().fold(0.0f64, |m, &g| m.max(g));
        let mut plans = Vec::with_capacity(4);
        for input in InputState::ALL {
            let spec = &specs[input.index()];
            let missing = |field: &str| {
                Error::InvalidPlan(format!("{input}: no {field} in plan or overrides"))
            };
            let nt = spec.nt.ok_or_else(|| missing("nt"))?.0;
            let ne = spec.ne.ok_or_else(|| missing("ne"))?.0;
            let strategy = spec.strategy.unwrap_or(Strategy::Uniform);
            let plan = match spec.dt {
                Some(dt) => SamplingPlan::new(nt, dt.0, ne, strategy)?,
                None => {
                    let g = guesses[input.index()];
                    let guess = if g > 1e-9 * largest { g } else { largest };
                    plan_observation(guess, nt, ne, strategy)?
                }
            };
            plans.push(plan);
        }
        Ok([plans[0], plans[1], plans[2], plans[3]])
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    const REFERENCE: &str = r#"{
        "hamiltonian": {"c1": 1.2, "c2": 0.6, "c3": 1.4},
        "seed": 7,
        "plan": {"nt": 200, "ne": 10, "strategy": "uniform"}
    }"#;

    #[test]
    fn parses_minimal() {
        let c = ExperimentConfig::from_json_str(REFERENCE).unwrap();
        assert_eq!(c.mode, SimulationMode::Sampled);
        let plans = c.plans().unwrap();
        assert!((plans[0].dt() - 1.0471975511965976).abs() < 1e-15);
        assert_eq!(plans[3].nt(), 200);
    }

    #[test]
    fn bad_value_reports_position() {
        let text = "{\n  \"hamiltonian\": {\"c1\": 1, \"c2\": 0, \"c3\": 0},\n  \"eta\": 1.5,\n  \"plan\": {\"nt\": 8, \"ne\": 1}\n}";
        match ExperimentConfig::from_json_str(text) {
            Err(Error::Config { line, message, .. }) => {
                assert_eq!(line, 3);
                assert!(message.contains("eta"), "{message}");
            }
            other => panic!("{other:?}"),
        }
    }

    #[test]
    fn last_value_reports_its_own_line() {
        let text = "{\n  \"hamiltonian\": {\"c1\": 1, \"c2\": 0, \"c3\": 0},\n  \"eta\": -0.5\n}";
        match ExperimentConfig::from_json_str(text) {
            Err(Error::Config { line, column, .. }) => assert_eq!((line, column), (3, 13)),
            other => panic!("{other:?}"),
        }
    }

    #[test]
    fn syntax_error_position_kept() {
        match ExperimentConfig::from_json_str("{\n  \"seed\": 1,\n  ]") {
            Err(Error::Config { line, .. }) => assert_eq!(line, 3),
            other => panic!("{other:?}"),
        }
    }

    #[test]
    fn unknown_field_rejected() {
        let text = r#"{"hamiltonian": {"c1": 1, "c2": 0, "c3": 0, "c4": 1}, "plan": {}}"#;
        assert!(matches!(
            ExperimentConfig::from_json_str(text),
            Err(Error::Config { .. })
        ));
    }

    #[test]
    fn overrides_merge() {
        let text = r#"{
            "hamiltonian": {"c1": 1.0, "c2": 1.0, "c3": 1.0},
            "plan": {"nt": 64, "ne": 4},
            "overrides": {"psi2": {"strategy": "endpoint", "ne": 100}, "psi3": {"dt": 0.5}}
        }"#;
        let plans = ExperimentConfig::from_json_str(text)
            .unwrap()
            .plans()
            .unwrap();
        assert_eq!(plans[1].strategy(), Strategy::Endpoint);
        assert_eq!(plans[1].ne_endpoint(), 100);
        assert_eq!(plans[2].dt(), 0.5);
        // ψ1 has a zero combination and borrows the ψ2/ψ4 step.
        assert_eq!(plans[0].dt(), plans[3].dt());
    }

    #[test]
    fn hash_ignores_outputs() {
        let mut a = ExperimentConfig::from_json_str(REFERENCE).unwrap();
        let h = a.hash();
        a.outputs = Some("elsewhere".into());
        assert_eq!(a.hash(), h);
        a.seed = 8;
        assert_ne!(a.hash(), h);
        assert_eq!(h.len(), 64);
    }
}
