//! Exact two-qubit quantum mechanics for the Heisenberg coupling.
//!
//! Amplitudes are ordered over the computational basis
//! `|00⟩, |01⟩, |10⟩, |11⟩` with the first qubit as the most significant
//! bit.

mod analytic;
mod entanglement;
mod evolution;
mod oracle;
mod state;

use std::fmt;

use serde::{Deserialize, Serialize};

pub use analytic::{closed_form_c2, eta_expansion};
pub use entanglement::{concurrence_sq, negativity_sq};
pub use evolution::{bell_spectrum, evolve, propagator, BellSpectrum};
pub use oracle::{hamiltonian_matrix, matrix_exp_series, oracle_evolve};
pub use state::{PureState, TwoQubitUnitary};

pub type C64 = nalgebra::Complex<f64>;
pub type Mat4 = nalgebra::Matrix4<C64>;
pub type Vec4 = nalgebra::Vector4<C64>;

/// Coupling coefficients of `c1·XX + c2·YY + c3·ZZ` in rad/time.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct HamiltonianParams {
    pub c1: f64,
    pub c2: f64,
    pub c3: f64,
}

impl HamiltonianParams {
    pub const fn new(c1: f64, c2: f64, c3: f64) -> Self {
        Self { c1, c2, c3 }
    }

    /// `J·ZZ`.
    pub const fn ising(j: f64) -> Self {
        Self::new(0.0, 0.0, j)
    }

    /// `d·(XX + YY + ZZ)`.
    pub const fn isotropic(d: f64) -> Self {
        Self::new(d, d, d)
    }

    pub fn negated(self) -> Self {
        Self::new(-self.c1, -self.c2, -self.c3)
    }

    pub fn is_finite(&self) -> bool {
        self.c1.is_finite() && self.c2.is_finite() && self.c3.is_finite()
    }

    pub fn as_array(&self) -> [f64; 3] {
        [self.c1, self.c2, self.c3]
    }

    /// Signed coupling combination whose magnitude sets the concurrence
    /// oscillation of `input`.
    pub fn combination(&self, input: InputState) -> f64 {
        match input {
            InputState::Psi1 => self.c1 - self.c2,
            InputState::Psi2 => self.c1 + self.c2,
            InputState::Psi3 => self.c2 - self.c3,
            InputState::Psi4 => self.c2 + self.c3,
        }
    }

    /// All six pairwise sums and differences, labelled `(i, ±j)`.
    pub fn pair_frequencies(&self) -> [(PairFrequency, f64); 6] {
        let [c1, c2, c3] = self.as_array();
        [
            (PairFrequency::new(1, 2, false), c1 - c2),
            (PairFrequency::new(1, 2, true), c1 + c2),
            (PairFrequency::new(1, 3, false), c1 - c3),
            (PairFrequency::new(1, 3, true), c1 + c3),
            (PairFrequency::new(2, 3, false), c2 - c3),
            (PairFrequency::new(2, 3, true), c2 + c3),
        ]
    }
}

impl fmt::Display for HamiltonianParams {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}·XX + {}·YY + {}·ZZ", self.c1, self.c2, self.c3)
    }
}

/// Label of a pair frequency `ω_{i,±j} = c_i ± c_j`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize)]
pub struct PairFrequency {
    pub i: u8,
    pub j: u8,
    pub plus: bool,
}

impl PairFrequency {
    pub const fn new(i: u8, j: u8, plus: bool) -> Self {
        Self { i, j, plus }
    }

    /// Short name used in CSV headers, e.g. `w1m3` for `c1 - c3`.
    pub fn tag(&self) -> String {
        format!("w{}{}{}", self.i, if self.plus { "p" } else { "m" }, self.j)
    }
}

/// The four protocol input states.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum InputState {
    /// `|00⟩`
    Psi1,
    /// `|01⟩`
    Psi2,
    /// `(|0⟩ + |1⟩) ⊗ (|0⟩ + |1⟩) / 2`
    Psi3,
    /// `(|0⟩ + |1⟩) ⊗ (|0⟩ - |1⟩) / 2`
    Psi4,
}

impl InputState {
    pub const ALL: [InputState; 4] = [Self::Psi1, Self::Psi2, Self::Psi3, Self::Psi4];

    pub fn index(self) -> usize {
        self as usize
    }

    pub fn label(self) -> &'static str {
        match self {
            Self::Psi1 => "psi1",
            Self::Psi2 => "psi2",
            Self::Psi3 => "psi3",
            Self::Psi4 => "psi4",
        }
    }

    /// Inputs whose concurrence is read from the `ZZ` channel alone.
    /// The others need only `XZ`.
    pub fn uses_zz(self) -> bool {
        matches!(self, Self::Psi1 | Self::Psi2)
    }
}

impl fmt::Display for InputState {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.label())
    }
}

impl std::str::FromStr for InputState {
    type Err = crate::Error;

    fn from_str(s: &str) -> crate::Result<Self> {
        Self::ALL
            .into_iter()
            .find(|i| i.label() == s)
            .ok_or_else(|| crate::Error::InvalidArgument(format!("unknown input state `{s}`")))
    }
}
