//! Discrete gate-error probability from a fractional uncertainty in the
//! Hamiltonian coefficients.
//!
//! A gate implemented as `U = exp(−iH·t_gate)` with `H` known only to a
//! fraction `ε` runs as `U_im = exp(−iH·t_gate·(1 + ε))`. The effective
//! error probability is `p_eff = 1 − |Tr(U_im·U†)/4|²`.

use std::f64::consts::PI;

use serde::{Deserialize, Serialize};

use crate::quantum::{propagator, HamiltonianParams, TwoQubitUnitary};
use crate::spectral::fractional_uncertainty;
use crate::{Error, Result};

pub fn effective_error(u_im: &TwoQubitUnitary, u: &TwoQubitUnitary) -> f64 {
    let overlap = u_im.compose(&u.adjoint()).trace().norm() / 4.0;
    (1.0 - overlap * overlap).clamp(0.0, 1.0)
}

/// `sin²(πε/4)`: CNOT from an Ising pulse `t_gate = π/(4J)`.
pub fn ising_cnot_perr(epsilon: f64) -> f64 {
    (PI * epsilon / 4.0).sin().powi(2)
}

/// `(3/4)·sin²(πε/4)`: √SWAP from an isotropic pulse `t_gate = π/(8d)`.
pub fn heisenberg_sqrtswap_perr(epsilon: f64) -> f64 {
    0.75 * (PI * epsilon / 4.0).sin().powi(2)
}

fn pulse_pair(
    h: &HamiltonianParams,
    t_gate: f64,
    epsilon: f64,
) -> Result<(TwoQubitUnitary, TwoQubitUnitary)> {
    Ok((
        propagator(h, t_gate * (1.0 + epsilon))?,
        propagator(h, t_gate)?,
    ))
}

/// `(U_im, U)` for the Ising pulse of coupling `j`.
pub fn ising_pulse_pair(j: f64, epsilon: f64) -> Result<(TwoQubitUnitary, TwoQubitUnitary)> {
    pulse_pair(&HamiltonianParams::ising(j), PI / (4.0 * j), epsilon)
}

/// `(U_im, U)` for the isotropic √SWAP pulse of coupling `d`.
pub fn sqrtswap_pulse_pair(d: f64, epsilon: f64) -> Result<(TwoQubitUnitary, TwoQubitUnitary)> {
    pulse_pair(&HamiltonianParams::isotropic(d), PI / (8.0 * d), epsilon)
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Gate {
    IsingCnot,
    HeisenbergSqrtswap,
}

impl Gate {
    pub fn p_eff(self, epsilon: f64) -> f64 {
        match self {
            Gate::IsingCnot => ising_cnot_perr(epsilon),
            Gate::HeisenbergSqrtswap => heisenberg_sqrtswap_perr(epsilon),
        }
    }

    pub fn label(self) -> &'static str {
        match self {
            Gate::IsingCnot => "ising_cnot",
            Gate::HeisenbergSqrtswap => "heisenberg_sqrtswap",
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
pub struct Budget {
    pub nt: usize,
    pub ne: u64,
    /// Total measurements `2·nt + 2·Ne`.
    pub n: u64,
}

impl Budget {
    pub fn new(nt: usize, ne: u64) -> Self {
        Self {
            nt,
            ne,
            n: 2 * nt as u64 + 2 * ne,
        }
    }

    pub fn epsilon(&self) -> f64 {
        fractional_uncertainty(self.nt, self.ne)
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct GateErrorReport {
    pub epsilon: f64,
    pub p_eff: f64,
    pub gate: Gate,
    pub budget: Option<Budget>,
}

impl GateErrorReport {
    pub fn for_budget(gate: Gate, budget: Budget) -> Self {
        let epsilon = budget.epsilon();
        Self {
            epsilon,
            p_eff: gate.p_eff(epsilon),
            gate,
            budget: Some(budget),
        }
    }
}

/// Gate error against measurement budget, one report per `Ne`.
pub fn budget_curve(nt: usize, ne_values: &[u64], gate: Gate) -> Result<Vec<GateErrorReport>> {
    if nt < 4 {
        return Err(Error::InvalidArgument(format!(
            "need at least 4 time points, got {nt}"
        )));
    }
    if let Some(0) = ne_values.iter().find(|&&ne| ne == 0) {
        return Err(Error::InvalidArgument("Ne must be positive".into()));
    }
    Ok(ne_values
        .iter()
        .map(|&ne| GateErrorReport::for_budget(gate, Budget::new(nt, ne)))
        .collect())
}

/// Smallest `n ≥ 1` with `accept(n)`, for a predicate that stays true once
/// it becomes true. `None` if nothing up to `u64::MAX / 2` qualifies.
pub fn smallest_accepted(accept: impl Fn(u64) -> bool) -> Option<u64> {
    let mut hi = 1u64;
    while !accept(hi) {
        if hi >= u64::MAX / 4 {
            return None;
        }
        hi *= 2;
    }
    let mut lo = hi / 2;
    // accept(hi) holds; accept(lo) fails unless lo == 0.
    while hi - lo > 1 {
        let mid = lo + (hi - lo) / 2;
        if accept(mid) {
            hi = mid;
        } else {
            lo = mid;
        }
    }
    Some(hi)
}

/// Smallest budget meeting `p_eff ≤ p_target`.
pub fn measurements_for_threshold(p_target: f64, nt: usize, gate: Gate) -> Result<Budget> {
    if !(p_target > 0.0 && p_target <= 1.0) {
        return Err(Error::InvalidArgument(format!(
            "target probability must lie in (0, 1], got {p_target}"
        )));
    }
    if nt < 4 {
        return Err(Error::InvalidArgument(format!(
            "need at least 4 time points, got {nt}"
        )));
    }
    let ne = smallest_accepted(|ne| gate.p_eff(fractional_uncertainty(nt, ne)) <= p_target)
        .ok_or_else(|| Error::InvalidArgument(format!("target {p_target} is out of reach")))?;
    Ok(Budget::new(nt, ne))
}
