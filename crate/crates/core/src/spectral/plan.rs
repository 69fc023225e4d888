use std::f64::consts::PI;

use serde::{Deserialize, Serialize};

use crate::{Error, Result};

/// Safety factor between the sampled signal and the Nyquist frequency.
pub const NYQUIST_MARGIN: f64 = 1.25;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Strategy {
    /// The same number of shots at every time point.
    Uniform,
    /// Two shots per point, with a large block at each of the final two
    /// points used to pin the oscillation phase.
    Endpoint,
}

/// Time grid `t_n = n·dt, n = 1..=nt` and the shots spent per point.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct SamplingPlan {
    nt: usize,
    dt: f64,
    ne_per_point: u64,
    strategy: Strategy,
    ne_endpoint: u64,
}

impl SamplingPlan {
    pub fn uniform(nt: usize, dt: f64, ne: u64) -> Result<Self> {
        Self::validate(nt, dt)?;
        if ne == 0 {
            return Err(Error::InvalidPlan(
                "uniform plan needs at least one shot per point".into(),
            ));
        }
        Ok(Self {
            nt,
            dt,
            ne_per_point: ne,
            strategy: Strategy::Uniform,
            ne_endpoint: ne,
        })
    }

    pub fn endpoint(nt: usize, dt: f64, ne_endpoint: u64) -> Result<Self> {
        Self::validate(nt, dt)?;
        if ne_endpoint == 0 {
            return Err(Error::InvalidPlan(
                "endpoint plan needs at least one endpoint shot".into(),
            ));
        }
        Ok(Self {
            nt,
            dt,
            ne_per_point: 2,
            strategy: Strategy::Endpoint,
            ne_endpoint,
        })
    }

    pub fn new(nt: usize, dt: f64, ne: u64, strategy: Strategy) -> Result<Self> {
        match strategy {
            Strategy::Uniform => Self::uniform(nt, dt, ne),
            Strategy::Endpoint => Self::endpoint(nt, dt, ne),
        }
    }

    fn validate(nt: usize, dt: f64) -> Result<()> {
        if nt < 4 {
            return Err(Error::InvalidPlan(format!(
                "need at least 4 time points, got {nt}"
            )));
        }
        if !(dt > 0.0 && dt.is_finite()) {
            return Err(Error::InvalidPlan(format!(
                "time step must be positive, got {dt}"
            )));
        }
        Ok(())
    }

    pub fn nt(&self) -> usize {
        self.nt
    }

    pub fn dt(&self) -> f64 {
        self.dt
    }

    pub fn strategy(&self) -> Strategy {
        self.strategy
    }

    pub fn ne_per_point(&self) -> u64 {
        self.ne_per_point
    }

    pub fn ne_endpoint(&self) -> u64 {
        self.ne_endpoint
    }

    /// Shot count entering the fractional uncertainty `4/(nt·√Ne)`.
    pub fn effective_ne(&self) -> u64 {
        match self.strategy {
            Strategy::Uniform => self.ne_per_point,
            Strategy::Endpoint => self.ne_endpoint,
        }
    }

    /// Time of point `n` (zero-based), `(n + 1)·dt`.
    pub fn time(&self, n: usize) -> f64 {
        (n + 1) as f64 * self.dt
    }

    pub fn t_ob(&self) -> f64 {
        self.nt as f64 * self.dt
    }

    pub fn shots_at(&self, n: usize) -> u64 {
        match self.strategy {
            Strategy::Uniform => self.ne_per_point,
            Strategy::Endpoint if n + 2 >= self.nt => self.ne_endpoint,
            Strategy::Endpoint => 2,
        }
    }

    /// Measurement budget for one input state: `nt·Ne` for the uniform
    /// strategy and `2·nt + 2·Ne` for the endpoint strategy.
    pub fn total_budget(&self) -> u64 {
        match self.strategy {
            Strategy::Uniform => self.nt as u64 * self.ne_per_point,
            Strategy::Endpoint => 2 * self.nt as u64 + 2 * self.ne_endpoint,
        }
    }

    /// DFT bin spacing in angular frequency.
    pub fn resolution(&self) -> f64 {
        2.0 * PI / self.t_ob()
    }

    pub fn nyquist(&self) -> f64 {
        PI / self.dt
    }
}

/// Picks the time step for a signal whose coupling combination is about
/// `omega_guess`.
///
/// The concurrence oscillates at `4·omega_guess`; the step is the largest
/// one keeping that below the Nyquist frequency by [`NYQUIST_MARGIN`],
/// `dt = 2π/(2·1.25·4·ω)`, which also maximizes the observation time.
pub fn plan_observation(
    omega_guess: f64,
    nt: usize,
    ne: u64,
    strategy: Strategy,
) -> Result<SamplingPlan> {
    if !(omega_guess > 0.0 && omega_guess.is_finite()) {
        return Err(Error::InvalidPlan(format!(
            "frequency guess must be positive, got {omega_guess}"
        )));
    }
    let dt = 2.0 * PI / (2.0 * NYQUIST_MARGIN * 4.0 * omega_guess);
    SamplingPlan::new(nt, dt, ne, strategy)
}
