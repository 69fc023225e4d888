use std::f64::consts::PI;

use rustfft::num_complex::Complex;
use rustfft::FftPlanner;
use serde::{Deserialize, Serialize};

use crate::concurrence::ConcurrenceSeries;
use crate::{Error, Result};

#[derive(Debug, Clone, Copy, Default, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Window {
    #[default]
    Rectangular,
    Hann,
}

impl Window {
    /// `Σw` over `n` samples. A cosine of amplitude `A` centered on a bin
    /// has magnitude `A·Σw/2`.
    pub fn weight_sum(self, n: usize) -> f64 {
        self.weights(n).iter().sum()
    }

    fn weights(self, n: usize) -> Vec<f64> {
        match self {
            Window::Rectangular => vec![1.0; n],
            Window::Hann => (0..n)
                .map(|k| 0.5 - 0.5 * (2.0 * PI * k as f64 / n as f64).cos())
                .collect(),
        }
    }
}

/// One-sided magnitude spectrum of a mean-subtracted real series.
///
/// Bin `k` sits at `2πk/(n·dt)` for `k = 0..=n/2`. Magnitudes are the raw
/// `|X_k|` with no normalization.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct Spectrum {
    omegas: Vec<f64>,
    magnitudes: Vec<f64>,
    n_samples: usize,
    dt: f64,
}

impl Spectrum {
    pub fn from_samples(values: &[f64], dt: f64, window: Window) -> Result<Self> {
        let n = values.len();
        if n < 4 {
            return Err(Error::InvalidArgument(format!(
                "need at least 4 samples, got {n}"
            )));
        }
        if !(dt > 0.0 && dt.is_finite()) {
            return Err(Error::InvalidArgument(format!(
                "time step must be positive, got {dt}"
            )));
        }
        let mean = values.iter().sum::<f64>() / n as f64;
        let mut buffer: Vec<Complex<f64>> = values
            .iter()
            .zip(window.weights(n))
            .map(|(v, w)| Complex::new((v - mean) * w, 0.0))
            .collect();
        FftPlanner::new().plan_fft_forward(n).process(&mut buffer);
        let bins = n / 2 + 1;
        let resolution = 2.0 * PI / (n as f64 * dt);
        Ok(Self {
            omegas: (0..bins).map(|k| k as f64 * resolution).collect(),
            magnitudes: buffer[..bins].iter().map(|c| c.norm()).collect(),
            n_samples: n,
            dt,
        })
    }

    pub fn omegas(&self) -> &[f64] {
        &self.omegas
    }

    pub fn magnitudes(&self) -> &[f64] {
        &self.magnitudes
    }

    pub fn len(&self) -> usize {
        self.magnitudes.len()
    }

    pub fn is_empty(&self) -> bool {
        self.magnitudes.is_empty()
    }

    pub fn n_samples(&self) -> usize {
        self.n_samples
    }

    pub fn resolution(&self) -> f64 {
        2.0 * PI / (self.n_samples as f64 * self.dt)
    }

    /// Total energy of the mean-subtracted series recovered from the
    /// one-sided magnitudes, `(1/n)·Σ|X_k|²` over the full two-sided range.
    pub fn parseval_energy(&self) -> f64 {
        let n = self.n_samples;
        let sum: f64 = self
            .magnitudes
            .iter()
            .enumerate()
            .map(|(k, m)| {
                let mirrored = k != 0 && !(n.is_multiple_of(2) && k == n / 2);
                let weight = if mirrored { 2.0 } else { 1.0 };
                weight * m * m
            })
            .sum();
        sum / n as f64
    }

    /// Nearest bin to an angular frequency.
    pub fn bin_of(&self, omega: f64) -> usize {
        let k = (omega / self.resolution()).round().max(0.0) as usize;
        k.min(self.len() - 1)
    }
}

pub fn dft(series: &ConcurrenceSeries) -> Result<Spectrum> {
    dft_windowed(series, Window::Rectangular)
}

pub fn dft_windowed(series: &ConcurrenceSeries, window: Window) -> Result<Spectrum> {
    Spectrum::from_samples(&series.values(), series.dt(), window)
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct Peak {
    pub bin: usize,
    pub omega: f64,
    pub magnitude: f64,
}

/// First bin searched; the DC bin and its neighbor are skipped.
const FIRST_PEAK_BIN: usize = 2;
/// Relative magnitude difference below which two bins count as tied.
const TIE_TOLERANCE: f64 = 1e-9;

/// Largest magnitude outside the DC bin and its neighbor, ties going to the
/// lower frequency.
pub fn find_peak(spec: &Spectrum) -> Result<Peak> {
    if spec.len() <= FIRST_PEAK_BIN {
        return Err(Error::NoOscillation);
    }
    let mut best = FIRST_PEAK_BIN;
    for k in FIRST_PEAK_BIN + 1..spec.len() {
        if spec.magnitudes[k] > spec.magnitudes[best] * (1.0 + TIE_TOLERANCE) {
            best = k;
        }
    }
    let floor = 1e-9 * (spec.n_samples as f64).sqrt();
    if spec.magnitudes[best] <= floor {
        return Err(Error::NoOscillation);
    }
    Ok(Peak {
        bin: best,
        omega: spec.omegas[best],
        magnitude: spec.magnitudes[best],
    })
}

/// Amplitude of the cosine component at `omega` in a uniformly sampled
/// series starting at `dt`, from the windowed discrete-time Fourier
/// transform `2·|Σ w·(y − ȳ)·e^{−iΩt}| / Σ w`.
pub fn amplitude_at(values: &[f64], dt: f64, omega: f64, window: Window) -> f64 {
    let n = values.len();
    if n == 0 {
        return 0.0;
    }
    let mean = values.iter().sum::<f64>() / n as f64;
    let weights = window.weights(n);
    let (mut re, mut im) = (0.0, 0.0);
    for (k, (v, w)) in values.iter().zip(&weights).enumerate() {
        let phase = omega * (k + 1) as f64 * dt;
        re += w * (v - mean) * phase.cos();
        im -= w * (v - mean) * phase.sin();
    }
    2.0 * (re * re + im * im).sqrt() / weights.iter().sum::<f64>()
}
