//! From a concurrence time series to a frequency estimate: Nyquist-aware
//! sampling plans, the discrete Fourier transform, peak detection and
//! least-squares refinement.
//!
//! A protocol signal `C²(t) = sin²(2ωt) = (1 − cos 4ωt)/2` shows up in the
//! spectrum at angular frequency `4ω`; estimates are reported in terms of
//! the coupling combination `ω` itself.

mod dft;
mod plan;
mod refine;

pub use dft::{amplitude_at, dft, dft_windowed, find_peak, Peak, Spectrum, Window};
pub use plan::{plan_observation, SamplingPlan, Strategy, NYQUIST_MARGIN};
pub use refine::{fractional_uncertainty, refine_frequency, FrequencyEstimate};
