//! Characterization of anisotropic two-qubit Heisenberg couplings
//! `H = c1·XX + c2·YY + c3·ZZ` from the entanglement they generate.
//!
//! The crate simulates the whole measurement chain: exact two-qubit
//! evolution, finite-shot projective measurements in the `ZZ` and `XZ`
//! channels, squared-concurrence estimation, spectral frequency
//! extraction, inversion of the four measured frequencies back into
//! `(c1, c2, c3)`, and the translation of residual uncertainty into
//! discrete gate-error probabilities.
//!
//! Module map:
//!
//! - [`quantum`]: states, propagators, exact entanglement measures and the
//!   closed-form concurrence dynamics of the four protocol input states.
//! - [`measure`]: input preparation, outcome probabilities, seeded sampling.
//! - [`concurrence`]: squared concurrence from measured probabilities.
//! - [`spectral`]: sampling plans, DFT, peak detection, frequency refinement.
//! - [`recon`]: frequency-to-coupling inversion and the end-to-end pipeline.
//! - [`gate_error`]: effective error probabilities and measurement budgets.
//! - [`runner`]: JSON configuration, experiment commands and CSV/JSON output.
//!
//! Units follow `ħ = 1`: couplings are angular frequencies and time is
//! dimensionless.

pub mod concurrence;
pub mod error;
pub mod gate_error;
pub mod measure;
pub mod quantum;
pub mod recon;
pub mod runner;
pub mod spectral;

pub use error::{Error, Result};
pub use quantum::{HamiltonianParams, InputState, PureState, TwoQubitUnitary};
