use std::f64::consts::FRAC_1_SQRT_2;

use super::{HamiltonianParams, Mat4, PureState, TwoQubitUnitary, Vec4, C64};
use crate::error::ensure_finite;
use crate::Result;

/// Eigenvalues of the Heisenberg coupling on the fixed Bell states.
///
/// `Φ± = (|00⟩ ± |11⟩)/√2`, `Ψ± = (|01⟩ ± |10⟩)/√2` diagonalize `XX`, `YY`
/// and `ZZ` simultaneously for every choice of couplings.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct BellSpectrum {
    pub phi_plus: f64,
    pub phi_minus: f64,
    pub psi_plus: f64,
    pub psi_minus: f64,
}

impl BellSpectrum {
    pub fn as_array(&self) -> [f64; 4] {
        [self.phi_plus, self.phi_minus, self.psi_plus, self.psi_minus]
    }
}

pub fn bell_spectrum(h: &HamiltonianParams) -> BellSpectrum {
    let HamiltonianParams { c1, c2, c3 } = *h;
    BellSpectrum {
        phi_plus: c1 - c2 + c3,
        phi_minus: -c1 + c2 + c3,
        psi_plus: c1 + c2 - c3,
        psi_minus: -c1 - c2 - c3,
    }
}

// Computational amplitudes -> (Φ+, Φ-, Ψ+, Ψ-) coordinates. The map is real,
// symmetric and its own inverse.
fn to_bell(a: &Vec4) -> Vec4 {
    let s = FRAC_1_SQRT_2;
    Vec4::new(
        (a[0] + a[3]) * s,
        (a[0] - a[3]) * s,
        (a[1] + a[2]) * s,
        (a[1] - a[2]) * s,
    )
}

fn from_bell(b: &Vec4) -> Vec4 {
    let s = FRAC_1_SQRT_2;
    Vec4::new(
        (b[0] + b[1]) * s,
        (b[2] + b[3]) * s,
        (b[2] - b[3]) * s,
        (b[0] - b[1]) * s,
    )
}

fn bell_phases(h: &HamiltonianParams, t: f64) -> [C64; 4] {
    bell_spectrum(h)
        .as_array()
        .map(|e| C64::from_polar(1.0, -e * t))
}

/// `exp(-iHt)·psi0`, computed by phase rotation in the Bell basis.
/// Negative `t` evolves backwards.
pub fn evolve(h: &HamiltonianParams, psi0: &PureState, t: f64) -> Result<PureState> {
    ensure_finite("evolution time", t)?;
    let phases = bell_phases(h, t);
    let mut b = to_bell(psi0.as_vector());
    for (amp, phase) in b.iter_mut().zip(phases) {
        *amp *= phase;
    }
    let out = from_bell(&b);
    // Renormalize away rounding so the invariant holds at 1e-12.
    let norm = out.norm();
    Ok(PureState::from_vector_unchecked(out.unscale(norm)))
}

/// Matrix form of [`evolve`].
pub fn propagator(h: &HamiltonianParams, t: f64) -> Result<TwoQubitUnitary> {
    ensure_finite("evolution time", t)?;
    let phases = bell_phases(h, t);
    let mut m = Mat4::zeros();
    for col in 0..4 {
        let mut e = Vec4::zeros();
        e[col] = C64::new(1.0, 0.0);
        let mut b = to_bell(&e);
        for (amp, phase) in b.iter_mut().zip(phases) {
            *amp *= phase;
        }
        m.set_column(col, &from_bell(&b));
    }
    Ok(TwoQubitUnitary::from_matrix_unchecked(m))
}
