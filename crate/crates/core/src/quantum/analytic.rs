use super::{HamiltonianParams, InputState};
use crate::{Error, Result};

/// Closed-form squared concurrence `sin²(2ωt)` for a protocol input, where
/// `ω` is the coupling combination selected by that input.
pub fn closed_form_c2(input: InputState, h: &HamiltonianParams, t: f64) -> f64 {
    (2.0 * h.combination(input) * t).sin().powi(2)
}

/// First-order expansion in `eta` of the squared concurrence generated from
/// the contaminated input `(|00⟩ + √η|01⟩)/√(1+η)`.
///
/// The unperturbed oscillation at `c1 − c2` loses weight `2η` and four
/// sidebands at `4(c1 ± c3)` and `4(c2 ± c3)` appear with amplitude `η/2`.
pub fn eta_expansion(h: &HamiltonianParams, eta: f64, t: f64) -> Result<f64> {
    if !(0.0..1.0).contains(&eta) {
        return Err(Error::EtaOutOfRange(eta));
    }
    let HamiltonianParams { c1, c2, c3 } = *h;
    let main = (2.0 * (c1 - c2) * t).sin().powi(2) * (1.0 - 2.0 * eta);
    let sidebands = (4.0 * (c1 - c3) * t).cos() - (4.0 * (c2 - c3) * t).cos()
        + (4.0 * (c1 + c3) * t).cos()
        - (4.0 * (c2 + c3) * t).cos();
    Ok(main + 0.5 * eta * sidebands)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn isotropic_psi1_is_flat() {
        let h = HamiltonianParams::isotropic(0.9);
        for k in 0..10 {
            assert_eq!(closed_form_c2(InputState::Psi1, &h, k as f64 * 0.3), 0.0);
        }
    }

    #[test]
    fn psi2_reference_hamiltonian() {
        let h = HamiltonianParams::new(1.2, 0.6, 1.4);
        for k in 0..20 {
            let t = 0.11 * k as f64;
            let want = (3.6 * t).sin().powi(2);
            assert!((closed_form_c2(InputState::Psi2, &h, t) - want).abs() < 1e-14);
        }
    }

    #[test]
    fn zero_eta_reduces_to_psi1_row() {
        let h = HamiltonianParams::new(0.4, -1.3, 0.7);
        for k in 0..25 {
            let t = 0.2 * k as f64;
            assert_eq!(
                eta_expansion(&h, 0.0, t).unwrap(),
                closed_form_c2(InputState::Psi1, &h, t)
            );
        }
    }

    #[test]
    fn eta_range_checked() {
        let h = HamiltonianParams::new(1.0, 0.0, 0.0);
        assert!(matches!(
            eta_expansion(&h, 1.0, 0.1),
            Err(Error::EtaOutOfRange(_))
        ));
        assert!(eta_expansion(&h, -0.01, 0.1).is_err());
    }
}
