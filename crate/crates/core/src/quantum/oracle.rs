//! Brute-force evolution used to cross-check the Bell-basis propagator.
//!
//! Builds the explicit 4×4 matrix from Kronecker products of Pauli matrices
//! and exponentiates it by scaling and squaring of the Taylor series.

use nalgebra::Matrix2;

use super::{HamiltonianParams, Mat4, PureState, C64};
use crate::error::ensure_finite;
use crate::Result;

fn kron(a: &Matrix2<C64>, b: &Matrix2<C64>) -> Mat4 {
    let mut out = Mat4::zeros();
    for i in 0..2 {
        for j in 0..2 {
            for k in 0..2 {
                for l in 0..2 {
                    out[(2 * i + k, 2 * j + l)] = a[(i, j)] * b[(k, l)];
                }
            }
        }
    }
    out
}

fn paulis() -> [Matrix2<C64>; 3] {
    let o = C64::new(0.0, 0.0);
    let r = C64::new(1.0, 0.0);
    let i = C64::new(0.0, 1.0);
    [
        Matrix2::new(o, r, r, o),
        Matrix2::new(o, -i, i, o),
        Matrix2::new(r, o, o, -r),
    ]
}

/// Explicit `c1·X⊗X + c2·Y⊗Y + c3·Z⊗Z`.
pub fn hamiltonian_matrix(h: &HamiltonianParams) -> Mat4 {
    let [x, y, z] = paulis();
    kron(&x, &x) * C64::new(h.c1, 0.0)
        + kron(&y, &y) * C64::new(h.c2, 0.0)
        + kron(&z, &z) * C64::new(h.c3, 0.0)
}

fn one_norm(m: &Mat4) -> f64 {
    (0..4)
        .map(|c| m.column(c).iter().map(|z| z.norm()).sum::<f64>())
        .fold(0.0, f64::max)
}

/// `exp(a)` by scaling and squaring. The scaled matrix has 1-norm at most
/// 1/2 and the series stops once the next term's norm drops below `1e-16`.
pub fn matrix_exp_series(a: &Mat4) -> Mat4 {
    let norm = one_norm(a);
    let squarings = if norm > 0.5 {
        (norm / 0.5).log2().ceil() as u32
    } else {
        0
    };
    let scaled = a.unscale(2f64.powi(squarings as i32));

    let mut sum = Mat4::identity();
    let mut term = Mat4::identity();
    for k in 1..64 {
        term = term * scaled / C64::new(k as f64, 0.0);
        sum += term;
        if one_norm(&term) < 1e-16 {
            break;
        }
    }
    for _ in 0..squarings {
        sum = sum * sum;
    }
    sum
}

/// Same contract as [`super::evolve`], computed from the explicit matrix.
pub fn oracle_evolve(h: &HamiltonianParams, psi0: &PureState, t: f64) -> Result<PureState> {
    ensure_finite("evolution time", t)?;
    let generator = hamiltonian_matrix(h) * C64::new(0.0, -t);
    let u = matrix_exp_series(&generator);
    Ok(PureState::from_vector_unchecked(u * psi0.as_vector()))
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn hamiltonian_is_hermitian_and_traceless() {
        let m = hamiltonian_matrix(&HamiltonianParams::new(0.3, -1.1, 2.0));
        assert!((m - m.adjoint()).norm() < 1e-15);
        assert!(m.trace().norm() < 1e-15);
    }

    #[test]
    fn diagonal_exponential_matches_scalar_exp() {
        let m = hamiltonian_matrix(&HamiltonianParams::ising(1.0)) * C64::new(0.0, -37.0);
        let e = matrix_exp_series(&m);
        let want = [-37.0, 37.0, 37.0, -37.0];
        for (i, phi) in want.into_iter().enumerate() {
            assert!((e[(i, i)] - C64::from_polar(1.0, phi)).norm() < 1e-12);
        }
    }

    #[test]
    fn zero_time_returns_input() {
        let psi = PureState::from_real([0.1, 0.2, 0.3, 0.4]).unwrap();
        let out = oracle_evolve(&HamiltonianParams::new(1.0, 2.0, 3.0), &psi, 0.0).unwrap();
        assert!(out.distance_up_to_phase(&psi) < 1e-16);
    }
}
