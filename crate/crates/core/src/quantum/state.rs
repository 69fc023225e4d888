use nalgebra::{Matrix4, Vector4};

use super::{Mat4, Vec4, C64};
use crate::{Error, Result};

const NORM_TOLERANCE: f64 = 1e-9;
const UNITARY_TOLERANCE: f64 = 1e-9;

/// Normalized two-qubit pure state.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct PureState(Vec4);

impl PureState {
    /// Wraps `amplitudes`, rejecting vectors whose squared norm is off by
    /// more than `1e-9`. The stored vector is rescaled to unit norm.
    pub fn new(amplitudes: [C64; 4]) -> Result<Self> {
        let v = Vector4::from(amplitudes);
        let norm_sqr = v.norm_squared();
        if !norm_sqr.is_finite() || (norm_sqr - 1.0).abs() > NORM_TOLERANCE {
            return Err(Error::Unnormalized { norm_sqr });
        }
        Ok(Self(v.unscale(norm_sqr.sqrt())))
    }

    /// Rescales any nonzero finite vector to unit norm.
    pub fn normalized(amplitudes: [C64; 4]) -> Result<Self> {
        let v = Vector4::from(amplitudes);
        let norm = v.norm();
        if !norm.is_finite() || norm == 0.0 {
            return Err(Error::Unnormalized {
                norm_sqr: norm * norm,
            });
        }
        Ok(Self(v.unscale(norm)))
    }

    pub fn from_real(amplitudes: [f64; 4]) -> Result<Self> {
        Self::normalized(amplitudes.map(|a| C64::new(a, 0.0)))
    }

    /// Computational basis state `|index⟩`.
    pub fn basis(index: usize) -> Self {
        assert!(index < 4, "basis index {index} out of range");
        let mut v = Vec4::zeros();
        v[index] = C64::new(1.0, 0.0);
        Self(v)
    }

    pub(crate) fn from_vector_unchecked(v: Vec4) -> Self {
        Self(v)
    }

    pub fn amplitudes(&self) -> [C64; 4] {
        [self.0[0], self.0[1], self.0[2], self.0[3]]
    }

    pub fn amplitude(&self, index: usize) -> C64 {
        self.0[index]
    }

    pub fn as_vector(&self) -> &Vec4 {
        &self.0
    }

    pub fn norm_sqr(&self) -> f64 {
        self.0.norm_squared()
    }

    pub fn inner(&self, other: &PureState) -> C64 {
        self.0.dotc(&other.0)
    }

    /// Largest amplitude difference after removing the global phase that
    /// best aligns `other` with `self`.
    pub fn distance_up_to_phase(&self, other: &PureState) -> f64 {
        let overlap = other.inner(self);
        let phase = if overlap.norm() > 0.0 {
            overlap / overlap.norm()
        } else {
            C64::new(1.0, 0.0)
        };
        max_modulus((self.0 - other.0 * phase).iter())
    }
}

/// 4×4 unitary acting on the two-qubit space.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct TwoQubitUnitary(Mat4);

impl TwoQubitUnitary {
    pub fn new(matrix: Mat4) -> Result<Self> {
        let deviation = unitarity_deviation(&matrix);
        if deviation.is_nan() || deviation > UNITARY_TOLERANCE {
            return Err(Error::NonUnitary { deviation });
        }
        Ok(Self(matrix))
    }

    pub(crate) fn from_matrix_unchecked(matrix: Mat4) -> Self {
        Self(matrix)
    }

    pub fn identity() -> Self {
        Self(Matrix4::identity())
    }

    pub fn matrix(&self) -> &Mat4 {
        &self.0
    }

    pub fn adjoint(&self) -> Self {
        Self(self.0.adjoint())
    }

    pub fn compose(&self, rhs: &TwoQubitUnitary) -> Self {
        Self(self.0 * rhs.0)
    }

    pub fn apply(&self, psi: &PureState) -> PureState {
        PureState(self.0 * psi.0)
    }

    pub fn trace(&self) -> C64 {
        self.0.trace()
    }

    /// `max |U†U - I|` over all entries.
    pub fn unitarity_deviation(&self) -> f64 {
        unitarity_deviation(&self.0)
    }
}

fn unitarity_deviation(m: &Mat4) -> f64 {
    max_modulus((m.adjoint() * m - Mat4::identity()).iter())
}

pub(crate) fn max_modulus<'a>(values: impl Iterator<Item = &'a C64>) -> f64 {
    values.map(|z| z.norm()).fold(0.0, f64::max)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn rejects_unnormalized_amplitudes() {
        let err = PureState::new([
            C64::new(1.0, 0.0),
            C64::new(1.0, 0.0),
            C64::default(),
            C64::default(),
        ])
        .unwrap_err();
        assert!(matches!(err, Error::Unnormalized { norm_sqr } if (norm_sqr - 2.0).abs() < 1e-15));
        assert!(PureState::normalized([C64::default(); 4]).is_err());
    }

    #[test]
    fn phase_distance_ignores_global_phase() {
        let a = PureState::from_real([0.6, 0.0, 0.8, 0.0]).unwrap();
        let rotated = PureState(a.0 * C64::from_polar(1.0, 0.7));
        assert!(a.distance_up_to_phase(&rotated) < 1e-15);
        assert!(a.distance_up_to_phase(&PureState::basis(1)) > 0.5);
    }

    #[test]
    fn rejects_non_unitary() {
        let m = Mat4::identity() * C64::new(1.1, 0.0);
        assert!(matches!(
            TwoQubitUnitary::new(m),
            Err(Error::NonUnitary { .. })
        ));
    }
}
