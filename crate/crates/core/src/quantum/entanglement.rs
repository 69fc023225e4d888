use super::{Mat4, PureState};

/// Squared concurrence `|⟨ψ*|YY|ψ⟩|² = 4·|a00·a11 − a01·a10|²`, clamped to
/// `[0, 1]`.
pub fn concurrence_sq(psi: &PureState) -> f64 {
    let [a00, a01, a10, a11] = psi.amplitudes();
    let det = a00 * a11 - a01 * a10;
    (4.0 * det.norm_sqr()).clamp(0.0, 1.0)
}

/// Square of the negativity: the magnitude of the negative part of the
/// spectrum of `(|ψ⟩⟨ψ|)^{T_B}`, squared.
pub fn negativity_sq(psi: &PureState) -> f64 {
    let v = psi.as_vector();
    let rho: Mat4 = v * v.adjoint();
    // Partial transpose on the second qubit: ⟨ik|ρ^T_B|jl⟩ = ⟨il|ρ|jk⟩.
    let mut pt = Mat4::zeros();
    for i in 0..2 {
        for k in 0..2 {
            for j in 0..2 {
                for l in 0..2 {
                    pt[(2 * i + k, 2 * j + l)] = rho[(2 * i + l, 2 * j + k)];
                }
            }
        }
    }
    let negative: f64 = pt
        .symmetric_eigenvalues()
        .iter()
        .filter(|&&e| e < 0.0)
        .sum();
    negative * negative
}
