//! Measurement side of the protocol: input preparation, outcome
//! probabilities in the `ZZ` and `XZ` channels, and seeded finite-shot
//! sampling.
//!
//! Outcome tables are indexed by the pair of eigenvalue signs
//! `(λ1, λ2)` in the order `++, +−, −+, −−`. For a `Z` measurement `+`
//! corresponds to `|0⟩`; for `X` it corresponds to `|+⟩`.

use std::f64::consts::FRAC_1_SQRT_2;
use std::fmt;

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rand_distr::{Binomial, Distribution};
use serde::{Deserialize, Serialize};

use crate::quantum::{InputState, PureState, C64};
use crate::{Error, Result};

const TABLE_TOLERANCE: f64 = 1e-9;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum Pauli {
    X,
    Z,
}

/// Measurement bases for the first and second qubit.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub struct BasisPair {
    pub first: Pauli,
    pub second: Pauli,
}

impl BasisPair {
    pub const ZZ: BasisPair = BasisPair {
        first: Pauli::Z,
        second: Pauli::Z,
    };
    pub const XZ: BasisPair = BasisPair {
        first: Pauli::X,
        second: Pauli::Z,
    };
}

impl fmt::Display for BasisPair {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let name = |p: Pauli| match p {
            Pauli::X => 'X',
            Pauli::Z => 'Z',
        };
        write!(f, "{}{}", name(self.first), name(self.second))
    }
}

/// Probabilities of the four outcomes `++, +−, −+, −−`.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct ProbTable([f64; 4]);

impl ProbTable {
    pub fn new(p: [f64; 4]) -> Result<Self> {
        let sum: f64 = p.iter().sum();
        if p.iter().any(|x| !(0.0..=1.0 + TABLE_TOLERANCE).contains(x))
            || (sum - 1.0).abs() > TABLE_TOLERANCE
        {
            return Err(Error::UnnormalizedTable { sum });
        }
        Ok(Self(p))
    }

    pub fn uniform() -> Self {
        Self([0.25; 4])
    }

    pub fn as_array(&self) -> [f64; 4] {
        self.0
    }

    pub fn pp(&self) -> f64 {
        self.0[0]
    }

    pub fn pm(&self) -> f64 {
        self.0[1]
    }

    pub fn mp(&self) -> f64 {
        self.0[2]
    }

    pub fn mm(&self) -> f64 {
        self.0[3]
    }
}

/// Shot counts over the outcomes `++, +−, −+, −−`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Default, Serialize, Deserialize)]
pub struct OutcomeCounts([u64; 4]);

impl OutcomeCounts {
    pub fn new(counts: [u64; 4]) -> Result<Self> {
        if counts.iter().sum::<u64>() == 0 {
            return Err(Error::ZeroShots);
        }
        Ok(Self(counts))
    }

    pub fn as_array(&self) -> [u64; 4] {
        self.0
    }

    pub fn shots(&self) -> u64 {
        self.0.iter().sum()
    }
}

/// Which protocol input to prepare and how badly.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct PrepSpec {
    input: InputState,
    eta: f64,
}

impl PrepSpec {
    pub fn new(input: InputState, eta: f64) -> Result<Self> {
        if !(0.0..1.0).contains(&eta) {
            return Err(Error::EtaOutOfRange(eta));
        }
        Ok(Self { input, eta })
    }

    pub fn ideal(input: InputState) -> Self {
        Self { input, eta: 0.0 }
    }

    pub fn input(&self) -> InputState {
        self.input
    }

    pub fn eta(&self) -> f64 {
        self.eta
    }
}

fn hadamard_both(a: [f64; 4]) -> [f64; 4] {
    let h = |x: f64, y: f64| [(x + y) * FRAC_1_SQRT_2, (x - y) * FRAC_1_SQRT_2];
    // First qubit, then second.
    let [a0, a2] = h(a[0], a[2]);
    let [a1, a3] = h(a[1], a[3]);
    let [b0, b1] = h(a0, a1);
    let [b2, b3] = h(a2, a3);
    [b0, b1, b2, b3]
}

/// Prepares the requested input state.
///
/// Every input is a computational state, possibly followed by Hadamards on
/// both qubits (`ψ3 = H⊗H|00⟩`, `ψ4 = H⊗H|01⟩`). A nonzero `eta` admixes
/// the computational state with the second qubit flipped, with amplitude
/// `√η`, before the Hadamards: `ψ1 → (|00⟩ + √η|01⟩)/√(1+η)`.
pub fn prepare_input(spec: &PrepSpec) -> PureState {
    let (seed, hadamard) = match spec.input {
        InputState::Psi1 => (0, false),
        InputState::Psi2 => (1, false),
        InputState::Psi3 => (0, true),
        InputState::Psi4 => (1, true),
    };
    let mut amps = [0.0; 4];
    amps[seed] = 1.0;
    amps[seed ^ 1] = spec.eta.sqrt();
    if hadamard {
        amps = hadamard_both(amps);
    }
    PureState::from_real(amps).expect("prepared amplitudes are nonzero")
}

/// Outcome probabilities of measuring `psi` in `basis`. An `X` measurement
/// is a Hadamard on that qubit followed by a `Z` measurement.
pub fn outcome_probs(psi: &PureState, basis: BasisPair) -> ProbTable {
    let mut a = psi.amplitudes();
    let s = C64::new(FRAC_1_SQRT_2, 0.0);
    if basis.first == Pauli::X {
        a = [
            (a[0] + a[2]) * s,
            (a[1] + a[3]) * s,
            (a[0] - a[2]) * s,
            (a[1] - a[3]) * s,
        ];
    }
    if basis.second == Pauli::X {
        a = [
            (a[0] + a[1]) * s,
            (a[0] - a[1]) * s,
            (a[2] + a[3]) * s,
            (a[2] - a[3]) * s,
        ];
    }
    let p = a.map(|z| z.norm_sqr());
    let sum: f64 = p.iter().sum();
    ProbTable(p.map(|x| x / sum))
}

/// Multinomial draw of `shots` outcomes from `p`, realized as a chain of
/// conditional binomials.
pub fn sample_counts<R: Rng + ?Sized>(
    p: &ProbTable,
    shots: u64,
    rng: &mut R,
) -> Result<OutcomeCounts> {
    if shots == 0 {
        return Err(Error::ZeroShots);
    }
    let mut counts = [0u64; 4];
    let mut remaining = shots;
    let mut mass_left = 1.0;
    for (i, &pi) in p.0.iter().enumerate() {
        if i == 3 || remaining == 0 {
            counts[i] = remaining;
            remaining = 0;
            continue;
        }
        let q = if mass_left > 0.0 {
            (pi / mass_left).clamp(0.0, 1.0)
        } else {
            0.0
        };
        let k = Binomial::new(remaining, q)
            .expect("conditional probability lies in [0, 1]")
            .sample(rng);
        counts[i] = k;
        remaining -= k;
        mass_left -= pi;
    }
    Ok(OutcomeCounts(counts))
}

pub fn empirical_probs(counts: &OutcomeCounts) -> ProbTable {
    let shots = counts.shots() as f64;
    ProbTable(counts.0.map(|c| c as f64 / shots))
}

/// Measurement channel label used when deriving RNG streams.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Channel {
    Zz = 0,
    Xz = 1,
}

fn splitmix64(mut x: u64) -> u64 {
    x = x.wrapping_add(0x9e37_79b9_7f4a_7c15);
    x = (x ^ (x >> 30)).wrapping_mul(0xbf58_476d_1ce4_e5b9);
    x = (x ^ (x >> 27)).wrapping_mul(0x94d0_49bb_1331_11eb);
    x ^ (x >> 31)
}

/// Independent, reproducible generator for one `(input, time index,
/// channel)` cell of an experiment seeded with `master`.
pub fn stream_rng(
    master: u64,
    input: InputState,
    time_index: usize,
    channel: Channel,
) -> ChaCha8Rng {
    let mut h = splitmix64(master);
    h = splitmix64(h ^ input.index() as u64);
    h = splitmix64(h ^ time_index as u64);
    h = splitmix64(h ^ channel as u64);
    ChaCha8Rng::seed_from_u64(h)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::quantum::{evolve, HamiltonianParams};

    fn assert_table(got: &ProbTable, want: [f64; 4], tol: f64) {
        for (g, w) in got.as_array().iter().zip(want) {
            assert!((g - w).abs() <= tol, "{got:?} vs {want:?}");
        }
    }

    #[test]
    fn prepared_inputs() {
        let psi1 = prepare_input(&PrepSpec::ideal(InputState::Psi1));
        assert!(psi1.distance_up_to_phase(&PureState::basis(0)) < 1e-15);
        let psi3 = prepare_input(&PrepSpec::ideal(InputState::Psi3));
        for a in psi3.amplitudes() {
            assert!((a.re - 0.5).abs() < 1e-15 && a.im == 0.0);
        }
        let psi4 = prepare_input(&PrepSpec::ideal(InputState::Psi4));
        let want = [0.5, -0.5, 0.5, -0.5];
        for (a, w) in psi4.amplitudes().iter().zip(want) {
            assert!((a.re - w).abs() < 1e-15);
        }
    }

    #[test]
    fn contaminated_psi1() {
        let psi = prepare_input(&PrepSpec::new(InputState::Psi1, 0.04).unwrap());
        let a = psi.amplitudes();
        assert!((a[0].re - 0.980_580_675_690_920_2).abs() < 1e-12);
        assert!((a[1].re - 0.196_116_135_138_184_04).abs() < 1e-12);
        assert_eq!(a[2].norm(), 0.0);
        assert_eq!(a[3].norm(), 0.0);
        assert!(PrepSpec::new(InputState::Psi1, 1.0).is_err());
    }

    #[test]
    fn probability_examples() {
        assert_table(
            &outcome_probs(&PureState::basis(1), BasisPair::ZZ),
            [0.0, 1.0, 0.0, 0.0],
            0.0,
        );
        assert_table(
            &outcome_probs(&PureState::basis(0), BasisPair::XZ),
            [0.5, 0.0, 0.5, 0.0],
            1e-15,
        );
        let h = HamiltonianParams::new(0.3, -1.7, 0.9);
        let psi3 = prepare_input(&PrepSpec::ideal(InputState::Psi3));
        for k in 0..20 {
            let psi = evolve(&h, &psi3, 0.37 * k as f64).unwrap();
            assert_table(&outcome_probs(&psi, BasisPair::ZZ), [0.25; 4], 1e-12);
        }
    }

    #[test]
    fn degenerate_table_samples_single_outcome() {
        let p = ProbTable::new([0.0, 0.0, 1.0, 0.0]).unwrap();
        let mut rng = ChaCha8Rng::seed_from_u64(5);
        assert_eq!(
            sample_counts(&p, 37, &mut rng).unwrap().as_array(),
            [0, 0, 37, 0]
        );
    }

    #[test]
    fn same_seed_same_counts() {
        let p = ProbTable::new([0.1, 0.2, 0.3, 0.4]).unwrap();
        let a = sample_counts(&p, 1000, &mut ChaCha8Rng::seed_from_u64(9)).unwrap();
        let b = sample_counts(&p, 1000, &mut ChaCha8Rng::seed_from_u64(9)).unwrap();
        assert_eq!(a, b);
        assert_eq!(a.shots(), 1000);
    }

    #[test]
    fn zero_shots_rejected() {
        let mut rng = ChaCha8Rng::seed_from_u64(0);
        assert_eq!(
            sample_counts(&ProbTable::uniform(), 0, &mut rng),
            Err(Error::ZeroShots)
        );
        assert!(OutcomeCounts::new([0; 4]).is_err());
    }

    #[test]
    fn million_uniform_shots_within_five_sigma() {
        let mut rng = ChaCha8Rng::seed_from_u64(2024);
        let counts = sample_counts(&ProbTable::uniform(), 1_000_000, &mut rng).unwrap();
        let sigma = (1e6f64 * 0.25 * 0.75).sqrt();
        for c in counts.as_array() {
            assert!((c as f64 - 250_000.0).abs() < 5.0 * sigma, "{counts:?}");
        }
    }

    #[test]
    fn empirical_examples() {
        let counts = OutcomeCounts::new([4, 0, 0, 6]).unwrap();
        assert_eq!(empirical_probs(&counts).as_array(), [0.4, 0.0, 0.0, 0.6]);
        let one = OutcomeCounts::new([0, 1, 0, 0]).unwrap();
        assert_eq!(empirical_probs(&one).as_array(), [0.0, 1.0, 0.0, 0.0]);
    }

    #[test]
    fn streams_are_distinct_and_reproducible() {
        let mut a = stream_rng(7, InputState::Psi2, 3, Channel::Zz);
        let mut b = stream_rng(7, InputState::Psi2, 3, Channel::Zz);
        let mut c = stream_rng(7, InputState::Psi2, 3, Channel::Xz);
        let x: u64 = a.random();
        assert_eq!(x, b.random::<u64>());
        assert_ne!(x, c.random::<u64>());
    }
}
