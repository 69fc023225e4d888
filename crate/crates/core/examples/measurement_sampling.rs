//! Outcome tables of an evolved state and their finite-shot estimates.

use entmap::measure::{
    empirical_probs, outcome_probs, prepare_input, sample_counts, stream_rng, BasisPair, Channel,
    PrepSpec,
};
use entmap::quantum::evolve;
use entmap::{HamiltonianParams, InputState};

fn main() -> entmap::Result<()> {
    let h = HamiltonianParams::new(1.2, 0.6, 1.4);
    let psi = evolve(&h, &prepare_input(&PrepSpec::ideal(InputState::Psi3)), 0.4)?;
    for (basis, channel) in [(BasisPair::ZZ, Channel::Zz), (BasisPair::XZ, Channel::Xz)] {
        let p = outcome_probs(&psi, basis);
        println!("{basis}: exact {:?}", p.as_array());
        for shots in [10, 1000, 100_000] {
            let mut rng = stream_rng(7, InputState::Psi3, 0, channel);
            let counts = sample_counts(&p, shots, &mut rng)?;
            println!(
                "  {shots:>6} shots {:?} -> {:?}",
                counts.as_array(),
                empirical_probs(&counts).as_array()
            );
        }
    }
    Ok(())
}
