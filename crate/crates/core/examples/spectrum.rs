//! DFT of sampled series and the detected peaks.

use entmap::concurrence::{simulate_series, SimulationMode};
use entmap::measure::PrepSpec;
use entmap::recon::plans_for;
use entmap::spectral::{dft, find_peak, Strategy};
use entmap::{HamiltonianParams, InputState};

fn main() -> entmap::Result<()> {
    let h = HamiltonianParams::new(1.2, 0.6, 1.4);
    let plans = plans_for(&h, 200, 10, Strategy::Uniform)?;
    for input in InputState::ALL {
        let plan = &plans[input.index()];
        let series = simulate_series(
            &h,
            &PrepSpec::ideal(input),
            plan,
            SimulationMode::Sampled,
            3,
        )?;
        let spectrum = dft(&series)?;
        let peak = find_peak(&spectrum)?;
        println!(
            "{}: peak {:.3} rad/time (bin {}), expected {:.3}, bin width {:.3}",
            input.label(),
            peak.omega,
            peak.bin,
            4.0 * h.combination(input).abs(),
            spectrum.resolution()
        );
    }
    Ok(())
}
