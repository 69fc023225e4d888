//! Imperfect first input: main peak and sideband amplitudes versus eta.

use entmap::concurrence::SimulationMode;
use entmap::runner::{robustness_dt, robustness_sweep};
use entmap::spectral::SamplingPlan;
use entmap::HamiltonianParams;

fn main() -> entmap::Result<()> {
    let h = HamiltonianParams::new(1.2, 0.6, 1.4);
    let plan = SamplingPlan::uniform(1024, robustness_dt(&h)?, 1)?;
    for row in robustness_sweep(
        &h,
        &plan,
        &[0.0, 0.01, 0.05, 0.1],
        SimulationMode::Noiseless,
        0,
    )? {
        let bands: Vec<String> = row
            .sidebands
            .iter()
            .map(|s| format!("{}={:.4}", s.pair.tag(), s.relative()))
            .collect();
        println!(
            "eta {:.2}: main {:.4} (bin {}), {}",
            row.eta,
            row.main_relative(),
            row.main_bin,
            bands.join(" ")
        );
    }
    Ok(())
}
