//! Sampled concurrence series against the exact curve.

use entmap::concurrence::{simulate_series, SimulationMode};
use entmap::measure::PrepSpec;
use entmap::quantum::closed_form_c2;
use entmap::spectral::{plan_observation, Strategy};
use entmap::{HamiltonianParams, InputState};

fn main() -> entmap::Result<()> {
    let h = HamiltonianParams::new(1.2, 0.6, 1.4);
    let input = InputState::Psi2;
    let plan = plan_observation(h.combination(input).abs(), 40, 50, Strategy::Uniform)?;
    let series = simulate_series(
        &h,
        &PrepSpec::ideal(input),
        &plan,
        SimulationMode::Sampled,
        1,
    )?;
    let mut sq = 0.0;
    for p in series.points() {
        let exact = closed_form_c2(input, &h, p.time);
        sq += (p.c2_estimate - exact).powi(2);
        println!("{:>8.4} {:>8.4} {:>8.4}", p.time, p.c2_estimate, exact);
    }
    println!("rms error {:.4}", (sq / series.len() as f64).sqrt());
    Ok(())
}
