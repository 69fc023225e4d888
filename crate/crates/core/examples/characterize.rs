//! Full protocol: four experiments, frequency estimates, inversion.

use entmap::recon::{characterize, plans_for, CharacterizeOptions};
use entmap::spectral::Strategy;
use entmap::HamiltonianParams;

fn main() -> entmap::Result<()> {
    let h = HamiltonianParams::new(1.2, 0.6, 1.4);
    let plans = plans_for(&h, 200, 10, Strategy::Uniform)?;
    let c = characterize(&h, &plans, &CharacterizeOptions::default(), 42)?;
    for e in &c.experiments {
        println!("{:?}: |b| = {:.5} +/- {:.5}", e.input, e.omega, e.sigma);
    }
    let r = &c.result;
    println!("true   {:?}", h.as_array());
    println!("c_hat  {:?}", r.c_hat.as_array());
    println!("sigma  {:?}", r.sigma);
    println!(
        "signs {:?}, residual {:.2e}, {:?} convention",
        r.signs, r.residual, r.convention
    );
    Ok(())
}
