//! Exact concurrence of the four inputs against the closed forms.

use entmap::measure::{prepare_input, PrepSpec};
use entmap::quantum::{closed_form_c2, concurrence_sq, evolve};
use entmap::{HamiltonianParams, InputState};

fn main() -> entmap::Result<()> {
    let h = HamiltonianParams::new(1.2, 0.6, 1.4);
    println!("H = {h}");
    println!(
        "{:>6} {:>10} {:>10} {:>10} {:>10}",
        "t", "psi1", "psi2", "psi3", "psi4"
    );
    for k in 0..=10 {
        let t = 0.1 * k as f64;
        let mut row = format!("{t:>6.2}");
        for input in InputState::ALL {
            let psi = evolve(&h, &prepare_input(&PrepSpec::ideal(input)), t)?;
            let c2 = concurrence_sq(&psi);
            assert!((c2 - closed_form_c2(input, &h, t)).abs() < 1e-12);
            row += &format!(" {c2:>10.6}");
        }
        println!("{row}");
    }
    Ok(())
}
