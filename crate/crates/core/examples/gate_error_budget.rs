//! Gate error against measurement budget, and the budget for p = 1e-4.

use entmap::gate_error::{budget_curve, measurements_for_threshold, Gate};

fn main() -> entmap::Result<()> {
    let ne: Vec<u64> = (0..9)
        .map(|k| 10u64.pow(k / 2) * if k % 2 == 1 { 3 } else { 1 })
        .collect();
    for gate in [Gate::IsingCnot, Gate::HeisenbergSqrtswap] {
        for nt in [10, 100] {
            println!("{} nt = {nt}", gate.label());
            for r in budget_curve(nt, &ne, gate)? {
                let b = r.budget.expect("budget");
                println!(
                    "  N = {:>8}  eps = {:.3e}  p_eff = {:.3e}",
                    b.n, r.epsilon, r.p_eff
                );
            }
        }
        let b = measurements_for_threshold(1e-4, 10, gate)?;
        println!(
            "{}: p_eff <= 1e-4 needs Ne = {}, N = {}",
            gate.label(),
            b.ne,
            b.n
        );
    }
    Ok(())
}
