//! Bounds on the postselected swap fidelity at `F = 0.9` for a few `p`, and
//! the rate–fidelity curve at `p = 0`.

use bellchain::bounds::{bound_row, delta_region, fidelity_vs_delta, BoundSweepRow};

fn main() -> bellchain::Result<()> {
    println!("{}", BoundSweepRow::CSV_HEADER);
    for p in [0.0, 0.3, 0.6, 0.9] {
        let r = bound_row(p, 0.9)?;
        let v: Vec<String> = r.values().iter().map(|x| format!("{x:.6}")).collect();
        println!("{}", v.join(","));
    }

    let (lo, hi) = delta_region(0.0, 0.8)?;
    println!("\nF = 0.8, p = 0: δ ∈ [{lo:.4}, {hi:.4}]");
    for c in fidelity_vs_delta(0.0, 0.8, 9)? {
        println!("  δ = {:.4}  F' ∈ [{:.6}, {:.6}]", c.delta, c.lower, c.upper);
    }
    Ok(())
}
