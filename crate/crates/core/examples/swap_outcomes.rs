//! All four outcomes of swapping two θ-states, next to the Bell-diagonal and
//! Werner predictions.

use std::f64::consts::PI;

use bellchain::qcore::psi00;
use bellchain::states::{bd_twirl, make_named, NamedState};
use bellchain::swap::{all_outcomes, bd_swap, werner_swap_fidelity};

fn main() -> bellchain::Result<()> {
    let rho = make_named(&NamedState::Theta { theta: PI / 6.0 })?;
    let f = rho.fidelity_to_pure(&psi00())?;
    println!("link fidelity {f:.6}");
    for o in all_outcomes(&rho, &rho)? {
        match o.fidelity {
            Some(fid) => println!("  outcome {:<2}  p = {:.6}  F' = {fid:.6}", o.label.name(), o.probability),
            None => println!("  outcome {:<2}  p = {:.6}  (never occurs)", o.label.name(), o.probability),
        }
    }
    let c = bd_twirl(&rho)?;
    println!("Bell-diagonal prediction F' = {:.6}", bd_swap(&c, &c).fidelity());
    println!("Werner prediction         F' = {:.6}", werner_swap_fidelity(f, f));
    Ok(())
}
