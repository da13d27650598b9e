//! How far the Werner approximation is from the exact chain fidelity, against
//! the `2·C(N,2)·ε²` budget.

use bellchain::chain::{builtin_protocol, run_chain_nonpostselected, werner_chain_fidelity, BuiltinProtocol};
use bellchain::qcore::{psi00, DensityOperator};
use bellchain::states::random;
use rand::SeedableRng;

fn main() -> bellchain::Result<()> {
    let mut rng = rand_chacha::ChaCha8Rng::seed_from_u64(5);
    for eps in [0.001, 0.01, 0.05] {
        for n in 2..=5 {
            let links: Vec<DensityOperator> =
                (0..n).map(|_| random::density_with_fidelity(&mut rng, 1.0 - eps)).collect();
            let p = builtin_protocol(BuiltinProtocol::CorrectAtEnd, n)?;
            let exact = run_chain_nonpostselected(&links, &p)?.fidelity_to_pure(&psi00())?;
            let approx = werner_chain_fidelity(&vec![1.0 - eps; n]);
            let budget = (n * (n - 1)) as f64 * eps * eps;
            println!("ε = {eps:<6} N = {n}  |F' − F'_W| = {:.2e}  budget {budget:.2e}", (exact - approx).abs());
        }
    }
    Ok(())
}
