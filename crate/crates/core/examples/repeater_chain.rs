//! A four-link chain of random links under the two built-in protocols and a
//! random one: the syndrome average always twirls to the Bell-diagonal fold.

use bellchain::chain::{
    bd_chain, builtin_protocol, random_protocol, run_chain_nonpostselected, validate_protocol, BuiltinProtocol,
};
use bellchain::qcore::{psi00, DensityOperator};
use bellchain::states::{bd_twirl, random};
use rand::SeedableRng;

fn main() -> bellchain::Result<()> {
    let mut rng = rand_chacha::ChaCha8Rng::seed_from_u64(3);
    let links: Vec<DensityOperator> = (0..4).map(|_| random::density_with_fidelity(&mut rng, 0.9)).collect();
    let twirled = links.iter().map(bd_twirl).collect::<bellchain::Result<Vec<_>>>()?;
    let expect = bd_chain(&twirled);
    println!("bd_chain coefficients {:?}", expect.lambda);

    let protocols = [
        ("sequential", builtin_protocol(BuiltinProtocol::Sequential, 4)?),
        ("correct_at_end", builtin_protocol(BuiltinProtocol::CorrectAtEnd, 4)?),
        ("random", random_protocol(&mut rng, 4)),
    ];
    for (name, p) in &protocols {
        assert!(validate_protocol(p).is_valid());
        let out = run_chain_nonpostselected(&links, p)?;
        let diff = bd_twirl(&out)?.max_abs_diff(&expect);
        println!("{name:<15} F' = {:.9}  |B(out) - bd_chain| = {diff:.1e}", out.fidelity_to_pure(&psi00())?);
    }
    Ok(())
}
