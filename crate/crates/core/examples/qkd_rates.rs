//! Secret-key fraction against chain length for the `ρ_opt` and r-state links.

use bellchain::qkd::{chain_skf, SkfMode};
use bellchain::states::{make_named, NamedState};

fn main() -> bellchain::Result<()> {
    for (name, kind) in
        [("opt(0.5, 0.95)", NamedState::Opt { p: 0.5, f: 0.95 }), ("r_state(0.95)", NamedState::RState { p: 0.95 })]
    {
        let link = make_named(&kind)?;
        println!("{name}");
        println!("   n  postselected        bd    werner");
        for n in 2..=10 {
            let post = chain_skf(&link, n, SkfMode::Postselected)?;
            let bd = chain_skf(&link, n, SkfMode::BdApprox)?;
            let w = chain_skf(&link, n, SkfMode::WernerApprox)?;
            println!("  {n:>2}  {post:>12.6}  {bd:>8.6}  {w:>8.6}");
        }
    }
    Ok(())
}
