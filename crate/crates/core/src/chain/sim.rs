//! Chain simulation. Link `k` (1-based) occupies qubits `(L_k, R_k)`; node 0
//! holds `L_1`, node `N` holds `R_N`, and repeater node `k` holds `R_k` and
//! `L_{k+1}` and measures them in the Bell basis. Repeater corrections act on
//! `R_k`.

use crate::error::{Error, Result};
use crate::qcore::ops::{conjugate_local, project_pair};
use crate::qcore::{bell_projector, bell_vector, ComplexMatrix, DensityOperator, PauliLabel, RegisterSet, C64};
use crate::states::BellDiagonalCoeffs;
use crate::swap::bd_swap;

use super::protocol::{SwapAndCorrectProtocol, Syndrome};

/// Largest chain the brute-force entry points accept.
pub const MAX_BRUTE_LINKS: usize = 5;

fn check_links(links: &[DensityOperator], p: &SwapAndCorrectProtocol) -> Result<()> {
    if links.len() != p.n_links {
        return Err(Error::Domain(format!("protocol is for {} links, got {}", p.n_links, links.len())));
    }
    if links.len() > MAX_BRUTE_LINKS {
        return Err(Error::ChainTooLarge(links.len()));
    }
    if let Some(bad) = links.iter().find(|l| l.dim() != 4) {
        return Err(Error::Dimension { expected: 4, got: bad.dim() });
    }
    Ok(())
}

/// `(c† ⊗ I)|Ψ_s⟩`: projecting onto this equals correcting the first qubit by
/// `c` and then projecting onto `|Ψ_s⟩`.
fn corrected_bell_vector(s: PauliLabel, c: PauliLabel) -> [C64; 4] {
    let psi = bell_vector(s);
    if c.is_identity() {
        return psi;
    }
    let u = c.matrix().adjoint();
    let mut out = [C64::new(0.0, 0.0); 4];
    for a in 0..2 {
        for b in 0..2 {
            out[2 * a + b] = (0..2).map(|x| u[(a, x)] * psi[2 * x + b]).sum();
        }
    }
    out
}

/// Unnormalized end-to-end state for one syndrome, contracting link by link.
pub fn chain_unnormalized(links: &[&ComplexMatrix], p: &SwapAndCorrectProtocol, s: &Syndrome) -> ComplexMatrix {
    let n = links.len();
    let corr = p.corrections(s);
    let mut state = links[0].clone();
    for k in 1..n {
        let joint = state.kron(links[k]);
        state = project_pair(&joint, 4, 1, 2, &corrected_bell_vector(s.at(k), corr[k]));
    }
    if !corr[0].is_identity() {
        state = conjugate_local(&state, 2, 0, &corr[0].matrix());
    }
    if !corr[n].is_identity() {
        state = conjugate_local(&state, 2, 1, &corr[n].matrix());
    }
    state
}

/// Same quantity through the full `4^N`-dimensional tensor product; an
/// independent oracle for [`chain_unnormalized`].
pub fn chain_unnormalized_full(links: &[&ComplexMatrix], p: &SwapAndCorrectProtocol, s: &Syndrome) -> ComplexMatrix {
    let n = links.len();
    let corr = p.corrections(s);
    let mut m = links[0].clone();
    for l in &links[1..] {
        m = m.kron(l);
    }
    let nq = 2 * n;
    let qubit_of = |node: usize| if node == 0 { 0 } else { 2 * node - 1 };
    for (node, c) in corr.iter().enumerate() {
        if !c.is_identity() {
            m = conjugate_local(&m, nq, qubit_of(node), &c.matrix());
        }
    }
    let mut remaining = nq;
    for k in (1..n).rev() {
        m = project_pair(&m, remaining, 2 * k - 1, 2 * k, &bell_vector(s.at(k)));
        remaining -= 2;
    }
    m
}

/// Postselected end-to-end state and probability for syndrome `s`.
/// Returns `None` for the state when the syndrome has zero probability.
pub fn run_chain_postselected(
    links: &[DensityOperator],
    p: &SwapAndCorrectProtocol,
    s: &Syndrome,
) -> Result<(Option<DensityOperator>, f64)> {
    check_links(links, p)?;
    if s.outcomes.len() != p.n_links - 1 {
        return Err(Error::Domain(format!("syndrome has {} outcomes, expected {}", s.outcomes.len(), p.n_links - 1)));
    }
    let ms: Vec<&ComplexMatrix> = links.iter().map(|l| l.matrix()).collect();
    let out = chain_unnormalized(&ms, p, s);
    let prob = out.trace().re;
    if prob < crate::swap::ZERO_PROBABILITY {
        return Ok((None, prob.max(0.0)));
    }
    let state = out.scale(1.0 / prob).hermitian_part();
    Ok((Some(DensityOperator::from_trusted(state, RegisterSet::anonymous(2))), prob))
}

/// Average over all `4^{N-1}` syndromes.
pub fn run_chain_nonpostselected(links: &[DensityOperator], p: &SwapAndCorrectProtocol) -> Result<DensityOperator> {
    check_links(links, p)?;
    let ms: Vec<&ComplexMatrix> = links.iter().map(|l| l.matrix()).collect();
    let mut acc = ComplexMatrix::zeros(4);
    for s in Syndrome::all(p.n_links) {
        acc = &acc + &chain_unnormalized(&ms, p, &s);
    }
    Ok(DensityOperator::from_trusted(acc.hermitian_part(), RegisterSet::anonymous(2)))
}

/// Left fold of the Bell-diagonal swap map.
pub fn bd_chain(coeffs: &[BellDiagonalCoeffs]) -> BellDiagonalCoeffs {
    let mut it = coeffs.iter();
    let first = *it.next().expect("bd_chain needs at least one link");
    it.fold(first, |acc, c| bd_swap(&acc, c))
}

/// `(Π F_k, ½ Π (2F_k − 1) + ½)`
pub fn chain_fidelity_bounds(fidelities: &[f64]) -> Result<(f64, f64)> {
    if let Some(&f) = fidelities.iter().find(|f| !(0.0..=1.0).contains(*f)) {
        return Err(Error::Domain(format!("fidelity {f} outside [0, 1]")));
    }
    let lower = fidelities.iter().product();
    let upper = 0.5 * fidelities.iter().map(|f| 2.0 * f - 1.0).product::<f64>() + 0.5;
    Ok((lower, upper))
}

/// Werner-approximation fidelity of a chain: `¾ Π w_k + ¼`.
pub fn werner_chain_fidelity(fidelities: &[f64]) -> f64 {
    0.75 * fidelities.iter().map(|f| (4.0 * f - 1.0) / 3.0).product::<f64>() + 0.25
}

/// Whether `p` maps perfect links to `|Ψ00⟩` with probability `4^{-(N-1)}`
/// for every syndrome (full-tensor simulation).
pub fn perfect_links_check(p: &SwapAndCorrectProtocol) -> bool {
    let phi = bell_projector(PauliLabel::I);
    let links: Vec<&ComplexMatrix> = vec![&phi; p.n_links];
    let expect = 0.25f64.powi(p.n_links as i32 - 1);
    Syndrome::all(p.n_links).all(|s| {
        let out = chain_unnormalized_full(&links, p, &s);
        let prob = out.trace().re;
        (prob - expect).abs() < 1e-12 && out.scale(1.0 / prob).max_abs_diff(&phi) < 1e-10
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::chain::protocol::{builtin_protocol, BuiltinProtocol};

    #[test]
    fn rank_two_triple() {
        let c = BellDiagonalCoeffs::new([0.9, 0.1, 0.0, 0.0]).unwrap();
        let out = bd_chain(&[c, c, c]);
        assert!((out.lambda[0] - 0.756).abs() < 1e-12 && (out.lambda[1] - 0.244).abs() < 1e-12);
        let links = vec![c.reconstruct(); 3];
        let p = builtin_protocol(BuiltinProtocol::CorrectAtEnd, 3).unwrap();
        let avg = run_chain_nonpostselected(&links, &p).unwrap();
        assert!((avg.matrix().expectation(&bell_vector(PauliLabel::I)).re - 0.756).abs() < 1e-12);
    }

    #[test]
    fn bounds_example() {
        let (lo, hi) = chain_fidelity_bounds(&[0.9, 0.9, 0.9]).unwrap();
        assert!((lo - 0.729).abs() < 1e-12 && (hi - 0.756).abs() < 1e-12);
        assert_eq!(chain_fidelity_bounds(&[1.0; 4]).unwrap(), (1.0, 1.0));
    }

    #[test]
    fn single_link_is_unchanged() {
        let c = BellDiagonalCoeffs::new([0.7, 0.1, 0.15, 0.05]).unwrap();
        assert_eq!(bd_chain(&[c]), c);
    }

    #[test]
    fn too_many_links_for_brute_force() {
        let c = BellDiagonalCoeffs::perfect().reconstruct();
        let p = builtin_protocol(BuiltinProtocol::CorrectAtEnd, 6).unwrap();
        assert!(matches!(run_chain_nonpostselected(&vec![c; 6], &p), Err(Error::ChainTooLarge(6))));
    }
}
