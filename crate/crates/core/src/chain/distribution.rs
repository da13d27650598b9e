//! Syndrome-resolved output distributions with merging of identical states.
//!
//! Syndromes are enumerated link by link: after each swap the Pauli correction
//! is applied immediately on the right end. For any protocol whose left end
//! never corrects, this yields the same multiset of (state, probability)
//! pairs as the protocol itself, because a correction in front of a Bell
//! measurement only relabels its outcome. Identical intermediate states (after
//! rounding to 1e-9) are merged, which keeps the enumeration small for
//! structured links.

use std::collections::HashMap;

use serde::Serialize;

use crate::error::{Error, Result};
use crate::qcore::{ComplexMatrix, DensityOperator, PauliLabel, RegisterSet};
use crate::swap::{swap_unnormalized, ZERO_PROBABILITY};

use super::protocol::{validate_protocol, SwapAndCorrectProtocol};

pub const MERGE_RESOLUTION: f64 = 1e-9;
/// Beyond this many links the merged recursion is the only option.
pub const EXACT_ENUMERATION_LINKS: usize = 8;
pub const MAX_DISTRIBUTION_LINKS: usize = 40;

#[derive(Debug, Clone, Serialize)]
pub struct OutcomeEntry {
    #[serde(skip)]
    pub state: DensityOperator,
    pub probability: f64,
    pub members: u64,
}

#[derive(Debug, Clone, Serialize)]
pub struct OutcomeDistribution {
    pub entries: Vec<OutcomeEntry>,
    /// Syndromes with zero probability, not represented by any entry.
    pub null_members: u64,
}

impl OutcomeDistribution {
    pub fn total_probability(&self) -> f64 {
        self.entries.iter().map(|e| e.probability).sum()
    }

    pub fn total_members(&self) -> u64 {
        self.entries.iter().map(|e| e.members).sum::<u64>() + self.null_members
    }

    /// `Σ_s p_s ρ_s`
    pub fn average(&self) -> ComplexMatrix {
        self.entries.iter().fold(ComplexMatrix::zeros(4), |acc, e| &acc + &e.state.matrix().scale(e.probability))
    }
}

fn merge_key(m: &ComplexMatrix) -> Vec<i64> {
    m.data()
        .iter()
        .flat_map(|z| [(z.re / MERGE_RESOLUTION).round() as i64, (z.im / MERGE_RESOLUTION).round() as i64])
        .collect()
}

fn check_protocol(n: usize, p: &SwapAndCorrectProtocol) -> Result<()> {
    if n < 2 {
        return Err(Error::Domain(format!("a chain needs at least 2 links, got {n}")));
    }
    if n > MAX_DISTRIBUTION_LINKS {
        return Err(Error::Unsupported(format!("n = {n} exceeds the merged-recursion cap {MAX_DISTRIBUTION_LINKS}")));
    }
    if p.n_links != n {
        return Err(Error::Domain(format!("protocol is for {} links, not {n}", p.n_links)));
    }
    if !p.left_end_trivial() {
        return Err(Error::Unsupported("outcome distributions need a protocol with no correction at node 0".into()));
    }
    let report = validate_protocol(p);
    if !report.physical || !report.correct {
        return Err(Error::InvalidProtocol(report.problems.join("; ")));
    }
    Ok(())
}

/// Distribution of corrected end-to-end states over all syndromes of a chain
/// of `n` identical links.
pub fn outcome_distribution(
    link: &DensityOperator,
    n: usize,
    p: &SwapAndCorrectProtocol,
) -> Result<OutcomeDistribution> {
    if link.dim() != 4 {
        return Err(Error::Dimension { expected: 4, got: link.dim() });
    }
    check_protocol(n, p)?;
    let links = vec![link.matrix().clone(); n];
    Ok(enumerate(&links))
}

/// As [`outcome_distribution`] for possibly distinct links (at most 5 unless
/// all links are identical).
pub fn outcome_distribution_links(
    links: &[DensityOperator],
    p: &SwapAndCorrectProtocol,
) -> Result<OutcomeDistribution> {
    let n = links.len();
    let identical = links.windows(2).all(|w| w[0].matrix().max_abs_diff(w[1].matrix()) == 0.0);
    if !identical && n > 5 {
        return Err(Error::Unsupported(format!("distinct links are limited to n <= 5, got {n}")));
    }
    if let Some(bad) = links.iter().find(|l| l.dim() != 4) {
        return Err(Error::Dimension { expected: 4, got: bad.dim() });
    }
    check_protocol(n, p)?;
    Ok(enumerate(&links.iter().map(|l| l.matrix().clone()).collect::<Vec<_>>()))
}

fn enumerate(links: &[ComplexMatrix]) -> OutcomeDistribution {
    // (state, probability, members)
    let mut current: Vec<(ComplexMatrix, f64, u64)> = vec![(links[0].clone(), 1.0, 1)];
    let mut null_members = 0u64;
    for link in &links[1..] {
        // a zero-probability prefix stands for 4 syndromes one level deeper
        null_members *= 4;
        let mut index: HashMap<Vec<i64>, usize> = HashMap::new();
        let mut next: Vec<(ComplexMatrix, f64, u64)> = Vec::new();
        for (state, prob, members) in &current {
            for l in PauliLabel::ALL {
                let out = swap_unnormalized(state, link, l);
                let q = out.trace().re;
                if q < ZERO_PROBABILITY {
                    null_members += members;
                    continue;
                }
                let normalized = out.scale(1.0 / q).hermitian_part();
                let key = merge_key(&normalized);
                match index.get(&key) {
                    Some(&i) => {
                        next[i].1 += prob * q;
                        next[i].2 += members;
                    }
                    None => {
                        index.insert(key, next.len());
                        next.push((normalized, prob * q, *members));
                    }
                }
            }
        }
        current = next;
    }
    OutcomeDistribution {
        entries: current
            .into_iter()
            .map(|(m, probability, members)| OutcomeEntry {
                state: DensityOperator::from_trusted(m, RegisterSet::anonymous(2)),
                probability,
                members,
            })
            .collect(),
        null_members,
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::chain::protocol::{builtin_protocol, BuiltinProtocol};
    use crate::qcore::psi00;
    use crate::states::opt_state;

    #[test]
    fn perfect_link_single_entry() {
        let link = crate::states::BellDiagonalCoeffs::perfect().reconstruct();
        for n in 2..=6 {
            let p = builtin_protocol(BuiltinProtocol::CorrectAtEnd, n).unwrap();
            let d = outcome_distribution(&link, n, &p).unwrap();
            assert_eq!(d.entries.len(), 1);
            assert!((d.entries[0].probability - 1.0).abs() < 1e-12);
            assert_eq!(d.total_members(), 4u64.pow(n as u32 - 1));
        }
    }

    #[test]
    fn opt_link_two_classes() {
        let link = opt_state(0.5, 0.95).unwrap();
        let p = builtin_protocol(BuiltinProtocol::CorrectAtEnd, 2).unwrap();
        let d = outcome_distribution(&link, 2, &p).unwrap();
        let best = d.entries.iter().map(|e| e.state.fidelity_to_pure(&psi00()).unwrap()).fold(0.0, f64::max);
        assert!((best - 0.95).abs() < 1e-12);
        assert_eq!(d.total_members(), 4);
    }
}
