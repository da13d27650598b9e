//! BBM92 secret-key fractions of chain outputs.

use serde::{Deserialize, Serialize};

use crate::chain::{bd_chain, builtin_protocol, outcome_distribution, werner_chain_fidelity, BuiltinProtocol};
use crate::error::{Error, Result};
use crate::qcore::pauli::{pauli_x, pauli_y, pauli_z};
use crate::qcore::{psi00, DensityOperator};
use crate::states::bd_twirl;
use crate::swap::nonpostselected_swap;

/// Largest chain for which the postselected rate is enumerated.
pub const POSTSELECTED_MAX_LINKS: usize = 14;

#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct QberTriple {
    pub qx: f64,
    pub qy: f64,
    pub qz: f64,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub enum BasisPair {
    XZ,
    XY,
    YZ,
}

impl BasisPair {
    /// Tie-break order.
    pub const ALL: [Self; 3] = [Self::XZ, Self::XY, Self::YZ];

    pub fn name(self) -> &'static str {
        match self {
            Self::XZ => "XZ",
            Self::XY => "XY",
            Self::YZ => "YZ",
        }
    }

    fn pick(self, q: &QberTriple) -> (f64, f64) {
        match self {
            Self::XZ => (q.qx, q.qz),
            Self::XY => (q.qx, q.qy),
            Self::YZ => (q.qy, q.qz),
        }
    }
}

/// Error rates from the two-point correlators. `|Ψ00⟩` is correlated in X
/// and Z but anticorrelated in Y, hence the sign flip for Y.
pub fn qber(sigma: &DensityOperator) -> Result<QberTriple> {
    if sigma.dim() != 4 {
        return Err(Error::Dimension { expected: 4, got: sigma.dim() });
    }
    let corr = |p: crate::qcore::ComplexMatrix| sigma.matrix().trace_product(&p.kron(&p)).re;
    Ok(QberTriple {
        qx: (0.5 * (1.0 - corr(pauli_x()))).clamp(0.0, 1.0),
        qy: (0.5 * (1.0 + corr(pauli_y()))).clamp(0.0, 1.0),
        qz: (0.5 * (1.0 - corr(pauli_z()))).clamp(0.0, 1.0),
    })
}

/// Binary entropy in bits, with `h(0) = h(1) = 0`.
pub fn binary_entropy(x: f64) -> f64 {
    if x <= 0.0 || x >= 1.0 {
        return 0.0;
    }
    -x * x.log2() - (1.0 - x) * (1.0 - x).log2()
}

/// An error rate of 1 is as good as 0 here (`h(1) = 0`), so e.g. `Q_X = 1,
/// Q_Z = 0` gives rate 1: a deterministic flip is undone by relabeling.
pub fn skf_from_qber(q: &QberTriple, pair: BasisPair) -> f64 {
    let (a, b) = pair.pick(q);
    (1.0 - binary_entropy(a) - binary_entropy(b)).max(0.0)
}

/// `max(0, 1 − h(Q_a) − h(Q_b))`
pub fn skf(sigma: &DensityOperator, pair: BasisPair) -> Result<f64> {
    Ok(skf_from_qber(&qber(sigma)?, pair))
}

/// Best pair, ties resolved in the order XZ, XY, YZ.
pub fn best_basis_skf(sigma: &DensityOperator) -> Result<(BasisPair, f64)> {
    let q = qber(sigma)?;
    Ok(best_of(|pair| skf_from_qber(&q, pair)))
}

fn best_of(f: impl Fn(BasisPair) -> f64) -> (BasisPair, f64) {
    let mut best = (BasisPair::XZ, f(BasisPair::XZ));
    for pair in [BasisPair::XY, BasisPair::YZ] {
        let v = f(pair);
        if v > best.1 + 1e-15 {
            best = (pair, v);
        }
    }
    best
}

/// `max(0, 1 − 2h(½ − ½ w^n))`, the rate of a chain of Werner links.
pub fn werner_chain_skf(f: f64, n: usize) -> f64 {
    let w = (4.0 * f - 1.0) / 3.0;
    (1.0 - 2.0 * binary_entropy(0.5 - 0.5 * w.powi(n as i32))).max(0.0)
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum SkfMode {
    Postselected,
    Nonpostselected,
    BdApprox,
    WernerApprox,
}

/// Rate of a chain with per-pair detail.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct ChainSkf {
    pub pair: BasisPair,
    pub value: f64,
    /// Values for XZ, XY, YZ.
    pub per_pair: [f64; 3],
}

/// Secret-key fraction of `n` identical links under the correct-at-end protocol.
pub fn chain_skf(link: &DensityOperator, n: usize, mode: SkfMode) -> Result<f64> {
    Ok(chain_skf_detail(link, n, mode)?.value)
}

pub fn chain_skf_detail(link: &DensityOperator, n: usize, mode: SkfMode) -> Result<ChainSkf> {
    if n < 2 {
        return Err(Error::Domain(format!("a chain needs at least 2 links, got {n}")));
    }
    if link.dim() != 4 {
        return Err(Error::Dimension { expected: 4, got: link.dim() });
    }
    let detail = |q: QberTriple| {
        let per_pair = BasisPair::ALL.map(|p| skf_from_qber(&q, p));
        let (pair, value) = best_of(|p| per_pair[p as usize]);
        ChainSkf { pair, value, per_pair }
    };
    match mode {
        SkfMode::Postselected => {
            if n > POSTSELECTED_MAX_LINKS {
                return Err(Error::Unsupported(format!(
                    "postselected rates are enumerated up to n = {POSTSELECTED_MAX_LINKS}; for n = {n} call \
                     chain::outcome_distribution (merged recursion) directly"
                )));
            }
            let protocol = builtin_protocol(BuiltinProtocol::CorrectAtEnd, n)?;
            let dist = outcome_distribution(link, n, &protocol)?;
            let mut per_pair = [0.0; 3];
            for e in &dist.entries {
                let q = qber(&e.state)?;
                for (slot, pair) in per_pair.iter_mut().zip(BasisPair::ALL) {
                    *slot += e.probability * skf_from_qber(&q, pair);
                }
            }
            let (pair, value) = best_of(|p| per_pair[p as usize]);
            Ok(ChainSkf { pair, value, per_pair })
        }
        SkfMode::Nonpostselected => {
            // The syndrome average is the same for every protocol with a
            // passive left end, so fold two-link averages.
            let mut state = link.clone();
            for _ in 1..n {
                state = nonpostselected_swap(&state, link)?;
            }
            Ok(detail(qber(&state)?))
        }
        SkfMode::BdApprox => {
            let c = bd_twirl(link)?;
            let out = bd_chain(&vec![c; n]);
            Ok(detail(qber(&out.reconstruct())?))
        }
        SkfMode::WernerApprox => {
            let f = link.fidelity_to_pure(&psi00())?;
            let fw = werner_chain_fidelity(&vec![f; n]);
            let q = 2.0 * (1.0 - fw) / 3.0;
            Ok(detail(QberTriple { qx: q, qy: q, qz: q }))
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::states::BellDiagonalCoeffs;

    #[test]
    fn certain_flip_is_a_full_rate() {
        let q = QberTriple { qx: 1.0, qy: 0.5, qz: 0.0 };
        assert_eq!(skf_from_qber(&q, BasisPair::XZ), 1.0);
        assert_eq!(skf_from_qber(&q, BasisPair::XY), 0.0);
    }

    #[test]
    fn rank_two_qbers() {
        let s = BellDiagonalCoeffs::new([0.82, 0.18, 0.0, 0.0]).unwrap().reconstruct();
        let q = qber(&s).unwrap();
        assert!((q.qx - 0.18).abs() < 1e-12 && (q.qy - 0.18).abs() < 1e-12 && q.qz.abs() < 1e-12);
        assert!((skf(&s, BasisPair::XZ).unwrap() - (1.0 - binary_entropy(0.18))).abs() < 1e-12);
    }

    #[test]
    fn bell_coefficient_form() {
        let c = BellDiagonalCoeffs::new([0.4, 0.3, 0.2, 0.1]).unwrap();
        let q = qber(&c.reconstruct()).unwrap();
        let l = c.lambda;
        assert!((q.qx - (l[1] + l[3])).abs() < 1e-12);
        assert!((q.qy - (l[2] + l[1])).abs() < 1e-12);
        assert!((q.qz - (l[2] + l[3])).abs() < 1e-12);
    }

    #[test]
    fn perfect_state_tie_breaks_to_xz() {
        let s = BellDiagonalCoeffs::perfect().reconstruct();
        assert_eq!(best_basis_skf(&s).unwrap(), (BasisPair::XZ, 1.0));
    }

    #[test]
    fn entropy_edges() {
        assert_eq!(binary_entropy(0.0), 0.0);
        assert_eq!(binary_entropy(1.0), 0.0);
        assert!((binary_entropy(0.5) - 1.0).abs() < 1e-15);
    }
}
