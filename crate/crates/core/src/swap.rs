//! Two-link entanglement swapping.
//!
//! Register layout: `ρ1` lives on `(B1, A1)`, `ρ2` on `(A2, B2)`. The Bell
//! measurement acts on `A1 A2`; the correction for outcome `ij` is
//! `(X^i Z^j)†` on `B2`, which maps the uncorrected output `|Ψ_ij⟩` of perfect
//! links back to `|Ψ00⟩`.

use crate::error::{Error, Result};
use crate::qcore::ops::{conjugate_local, project_pair};
use crate::qcore::{bell_vector, clamp_unit, psi00, ComplexMatrix, DensityOperator, PauliLabel, RegisterSet};
use crate::states::{BellDiagonalCoeffs, NoisyDecomposition};

/// Outcomes with smaller probability are reported without a state.
pub const ZERO_PROBABILITY: f64 = 1e-14;

#[derive(Debug, Clone, PartialEq)]
pub struct SwapOutcome {
    pub label: PauliLabel,
    pub probability: f64,
    /// `None` when the outcome has (numerically) zero probability.
    pub state: Option<DensityOperator>,
    pub fidelity: Option<f64>,
}

impl SwapOutcome {
    pub fn is_null(&self) -> bool {
        self.state.is_none()
    }
}

fn require_two_qubit(rho: &DensityOperator) -> Result<()> {
    if rho.dim() != 4 {
        return Err(Error::Dimension { expected: 4, got: rho.dim() });
    }
    Ok(())
}

/// Unnormalized corrected output `(P† on B2) Tr_{A1A2}[Ψ_ij ρ1⊗ρ2] (P on B2)`.
pub fn swap_unnormalized(m1: &ComplexMatrix, m2: &ComplexMatrix, label: PauliLabel) -> ComplexMatrix {
    let joint = m1.kron(m2);
    let out = project_pair(&joint, 4, 1, 2, &bell_vector(label));
    if label.is_identity() {
        out
    } else {
        conjugate_local(&out, 2, 1, &label.matrix().adjoint())
    }
}

/// `(p'_ij, F'_ij)` straight from the matrices, no validation.
pub fn swap_stats_raw(m1: &ComplexMatrix, m2: &ComplexMatrix, label: PauliLabel) -> (f64, f64) {
    let out = swap_unnormalized(m1, m2, label);
    let p = out.trace().re;
    let f = if p > ZERO_PROBABILITY { out.expectation(&psi00()).re / p } else { f64::NAN };
    (p, f)
}

pub fn postselected_swap(rho1: &DensityOperator, rho2: &DensityOperator, outcome: PauliLabel) -> Result<SwapOutcome> {
    require_two_qubit(rho1)?;
    require_two_qubit(rho2)?;
    let out = swap_unnormalized(rho1.matrix(), rho2.matrix(), outcome);
    let p = clamp_unit(out.trace().re, "swap probability")?;
    if p < ZERO_PROBABILITY {
        return Ok(SwapOutcome { label: outcome, probability: p, state: None, fidelity: None });
    }
    let state = out.scale(1.0 / p).hermitian_part();
    let fidelity = clamp_unit(state.expectation(&psi00()).re, "swap fidelity")?;
    Ok(SwapOutcome {
        label: outcome,
        probability: p,
        state: Some(DensityOperator::from_trusted(state, RegisterSet::anonymous(2))),
        fidelity: Some(fidelity),
    })
}

/// All four outcomes, in label order `00, 01, 10, 11`.
pub fn all_outcomes(rho1: &DensityOperator, rho2: &DensityOperator) -> Result<Vec<SwapOutcome>> {
    PauliLabel::ALL.iter().map(|&l| postselected_swap(rho1, rho2, l)).collect()
}

/// Probability-weighted average of the corrected outcomes.
pub fn nonpostselected_swap(rho1: &DensityOperator, rho2: &DensityOperator) -> Result<DensityOperator> {
    require_two_qubit(rho1)?;
    require_two_qubit(rho2)?;
    let mut acc = ComplexMatrix::zeros(4);
    for l in PauliLabel::ALL {
        acc = &acc + &swap_unnormalized(rho1.matrix(), rho2.matrix(), l);
    }
    Ok(DensityOperator::from_trusted(acc.hermitian_part(), RegisterSet::anonymous(2)))
}

/// Standard teleportation of a one-qubit `input` through `resource`
/// (registers `C` = input, `A B` = resource), averaged over outcomes.
pub fn teleport_channel(resource: &DensityOperator, input: &DensityOperator) -> Result<DensityOperator> {
    require_two_qubit(resource)?;
    if input.dim() != 2 {
        return Err(Error::Dimension { expected: 2, got: input.dim() });
    }
    let joint = input.matrix().kron(resource.matrix());
    let mut acc = ComplexMatrix::zeros(2);
    for l in PauliLabel::ALL {
        let out = project_pair(&joint, 3, 0, 1, &bell_vector(l));
        let u = l.matrix().adjoint();
        acc = &acc + &out.conjugate_by(&u);
    }
    Ok(DensityOperator::from_trusted(acc.hermitian_part(), RegisterSet::anonymous(1)))
}

/// Bell-diagonal swap: `λ'_k = Σ_{k1 ⊕ k2 = k} λ_k1 μ_k2`, the same for every
/// outcome, each of probability 1/4.
pub fn bd_swap(lambda: &BellDiagonalCoeffs, mu: &BellDiagonalCoeffs) -> BellDiagonalCoeffs {
    let mut out = [0.0; 4];
    for (k1, &a) in lambda.lambda.iter().enumerate() {
        for (k2, &b) in mu.lambda.iter().enumerate() {
            out[k1 ^ k2] += a * b;
        }
    }
    BellDiagonalCoeffs { lambda: out }
}

/// Werner fidelity after one swap: `F1 F2 + (1 − F1)(1 − F2)/3`.
pub fn werner_swap_fidelity(f1: f64, f2: f64) -> f64 {
    f1 * f2 + (1.0 - f1) * (1.0 - f2) / 3.0
}

/// Closed-form `(p'_ij, F'_ij)` for two decomposed states, from the swap
/// statistics of the noise components alone.
pub fn noisy_swap_stats(d1: &NoisyDecomposition, d2: &NoisyDecomposition, outcome: PauliLabel) -> Result<(f64, f64)> {
    let (pt, ft) = swap_stats_raw(d1.sigma.matrix(), d2.sigma.matrix(), outcome);
    let pft = if pt > ZERO_PROBABILITY { pt * ft } else { 0.0 };
    Ok(noisy_swap_formula(d1.p, d1.fidelity, d2.p, d2.fidelity, pt, pft))
}

/// The closed form itself, with `pft = p̃' F̃'`.
pub fn noisy_swap_formula(p1: f64, f1: f64, p2: f64, f2: f64, pt: f64, pft: f64) -> (f64, f64) {
    let q = (1.0 - p1) * (1.0 - p2);
    let den = p1 + p2 - p1 * p2 + 4.0 * q * pt;
    let num = p1 * f2 + p2 * f1 - p1 * p2 + 4.0 * q * pft;
    (den / 4.0, if den > 0.0 { num / den } else { f64::NAN })
}

/// Upper bound `1 − p1(1 − F2) − p2(1 − F1)` on any postselected fidelity.
pub fn swap_upper_bound(p1: f64, f1: f64, p2: f64, f2: f64) -> f64 {
    1.0 - p1 * (1.0 - f2) - p2 * (1.0 - f1)
}

/// Lower bound `(p1 F2 + p2 F1 − p1 p2)/(1 + (1 − p1)(1 − p2))`.
pub fn swap_lower_bound(p1: f64, f1: f64, p2: f64, f2: f64) -> f64 {
    (p1 * f2 + p2 * f1 - p1 * p2) / (1.0 + (1.0 - p1) * (1.0 - p2))
}

/// `ω2` with `F'_ij(ρ1 ⊗ ρ2) = F'_00(ρ1 ⊗ ω2)`: both qubits of `ρ2` rotated
/// by the outcome's Pauli.
pub fn relabel_partner(rho2: &ComplexMatrix, label: PauliLabel) -> ComplexMatrix {
    let u = label.matrix().adjoint();
    let uu = u.kron(&u);
    rho2.conjugate_by(&uu)
}

/// The Pauli channel `σ ↦ Σ λ_ij P_ij σ P_ij†`, which is what teleportation
/// through a resource with Bell coefficients `λ` implements.
pub fn pauli_channel(coeffs: &BellDiagonalCoeffs, input: &ComplexMatrix) -> ComplexMatrix {
    let mut acc = ComplexMatrix::zeros(input.dim());
    for l in PauliLabel::ALL {
        acc = &acc + &input.conjugate_by(&l.matrix()).scale(coeffs.get(l));
    }
    acc
}
