//! The Bell basis `|Ψ_ij⟩ = (I ⊗ X^i Z^j)(|00⟩ + |11⟩)/√2`, Pauli on the second qubit.

use std::f64::consts::FRAC_1_SQRT_2;

use super::matrix::{ComplexMatrix, C64, ZERO};
use super::pauli::PauliLabel;

pub fn bell_state(i: u8, j: u8) -> [C64; 4] {
    bell_vector(PauliLabel::new(i, j))
}

pub fn bell_vector(label: PauliLabel) -> [C64; 4] {
    let phi = [C64::new(FRAC_1_SQRT_2, 0.0), ZERO, ZERO, C64::new(FRAC_1_SQRT_2, 0.0)];
    let p = label.matrix();
    // (I ⊗ P)|Φ⟩: amplitude index 2a + b, P acts on b
    let mut out = [ZERO; 4];
    for a in 0..2 {
        for b in 0..2 {
            out[2 * a + b] = (0..2).map(|c| p[(b, c)] * phi[2 * a + c]).sum();
        }
    }
    out
}

pub fn bell_projector(label: PauliLabel) -> ComplexMatrix {
    ComplexMatrix::projector(&bell_vector(label))
}

/// `|Ψ_00⟩`
pub fn psi00() -> [C64; 4] {
    bell_state(0, 0)
}

/// The 4×4 unitary whose column `k` is `|Ψ_k⟩`.
pub fn bell_basis_change() -> ComplexMatrix {
    let cols: Vec<[C64; 4]> = PauliLabel::ALL.iter().map(|&l| bell_vector(l)).collect();
    ComplexMatrix::from_fn(4, |r, c| cols[c][r])
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn psi11_amplitudes() {
        let v = bell_state(1, 1);
        let s = FRAC_1_SQRT_2;
        let expect = [0.0, s, -s, 0.0];
        for (a, e) in v.iter().zip(expect) {
            assert!((a - C64::new(e, 0.0)).norm() < 1e-15);
        }
    }

    #[test]
    fn orthonormal() {
        let u = bell_basis_change();
        assert!(u.adjoint().matmul(&u).max_abs_diff(&ComplexMatrix::identity(4)) < 1e-14);
    }
}
