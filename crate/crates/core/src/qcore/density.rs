use super::eigen::hermitian_eigenvalues;
use super::matrix::{ComplexMatrix, C64};
use super::ops;
use super::register::RegisterSet;
use crate::error::{Error, Result};

pub const HERMITIAN_TOL: f64 = 1e-10;
pub const TRACE_TOL: f64 = 1e-10;
pub const PSD_TOL: f64 = 1e-9;
pub const CLAMP_TOL: f64 = 1e-9;

/// Clamp a probability-like quantity into `[0, 1]` when it is within
/// `CLAMP_TOL` of the interval; anything further out is a bug upstream.
pub fn clamp_unit(x: f64, what: &str) -> Result<f64> {
    if (-CLAMP_TOL..=1.0 + CLAMP_TOL).contains(&x) {
        Ok(x.clamp(0.0, 1.0))
    } else {
        Err(Error::Numerical(format!("{what} = {x} is outside [0, 1]")))
    }
}

/// A validated density operator on a labeled qubit register.
#[derive(Debug, Clone, PartialEq)]
pub struct DensityOperator {
    matrix: ComplexMatrix,
    registers: RegisterSet,
}

impl DensityOperator {
    /// Validates Hermiticity, unit trace and positivity.
    pub fn new(matrix: ComplexMatrix, registers: RegisterSet) -> Result<Self> {
        check_density(&matrix, registers.dim())?;
        Ok(Self { matrix, registers })
    }

    /// Two-qubit state on anonymous registers.
    pub fn two_qubit(matrix: ComplexMatrix) -> Result<Self> {
        Self::new(matrix, RegisterSet::anonymous(2))
    }

    /// Skips validation. For states produced by trusted internal pipelines.
    pub fn from_trusted(matrix: ComplexMatrix, registers: RegisterSet) -> Self {
        debug_assert_eq!(matrix.dim(), registers.dim());
        Self { matrix, registers }
    }

    pub fn from_pure(psi: &[C64], registers: RegisterSet) -> Result<Self> {
        let norm: f64 = psi.iter().map(|z| z.norm_sqr()).sum();
        if (norm - 1.0).abs() > TRACE_TOL {
            return Err(Error::NotDensity(format!("state vector norm² = {norm}")));
        }
        Self::new(ComplexMatrix::projector(psi), registers)
    }

    pub fn matrix(&self) -> &ComplexMatrix {
        &self.matrix
    }

    pub fn into_matrix(self) -> ComplexMatrix {
        self.matrix
    }

    pub fn registers(&self) -> &RegisterSet {
        &self.registers
    }

    pub fn n_qubits(&self) -> usize {
        self.registers.len()
    }

    pub fn dim(&self) -> usize {
        self.matrix.dim()
    }

    pub fn relabel(&self, registers: RegisterSet) -> Result<Self> {
        if registers.len() != self.registers.len() {
            return Err(Error::Dimension { expected: self.registers.len(), got: registers.len() });
        }
        Ok(Self { matrix: self.matrix.clone(), registers })
    }

    pub fn tensor(&self, other: &Self) -> Result<Self> {
        let registers = self.registers.concat(&other.registers)?;
        Ok(Self { matrix: self.matrix.kron(&other.matrix), registers })
    }

    fn positions<S: AsRef<str>>(&self, labels: &[S]) -> Result<Vec<usize>> {
        labels.iter().map(|l| self.registers.index_of(l.as_ref())).collect()
    }

    pub fn partial_trace<S: AsRef<str>>(&self, drop: &[S]) -> Result<Self> {
        let pos = self.positions(drop)?;
        Ok(Self {
            matrix: ops::partial_trace(&self.matrix, self.n_qubits(), &pos),
            registers: self.registers.without(&pos),
        })
    }

    pub fn partial_transpose<S: AsRef<str>>(&self, regs: &[S]) -> Result<ComplexMatrix> {
        let pos = self.positions(regs)?;
        Ok(ops::partial_transpose(&self.matrix, self.n_qubits(), &pos))
    }

    /// Conjugate register `reg` by the 2×2 unitary `u`.
    pub fn apply_local(&self, u: &ComplexMatrix, reg: &str) -> Result<Self> {
        if u.dim() != 2 {
            return Err(Error::Dimension { expected: 2, got: u.dim() });
        }
        if !u.is_unitary(HERMITIAN_TOL) {
            return Err(Error::NotUnitary);
        }
        let q = self.registers.index_of(reg)?;
        Ok(Self {
            matrix: ops::conjugate_local(&self.matrix, self.n_qubits(), q, u),
            registers: self.registers.clone(),
        })
    }

    /// `⟨ψ|ρ|ψ⟩`, clamped into `[0, 1]`.
    pub fn fidelity_to_pure(&self, psi: &[C64]) -> Result<f64> {
        if psi.len() != self.dim() {
            return Err(Error::Dimension { expected: self.dim(), got: psi.len() });
        }
        clamp_unit(self.matrix.expectation(psi).re, "fidelity")
    }

    pub fn min_eigenvalue(&self) -> f64 {
        hermitian_eigenvalues(&self.matrix)[0]
    }
}

pub fn check_density(m: &ComplexMatrix, expected_dim: usize) -> Result<()> {
    if m.dim() != expected_dim {
        return Err(Error::Dimension { expected: expected_dim, got: m.dim() });
    }
    let herm = m.hermiticity_defect();
    if herm > HERMITIAN_TOL {
        return Err(Error::NotDensity(format!("Hermiticity defect {herm:.3e}")));
    }
    let tr = m.trace();
    if (tr.re - 1.0).abs() > TRACE_TOL || tr.im.abs() > TRACE_TOL {
        return Err(Error::NotDensity(format!("trace {tr}")));
    }
    let lo = hermitian_eigenvalues(m)[0];
    if lo < -PSD_TOL {
        return Err(Error::NotDensity(format!("minimum eigenvalue {lo:.3e}")));
    }
    Ok(())
}

/// Smallest eigenvalue of a Hermitian matrix.
pub fn min_eigenvalue(m: &ComplexMatrix) -> Result<f64> {
    let herm = m.hermiticity_defect();
    if herm > HERMITIAN_TOL {
        return Err(Error::NotHermitian(herm));
    }
    Ok(hermitian_eigenvalues(m)[0])
}

/// Free-function forms of the register operations.
pub fn tensor(a: &DensityOperator, b: &DensityOperator) -> Result<DensityOperator> {
    a.tensor(b)
}

pub fn partial_trace<S: AsRef<str>>(rho: &DensityOperator, drop: &[S]) -> Result<DensityOperator> {
    rho.partial_trace(drop)
}

pub fn partial_transpose<S: AsRef<str>>(rho: &DensityOperator, regs: &[S]) -> Result<ComplexMatrix> {
    rho.partial_transpose(regs)
}

pub fn apply_local(rho: &DensityOperator, u: &ComplexMatrix, reg: &str) -> Result<DensityOperator> {
    rho.apply_local(u, reg)
}

pub fn fidelity_to_pure(rho: &DensityOperator, psi: &[C64]) -> Result<f64> {
    rho.fidelity_to_pure(psi)
}
