//! Dense complex linear algebra over labeled qubit registers.

pub mod bell;
pub mod density;
pub mod eigen;
pub mod matrix;
pub mod ops;
pub mod pauli;
pub mod register;

pub use bell::{bell_projector, bell_state, bell_vector, psi00};
pub use density::{
    apply_local, clamp_unit, fidelity_to_pure, min_eigenvalue, partial_trace, partial_transpose, tensor,
    DensityOperator,
};
pub use matrix::{ComplexMatrix, C64};
pub use pauli::PauliLabel;
pub use register::RegisterSet;
