//! Entanglement swapping on repeater chains: exact postselected simulation,
//! Bell-diagonal and Werner twirling approximations, fidelity bounds (closed
//! form and PPT-relaxed SDP), and BBM92 key rates.

pub mod bounds;
pub mod chain;
pub mod cli;
pub mod error;
pub mod qcore;
pub mod qkd;
pub mod sdp;
pub mod states;
pub mod swap;
pub mod verify;

pub use error::{Error, Result};
