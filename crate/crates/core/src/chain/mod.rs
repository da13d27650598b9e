//! Repeater chains of `N` links.

pub mod distribution;
pub mod protocol;
pub mod sim;

pub use distribution::{outcome_distribution, outcome_distribution_links, OutcomeDistribution, OutcomeEntry};
pub use protocol::{
    builtin_protocol, random_protocol, validate_protocol, BuiltinProtocol, CorrectionRule, SwapAndCorrectProtocol,
    Syndrome, ValidationReport,
};
pub use sim::{
    bd_chain, chain_fidelity_bounds, perfect_links_check, run_chain_nonpostselected, run_chain_postselected,
    werner_chain_fidelity,
};
