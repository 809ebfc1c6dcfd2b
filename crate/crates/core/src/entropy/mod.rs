//! Rényi entropies, the sandwiched divergence and conditional entropies of cq states.

mod conditional;
mod order;
mod renyi;

pub use conditional::{
    cq_divergence_beta, cq_divergence_numeric, cq_down_entropy_closed, cq_down_entropy_numeric,
    cq_up_entropy_bounds, cq_up_entropy_closed, petz_conditional_entropy, tilted_distribution,
};
pub use order::{EntropyFamily, RenyiOrder, LIMIT_SNAP};
pub use renyi::{renyi_entropy, sandwiched_divergence};
