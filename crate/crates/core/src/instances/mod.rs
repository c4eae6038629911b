//! Instance generators: standard graph families, covering set systems, the
//! orthogonal-vectors reduction graph, and an adaptive-correlation demo.

mod adversarial;
mod covering;
mod families;
mod ov;

pub use adversarial::{adversarial_correlation_demo, DemoReport};
pub use covering::{covering_set_system, is_prime, CoverCheck, CoveringSetSystem};
pub use families::{generate, Family};
pub use ov::{
    has_orthogonal_pair, ov_decide, ov_reduction_graph, random_ov_vectors, OvDecision, OvInstance,
};
