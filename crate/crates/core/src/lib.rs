//! Reductions from Label Cover to sparse approximation over dictionaries of
//! provably small coherence, with the tools needed to check them at desk scale.
//!
//! * [`vector_systems`]: Hadamard codewords and incoherent vector systems.
//! * [`label_cover`]: two-layered and multilayered Label Cover instances.
//! * [`reduction`]: the three dictionary constructions, exact coherence and
//!   coverage analytics.
//! * [`solvers`]: OMP, OLS, restricted least squares and an exhaustive oracle.
//!
//! Combinatorial claims (dot products, coverage, satisfied fractions) are
//! decided in exact rational arithmetic; least-squares work runs in `f64`.
//! The guide under `book/` walks through each construction with runnable
//! examples.

pub mod error;
pub mod exact;
pub mod label_cover;
pub mod limits;
pub mod reduction;
pub mod solvers;
pub mod vector_systems;

pub use error::{Error, Result};
pub use exact::{Exact, ScaledIndicator};
pub use limits::Limits;

#[cfg(doctest)]
mod book {
    #[doc = include_str!("../../../book/src/introduction.md")]
    mod introduction {}
    #[doc = include_str!("../../../book/src/vector-systems.md")]
    mod vector_systems {}
    #[doc = include_str!("../../../book/src/label-cover.md")]
    mod label_cover {}
    #[doc = include_str!("../../../book/src/reductions.md")]
    mod reductions {}
    #[doc = include_str!("../../../book/src/coherence.md")]
    mod coherence {}
    #[doc = include_str!("../../../book/src/solvers.md")]
    mod solvers {}
    #[doc = include_str!("../../../book/src/harness.md")]
    mod harness {}
}
