//! Exact algebra and code construction for iterated space-time block codes.
//!
//! Runs without `std`. Algebra is exact over cyclotomic fields; floating point
//! only appears in complex embeddings and the channel simulator.

#![no_std]

extern crate alloc;

pub mod certificates;
pub mod channel;
pub mod codebook;
pub mod cyclic_algebra;
pub mod cyclotomic;
pub mod decodability;
pub mod error;
pub mod fingerprint;
pub mod iterated;
pub mod linalg;
pub mod presets;
pub mod sampling;
pub mod search;
pub mod skew_poly;
pub mod tower;

pub use cyclic_algebra::{CyclicAlgebra, DElement};
pub use cyclotomic::{Automorphism, CycloElement, CycloField, Rational};
pub use error::{Error, Result};
pub use iterated::{AElement, IteratedAlgebra, Variant};
pub use linalg::Matrix;
pub use tower::TowerSpec;
