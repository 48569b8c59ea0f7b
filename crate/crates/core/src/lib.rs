//! Exterior calculus on mapping spaces `F(S, M)` over a discretized
//! compact source manifold `S`.

pub mod convergence;
pub mod error;
pub mod forms;
pub mod grassmannian;
pub mod mapping;
pub mod mechanics;
pub mod random;
pub mod source;
pub mod suites;

pub use error::{Error, Result};
