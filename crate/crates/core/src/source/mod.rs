//! Discretized source manifolds `S`: circle, flat 2-torus and the unit
//! interval, with quadrature, differentiation, resampling and boundaries.

mod domain;
mod fields;
pub mod poisson;
pub mod spectral;

pub use domain::{Boundary, DomainKind, SourceDomain};
pub use fields::{NodalForm, SourceForm, SourceVectorField};
pub use poisson::{
    divergence, exact_divfree_field, exactness_residual, gradient, projection_p, right_inverse_b, OneForm,
    EXACTNESS_THRESHOLD,
};
