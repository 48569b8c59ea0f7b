//! Differential forms on Euclidean charts: scalar coefficient functions,
//! smooth maps, vector fields, and the exterior calculus built on them.

pub mod algebra;
pub mod catalog;
pub mod fiber;
mod form;
mod maps;
mod scalar;

pub use fiber::{fiber_integrate, fiber_integrate_form, integrate, Mixed, ProductForm, SourcePoint};
pub use form::{Fd, Form};
pub use maps::{DiffeoChart, SmoothMap, VectorField, JACOBIAN_STEP};
pub use scalar::{ScalarFn, Term, Wave};
