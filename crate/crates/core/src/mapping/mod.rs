//! The discretized mapping space `F(S, M)`: map points and tangents, the hat
//! pairing, group actions and their generators, and exterior calculus.

pub mod actions;
pub mod calculus;
mod form;
pub mod hat;
mod point;

pub use actions::{
    field_m, field_s, generator_m, generator_s, pull_by_restriction, pull_by_source_diffeo, pull_by_target_map,
    pullback_action, pushforward_action, restrict_boundary, restrict_tangent, transport_tangent,
};
pub use calculus::{gram_matrix, lie_flow_m, lie_flow_s, map_space_d, map_space_interior, map_space_lie, numerical_rank};
pub use form::{MapField, MapSpaceForm};
pub use hat::{bar_direct, bar_map, hat_map, hat_pairing, hat_pairing_fiber};
pub use point::{MapPoint, MapTangent, Target};
