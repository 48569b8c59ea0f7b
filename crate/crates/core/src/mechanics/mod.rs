//! Momentum maps and cocycles of hamiltonian actions on mapping spaces,
//! the Lichnerowicz cocycle, twisted brane forms and the fluid dual pair.

pub mod branes;
pub mod diffex;
pub mod dualpair;
pub mod hamiltonian;
pub mod lichnerowicz;

pub use branes::{brane_catalog, brane_twist_check, AffineSubspace, BraneCase, BraneGates, BraneOutcome};
pub use diffex::{
    cocycle_diffex, cocycle_diffex_defining, momentum_diffex, momentum_residual_diffex, stream_field, DiffexMomentum,
};
pub use dualpair::{dual_pair_demo, r4_system, DualPairReport, DualPairSample};
pub use hamiltonian::{HamiltonianField, HamiltonianSystem, LiftedGAction};
pub use lichnerowicz::lichnerowicz;
