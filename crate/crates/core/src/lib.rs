//! Teleportation of superposed coherent states (cat-state qubits) over
//! entangled coherent channels of arbitrary entanglement.
//!
//! - [`cat_algebra`]: coherent overlaps and the even/odd cat basis.
//! - [`ecs`]: the channel state, its qubit amplitudes and concurrence.
//! - [`protocol`]: closed-form branch decomposition and average fidelity.
//! - [`fock_oracle`]: an independent truncated Fock-space simulation.
//! - [`analysis`]: worst-case fidelity optimization and sweep data.
//! - [`verify`]: seeded cross-validation suites.

pub mod analysis;
pub mod cat_algebra;
pub mod ecs;
pub mod error;
pub mod fock_oracle;
pub mod format;
pub mod protocol;
pub mod verify;

pub use cat_algebra::{CatQubit, CoherentAlpha, ComplexAmp, ScsCoefficients};
pub use ecs::EcsParams;
pub use error::{Error, Result};
pub use protocol::{OutcomeLabel, StrategyId};
