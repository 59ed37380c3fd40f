//! Measurement-based subspace cooling of qudit spin systems.
//!
//! A regulator qudit is coupled to a register of target qudits. The whole
//! system evolves for a time τ, the regulator is measured with a rank-k
//! projector onto its k lowest local energy levels, and only the successful
//! outcome is kept. Repeating this N times drives the targets toward the
//! uniform mixture of their k lowest levels.
//!
//! The crate is organized bottom-up:
//!
//! - [`qudit`]: spin matrices, density matrices, embedding, partial trace, fidelity
//! - [`hamiltonians`]: XXZ, bilinear-biquadratic and spin-star models
//! - [`evolution`]: unitary propagators and Lindblad evolution
//! - [`protocol`]: the repeated measurement loop and its spectral analysis
//! - [`oracles`]: closed-form fidelities for validating the engine

pub mod error;
pub mod evolution;
pub mod hamiltonians;
pub mod linalg;
pub mod oracles;
pub mod protocol;
pub mod qudit;

pub use error::{Error, Result};
pub use evolution::BathSpec;
pub use faer::c64;
pub use hamiltonians::{HamiltonianSpec, SystemLayout, Topology};
pub use protocol::{zeno_run, ProtocolConfig, TrajectoryRecord};
pub use qudit::{DensityMatrix, SpinScale};

/// Version of the engine, recorded in run manifests.
pub const VERSION: &str = env!("CARGO_PKG_VERSION");
