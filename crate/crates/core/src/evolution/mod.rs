//! Dynamics between measurements: closed-system propagators and the local
//! Lindblad master equation.

pub mod lindblad;
pub mod propagator;

pub use lindblad::{
    dissipator, lindblad_evolve, liouvillian, occupancy, BathSpec, Channels, LindbladPropagator, SUPEROPERATOR_MAX_DIM,
};
pub use propagator::{propagator, Propagator, SpectralHamiltonian};
