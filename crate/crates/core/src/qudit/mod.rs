//! Single-qudit algebra and multi-qudit state utilities.

pub mod fidelity;
pub mod spin;
pub mod state;
pub mod tensor;

pub use fidelity::{fidelity_with_uniform_mixture, uhlmann_fidelity, uhlmann_fidelity_matrix};
pub use spin::{local_energy_eigenbasis, LocalBasis, SpinOperators, SpinScale};
pub use state::{
    low_lying_mixture, low_lying_mixture_in, tensor_all, tensor_product, thermal_state, thermal_state_scaled,
    DensityMatrix,
};
pub use tensor::{embed_adjacent, embed_operator, embed_product, partial_trace, partial_trace_matrix};
