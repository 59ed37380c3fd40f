use thiserror::Error;

pub type Result<T, E = Error> = std::result::Result<T, E>;

#[derive(Debug, Error, Clone, PartialEq)]
pub enum Error {
    #[error("invalid local dimension {d}: must be at least 2")]
    InvalidDimension { d: usize },

    #[error("local Hamiltonian h·Sz with h = 0 is degenerate; energy ordering is undefined")]
    DegenerateLocalHamiltonian,

    #[error("projector rank {rank} out of range 1..={d}")]
    RankOutOfRange { rank: usize, d: usize },

    #[error("site {site} out of range for {sites} subsystems")]
    SiteOutOfRange { site: usize, sites: usize },

    #[error("dimension mismatch: expected {expected}, found {found}")]
    DimensionMismatch { expected: usize, found: usize },

    #[error("partial trace needs at least one kept subsystem")]
    EmptyKeepSet,

    #[error("matrix is not Hermitian (max deviation {deviation:.3e})")]
    NotHermitian { deviation: f64 },

    #[error("matrix is not positive semidefinite (minimum eigenvalue {min_eigenvalue:.3e})")]
    NotPositive { min_eigenvalue: f64 },

    #[error("density matrix trace {trace} differs from 1")]
    InvalidTrace { trace: f64 },

    #[error("invalid parameter `{name}` = {value}: {reason}")]
    InvalidParameter {
        name: &'static str,
        value: f64,
        reason: &'static str,
    },

    #[error("{model} Hamiltonian requires a {expected} layout")]
    WrongTopology {
        model: &'static str,
        expected: &'static str,
    },

    #[error("bath occupancy undefined for temperature {temperature} at frequency {omega}")]
    InvalidOccupancy { temperature: f64, omega: f64 },

    #[error("Lindblad integration lost trace after {elapsed}: drift {drift:.3e}")]
    Integration { elapsed: f64, drift: f64 },

    #[error("post-selected branch died at step {step}: outcome probability {probability:.3e}")]
    Extinction { step: usize, probability: f64 },

    #[error("no closed-form fidelity for d = {d}")]
    UnsupportedDimension { d: usize },

    #[error("{0}")]
    Config(String),

    #[error("eigendecomposition failed: {0}")]
    Decomposition(String),
}
