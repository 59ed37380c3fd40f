//! Repeated evolution and post-selected measurement of the regulator.

pub mod config;
pub mod delta_p;
pub mod run;
pub mod spectrum;

pub use config::{Projector, ProtocolConfig};
pub use delta_p::{delta_p, delta_p_series, DeltaPMode};
pub use run::{
    apply_measurement, success_probability_direct, zeno_run, zeno_run_with, Extinction, RunOptions, StepRecord,
    TrajectoryRecord, ZenoEngine, EXTINCTION_THRESHOLD,
};
pub use spectrum::{zeno_spectrum, ZenoSpectrum};
