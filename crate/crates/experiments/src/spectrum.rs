//! JSON view of the Zeno-map spectrum.

use qudit_zeno::c64;
use qudit_zeno::protocol::zeno_spectrum;
use qudit_zeno::ProtocolConfig;
use serde::Serialize;

use crate::error::{ExperimentError, Result};
use crate::sweep::SweepSpec;

/// Complex numbers are written as `[re, im]`.
#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct SpectrumReport {
    pub dims: Vec<usize>,
    pub spectral_radius: f64,
    pub dominant: [f64; 2],
    pub degenerate: bool,
    pub target_fidelities: Vec<f64>,
    pub eigenvalues: Vec<[f64; 2]>,
    pub dominant_right: Vec<[f64; 2]>,
    pub dominant_left: Vec<[f64; 2]>,
}

fn pair(z: &c64) -> [f64; 2] {
    [z.re, z.im]
}

pub fn spectrum_report(config: &ProtocolConfig) -> Result<SpectrumReport> {
    let s = zeno_spectrum(config)?;
    Ok(SpectrumReport {
        dims: s.dims.clone(),
        spectral_radius: s.spectral_radius(),
        dominant: pair(&s.dominant()),
        degenerate: s.degenerate,
        target_fidelities: s.target_fidelities(config)?,
        eigenvalues: s.eigenvalues.iter().map(pair).collect(),
        dominant_right: s.dominant_right.iter().map(pair).collect(),
        dominant_left: s.dominant_left.iter().map(pair).collect(),
    })
}

/// Reads a single protocol config, or the base of a sweep document.
pub fn protocol_config_from_json(text: &str) -> Result<ProtocolConfig> {
    let value: serde_json::Value =
        serde_json::from_str(text).map_err(|e| ExperimentError::validation("", e.to_string()))?;
    if value.get("base").is_some() {
        return Ok(SweepSpec::from_json(text)?.base);
    }
    let de = &mut serde_json::Deserializer::from_str(text);
    let config: ProtocolConfig = serde_path_to_error::deserialize(de).map_err(|e| {
        let path = e.path().to_string();
        let path = if path == "." { String::new() } else { path };
        ExperimentError::validation(path, e.into_inner().to_string())
    })?;
    config
        .validate()
        .map_err(|e| ExperimentError::validation("", e.to_string()))?;
    Ok(config)
}
