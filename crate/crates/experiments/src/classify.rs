//! Detection of Jτ values where no number of measurements cools the target.

use std::collections::HashSet;

use serde::Serialize;

use crate::error::{ExperimentError, Result};
use crate::rows::ResultRow;

pub const DEFAULT_THRESHOLD: f64 = 0.96;

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct JtauSummary {
    #[serde(rename = "Jtau")]
    pub jtau: f64,
    pub max_fidelity: f64,
    /// Smallest N reaching `max_fidelity`.
    pub best_step: usize,
    pub perfect: bool,
}

/// One (Jτ × N) grid: all rows sharing everything but τ and N.
#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct PanelSummary {
    pub preset_id: String,
    pub topology: String,
    pub model: String,
    pub d: usize,
    #[serde(rename = "L")]
    pub l: usize,
    pub k: usize,
    #[serde(rename = "J")]
    pub j: f64,
    #[serde(rename = "Delta_or_theta")]
    pub delta_or_theta: f64,
    pub site: usize,
    pub threshold: f64,
    pub columns: Vec<JtauSummary>,
    /// Jτ values whose best fidelity over N stays at or below the threshold.
    pub imperfect: Vec<f64>,
}

impl PanelSummary {
    fn matches(&self, r: &ResultRow) -> bool {
        self.preset_id == r.preset_id
            && self.topology == r.topology
            && self.model == r.model
            && self.d == r.d
            && self.l == r.l
            && self.k == r.k
            && self.j.to_bits() == r.j.to_bits()
            && self.delta_or_theta.to_bits() == r.delta_or_theta.to_bits()
            && self.site == r.site
    }

    /// Whether some imperfect Jτ lies within `radius` of `jtau`.
    pub fn flags_near(&self, jtau: f64, radius: f64) -> bool {
        self.imperfect.iter().any(|x| (x - jtau).abs() <= radius)
    }
}

/// Groups rows into panels in order of first appearance and classifies every
/// Jτ column. Extinct rows carry no fidelity and are skipped; panels with a
/// single Jτ value are dropped.
pub fn classify_regions(rows: &[ResultRow], threshold: f64) -> Result<Vec<PanelSummary>> {
    if threshold.is_nan() {
        return Err(ExperimentError::validation("threshold", "must be a number"));
    }
    let mut panels: Vec<PanelSummary> = Vec::new();
    let mut seen: Vec<HashSet<(u64, usize)>> = Vec::new();
    for r in rows.iter().filter(|r| !r.extinct) {
        let Some(f) = r.fidelity else { continue };
        let p = match panels.iter().position(|p| p.matches(r)) {
            Some(p) => p,
            None => {
                panels.push(PanelSummary {
                    preset_id: r.preset_id.clone(),
                    topology: r.topology.clone(),
                    model: r.model.clone(),
                    d: r.d,
                    l: r.l,
                    k: r.k,
                    j: r.j,
                    delta_or_theta: r.delta_or_theta,
                    site: r.site,
                    threshold,
                    columns: Vec::new(),
                    imperfect: Vec::new(),
                });
                seen.push(HashSet::new());
                panels.len() - 1
            }
        };
        let jtau = r.jtau();
        let key = (jtau.to_bits(), r.n_step);
        if !seen[p].insert(key) {
            return Err(ExperimentError::validation(
                "rows",
                format!("not a grid: Jτ = {jtau} and N = {} appear twice in one panel", r.n_step),
            ));
        }
        let panel = &mut panels[p];
        match panel.columns.iter_mut().find(|c| c.jtau.to_bits() == jtau.to_bits()) {
            Some(c) => {
                if f > c.max_fidelity {
                    c.max_fidelity = f;
                    c.best_step = r.n_step;
                }
            }
            None => panel.columns.push(JtauSummary {
                jtau,
                max_fidelity: f,
                best_step: r.n_step,
                perfect: false,
            }),
        }
    }
    // a θ scan at fixed Jτ yields one column per panel and has nothing to classify
    panels.retain(|p| p.columns.len() > 1);
    if panels.is_empty() {
        return Err(ExperimentError::validation(
            "rows",
            "not a (Jτ × N) grid: no panel has two Jτ values",
        ));
    }
    for panel in &mut panels {
        for c in &mut panel.columns {
            c.perfect = c.max_fidelity > threshold;
        }
        panel.imperfect = panel.columns.iter().filter(|c| !c.perfect).map(|c| c.jtau).collect();
    }
    Ok(panels)
}
