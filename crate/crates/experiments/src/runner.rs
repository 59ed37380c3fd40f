//! Parallel execution of grid points and emission of results.

use std::fs;
use std::path::{Path, PathBuf};

use qudit_zeno::evolution::SpectralHamiltonian;
use qudit_zeno::protocol::{RunOptions, TrajectoryRecord, ZenoEngine};
use qudit_zeno::{HamiltonianSpec, ProtocolConfig, SystemLayout};
use rayon::prelude::*;
use serde::Serialize;

use crate::error::{ExperimentError, Result};
use crate::rows::{write_rows, ResultRow, COLUMNS};
use crate::sweep::{plan, GridPoint, SweepSpec};

#[derive(Clone, Copy, Debug, PartialEq, Serialize)]
pub struct ExtinctionEvent {
    pub grid_index: usize,
    pub step: usize,
    pub probability: f64,
}

#[derive(Clone, Debug, PartialEq)]
pub struct PointResult {
    pub index: usize,
    pub rows: Vec<ResultRow>,
    pub extinction: Option<ExtinctionEvent>,
    /// Largest trace error of a single evolution interval; zero when closed.
    pub max_trace_drift: f64,
}

/// A finished sweep: the resolved grid and one result per point, in grid order.
#[derive(Clone, Debug)]
pub struct SweepRun {
    pub preset_id: String,
    pub sweeps: Vec<SweepSpec>,
    pub points: Vec<GridPoint>,
    pub results: Vec<PointResult>,
}

impl SweepRun {
    pub fn rows(&self) -> impl Iterator<Item = &ResultRow> {
        self.results.iter().flat_map(|r| &r.rows)
    }

    pub fn row_count(&self) -> usize {
        self.results.iter().map(|r| r.rows.len()).sum()
    }

    pub fn extinctions(&self) -> Vec<ExtinctionEvent> {
        self.results.iter().filter_map(|r| r.extinction).collect()
    }

    pub fn max_trace_drift(&self) -> f64 {
        self.results.iter().map(|r| r.max_trace_drift).fold(0.0, f64::max)
    }

    pub fn csv_bytes(&self) -> Result<Vec<u8>> {
        let rows: Vec<ResultRow> = self.rows().cloned().collect();
        let mut buf = Vec::new();
        write_rows(&mut buf, &rows)?;
        Ok(buf)
    }

    pub fn manifest(&self, csv_name: &str, derived: &[String]) -> Manifest {
        Manifest {
            engine: "qudit-zeno",
            engine_version: qudit_zeno::VERSION,
            harness_version: env!("CARGO_PKG_VERSION"),
            preset_id: self.preset_id.clone(),
            csv: csv_name.to_string(),
            columns: COLUMNS.to_vec(),
            row_count: self.row_count(),
            sweeps: self.sweeps.clone(),
            points: self
                .points
                .iter()
                .map(|p| ManifestPoint {
                    grid_index: p.index,
                    panel: p.panel,
                    jtau: p.jtau,
                    recorded_steps: p.record_steps.clone(),
                    config: p.config.clone(),
                })
                .collect(),
            extinctions: self.extinctions(),
            derived: derived.to_vec(),
        }
    }

    /// Writes `<id>.csv`, `<id>.manifest.json` and any derived tables into `dir`.
    pub fn write(&self, dir: &Path, derived: &[(String, Vec<u8>)]) -> Result<Artifacts> {
        fs::create_dir_all(dir).map_err(|e| ExperimentError::io(dir, e))?;
        let csv_name = format!("{}.csv", self.preset_id);
        let csv = dir.join(&csv_name);
        fs::write(&csv, self.csv_bytes()?).map_err(|e| ExperimentError::io(&csv, e))?;
        let mut extra = Vec::new();
        for (name, bytes) in derived {
            let path = dir.join(name);
            fs::write(&path, bytes).map_err(|e| ExperimentError::io(&path, e))?;
            extra.push(path);
        }
        let names: Vec<String> = derived.iter().map(|(n, _)| n.clone()).collect();
        let manifest = dir.join(format!("{}.manifest.json", self.preset_id));
        let mut text = serde_json::to_string_pretty(&self.manifest(&csv_name, &names))?;
        text.push('\n');
        fs::write(&manifest, text).map_err(|e| ExperimentError::io(&manifest, e))?;
        Ok(Artifacts {
            csv,
            manifest,
            derived: extra,
            rows: self.row_count(),
        })
    }
}

#[derive(Clone, Debug)]
pub struct Artifacts {
    pub csv: PathBuf,
    pub manifest: PathBuf,
    pub derived: Vec<PathBuf>,
    pub rows: usize,
}

/// Sidecar describing how a results file was produced.
#[derive(Clone, Debug, Serialize)]
pub struct Manifest {
    pub engine: &'static str,
    pub engine_version: &'static str,
    pub harness_version: &'static str,
    pub preset_id: String,
    pub csv: String,
    pub columns: Vec<&'static str>,
    pub row_count: usize,
    pub sweeps: Vec<SweepSpec>,
    pub points: Vec<ManifestPoint>,
    pub extinctions: Vec<ExtinctionEvent>,
    pub derived: Vec<String>,
}

#[derive(Clone, Debug, Serialize)]
pub struct ManifestPoint {
    pub grid_index: usize,
    pub panel: usize,
    #[serde(rename = "Jtau", skip_serializing_if = "Option::is_none")]
    pub jtau: Option<f64>,
    pub recorded_steps: Vec<usize>,
    pub config: ProtocolConfig,
}

/// Expands and runs a set of sweeps as one plan.
///
/// `workers` bounds the thread count; `None` uses every available core.
/// Results are identical for any worker count.
pub fn run_sweeps(preset_id: &str, sweeps: &[SweepSpec], workers: Option<usize>) -> Result<SweepRun> {
    let points = plan(sweeps)?;
    let results = run_points(preset_id, &points, workers)?;
    Ok(SweepRun {
        preset_id: preset_id.to_string(),
        sweeps: sweeps.to_vec(),
        points,
        results,
    })
}

pub fn run_points(preset_id: &str, points: &[GridPoint], workers: Option<usize>) -> Result<Vec<PointResult>> {
    if workers == Some(0) {
        return Err(ExperimentError::validation("workers", "need at least one worker"));
    }
    let pool = rayon::ThreadPoolBuilder::new()
        .num_threads(workers.unwrap_or(0))
        .build()
        .map_err(|e| ExperimentError::Pool(e.to_string()))?;
    pool.install(|| {
        // closed points sharing a Hamiltonian share its eigendecomposition
        let keys = unique_hamiltonians(points);
        let spectra: Vec<SpectralHamiltonian> = keys
            .par_iter()
            .map(|(index, layout, h)| {
                let m = h
                    .build(layout)
                    .map_err(|source| ExperimentError::Engine { index: *index, source })?;
                SpectralHamiltonian::new(m.as_ref()).map_err(|source| ExperimentError::Engine { index: *index, source })
            })
            .collect::<Result<_>>()?;
        points
            .par_iter()
            .map(|p| {
                let spectral = (!p.config.is_open())
                    .then(|| {
                        keys.iter()
                            .position(|(_, l, h)| *l == p.config.layout && *h == p.config.hamiltonian)
                    })
                    .flatten()
                    .map(|i| &spectra[i]);
                run_point(preset_id, p, spectral)
            })
            .collect()
    })
}

fn unique_hamiltonians(points: &[GridPoint]) -> Vec<(usize, SystemLayout, HamiltonianSpec)> {
    let mut keys: Vec<(usize, SystemLayout, HamiltonianSpec)> = Vec::new();
    for p in points.iter().filter(|p| !p.config.is_open()) {
        let (l, h) = (p.config.layout, p.config.hamiltonian);
        if !keys.iter().any(|(_, kl, kh)| *kl == l && *kh == h) {
            keys.push((p.index, l, h));
        }
    }
    keys
}

/// Runs one grid point and converts its trajectory to rows.
pub fn run_point(preset_id: &str, point: &GridPoint, spectral: Option<&SpectralHamiltonian>) -> Result<PointResult> {
    let engine_err = |source| ExperimentError::Engine {
        index: point.index,
        source,
    };
    let engine = match spectral {
        Some(s) => ZenoEngine::with_spectral(&point.config, s, RunOptions::default()),
        None => ZenoEngine::new(&point.config, RunOptions::default()),
    }
    .map_err(engine_err)?;
    let record = engine.run(false).map_err(engine_err)?;
    Ok(to_rows(preset_id, point, &record))
}

fn to_rows(preset_id: &str, point: &GridPoint, record: &TrajectoryRecord) -> PointResult {
    let c = &point.config;
    let template = ResultRow {
        preset_id: preset_id.to_string(),
        topology: c.layout.topology.name().to_string(),
        model: c.hamiltonian.name().to_string(),
        d: c.layout.d,
        l: c.layout.targets,
        k: c.rank,
        j: c.hamiltonian.coupling(),
        delta_or_theta: c.hamiltonian.anisotropy_or_angle(),
        tau: c.tau,
        n_step: 0,
        site: 0,
        fidelity: None,
        step_probability: 0.0,
        cum_probability: 0.0,
        log_cum_probability: 0.0,
        extinct: false,
        grid_index: point.index,
    };
    let mut rows = Vec::new();
    for &n in &point.record_steps {
        let Some(r) = record.records.get(n) else { break };
        for (i, f) in r.fidelities.iter().enumerate() {
            rows.push(ResultRow {
                n_step: n,
                site: i + 1,
                fidelity: Some(*f),
                step_probability: r.step_probability,
                cum_probability: r.cumulative_probability,
                log_cum_probability: r.log_cumulative_probability,
                ..template.clone()
            });
        }
    }
    let extinction = record.extinction.map(|e| {
        let last = record.last();
        for site in 1..=c.layout.targets {
            rows.push(ResultRow {
                n_step: e.step,
                site,
                step_probability: e.probability,
                cum_probability: last.cumulative_probability * e.probability,
                log_cum_probability: last.log_cumulative_probability + e.probability.ln(),
                extinct: true,
                ..template.clone()
            });
        }
        ExtinctionEvent {
            grid_index: point.index,
            step: e.step,
            probability: e.probability,
        }
    });
    PointResult {
        index: point.index,
        rows,
        extinction,
        max_trace_drift: record.max_trace_drift(),
    }
}

#[cfg(test)]
mod tests {
    use qudit_zeno::protocol::{Extinction, StepRecord};

    use super::*;
    use crate::sweep::SweepSpec;

    fn step(n: usize, p: f64, cum: f64) -> StepRecord {
        StepRecord {
            step: n,
            fidelities: vec![0.5, 0.25],
            step_probability: p,
            cumulative_probability: cum,
            log_cumulative_probability: cum.ln(),
            trace_drift: 0.0,
        }
    }

    #[test]
    fn extinction_adds_one_row_per_target() {
        let base = ProtocolConfig::new(SystemLayout::chain(2, 3), HamiltonianSpec::xx(1.0, 1.0), 1.0, 5, 1);
        let point = SweepSpec::new(base).expand().unwrap().remove(0);
        let record = TrajectoryRecord {
            records: vec![step(0, 1.0, 1.0), step(1, 0.5, 0.5), step(2, 0.5, 0.25)],
            extinction: Some(Extinction {
                step: 3,
                probability: 1e-20,
            }),
            final_state: None,
        };
        let result = to_rows("t", &point, &record);
        assert_eq!(result.rows.len(), 2 * 2 + 2);
        let tail = &result.rows[4..];
        assert!(tail.iter().all(|r| r.extinct && r.fidelity.is_none() && r.n_step == 3));
        assert_eq!(tail.iter().map(|r| r.site).collect::<Vec<_>>(), vec![1, 2]);
        assert_eq!(tail[0].cum_probability, 0.25 * 1e-20);
        assert_eq!(
            result.extinction,
            Some(ExtinctionEvent {
                grid_index: 0,
                step: 3,
                probability: 1e-20
            })
        );
    }

    #[test]
    fn zero_workers_is_rejected() {
        let point = SweepSpec::new(ProtocolConfig::xx_single(2, 1.0, 2, 1))
            .expand()
            .unwrap();
        assert!(run_points("t", &point, Some(0)).is_err());
    }
}
