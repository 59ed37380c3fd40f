//! Sweep configuration and its expansion into grid points.
//!
//! A sweep is a base [`ProtocolConfig`] plus optional axes. Each axis
//! replaces one field of the base; the grid is their Cartesian product,
//! nested as d, Delta, theta, k, Jtau (outermost first). The `N` axis does
//! not multiply the grid: every point runs to the largest listed N and only
//! the listed steps are written out.

use std::path::PathBuf;

use qudit_zeno::{Error as CoreError, HamiltonianSpec, ProtocolConfig};
use serde::{Deserialize, Serialize};

use crate::error::{ExperimentError, Result};

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct Linspace {
    pub start: f64,
    pub stop: f64,
    pub count: usize,
}

/// Real-valued axis: explicit values or evenly spaced points, endpoints included.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(untagged)]
pub enum RealAxis {
    Values(Vec<f64>),
    Linspace { linspace: Linspace },
}

impl RealAxis {
    pub fn linspace(start: f64, stop: f64, count: usize) -> Self {
        RealAxis::Linspace {
            linspace: Linspace { start, stop, count },
        }
    }

    pub fn values(&self) -> Vec<f64> {
        match self {
            RealAxis::Values(v) => v.clone(),
            RealAxis::Linspace { linspace: l } => match l.count {
                0 => Vec::new(),
                1 => vec![l.start],
                n => (0..n)
                    .map(|i| l.start + (l.stop - l.start) * i as f64 / (n - 1) as f64)
                    .collect(),
            },
        }
    }
}

/// Integer axis: explicit values or an inclusive range `[first, last]`.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(untagged)]
pub enum IntAxis {
    Values(Vec<usize>),
    Range { range: [usize; 2] },
}

impl IntAxis {
    pub fn range(first: usize, last: usize) -> Self {
        IntAxis::Range { range: [first, last] }
    }

    pub fn values(&self) -> Vec<usize> {
        match self {
            IntAxis::Values(v) => v.clone(),
            IntAxis::Range { range: [a, b] } => (*a..=*b).collect(),
        }
    }
}

#[derive(Clone, Debug, Default, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct Axes {
    /// Coupling times interval; sets τ = Jτ / J.
    #[serde(rename = "Jtau", default, skip_serializing_if = "Option::is_none")]
    pub jtau: Option<RealAxis>,
    /// Recorded measurement counts.
    #[serde(rename = "N", default, skip_serializing_if = "Option::is_none")]
    pub steps: Option<IntAxis>,
    /// BBH angle.
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub theta: Option<RealAxis>,
    /// XXZ anisotropy.
    #[serde(rename = "Delta", default, skip_serializing_if = "Option::is_none")]
    pub delta: Option<RealAxis>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub d: Option<IntAxis>,
    /// Projector rank; the regulator preparation follows unless the base fixes it.
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub k: Option<IntAxis>,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct SweepSpec {
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub preset_id: Option<String>,
    pub base: ProtocolConfig,
    #[serde(default)]
    pub axes: Axes,
    /// Output directory; the command line takes precedence.
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub outputs: Option<PathBuf>,
}

/// One fully resolved run of a sweep.
#[derive(Clone, Debug, PartialEq)]
pub struct GridPoint {
    pub index: usize,
    /// Position of the owning sweep within a multi-panel plan.
    pub panel: usize,
    pub jtau: Option<f64>,
    pub config: ProtocolConfig,
    /// Steps written to the output, ascending, all ≤ `config.steps`.
    pub record_steps: Vec<usize>,
}

impl SweepSpec {
    pub fn new(base: ProtocolConfig) -> Self {
        Self {
            preset_id: None,
            base,
            axes: Axes::default(),
            outputs: None,
        }
    }

    /// Parses JSON, reporting the field path of the first schema violation.
    pub fn from_json(text: &str) -> Result<Self> {
        let de = &mut serde_json::Deserializer::from_str(text);
        let spec: SweepSpec = serde_path_to_error::deserialize(de).map_err(|e| {
            let path = e.path().to_string();
            let path = if path == "." { String::new() } else { path };
            ExperimentError::validation(path, e.into_inner().to_string())
        })?;
        spec.expand()?;
        Ok(spec)
    }

    pub fn id(&self) -> &str {
        self.preset_id.as_deref().unwrap_or("custom")
    }

    /// Grid points in output order, indexed from zero.
    pub fn expand(&self) -> Result<Vec<GridPoint>> {
        let axes = &self.axes;
        let ds = axis_ints(&axes.d, "axes.d", self.base.layout.d)?;
        let ks = axis_ints(&axes.k, "axes.k", self.base.rank)?;
        let deltas = axis_reals(&axes.delta, "axes.Delta")?;
        let thetas = axis_reals(&axes.theta, "axes.theta")?;
        let jtaus = axis_reals(&axes.jtau, "axes.Jtau")?;

        match (&self.base.hamiltonian, deltas.is_some(), thetas.is_some()) {
            (HamiltonianSpec::Xxz { .. }, _, true) => {
                return Err(ExperimentError::validation(
                    "axes.theta",
                    "theta applies only to the bbh model",
                ))
            }
            (HamiltonianSpec::Bbh { .. }, true, _) => {
                return Err(ExperimentError::validation(
                    "axes.Delta",
                    "Delta applies only to the xxz model",
                ))
            }
            (HamiltonianSpec::SpinStar { .. }, true, _) => {
                return Err(ExperimentError::validation(
                    "axes.Delta",
                    "Delta applies only to the xxz model",
                ))
            }
            (HamiltonianSpec::SpinStar { .. }, _, true) => {
                return Err(ExperimentError::validation(
                    "axes.theta",
                    "theta applies only to the bbh model",
                ))
            }
            _ => {}
        }

        let j = self.base.hamiltonian.coupling();
        if jtaus.is_some() && (j == 0.0 || !j.is_finite()) {
            return Err(ExperimentError::validation(
                "base.hamiltonian.J",
                "a Jtau axis needs a finite nonzero coupling",
            ));
        }

        let record_steps = match &axes.steps {
            None => (1..=self.base.steps).collect(),
            Some(axis) => {
                let mut v = axis.values();
                if v.is_empty() {
                    return Err(ExperimentError::validation("axes.N", "grid axis is empty"));
                }
                if v.contains(&0) {
                    return Err(ExperimentError::validation("axes.N", "recorded steps start at 1"));
                }
                v.sort_unstable();
                v.dedup();
                v
            }
        };
        let steps = match axes.steps {
            Some(_) => record_steps[record_steps.len() - 1],
            None => self.base.steps,
        };

        let single = |v: Option<Vec<f64>>| {
            v.map(|v| v.into_iter().map(Some).collect())
                .unwrap_or_else(|| vec![None])
        };
        let deltas = single(deltas);
        let thetas = single(thetas);
        let jtaus = single(jtaus);

        let mut points = Vec::with_capacity(ds.len() * deltas.len() * thetas.len() * ks.len() * jtaus.len());
        for &d in &ds {
            for &delta in &deltas {
                for &theta in &thetas {
                    for &k in &ks {
                        for &jtau in &jtaus {
                            let mut config = self.base.clone();
                            config.layout.d = d;
                            config.rank = k;
                            config.steps = steps;
                            match (&mut config.hamiltonian, delta, theta) {
                                (HamiltonianSpec::Xxz { delta: dl, .. }, Some(x), _) => *dl = x,
                                (HamiltonianSpec::Bbh { theta: th, .. }, _, Some(x)) => *th = x,
                                _ => {}
                            }
                            if let Some(x) = jtau {
                                config.tau = x / j;
                            }
                            let index = points.len();
                            config.validate().map_err(|e| point_error(index, &e, axes))?;
                            points.push(GridPoint {
                                index,
                                panel: 0,
                                jtau,
                                config,
                                record_steps: record_steps.clone(),
                            });
                        }
                    }
                }
            }
        }
        Ok(points)
    }
}

/// Concatenates the grids of several sweeps with continuous indices.
pub fn plan(sweeps: &[SweepSpec]) -> Result<Vec<GridPoint>> {
    let mut all = Vec::new();
    for (panel, sweep) in sweeps.iter().enumerate() {
        for mut p in sweep.expand()? {
            p.index = all.len();
            p.panel = panel;
            all.push(p);
        }
    }
    if all.is_empty() {
        return Err(ExperimentError::validation("", "the sweep has no grid points"));
    }
    Ok(all)
}

fn axis_ints(axis: &Option<IntAxis>, path: &str, base: usize) -> Result<Vec<usize>> {
    match axis {
        None => Ok(vec![base]),
        Some(a) => {
            let v = a.values();
            if v.is_empty() {
                return Err(ExperimentError::validation(path, "grid axis is empty"));
            }
            Ok(v)
        }
    }
}

fn axis_reals(axis: &Option<RealAxis>, path: &str) -> Result<Option<Vec<f64>>> {
    match axis {
        None => Ok(None),
        Some(a) => {
            let v = a.values();
            if v.is_empty() {
                return Err(ExperimentError::validation(path, "grid axis is empty"));
            }
            if let Some(x) = v.iter().find(|x| !x.is_finite()) {
                return Err(ExperimentError::validation(path, format!("non-finite value {x}")));
            }
            Ok(Some(v))
        }
    }
}

/// Locates an engine validation failure in the sweep document.
fn point_error(index: usize, err: &CoreError, axes: &Axes) -> ExperimentError {
    let pick = |on_axis: bool, axis: &str, base: &str| if on_axis { axis.to_string() } else { base.to_string() };
    let path = match err {
        CoreError::RankOutOfRange { .. } => pick(axes.k.is_some(), "axes.k", "base.k"),
        CoreError::InvalidDimension { .. } => pick(axes.d.is_some(), "axes.d", "base.layout.d"),
        CoreError::WrongTopology { .. } => "base.layout.topology".into(),
        CoreError::DimensionMismatch { .. } => "base.target_betas".into(),
        CoreError::InvalidParameter { name, .. } => match *name {
            "tau" => pick(axes.jtau.is_some(), "axes.Jtau", "base.tau"),
            "gamma" | "temperature" => format!("base.bath.{name}"),
            "target_betas" => "base.target_betas".into(),
            other => format!("base.hamiltonian.{other}"),
        },
        CoreError::SiteOutOfRange { .. } => "base.bath.target_site".into(),
        CoreError::DegenerateLocalHamiltonian => "base.hamiltonian.h".into(),
        _ => "base".into(),
    };
    ExperimentError::validation(path, format!("grid point {index}: {err}"))
}
