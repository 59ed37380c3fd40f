//! Pinned grids reproducing each figure of the subspace-cooling study.
//!
//! Contour presets sample Jτ ∈ [0, 2π] at 64 points and record every
//! N in 1..=200.

use std::f64::consts::PI;

use qudit_zeno::{BathSpec, HamiltonianSpec, ProtocolConfig, SystemLayout};

use crate::error::{ExperimentError, Result};
use crate::rows::{format_float, write_table, ResultRow};
use crate::runner::SweepRun;
use crate::sweep::{IntAxis, RealAxis, SweepSpec};

pub const PRESET_IDS: [&str; 9] = [
    "fig2",
    "fig3",
    "fig4",
    "fig5",
    "fig6",
    "fig7",
    "fig_chain",
    "fig_star",
    "fig8",
];

pub const CONTOUR_POINTS: usize = 64;
pub const MAX_STEPS: usize = 200;

#[derive(Clone, Copy, Debug, Default, PartialEq, Eq)]
pub struct PresetOptions {
    /// Adds d = 5 to the rank-2 contour preset.
    pub extended: bool,
}

fn contour_jtau() -> RealAxis {
    RealAxis::linspace(0.0, 2.0 * PI, CONTOUR_POINTS)
}

fn xxz(delta: f64) -> HamiltonianSpec {
    HamiltonianSpec::Xxz { j: 1.0, delta, h: 1.0 }
}

fn sweep(id: &str, base: ProtocolConfig) -> SweepSpec {
    let mut s = SweepSpec::new(base);
    s.preset_id = Some(id.to_string());
    s
}

/// Panels of a preset; each panel is one sweep.
pub fn preset(id: &str, options: PresetOptions) -> Result<Vec<SweepSpec>> {
    let chain = |l, d| SystemLayout::chain(l, d);
    let panels = match id {
        "fig2" => {
            let mut s = sweep(id, ProtocolConfig::new(chain(1, 2), xxz(0.0), 1.0, MAX_STEPS, 1));
            s.axes.d = Some(IntAxis::Values(vec![2, 3, 4, 5]));
            s.axes.jtau = Some(RealAxis::Values(vec![1.2, 4.5]));
            vec![s]
        }
        "fig3" => {
            let bbh = HamiltonianSpec::Bbh {
                j: 1.0,
                theta: 0.0,
                h: 1.0,
            };
            let mut s = sweep(id, ProtocolConfig::new(chain(1, 3), bbh, 1.0, MAX_STEPS, 1));
            s.axes.d = Some(IntAxis::Values(vec![3, 4]));
            s.axes.theta = Some(RealAxis::Values(vec![
                PI / 2.0,
                -PI / 8.0,
                3.0 * PI / 4.0,
                -5.0 * PI / 8.0,
            ]));
            vec![s]
        }
        "fig4" => {
            let mut s = sweep(id, ProtocolConfig::new(chain(1, 2), xxz(1.0), 1.0, MAX_STEPS, 2));
            let mut ds = vec![2, 3, 4];
            if options.extended {
                ds.push(5);
            }
            s.axes.d = Some(IntAxis::Values(ds));
            s.axes.jtau = Some(contour_jtau());
            vec![s]
        }
        "fig5" => {
            let mut s = sweep(id, ProtocolConfig::new(chain(1, 2), xxz(1.0), 1.0, 100, 2));
            s.axes.d = Some(IntAxis::Values(vec![2, 3, 4, 5]));
            s.axes.delta = Some(RealAxis::Values(vec![0.0, 1.0]));
            s.axes.jtau = Some(contour_jtau());
            s.axes.steps = Some(IntAxis::Values(vec![100]));
            vec![s]
        }
        "fig6" => {
            let mut s = sweep(id, ProtocolConfig::new(chain(1, 2), xxz(1.0), 1.0, 100, 1));
            s.axes.d = Some(IntAxis::range(2, 8));
            s.axes.k = Some(IntAxis::Values(vec![1, 2]));
            vec![s]
        }
        "fig7" => {
            let mut s = sweep(id, ProtocolConfig::new(chain(1, 31), xxz(1.0), 3.0, 50, 1));
            s.axes.k = Some(IntAxis::range(1, 15));
            s.axes.steps = Some(IntAxis::Values(vec![10, 20, 30, 40, 50]));
            vec![s]
        }
        "fig_chain" => {
            let mut a = sweep(id, ProtocolConfig::new(chain(4, 3), xxz(1.0), 1.0, MAX_STEPS, 2));
            a.axes.jtau = Some(contour_jtau());
            let bbh = HamiltonianSpec::Bbh {
                j: 1.0,
                theta: 0.0,
                h: 1.0,
            };
            let mut b = sweep(id, ProtocolConfig::new(chain(4, 3), bbh, 1.0, MAX_STEPS, 2));
            b.axes.theta = Some(RealAxis::linspace(-PI, PI, CONTOUR_POINTS));
            vec![a, b]
        }
        "fig_star" => {
            let star = HamiltonianSpec::SpinStar { j: 1.0, h: 1.0 };
            let mut s = sweep(
                id,
                ProtocolConfig::new(SystemLayout::star(4, 3), star, 1.0, MAX_STEPS, 2),
            );
            s.axes.jtau = Some(contour_jtau());
            vec![s]
        }
        "fig8" => {
            let base =
                ProtocolConfig::new(chain(1, 3), xxz(1.0), 1.0, MAX_STEPS, 2).with_bath(BathSpec::new(1.0, 1e-3));
            let mut s = sweep(id, base);
            s.axes.d = Some(IntAxis::Values(vec![3, 4]));
            s.axes.jtau = Some(contour_jtau());
            vec![s]
        }
        other => return Err(ExperimentError::UnknownPreset(other.to_string())),
    };
    Ok(panels)
}

/// Extra tables computed from a finished preset run, as (file name, bytes).
pub fn derived_tables(run: &SweepRun) -> Result<Vec<(String, Vec<u8>)>> {
    match run.preset_id.as_str() {
        "fig6" => {
            let table = delta_p_table(run.rows());
            let records: Vec<Vec<String>> = table
                .iter()
                .map(|&(d, n, dp)| vec![d.to_string(), n.to_string(), format_float(dp)])
                .collect();
            let mut buf = Vec::new();
            write_table(&mut buf, &["d", "N_step", "delta_p"], &records)?;
            Ok(vec![("fig6.delta_p.csv".to_string(), buf)])
        }
        _ => Ok(Vec::new()),
    }
}

/// p^(2) − p^(1) per (d, N) from rank-1 and rank-2 rows of the first target.
pub fn delta_p_table<'a>(rows: impl IntoIterator<Item = &'a ResultRow>) -> Vec<(usize, usize, f64)> {
    let rows: Vec<&ResultRow> = rows.into_iter().filter(|r| r.site == 1 && !r.extinct).collect();
    let mut out = Vec::new();
    for hi in rows.iter().filter(|r| r.k == 2) {
        if let Some(lo) = rows.iter().find(|r| r.k == 1 && r.d == hi.d && r.n_step == hi.n_step) {
            out.push((hi.d, hi.n_step, hi.cum_probability - lo.cum_probability));
        }
    }
    out
}
