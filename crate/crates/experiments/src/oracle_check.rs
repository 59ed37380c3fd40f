//! Cross-check of the engine against the closed-form rank-1 fidelities.

use std::f64::consts::PI;

use qudit_zeno::oracles::{fidelity_bbh_rank1_d3, fidelity_xx_rank1};
use qudit_zeno::protocol::{zeno_run_with, RunOptions};
use qudit_zeno::{HamiltonianSpec, ProtocolConfig, SystemLayout};
use serde::Serialize;

use crate::error::Result;

pub const ORACLE_TOL: f64 = 1e-8;

#[derive(Clone, Copy, Debug, Default, PartialEq, Eq)]
pub enum Mutation {
    #[default]
    None,
    /// Orders the fidelity reference basis with the opposite field sign.
    FlipReferenceField,
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct GridReport {
    pub d: usize,
    pub model: &'static str,
    pub points: usize,
    pub max_deviation: f64,
    /// Jτ (XX) or θ (BBH) and N where the deviation peaks.
    pub worst_parameter: f64,
    pub worst_step: usize,
    pub passed: bool,
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct OracleReport {
    pub tolerance: f64,
    pub grids: Vec<GridReport>,
}

impl OracleReport {
    pub fn passed(&self) -> bool {
        !self.grids.is_empty() && self.grids.iter().all(|g| g.passed)
    }
}

/// XX grid: Jτ ∈ {0, 0.1, …, 6.2}.
pub fn xx_jtau_grid() -> Vec<f64> {
    (0..63).map(|i| i as f64 * 0.1).collect()
}

pub fn bbh_theta_grid() -> [f64; 4] {
    [-5.0 * PI / 8.0, -PI / 8.0, PI / 2.0, 3.0 * PI / 4.0]
}

struct Worst {
    dev: f64,
    param: f64,
    step: usize,
    points: usize,
}

impl Worst {
    fn new() -> Self {
        Self {
            dev: 0.0,
            param: 0.0,
            step: 0,
            points: 0,
        }
    }

    fn push(&mut self, got: f64, want: f64, param: f64, step: usize) {
        let dev = (got - want).abs();
        self.points += 1;
        // NaN must never hide a failure
        if dev > self.dev || dev.is_nan() {
            self.dev = if dev.is_nan() { f64::INFINITY } else { dev };
            self.param = param;
            self.step = step;
        }
    }

    fn report(self, d: usize, model: &'static str) -> GridReport {
        GridReport {
            d,
            model,
            points: self.points,
            max_deviation: self.dev,
            worst_parameter: self.param,
            worst_step: self.step,
            passed: self.dev < ORACLE_TOL,
        }
    }
}

fn options(mutation: Mutation, h: f64) -> RunOptions {
    RunOptions {
        reference_field: match mutation {
            Mutation::None => None,
            Mutation::FlipReferenceField => Some(-h),
        },
        ..Default::default()
    }
}

/// Runs the XX grids for d = 2..=5 (N ≤ 50) and the spin-1 BBH grid (N ≤ 100).
pub fn oracle_check(mutation: Mutation) -> Result<OracleReport> {
    let mut grids = Vec::new();
    for d in 2..=5 {
        let mut worst = Worst::new();
        for jtau in xx_jtau_grid() {
            let config = ProtocolConfig::xx_single(d, jtau, 50, 1);
            let series = zeno_run_with(&config, options(mutation, 1.0))?.fidelity_series(0);
            for (i, f) in series.iter().enumerate() {
                let n = i + 1;
                worst.push(*f, fidelity_xx_rank1(d, n as u64, jtau)?, jtau, n);
            }
        }
        grids.push(worst.report(d, "xx"));
    }
    let mut worst = Worst::new();
    for theta in bbh_theta_grid() {
        let h = HamiltonianSpec::Bbh { j: 1.0, theta, h: 1.0 };
        let config = ProtocolConfig::new(SystemLayout::chain(1, 3), h, 1.0, 100, 1);
        let series = zeno_run_with(&config, options(mutation, 1.0))?.fidelity_series(0);
        for (i, f) in series.iter().enumerate() {
            let n = i + 1;
            worst.push(*f, fidelity_bbh_rank1_d3(n as u64, theta, 1.0), theta, n);
        }
    }
    grids.push(worst.report(3, "bbh"));
    Ok(OracleReport {
        tolerance: ORACLE_TOL,
        grids,
    })
}
