use serde::{Deserialize, Serialize};

use super::config::ProtocolConfig;
use super::run::zeno_run;
use crate::error::{Error, Result};

/// How the regulator is prepared for the two runs compared by [`delta_p`].
#[derive(Clone, Copy, Debug, Default, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum DeltaPMode {
    /// Each run starts from the mixture matching its own projector rank.
    #[default]
    Matched,
    /// Both runs start from the rank-k mixture.
    FixedRegulator,
}

fn branch(config: &ProtocolConfig, rank: usize, prep: usize) -> ProtocolConfig {
    let mut c = config.clone();
    c.rank = rank;
    c.regulator_prep = Some(prep);
    c
}

/// Success probabilities p^(k)(n) − p^(k−1)(n) for n = 0..=N.
pub fn delta_p_series(config: &ProtocolConfig, k: usize, mode: DeltaPMode) -> Result<Vec<f64>> {
    let d = config.layout.d;
    if k < 2 || k > d {
        return Err(Error::RankOutOfRange { rank: k, d });
    }
    let (prep_hi, prep_lo) = match mode {
        DeltaPMode::Matched => (k, k - 1),
        DeltaPMode::FixedRegulator => (k, k),
    };
    let hi = zeno_run(&branch(config, k, prep_hi))?;
    let lo = zeno_run(&branch(config, k - 1, prep_lo))?;
    Ok(hi
        .records
        .iter()
        .zip(&lo.records)
        .map(|(a, b)| a.cumulative_probability - b.cumulative_probability)
        .collect())
}

/// Δp = p^(k)(N) − p^(k−1)(N).
pub fn delta_p(config: &ProtocolConfig, k: usize, mode: DeltaPMode) -> Result<f64> {
    Ok(*delta_p_series(config, k, mode)?
        .last()
        .expect("step 0 is always present"))
}
