use faer::{c64, Mat, MatRef};
use serde::{Deserialize, Serialize};

use super::config::{Projector, ProtocolConfig};
use crate::error::{Error, Result};
use crate::evolution::{Channels, LindbladPropagator, SpectralHamiltonian};
use crate::linalg::{hermitize, real, select, trace, CMat, ZERO};
use crate::qudit::fidelity::fidelity_with_uniform_mixture;
use crate::qudit::spin::{LocalBasis, SpinOperators};
use crate::qudit::state::{thermal_state_scaled, DensityMatrix};
use crate::qudit::tensor::partial_trace_matrix;

/// Step probabilities below this end the post-selected branch.
pub const EXTINCTION_THRESHOLD: f64 = 1e-14;

/// Post-selects ρ on the range of P ⊗ I.
///
/// Returns the renormalized state and the outcome probability.
pub fn apply_measurement(rho: &DensityMatrix, proj: &Projector) -> Result<(DensityMatrix, f64)> {
    let support = proj.support(rho.dims())?;
    let (data, p) = project_full(rho.matrix(), &support);
    if p.is_nan() || p < EXTINCTION_THRESHOLD {
        return Err(Error::Extinction {
            step: 0,
            probability: p,
        });
    }
    let mut out = DensityMatrix::from_parts(rho.dims().to_vec(), data)?;
    out.renormalize(p);
    Ok((out, p))
}

/// Zeroes every row and column outside `support`; returns the trace left.
fn project_full(rho: MatRef<'_, c64>, support: &[usize]) -> (CMat, f64) {
    let n = rho.nrows();
    let mut mask = vec![false; n];
    for &s in support {
        mask[s] = true;
    }
    let out = Mat::from_fn(n, n, |i, j| if mask[i] && mask[j] { rho[(i, j)] } else { ZERO });
    let p = trace(out.as_ref()).re;
    (out, p)
}

/// One row of a trajectory.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct StepRecord {
    /// Number of measurements performed so far.
    pub step: usize,
    /// Fidelity of each target, in site order.
    pub fidelities: Vec<f64>,
    /// Probability of the kept outcome in this step (1 at step 0).
    pub step_probability: f64,
    /// Product of all step probabilities.
    pub cumulative_probability: f64,
    /// Sum of the logarithms of all step probabilities.
    pub log_cumulative_probability: f64,
    /// |Tr ρ − 1| after evolution, before measurement (0 for unitary runs).
    pub trace_drift: f64,
}

/// Where a run stopped early.
#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub struct Extinction {
    pub step: usize,
    pub probability: f64,
}

#[derive(Clone, Debug)]
pub struct TrajectoryRecord {
    /// Step 0 (the initial state) followed by steps 1..=N.
    pub records: Vec<StepRecord>,
    /// Set when the kept branch died before step N.
    pub extinction: Option<Extinction>,
    pub final_state: Option<DensityMatrix>,
}

impl TrajectoryRecord {
    pub fn initial(&self) -> &StepRecord {
        &self.records[0]
    }

    /// Records for n = 1..=N.
    pub fn steps(&self) -> &[StepRecord] {
        &self.records[1..]
    }

    pub fn last(&self) -> &StepRecord {
        self.records.last().expect("step 0 is always recorded")
    }

    /// Fidelity of target `t` (0-based) at every step 1..=N.
    pub fn fidelity_series(&self, t: usize) -> Vec<f64> {
        self.steps().iter().map(|r| r.fidelities[t]).collect()
    }

    pub fn max_trace_drift(&self) -> f64 {
        self.records.iter().map(|r| r.trace_drift).fold(0.0, f64::max)
    }
}

/// Knobs that do not change the physics of a run.
#[derive(Clone, Copy, Debug, Default)]
pub struct RunOptions {
    /// Field used to order the fidelity reference basis instead of the
    /// Hamiltonian's.
    pub reference_field: Option<f64>,
    pub keep_final_state: bool,
    /// Largest dimension for which open runs exponentiate the Liouvillian.
    pub superoperator_max_dim: Option<usize>,
}

enum State {
    /// Diagonal of ρ(0) in the product basis.
    Initial(Vec<f64>),
    /// ρ restricted to the range of P ⊗ I, stored as Y with ρ = Y·Y†.
    Factor(CMat),
    Full(CMat),
}

enum Dynamics {
    Unitary { u: CMat },
    Open { prop: LindbladPropagator },
}

/// Step-by-step executor for one configuration.
///
/// In the closed system only the block of U on the range of P ⊗ I is needed
/// after the first measurement, so the state is carried on that block.
pub struct ZenoEngine {
    config: ProtocolConfig,
    dims: Vec<usize>,
    /// Range of P ⊗ I, ascending.
    support: Vec<usize>,
    /// Dimensions of the restricted space: regulator digit runs over k values.
    support_dims: Vec<usize>,
    dynamics: Dynamics,
    /// U on support rows and support columns.
    u_ss: Option<CMat>,
    reference: Vec<usize>,
    state: State,
    step: usize,
    cumulative: f64,
    log_cumulative: f64,
}

impl ZenoEngine {
    pub fn new(config: &ProtocolConfig, options: RunOptions) -> Result<Self> {
        config.validate()?;
        let h = config.hamiltonian.build(&config.layout)?;
        let dynamics = if let Some(bath) = &config.bath {
            let ops = SpinOperators::new(config.layout.d)?;
            let channels = Channels::new(bath, &ops, &config.layout.dims(), config.hamiltonian.field())?;
            let max_dim = options
                .superoperator_max_dim
                .unwrap_or(crate::evolution::SUPEROPERATOR_MAX_DIM);
            Dynamics::Open {
                prop: LindbladPropagator::with_threshold(h.as_ref(), channels, config.tau, max_dim)?,
            }
        } else {
            let spectral = SpectralHamiltonian::new(h.as_ref())?;
            Dynamics::Unitary {
                u: spectral.propagator(config.tau).u,
            }
        };
        Self::assemble(config, options, dynamics)
    }

    /// Closed-system engine reusing an existing eigendecomposition of H.
    pub fn with_spectral(config: &ProtocolConfig, spectral: &SpectralHamiltonian, options: RunOptions) -> Result<Self> {
        config.validate()?;
        if config.is_open() {
            return Err(Error::Config(
                "a precomputed spectrum only applies to closed-system runs".into(),
            ));
        }
        if spectral.dim() != config.layout.dim() {
            return Err(Error::DimensionMismatch {
                expected: config.layout.dim(),
                found: spectral.dim(),
            });
        }
        let u = spectral.propagator(config.tau).u;
        Self::assemble(config, options, Dynamics::Unitary { u })
    }

    fn assemble(config: &ProtocolConfig, options: RunOptions, dynamics: Dynamics) -> Result<Self> {
        let layout = &config.layout;
        let d = layout.d;
        let dims = layout.dims();
        let basis = config.local_basis()?;
        let proj = config.projector()?;
        let support = proj.support(&dims)?;
        let mut support_dims = dims.clone();
        support_dims[layout.regulator_site()] = config.rank;
        let u_ss = match &dynamics {
            Dynamics::Unitary { u } => Some(select(u.as_ref(), &support, &support)),
            Dynamics::Open { .. } => None,
        };
        let reference_basis = match options.reference_field {
            Some(f) => LocalBasis::new(d, f)?,
            None => basis.clone(),
        };
        let reference = reference_basis.lowest(config.rank).to_vec();

        // ρ(0) = ρ_R ⊗ ρ_B1 ⊗ … is diagonal in the product basis
        let scale = layout.spin_scale().factor();
        let mut local: Vec<Vec<f64>> = Vec::with_capacity(layout.sites());
        let mut reg = vec![0.0; d];
        for &i in basis.lowest(config.prep_rank()) {
            reg[i] = 1.0 / config.prep_rank() as f64;
        }
        local.push(reg);
        for t in 0..layout.targets {
            let rho = thermal_state_scaled(d, config.hamiltonian.field(), config.beta(t), scale)?;
            local.push((0..d).map(|i| rho.matrix()[(i, i)].re).collect());
        }
        let mut weights = vec![1.0];
        for site in &local {
            weights = weights.iter().flat_map(|w| site.iter().map(move |p| w * p)).collect();
        }

        let mut engine = Self {
            config: config.clone(),
            dims,
            support,
            support_dims,
            dynamics,
            u_ss,
            reference,
            state: State::Initial(weights),
            step: 0,
            cumulative: 1.0,
            log_cumulative: 0.0,
        };
        if let (Dynamics::Open { .. }, State::Initial(w)) = (&engine.dynamics, &engine.state) {
            // open runs carry the full matrix throughout
            engine.state = State::Full(diagonal(w));
        }
        Ok(engine)
    }

    pub fn config(&self) -> &ProtocolConfig {
        &self.config
    }

    pub fn steps_done(&self) -> usize {
        self.step
    }

    /// Current state on the full space.
    pub fn state(&self) -> DensityMatrix {
        let data = match &self.state {
            State::Initial(w) => diagonal(w),
            State::Full(rho) => rho.clone(),
            State::Factor(y) => {
                let block = y * y.adjoint();
                let n = self.dims.iter().product();
                let mut full = Mat::<c64>::zeros(n, n);
                for (j, &sj) in self.support.iter().enumerate() {
                    for (i, &si) in self.support.iter().enumerate() {
                        full[(si, sj)] = block[(i, j)];
                    }
                }
                full
            }
        };
        DensityMatrix::from_parts(self.dims.clone(), data).expect("engine dimensions are consistent")
    }

    /// Reduced state of target site `site` (1-based site index).
    pub fn reduced_target(&self, site: usize) -> Result<CMat> {
        match &self.state {
            State::Initial(w) => partial_trace_matrix(diagonal(w).as_ref(), &self.dims, &[site]),
            State::Full(rho) => partial_trace_matrix(rho.as_ref(), &self.dims, &[site]),
            State::Factor(y) => Ok(reduce_factor(y.as_ref(), &self.support_dims, site)),
        }
    }

    pub fn record(&self, step_probability: f64, trace_drift: f64) -> Result<StepRecord> {
        let mut fidelities = Vec::with_capacity(self.config.layout.targets);
        for site in self.config.layout.target_sites() {
            let r = self.reduced_target(site)?;
            fidelities.push(fidelity_with_uniform_mixture(r.as_ref(), &self.reference)?);
        }
        Ok(StepRecord {
            step: self.step,
            fidelities,
            step_probability,
            cumulative_probability: self.cumulative,
            log_cumulative_probability: self.log_cumulative,
            trace_drift,
        })
    }

    /// Evolves for τ, measures, keeps the P outcome and renormalizes.
    pub fn advance(&mut self) -> Result<StepRecord> {
        let next = self.step + 1;
        let (p, drift) = match (&self.dynamics, &mut self.state) {
            (Dynamics::Unitary { u }, State::Initial(w)) => {
                // Y = U[S, C]·diag(√w_C) over the columns C where ρ(0) lives
                let cols: Vec<usize> = (0..w.len()).filter(|&c| w[c] > 0.0).collect();
                let support = &self.support;
                let y = Mat::from_fn(support.len(), cols.len(), |i, j| {
                    u[(support[i], cols[j])] * w[cols[j]].sqrt()
                });
                let p = frobenius_sq(y.as_ref());
                self.state = State::Factor(y);
                (p, 0.0)
            }
            (Dynamics::Unitary { .. }, State::Factor(y)) => {
                let u_ss = self.u_ss.as_ref().expect("closed runs carry U on the support");
                *y = u_ss * &*y;
                (frobenius_sq(y.as_ref()), 0.0)
            }
            (Dynamics::Unitary { u }, State::Full(rho)) => {
                let evolved = u * &*rho * u.adjoint();
                let (projected, p) = project_full(evolved.as_ref(), &self.support);
                *rho = projected;
                (p, 0.0)
            }
            (Dynamics::Open { prop }, State::Full(rho)) => {
                let before = trace(rho.as_ref()).re;
                let evolved = prop.apply(rho.as_ref())?;
                let drift = (trace(evolved.as_ref()).re - before).abs();
                let (projected, p) = project_full(evolved.as_ref(), &self.support);
                *rho = projected;
                (p, drift)
            }
            (Dynamics::Open { .. }, _) => unreachable!("open runs always carry the full matrix"),
        };
        if p.is_nan() || p < EXTINCTION_THRESHOLD {
            return Err(Error::Extinction {
                step: next,
                probability: p,
            });
        }
        match &mut self.state {
            State::Factor(y) => {
                let s = real(1.0 / p.sqrt());
                for j in 0..y.ncols() {
                    for i in 0..y.nrows() {
                        y[(i, j)] *= s;
                    }
                }
            }
            State::Full(rho) => {
                let s = real(1.0 / p);
                for j in 0..rho.ncols() {
                    for i in 0..rho.nrows() {
                        rho[(i, j)] *= s;
                    }
                }
                hermitize(rho);
            }
            State::Initial(_) => unreachable!(),
        }
        self.step = next;
        self.cumulative *= p;
        self.log_cumulative += p.ln();
        self.record(p, drift)
    }

    /// Runs all remaining steps. Extinction ends the run without an error and
    /// is reported in the record.
    pub fn run(mut self, keep_final_state: bool) -> Result<TrajectoryRecord> {
        let mut records = vec![self.record(1.0, 0.0)?];
        let mut extinction = None;
        while self.step < self.config.steps {
            match self.advance() {
                Ok(r) => records.push(r),
                Err(Error::Extinction { step, probability }) => {
                    extinction = Some(Extinction { step, probability });
                    break;
                }
                Err(e) => return Err(e),
            }
        }
        let final_state = keep_final_state.then(|| self.state());
        Ok(TrajectoryRecord {
            records,
            extinction,
            final_state,
        })
    }
}

fn diagonal(w: &[f64]) -> CMat {
    Mat::from_fn(w.len(), w.len(), |i, j| if i == j { real(w[i]) } else { ZERO })
}

fn frobenius_sq(y: MatRef<'_, c64>) -> f64 {
    let mut s = 0.0;
    for j in 0..y.ncols() {
        for i in 0..y.nrows() {
            s += y[(i, j)].norm_sqr();
        }
    }
    s
}

/// Reduced matrix on `site` of ρ = Y·Y†, where rows of Y are product
/// indices over `dims`.
fn reduce_factor(y: MatRef<'_, c64>, dims: &[usize], site: usize) -> CMat {
    let d = dims[site];
    let stride: usize = dims[site + 1..].iter().product();
    let rows = y.nrows();
    let mut out = Mat::<c64>::zeros(d, d);
    for base in (0..rows).filter(|&x| (x / stride).is_multiple_of(d)) {
        for a in 0..d {
            let ra = base + a * stride;
            for b in 0..=a {
                let rb = base + b * stride;
                let mut acc = ZERO;
                for c in 0..y.ncols() {
                    acc += y[(ra, c)] * y[(rb, c)].conj();
                }
                out[(a, b)] += acc;
            }
        }
    }
    for a in 0..d {
        for b in 0..a {
            out[(b, a)] = out[(a, b)].conj();
        }
    }
    out
}

/// Runs the full protocol. Extinction is an error carrying the step index.
pub fn zeno_run(config: &ProtocolConfig) -> Result<TrajectoryRecord> {
    zeno_run_with(config, RunOptions::default())
}

pub fn zeno_run_with(config: &ProtocolConfig, options: RunOptions) -> Result<TrajectoryRecord> {
    let record = ZenoEngine::new(config, options)?.run(options.keep_final_state)?;
    if let Some(e) = record.extinction {
        return Err(Error::Extinction {
            step: e.step,
            probability: e.probability,
        });
    }
    Ok(record)
}

/// Tr[(PU)^N ρ(0) (U†P)^N] evaluated on the full space without
/// renormalization. Intended for small systems.
pub fn success_probability_direct(config: &ProtocolConfig) -> Result<f64> {
    let engine = ZenoEngine::new(config, RunOptions::default())?;
    let proj = config.projector()?.embedded(&engine.dims)?;
    let mut rho = engine.state().into_matrix();
    let u = match &engine.dynamics {
        Dynamics::Unitary { u } => u.clone(),
        Dynamics::Open { .. } => return Err(Error::Config("direct evaluation is closed-system only".into())),
    };
    let m = &proj * &u;
    for _ in 0..config.steps {
        rho = &m * &rho * m.adjoint();
    }
    Ok(trace(rho.as_ref()).re)
}
