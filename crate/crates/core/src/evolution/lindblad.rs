//! Local Lindblad master equation with one thermal channel
//!
//! dρ/dt = −i[H, ρ] + γ(1+n)·D[A]ρ + γn·D[A†]ρ,  D[X]ρ = XρX† − ½{X†X, ρ}
//!
//! with A = ½·S⁻ on one site and n the Bose occupancy of the channel.

use faer::{c64, Mat, MatRef};
use serde::{Deserialize, Serialize};

use super::propagator::HAMILTONIAN_TOL;
use crate::error::{Error, Result};
use crate::linalg::{expm, hermiticity_error, hermitize, identity, kron, norm_one, real, scaled, trace, CMat, I};
use crate::qudit::spin::SpinOperators;
use crate::qudit::state::DensityMatrix;
use crate::qudit::tensor::embed_operator;

/// Largest total dimension for which the full D²×D² Liouvillian is
/// exponentiated. Above it the equation is integrated with RK4.
pub const SUPEROPERATOR_MAX_DIM: usize = 32;

/// Trace error tolerated after one evolution interval.
pub const TRACE_DRIFT_TOL: f64 = 1e-8;

/// Thermal bath acting on a single site.
#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct BathSpec {
    /// Bath temperature T_E (k_B = 1).
    pub temperature: f64,
    /// System-bath coupling γ.
    pub gamma: f64,
    /// Channel frequency; `None` means the local field h.
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub omega: Option<f64>,
    /// Site the dissipator acts on; `None` means the last site.
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub target_site: Option<usize>,
}

impl BathSpec {
    pub fn new(temperature: f64, gamma: f64) -> Self {
        Self {
            temperature,
            gamma,
            omega: None,
            target_site: None,
        }
    }

    pub fn validate(&self) -> Result<()> {
        if !(self.gamma >= 0.0 && self.gamma.is_finite()) {
            return Err(Error::InvalidParameter {
                name: "gamma",
                value: self.gamma,
                reason: "coupling must be finite and non-negative",
            });
        }
        if self.temperature.is_nan() {
            return Err(Error::InvalidParameter {
                name: "temperature",
                value: self.temperature,
                reason: "must be a number",
            });
        }
        Ok(())
    }

    pub fn resolved_omega(&self, field: f64) -> f64 {
        self.omega.unwrap_or(field)
    }

    pub fn resolved_site(&self, sites: usize) -> usize {
        self.target_site.unwrap_or(sites - 1)
    }
}

/// n = 1/(e^{ω/T} − 1).
pub fn occupancy(omega: f64, temperature: f64) -> Result<f64> {
    if omega.is_nan() || omega <= 0.0 || temperature.is_nan() || temperature <= 0.0 {
        return Err(Error::InvalidOccupancy { temperature, omega });
    }
    Ok(1.0 / (omega / temperature).exp_m1())
}

/// Jump operators with their rates: (A, γ(1+n)) and (A†, γn).
#[derive(Clone, Debug)]
pub struct Channels {
    pub jumps: Vec<(CMat, f64)>,
}

impl Channels {
    /// `ops` supplies S⁻ for the dissipated site.
    pub fn new(bath: &BathSpec, ops: &SpinOperators, dims: &[usize], field: f64) -> Result<Self> {
        bath.validate()?;
        let site = bath.resolved_site(dims.len());
        let local = scaled(ops.sminus.as_ref(), real(0.5));
        let a = embed_operator(local.as_ref(), site, dims)?;
        if bath.gamma == 0.0 {
            return Ok(Self { jumps: Vec::new() });
        }
        let n = occupancy(bath.resolved_omega(field), bath.temperature)?;
        let ad = a.adjoint().to_owned();
        Ok(Self {
            jumps: vec![(a, bath.gamma * (1.0 + n)), (ad, bath.gamma * n)],
        })
    }

    /// Σ_c rate_c · D[X_c]ρ
    pub fn apply(&self, rho: MatRef<'_, c64>) -> CMat {
        let n = rho.nrows();
        let mut out = Mat::<c64>::zeros(n, n);
        for (x, rate) in &self.jumps {
            let xd = x.adjoint();
            let xdx = xd * x;
            let sandwich = x * rho * xd;
            let anti = &xdx * rho + rho * &xdx;
            out += scaled((sandwich - scaled(anti.as_ref(), real(0.5))).as_ref(), real(*rate));
        }
        out
    }
}

/// The dissipative part of the generator evaluated on ρ.
pub fn dissipator(rho: &DensityMatrix, bath: &BathSpec, ops: &SpinOperators, field: f64) -> Result<CMat> {
    let channels = Channels::new(bath, ops, rho.dims(), field)?;
    Ok(channels.apply(rho.matrix()))
}

/// −i[H, ρ] + dissipator
pub fn lindblad_rhs(h: MatRef<'_, c64>, channels: &Channels, rho: MatRef<'_, c64>) -> CMat {
    let comm = h * rho - rho * h;
    scaled(comm.as_ref(), -I) + channels.apply(rho)
}

/// Generator on column-stacked vec(ρ), using vec(AρB) = (Bᵀ ⊗ A)·vec(ρ).
pub fn liouvillian(h: MatRef<'_, c64>, channels: &Channels) -> CMat {
    let n = h.nrows();
    let id = identity(n);
    let ht = h.transpose().to_owned();
    let mut l = scaled((kron(id.as_ref(), h) - kron(ht.as_ref(), id.as_ref())).as_ref(), -I);
    for (x, rate) in &channels.jumps {
        let xdx = x.adjoint() * x;
        let xconj = x.conjugate().to_owned();
        let xdx_t = xdx.transpose().to_owned();
        let term = kron(xconj.as_ref(), x.as_ref())
            - scaled(
                (kron(id.as_ref(), xdx.as_ref()) + kron(xdx_t.as_ref(), id.as_ref())).as_ref(),
                real(0.5),
            );
        l += scaled(term.as_ref(), real(*rate));
    }
    l
}

fn vectorize(rho: MatRef<'_, c64>) -> CMat {
    let n = rho.nrows();
    Mat::from_fn(n * n, 1, |k, _| rho[(k % n, k / n)])
}

fn unvectorize(v: MatRef<'_, c64>, n: usize) -> CMat {
    Mat::from_fn(n, n, |i, j| v[(i + j * n, 0)])
}

#[derive(Clone, Debug)]
enum Method {
    /// exp(Lτ) on vec(ρ)
    Superoperator(CMat),
    Rk4 {
        h: CMat,
        channels: Channels,
        steps: usize,
    },
}

/// Evolution over a fixed interval τ, built once and applied repeatedly.
#[derive(Clone, Debug)]
pub struct LindbladPropagator {
    dim: usize,
    tau: f64,
    method: Method,
}

impl LindbladPropagator {
    pub fn new(h: MatRef<'_, c64>, channels: Channels, tau: f64) -> Result<Self> {
        Self::with_threshold(h, channels, tau, SUPEROPERATOR_MAX_DIM)
    }

    /// Uses the superoperator when D ≤ `max_dim`.
    pub fn with_threshold(h: MatRef<'_, c64>, channels: Channels, tau: f64, max_dim: usize) -> Result<Self> {
        let deviation = hermiticity_error(h);
        if deviation > HAMILTONIAN_TOL {
            return Err(Error::NotHermitian { deviation });
        }
        if !(tau >= 0.0 && tau.is_finite()) {
            return Err(Error::InvalidParameter {
                name: "tau",
                value: tau,
                reason: "must be finite and non-negative",
            });
        }
        let dim = h.nrows();
        let method = if dim <= max_dim {
            let l = liouvillian(h, &channels);
            let lt = scaled(l.as_ref(), real(tau));
            Method::Superoperator(expm(lt.as_ref())?)
        } else {
            // ‖L‖ bounded by 2‖H‖ plus twice the summed jump strengths
            let mut bound = 2.0 * norm_one(h);
            for (x, rate) in &channels.jumps {
                let n = norm_one(x.as_ref());
                bound += 2.0 * rate * n * n;
            }
            let steps = ((tau * bound / 0.1).ceil() as usize).max(1);
            Method::Rk4 {
                h: h.to_owned(),
                channels,
                steps,
            }
        };
        Ok(Self { dim, tau, method })
    }

    pub fn tau(&self) -> f64 {
        self.tau
    }

    pub fn uses_superoperator(&self) -> bool {
        matches!(self.method, Method::Superoperator(_))
    }

    /// Evolves ρ by τ. The result is not renormalized.
    pub fn apply(&self, rho: MatRef<'_, c64>) -> Result<CMat> {
        if rho.nrows() != self.dim {
            return Err(Error::DimensionMismatch {
                expected: self.dim,
                found: rho.nrows(),
            });
        }
        let before = trace(rho).re;
        let mut out = match &self.method {
            Method::Superoperator(e) => {
                let v = vectorize(rho);
                unvectorize((e * v).as_ref(), self.dim)
            }
            Method::Rk4 { h, channels, steps } => {
                let dt = self.tau / *steps as f64;
                let mut r = rho.to_owned();
                for _ in 0..*steps {
                    r = rk4_step(h.as_ref(), channels, r.as_ref(), dt);
                }
                r
            }
        };
        hermitize(&mut out);
        let drift = (trace(out.as_ref()).re - before).abs();
        if drift > TRACE_DRIFT_TOL {
            return Err(Error::Integration {
                elapsed: self.tau,
                drift,
            });
        }
        Ok(out)
    }
}

fn rk4_step(h: MatRef<'_, c64>, ch: &Channels, r: MatRef<'_, c64>, dt: f64) -> CMat {
    let add = |a: MatRef<'_, c64>, b: &CMat, s: f64| a + scaled(b.as_ref(), real(s));
    let k1 = lindblad_rhs(h, ch, r);
    let k2 = lindblad_rhs(h, ch, add(r, &k1, dt / 2.0).as_ref());
    let k3 = lindblad_rhs(h, ch, add(r, &k2, dt / 2.0).as_ref());
    let k4 = lindblad_rhs(h, ch, add(r, &k3, dt).as_ref());
    let sum = &k1 + scaled(k2.as_ref(), real(2.0)) + scaled(k3.as_ref(), real(2.0)) + &k4;
    add(r, &sum, dt / 6.0)
}

/// Solves the master equation for time τ starting from ρ.
///
/// `ops` supplies the lowering operator of the dissipated site and `field`
/// is the default channel frequency.
pub fn lindblad_evolve(
    rho: &DensityMatrix,
    h: MatRef<'_, c64>,
    bath: &BathSpec,
    ops: &SpinOperators,
    field: f64,
    tau: f64,
) -> Result<DensityMatrix> {
    let channels = Channels::new(bath, ops, rho.dims(), field)?;
    let prop = LindbladPropagator::new(h, channels, tau)?;
    let out = prop.apply(rho.matrix())?;
    let state = DensityMatrix::from_parts(rho.dims().to_vec(), out)?;
    let min = state.min_eigenvalue()?;
    if min < -TRACE_DRIFT_TOL {
        return Err(Error::NotPositive { min_eigenvalue: min });
    }
    Ok(state)
}
