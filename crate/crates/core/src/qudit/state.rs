//! Density matrices on a factorized Hilbert space.

use faer::{c64, Mat, MatRef};

use super::spin::LocalBasis;
use crate::error::{Error, Result};
use crate::linalg::{eigvalsh, hermiticity_error, hermitize, kron, real, trace, CMat, ZERO};

pub const HERMITIAN_TOL: f64 = 1e-12;
pub const TRACE_TOL: f64 = 1e-10;
pub const PSD_TOL: f64 = 1e-10;

/// A Hermitian, positive semidefinite, unit-trace matrix together with the
/// dimensions of the subsystems it is defined on.
#[derive(Clone, Debug)]
pub struct DensityMatrix {
    dims: Vec<usize>,
    data: CMat,
}

impl DensityMatrix {
    /// Validates all density-matrix invariants.
    pub fn new(dims: Vec<usize>, data: CMat) -> Result<Self> {
        let rho = Self::from_parts(dims, data)?;
        rho.validate()?;
        Ok(rho)
    }

    /// Checks only that `dims` matches the matrix shape.
    pub fn from_parts(dims: Vec<usize>, data: CMat) -> Result<Self> {
        let total: usize = dims.iter().product();
        if dims.is_empty() || dims.contains(&0) {
            return Err(Error::DimensionMismatch {
                expected: data.nrows(),
                found: total,
            });
        }
        if data.nrows() != total || data.ncols() != total {
            return Err(Error::DimensionMismatch {
                expected: total,
                found: data.nrows().max(data.ncols()),
            });
        }
        Ok(Self { dims, data })
    }

    /// |ψ⟩⟨ψ| for a normalized vector.
    pub fn pure(dims: Vec<usize>, psi: &[c64]) -> Result<Self> {
        let norm: f64 = psi.iter().map(|a| a.norm_sqr()).sum();
        let data = Mat::from_fn(psi.len(), psi.len(), |i, j| psi[i] * psi[j].conj() / norm);
        Self::from_parts(dims, data)
    }

    pub fn maximally_mixed(dims: Vec<usize>) -> Self {
        let n: usize = dims.iter().product();
        let data = Mat::from_fn(n, n, |i, j| if i == j { real(1.0 / n as f64) } else { ZERO });
        Self { dims, data }
    }

    /// Diagonal state with the given populations.
    pub fn diagonal(dims: Vec<usize>, populations: &[f64]) -> Result<Self> {
        let n = populations.len();
        let data = Mat::from_fn(n, n, |i, j| if i == j { real(populations[i]) } else { ZERO });
        Self::from_parts(dims, data)
    }

    pub fn dims(&self) -> &[usize] {
        &self.dims
    }

    pub fn dim(&self) -> usize {
        self.data.nrows()
    }

    pub fn matrix(&self) -> MatRef<'_, c64> {
        self.data.as_ref()
    }

    pub fn into_matrix(self) -> CMat {
        self.data
    }

    pub fn trace(&self) -> f64 {
        trace(self.data.as_ref()).re
    }

    pub fn min_eigenvalue(&self) -> Result<f64> {
        Ok(eigvalsh(self.data.as_ref())?.first().copied().unwrap_or(0.0))
    }

    pub fn purity(&self) -> f64 {
        let mut p = 0.0;
        for j in 0..self.dim() {
            for i in 0..self.dim() {
                p += self.data[(i, j)].norm_sqr();
            }
        }
        p
    }

    pub fn validate(&self) -> Result<()> {
        let deviation = hermiticity_error(self.data.as_ref());
        if deviation > HERMITIAN_TOL {
            return Err(Error::NotHermitian { deviation });
        }
        let tr = self.trace();
        if (tr - 1.0).abs() > TRACE_TOL {
            return Err(Error::InvalidTrace { trace: tr });
        }
        let min_eigenvalue = self.min_eigenvalue()?;
        if min_eigenvalue < -PSD_TOL {
            return Err(Error::NotPositive { min_eigenvalue });
        }
        Ok(())
    }

    /// Kronecker product; subsystem lists concatenate.
    pub fn tensor(&self, other: &DensityMatrix) -> DensityMatrix {
        let mut dims = self.dims.clone();
        dims.extend_from_slice(&other.dims);
        DensityMatrix {
            dims,
            data: kron(self.data.as_ref(), other.data.as_ref()),
        }
    }

    /// Divides by the trace and symmetrizes away round-off.
    pub(crate) fn renormalize(&mut self, by: f64) {
        let s = real(1.0 / by);
        for j in 0..self.dim() {
            for i in 0..self.dim() {
                self.data[(i, j)] *= s;
            }
        }
        hermitize(&mut self.data);
    }
}

/// Tensor product of two density matrices.
pub fn tensor_product(a: &DensityMatrix, b: &DensityMatrix) -> DensityMatrix {
    a.tensor(b)
}

/// Tensor product of a list of density matrices, left to right.
pub fn tensor_all<'a>(states: impl IntoIterator<Item = &'a DensityMatrix>) -> Option<DensityMatrix> {
    states.into_iter().fold(None, |acc: Option<DensityMatrix>, s| {
        Some(match acc {
            None => s.clone(),
            Some(a) => a.tensor(s),
        })
    })
}

/// Gibbs state exp(−β·h·Sz)/Z of one qudit, with `sz_scale` the
/// normalization applied to Sz (1 for spin-s matrices).
///
/// `beta = f64::INFINITY` gives the ground-state projector.
pub fn thermal_state_scaled(d: usize, h: f64, beta: f64, sz_scale: f64) -> Result<DensityMatrix> {
    if d < 2 {
        return Err(Error::InvalidDimension { d });
    }
    if beta.is_nan() || beta < 0.0 {
        return Err(Error::InvalidParameter {
            name: "beta",
            value: beta,
            reason: "inverse temperature must be non-negative",
        });
    }
    if !h.is_finite() {
        return Err(Error::InvalidParameter {
            name: "h",
            value: h,
            reason: "field must be finite",
        });
    }
    let s = (d as f64 - 1.0) / 2.0;
    let energies: Vec<f64> = (0..d).map(|j| h * sz_scale * (s - j as f64)).collect();
    let e_min = energies.iter().copied().fold(f64::INFINITY, f64::min);
    let weights: Vec<f64> = if beta == 0.0 {
        vec![1.0; d]
    } else if beta.is_infinite() {
        // ground manifold (all of it when h = 0)
        energies.iter().map(|&e| if e == e_min { 1.0 } else { 0.0 }).collect()
    } else {
        energies.iter().map(|&e| (-beta * (e - e_min)).exp()).collect()
    };
    let z: f64 = weights.iter().sum();
    let pops: Vec<f64> = weights.iter().map(|w| w / z).collect();
    DensityMatrix::diagonal(vec![d], &pops)
}

/// Gibbs state of h·Sz with spin-s normalization.
pub fn thermal_state(d: usize, h: f64, beta: f64) -> Result<DensityMatrix> {
    thermal_state_scaled(d, h, beta, 1.0)
}

/// (1/k)·Σ_{i<k} |i⟩⟨i| over the k lowest eigenstates of h·Sz.
pub fn low_lying_mixture(d: usize, k: usize, h: f64) -> Result<DensityMatrix> {
    let basis = LocalBasis::new(d, h)?;
    low_lying_mixture_in(&basis, k)
}

pub fn low_lying_mixture_in(basis: &LocalBasis, k: usize) -> Result<DensityMatrix> {
    let d = basis.dim();
    if k == 0 || k > d {
        return Err(Error::RankOutOfRange { rank: k, d });
    }
    let mut pops = vec![0.0; d];
    for &idx in basis.lowest(k) {
        pops[idx] = 1.0 / k as f64;
    }
    DensityMatrix::diagonal(vec![d], &pops)
}
