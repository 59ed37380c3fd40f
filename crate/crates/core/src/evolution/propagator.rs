use faer::{c64, Mat, MatRef};

use crate::error::{Error, Result};
use crate::linalg::{hermiticity_error, CMat, HermitianEigen};

/// Largest tolerated deviation from Hermiticity in an input Hamiltonian.
pub const HAMILTONIAN_TOL: f64 = 1e-10;

/// U = exp(−iHτ) for a fixed τ.
#[derive(Clone, Debug)]
pub struct Propagator {
    pub u: CMat,
    pub tau: f64,
}

impl Propagator {
    pub fn matrix(&self) -> MatRef<'_, c64> {
        self.u.as_ref()
    }

    /// U ρ U†
    pub fn conjugate(&self, rho: MatRef<'_, c64>) -> CMat {
        let tmp = &self.u * rho;
        tmp * self.u.adjoint()
    }
}

/// Eigendecomposition of a Hamiltonian, kept so that propagators for many
/// values of τ cost one matrix product each.
#[derive(Clone, Debug)]
pub struct SpectralHamiltonian {
    eig: HermitianEigen,
}

impl SpectralHamiltonian {
    pub fn new(h: MatRef<'_, c64>) -> Result<Self> {
        let deviation = hermiticity_error(h);
        if deviation > HAMILTONIAN_TOL {
            return Err(Error::NotHermitian { deviation });
        }
        Ok(Self {
            eig: HermitianEigen::new(h)?,
        })
    }

    pub fn dim(&self) -> usize {
        self.eig.values.len()
    }

    pub fn energies(&self) -> &[f64] {
        &self.eig.values
    }

    pub fn eigenvectors(&self) -> MatRef<'_, c64> {
        self.eig.vectors.as_ref()
    }

    pub fn propagator(&self, tau: f64) -> Propagator {
        let u = self.eig.map(|l| c64::cis(-l * tau));
        Propagator { u, tau }
    }
}

/// exp(−iHτ) via the eigendecomposition of H.
pub fn propagator(h: MatRef<'_, c64>, tau: f64) -> Result<Propagator> {
    if !tau.is_finite() {
        return Err(Error::InvalidParameter {
            name: "tau",
            value: tau,
            reason: "must be finite",
        });
    }
    if tau == 0.0 {
        let n = h.nrows();
        return Ok(Propagator {
            u: Mat::identity(n, n),
            tau,
        });
    }
    Ok(SpectralHamiltonian::new(h)?.propagator(tau))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::linalg::{identity, max_abs_diff, real, ZERO};

    #[test]
    fn zero_time_is_identity() {
        let h = Mat::from_fn(3, 3, |i, j| real((i + j) as f64));
        let p = propagator(h.as_ref(), 0.0).unwrap();
        assert_eq!(max_abs_diff(p.matrix(), identity(3).as_ref()), 0.0);
    }

    #[test]
    fn diagonal_phases() {
        let h = Mat::from_fn(2, 2, |i, j| if i == j { real(0.5 - i as f64) } else { ZERO });
        let tau = 0.37;
        let p = propagator(h.as_ref(), tau).unwrap();
        assert!((p.u[(0, 0)] - c64::cis(-tau / 2.0)).norm() < 1e-15);
        assert!((p.u[(1, 1)] - c64::cis(tau / 2.0)).norm() < 1e-15);
        assert!(p.u[(0, 1)].norm() < 1e-15);
    }

    #[test]
    fn non_hermitian_rejected() {
        let mut h = Mat::<c64>::zeros(2, 2);
        h[(0, 1)] = real(1.0);
        assert!(matches!(propagator(h.as_ref(), 1.0), Err(Error::NotHermitian { .. })));
    }
}
