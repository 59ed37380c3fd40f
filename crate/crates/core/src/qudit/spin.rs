//! Spin-s angular momentum matrices and the energy ordering of a local
//! field Hamiltonian h·Sz.

use faer::{c64, Mat};
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::linalg::{real, CMat, ZERO};

/// The angular momentum matrices of one spin-s qudit, ħ = 1.
///
/// Rows and columns run over the Sz eigenbasis ordered m = s, s−1, …, −s,
/// so index `j` carries magnetic quantum number `s − j`.
#[derive(Clone, Debug)]
pub struct SpinOperators {
    pub d: usize,
    pub s: f64,
    pub sx: CMat,
    pub sy: CMat,
    pub sz: CMat,
    pub splus: CMat,
    pub sminus: CMat,
}

impl SpinOperators {
    pub fn new(d: usize) -> Result<Self> {
        if d < 2 {
            return Err(Error::InvalidDimension { d });
        }
        let s = (d as f64 - 1.0) / 2.0;
        let m = |j: usize| s - j as f64;
        // <m+1| S+ |m> = sqrt(s(s+1) − m(m+1)); S+ moves index j to j−1
        let splus = Mat::from_fn(d, d, |i, j| {
            if j >= 1 && i == j - 1 {
                let mj = m(j);
                real((s * (s + 1.0) - mj * (mj + 1.0)).sqrt())
            } else {
                ZERO
            }
        });
        let sminus = splus.adjoint().to_owned();
        let sx = Mat::from_fn(d, d, |i, j| (splus[(i, j)] + sminus[(i, j)]) * 0.5);
        let sy = Mat::from_fn(d, d, |i, j| (splus[(i, j)] - sminus[(i, j)]) * c64::new(0.0, -0.5));
        let sz = Mat::from_fn(d, d, |i, j| if i == j { real(m(j)) } else { ZERO });
        Ok(Self {
            d,
            s,
            sx,
            sy,
            sz,
            splus,
            sminus,
        })
    }

    /// Operators for the given normalization convention.
    pub fn with_scale(d: usize, scale: SpinScale) -> Result<Self> {
        let ops = Self::new(d)?;
        Ok(match scale {
            SpinScale::Spin => ops,
            SpinScale::Pauli => ops.scaled(2.0),
        })
    }

    /// Every matrix multiplied by `factor`.
    pub fn scaled(&self, factor: f64) -> Self {
        let f = |a: &CMat| Mat::from_fn(self.d, self.d, |i, j| a[(i, j)] * factor);
        Self {
            d: self.d,
            s: self.s,
            sx: f(&self.sx),
            sy: f(&self.sy),
            sz: f(&self.sz),
            splus: f(&self.splus),
            sminus: f(&self.sminus),
        }
    }

    /// Sx·Sx + Sy·Sy + Sz·Sz
    pub fn casimir(&self) -> CMat {
        &self.sx * &self.sx + &self.sy * &self.sy + &self.sz * &self.sz
    }

    /// Diagonal of Sz (the m values in index order).
    pub fn sz_diagonal(&self) -> Vec<f64> {
        (0..self.d).map(|j| self.sz[(j, j)].re).collect()
    }
}

/// Normalization of the site operators entering a Hamiltonian.
///
/// `Pauli` uses σ = 2S. The two-level closed forms in the literature are
/// written with Pauli matrices, so that is the conventional choice at d = 2.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum SpinScale {
    Spin,
    Pauli,
}

impl SpinScale {
    /// Pauli matrices for qubits, spin-s matrices otherwise.
    pub fn conventional(d: usize) -> Self {
        if d == 2 {
            SpinScale::Pauli
        } else {
            SpinScale::Spin
        }
    }

    pub fn factor(self) -> f64 {
        match self {
            SpinScale::Spin => 1.0,
            SpinScale::Pauli => 2.0,
        }
    }
}

/// Eigenbasis of the local Hamiltonian h·Sz, sorted by ascending energy.
///
/// All eigenvectors are Sz basis vectors, so the basis is stored as a
/// permutation: `order[i]` is the Sz-basis index of the i-th lowest state.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct LocalBasis {
    order: Vec<usize>,
}

impl LocalBasis {
    pub fn new(d: usize, h: f64) -> Result<Self> {
        if d < 2 {
            return Err(Error::InvalidDimension { d });
        }
        if h == 0.0 || !h.is_finite() {
            return Err(Error::DegenerateLocalHamiltonian);
        }
        // energy of index j is h·(s − j)
        let order = if h > 0.0 {
            (0..d).rev().collect()
        } else {
            (0..d).collect()
        };
        Ok(Self { order })
    }

    pub fn dim(&self) -> usize {
        self.order.len()
    }

    /// Sz-basis index of the i-th lowest energy state.
    pub fn index(&self, i: usize) -> usize {
        self.order[i]
    }

    /// Sz-basis indices of the `k` lowest states.
    pub fn lowest(&self, k: usize) -> &[usize] {
        &self.order[..k]
    }

    pub fn vector(&self, i: usize) -> Vec<c64> {
        let mut v = vec![ZERO; self.dim()];
        v[self.order[i]] = real(1.0);
        v
    }

    /// The basis vectors in energy order.
    pub fn vectors(&self) -> Vec<Vec<c64>> {
        (0..self.dim()).map(|i| self.vector(i)).collect()
    }
}

/// Convenience wrapper returning the energy-ascending eigenvectors of h·Sz.
pub fn local_energy_eigenbasis(d: usize, h: f64) -> Result<Vec<Vec<c64>>> {
    Ok(LocalBasis::new(d, h)?.vectors())
}
