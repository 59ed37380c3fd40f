//! Uhlmann fidelity F(ρ, σ) = (Tr √(√σ ρ √σ))².

use faer::{c64, Mat, MatRef};

use super::state::{DensityMatrix, PSD_TOL};
use crate::error::{Error, Result};
use crate::linalg::HermitianEigen;

/// Relative cutoff below which an eigenvalue of σ counts as outside its
/// support. Keeping round-off eigenvalues would feed their square roots into
/// the trace.
const SUPPORT_CUTOFF: f64 = 1e-13;

fn clamp(l: f64) -> f64 {
    l.max(0.0)
}

fn check_psd(values: &[f64]) -> Result<()> {
    if let Some(&min) = values.first() {
        if min < -PSD_TOL {
            return Err(Error::NotPositive { min_eigenvalue: min });
        }
    }
    Ok(())
}

/// Columns √λ·v over the eigenpairs of `a` above the support cutoff.
fn weighted_support(a: MatRef<'_, c64>) -> Result<Mat<c64>> {
    let eig = HermitianEigen::new(a)?;
    check_psd(&eig.values)?;
    let top = eig.values.iter().copied().fold(0.0, f64::max);
    let support: Vec<usize> = (0..eig.values.len())
        .filter(|&i| eig.values[i] > SUPPORT_CUTOFF * top.max(1.0))
        .collect();
    Ok(Mat::from_fn(a.nrows(), support.len(), |i, j| {
        eig.vectors[(i, support[j])] * clamp(eig.values[support[j]]).sqrt()
    }))
}

/// Fidelity of two positive semidefinite matrices of equal size. Traces are
/// not checked.
///
/// With ρ = A·A† and σ = B·B†, Tr √(√σ ρ √σ) is the sum of the singular
/// values of B†A. Singular values carry absolute error ε, whereas square
/// roots of the eigenvalues of √σ ρ √σ would carry √ε for rank-deficient ρ.
pub fn uhlmann_fidelity_matrix(rho: MatRef<'_, c64>, sigma: MatRef<'_, c64>) -> Result<f64> {
    if rho.nrows() != sigma.nrows() || rho.ncols() != sigma.ncols() {
        return Err(Error::DimensionMismatch {
            expected: sigma.nrows(),
            found: rho.nrows(),
        });
    }
    let a = weighted_support(rho)?;
    let b = weighted_support(sigma)?;
    if a.ncols() == 0 || b.ncols() == 0 {
        return Ok(0.0);
    }
    let overlap = b.adjoint() * &a;
    let root_sum: f64 = overlap
        .singular_values()
        .map_err(|e| Error::Decomposition(format!("{e:?}")))?
        .into_iter()
        .sum();
    Ok((root_sum * root_sum).clamp(0.0, 1.0))
}

/// Uhlmann fidelity between two density matrices.
pub fn uhlmann_fidelity(rho: &DensityMatrix, sigma: &DensityMatrix) -> Result<f64> {
    uhlmann_fidelity_matrix(rho.matrix(), sigma.matrix())
}

/// Fidelity of `rho` with the uniform mixture over the basis states `support`,
/// (1/k)·Σ_{i∈support} |i⟩⟨i|.
pub fn fidelity_with_uniform_mixture(rho: MatRef<'_, c64>, support: &[usize]) -> Result<f64> {
    let k = support.len();
    if k == 0 {
        return Err(Error::RankOutOfRange {
            rank: 0,
            d: rho.nrows(),
        });
    }
    if let Some(&bad) = support.iter().find(|&&i| i >= rho.nrows()) {
        return Err(Error::RankOutOfRange {
            rank: bad + 1,
            d: rho.nrows(),
        });
    }
    // rows S of A, where ρ = A·A†, against σ = Σ_S |i⟩⟨i| / k
    let a = weighted_support(rho)?;
    let scale = (1.0 / k as f64).sqrt();
    let rows = Mat::from_fn(k, a.ncols(), |i, j| a[(support[i], j)] * scale);
    if rows.ncols() == 0 {
        return Ok(0.0);
    }
    let root_sum: f64 = rows
        .singular_values()
        .map_err(|e| Error::Decomposition(format!("{e:?}")))?
        .into_iter()
        .sum();
    Ok((root_sum * root_sum).clamp(0.0, 1.0))
}
