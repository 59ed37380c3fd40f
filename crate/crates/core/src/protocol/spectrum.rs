use faer::{c64, Mat};

use super::config::ProtocolConfig;
use crate::error::{Error, Result};
use crate::evolution::SpectralHamiltonian;
use crate::linalg::{eig, select, CMat, ZERO};
use crate::qudit::fidelity::fidelity_with_uniform_mixture;
use crate::qudit::tensor::partial_trace_matrix;

/// Moduli closer than this make the dominant eigenvalue non-simple.
pub const DEGENERACY_TOL: f64 = 1e-9;

/// Eigen-analysis of the one-step map M = (P ⊗ I)·U(τ).
#[derive(Clone, Debug)]
pub struct ZenoSpectrum {
    /// All D eigenvalues, largest modulus first.
    pub eigenvalues: Vec<c64>,
    /// Unit-norm right eigenvector of the dominant eigenvalue.
    pub dominant_right: Vec<c64>,
    /// Left eigenvector of the dominant eigenvalue, scaled so ⟨L|R⟩ = 1.
    pub dominant_left: Vec<c64>,
    /// True when the two largest moduli agree within [`DEGENERACY_TOL`].
    pub degenerate: bool,
    pub dims: Vec<usize>,
}

impl ZenoSpectrum {
    pub fn dominant(&self) -> c64 {
        self.eigenvalues[0]
    }

    pub fn spectral_radius(&self) -> f64 {
        self.dominant().norm()
    }

    /// |R⟩⟨R| on the full space.
    pub fn dominant_projector(&self) -> CMat {
        let r = &self.dominant_right;
        Mat::from_fn(r.len(), r.len(), |i, j| r[i] * r[j].conj())
    }

    /// Fidelity of each target's reduced state in |R⟩⟨R| with the target
    /// mixture of the configuration.
    pub fn target_fidelities(&self, config: &ProtocolConfig) -> Result<Vec<f64>> {
        let rho = self.dominant_projector();
        let reference = config.local_basis()?.lowest(config.rank).to_vec();
        config
            .layout
            .target_sites()
            .map(|site| {
                let r = partial_trace_matrix(rho.as_ref(), &self.dims, &[site])?;
                fidelity_with_uniform_mixture(r.as_ref(), &reference)
            })
            .collect()
    }
}

/// Eigendecomposition of M = (P ⊗ I)·U(τ).
///
/// Rows of M outside the range S of P ⊗ I vanish, so M is block triangular:
/// its spectrum is that of the block M_SS plus D − |S| exact zeros, right
/// eigenvectors vanish off S, and left eigenvectors follow from those of M_SS.
pub fn zeno_spectrum(config: &ProtocolConfig) -> Result<ZenoSpectrum> {
    config.validate()?;
    if config.is_open() {
        return Err(Error::Config(
            "the Zeno spectrum is defined for closed-system runs only".into(),
        ));
    }
    let h = config.hamiltonian.build(&config.layout)?;
    let u = SpectralHamiltonian::new(h.as_ref())?.propagator(config.tau).u;
    let dims = config.layout.dims();
    let n = u.nrows();
    let support = config.projector()?.support(&dims)?;
    let outside: Vec<usize> = (0..n).filter(|i| support.binary_search(i).is_err()).collect();
    let m_ss = select(u.as_ref(), &support, &support);

    let (values, right) = eig(m_ss.as_ref())?;
    let mut order: Vec<usize> = (0..values.len()).collect();
    order.sort_by(|&a, &b| values[b].norm().total_cmp(&values[a].norm()));
    let top = order[0];
    let alpha = values[top];

    let mut eigenvalues: Vec<c64> = order.iter().map(|&i| values[i]).collect();
    eigenvalues.resize(n, ZERO);
    let degenerate = eigenvalues.len() > 1 && (eigenvalues[0].norm() - eigenvalues[1].norm()).abs() < DEGENERACY_TOL;

    let mut dominant_right = vec![ZERO; n];
    let norm: f64 = (0..support.len())
        .map(|i| right[(i, top)].norm_sqr())
        .sum::<f64>()
        .sqrt();
    for (i, &s) in support.iter().enumerate() {
        dominant_right[s] = right[(i, top)] / norm;
    }

    // w with w†·M_SS = α·w† is a right eigenvector of M_SS† for conj(α)
    let adj = m_ss.adjoint().to_owned();
    let (lvalues, lvectors) = eig(adj.as_ref())?;
    let li = (0..lvalues.len())
        .min_by(|&a, &b| {
            (lvalues[a] - alpha.conj())
                .norm()
                .total_cmp(&(lvalues[b] - alpha.conj()).norm())
        })
        .expect("non-empty support");
    let mut dominant_left = vec![ZERO; n];
    for (i, &s) in support.iter().enumerate() {
        dominant_left[s] = lvectors[(i, li)];
    }
    if alpha.norm() > 0.0 {
        // the off-support part: u_out† = u_S†·M[S, out] / α
        let m_out = select(u.as_ref(), &support, &outside);
        for (j, &o) in outside.iter().enumerate() {
            let mut acc = ZERO;
            for (i, &s) in support.iter().enumerate() {
                acc += dominant_left[s].conj() * m_out[(i, j)];
            }
            dominant_left[o] = (acc / alpha).conj();
        }
    }
    let overlap: c64 = dominant_left
        .iter()
        .zip(&dominant_right)
        .map(|(l, r)| l.conj() * r)
        .sum();
    if overlap.norm() > 0.0 {
        let s = overlap.conj();
        for l in dominant_left.iter_mut() {
            *l /= s;
        }
    }

    Ok(ZenoSpectrum {
        eigenvalues,
        dominant_right,
        dominant_left,
        degenerate,
        dims,
    })
}
