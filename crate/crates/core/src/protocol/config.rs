use faer::Mat;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::evolution::BathSpec;
use crate::hamiltonians::{HamiltonianSpec, SystemLayout, Topology};
use crate::linalg::{real, CMat, ZERO};
use crate::qudit::spin::LocalBasis;
use crate::qudit::tensor::embed_operator;

/// Full description of one measurement run.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct ProtocolConfig {
    pub layout: SystemLayout,
    pub hamiltonian: HamiltonianSpec,
    /// Evolution time between measurements.
    pub tau: f64,
    /// Number of measurements N.
    #[serde(rename = "N")]
    pub steps: usize,
    /// Projector rank k.
    #[serde(rename = "k")]
    pub rank: usize,
    /// Rank of the low-lying mixture the regulator starts in; defaults to k.
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub regulator_prep: Option<usize>,
    /// Inverse temperature of each target; empty means all zero.
    #[serde(default, skip_serializing_if = "Vec::is_empty")]
    pub target_betas: Vec<f64>,
    /// Present for open-system runs.
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub bath: Option<BathSpec>,
}

impl ProtocolConfig {
    pub fn new(layout: SystemLayout, hamiltonian: HamiltonianSpec, tau: f64, steps: usize, rank: usize) -> Self {
        Self {
            layout,
            hamiltonian,
            tau,
            steps,
            rank,
            regulator_prep: None,
            target_betas: Vec::new(),
            bath: None,
        }
    }

    /// XX chain with one target, J = h = 1.
    pub fn xx_single(d: usize, jtau: f64, steps: usize, rank: usize) -> Self {
        Self::new(
            SystemLayout::chain(1, d),
            HamiltonianSpec::xx(1.0, 1.0),
            jtau,
            steps,
            rank,
        )
    }

    pub fn with_bath(mut self, bath: BathSpec) -> Self {
        self.bath = Some(bath);
        self
    }

    pub fn with_regulator_prep(mut self, prep: usize) -> Self {
        self.regulator_prep = Some(prep);
        self
    }

    pub fn prep_rank(&self) -> usize {
        self.regulator_prep.unwrap_or(self.rank)
    }

    pub fn is_open(&self) -> bool {
        self.bath.is_some()
    }

    pub fn beta(&self, target: usize) -> f64 {
        self.target_betas.get(target).copied().unwrap_or(0.0)
    }

    pub fn validate(&self) -> Result<()> {
        self.layout.validate()?;
        self.hamiltonian.validate()?;
        let d = self.layout.d;
        if self.rank == 0 || self.rank > d {
            return Err(Error::RankOutOfRange { rank: self.rank, d });
        }
        let prep = self.prep_rank();
        if prep == 0 || prep > d {
            return Err(Error::RankOutOfRange { rank: prep, d });
        }
        if !self.tau.is_finite() {
            return Err(Error::InvalidParameter {
                name: "tau",
                value: self.tau,
                reason: "must be finite",
            });
        }
        match (self.layout.topology, &self.hamiltonian) {
            (Topology::Star, HamiltonianSpec::SpinStar { .. }) => {}
            (Topology::Chain, HamiltonianSpec::Xxz { .. } | HamiltonianSpec::Bbh { .. }) => {}
            (Topology::Star, _) => {
                return Err(Error::WrongTopology {
                    model: self.hamiltonian.name(),
                    expected: "chain",
                })
            }
            (Topology::Chain, _) => {
                return Err(Error::WrongTopology {
                    model: "spin-star",
                    expected: "star",
                })
            }
        }
        if !self.target_betas.is_empty() && self.target_betas.len() != self.layout.targets {
            return Err(Error::DimensionMismatch {
                expected: self.layout.targets,
                found: self.target_betas.len(),
            });
        }
        if let Some(&b) = self.target_betas.iter().find(|b| b.is_nan() || **b < 0.0) {
            return Err(Error::InvalidParameter {
                name: "target_betas",
                value: b,
                reason: "inverse temperatures must be non-negative",
            });
        }
        if let Some(bath) = &self.bath {
            bath.validate()?;
            let site = bath.resolved_site(self.layout.sites());
            if site >= self.layout.sites() {
                return Err(Error::SiteOutOfRange {
                    site,
                    sites: self.layout.sites(),
                });
            }
        }
        // the field fixes every local basis
        LocalBasis::new(d, self.hamiltonian.field())?;
        Ok(())
    }

    /// Energy-ordered basis shared by the regulator and the targets.
    pub fn local_basis(&self) -> Result<LocalBasis> {
        LocalBasis::new(self.layout.d, self.hamiltonian.field())
    }

    pub fn projector(&self) -> Result<Projector> {
        Projector::new(self.layout.regulator_site(), self.rank, self.local_basis()?)
    }
}

/// Rank-k projector onto the k lowest local levels of one site.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Projector {
    pub site: usize,
    pub rank: usize,
    pub basis: LocalBasis,
}

impl Projector {
    pub fn new(site: usize, rank: usize, basis: LocalBasis) -> Result<Self> {
        if rank == 0 || rank > basis.dim() {
            return Err(Error::RankOutOfRange { rank, d: basis.dim() });
        }
        Ok(Self { site, rank, basis })
    }

    pub fn dim(&self) -> usize {
        self.basis.dim()
    }

    /// Sz-basis indices in the projector's range, ascending.
    pub fn indices(&self) -> Vec<usize> {
        let mut v = self.basis.lowest(self.rank).to_vec();
        v.sort_unstable();
        v
    }

    /// d×d matrix of the projector.
    pub fn local_matrix(&self) -> CMat {
        let keep = self.indices();
        let d = self.dim();
        Mat::from_fn(d, d, |i, j| if i == j && keep.contains(&i) { real(1.0) } else { ZERO })
    }

    /// P ⊗ I on the full space.
    pub fn embedded(&self, dims: &[usize]) -> Result<CMat> {
        embed_operator(self.local_matrix().as_ref(), self.site, dims)
    }

    /// Full-space basis indices in the range of P ⊗ I, ascending.
    pub fn support(&self, dims: &[usize]) -> Result<Vec<usize>> {
        if self.site >= dims.len() {
            return Err(Error::SiteOutOfRange {
                site: self.site,
                sites: dims.len(),
            });
        }
        if dims[self.site] != self.dim() {
            return Err(Error::DimensionMismatch {
                expected: dims[self.site],
                found: self.dim(),
            });
        }
        let stride: usize = dims[self.site + 1..].iter().product();
        let total: usize = dims.iter().product();
        let keep = self.indices();
        Ok((0..total)
            .filter(|&x| keep.contains(&((x / stride) % self.dim())))
            .collect())
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::linalg::{max_abs_diff, trace};

    #[test]
    fn projector_is_idempotent_with_trace_k() {
        for d in 2..6 {
            for k in 1..=d {
                let p = Projector::new(0, k, LocalBasis::new(d, 1.0).unwrap()).unwrap();
                let m = p.local_matrix();
                assert_eq!(max_abs_diff((&m * &m).as_ref(), m.as_ref()), 0.0);
                assert_eq!(trace(m.as_ref()).re, k as f64);
            }
        }
    }

    #[test]
    fn projector_support_on_product_space() {
        let p = Projector::new(0, 1, LocalBasis::new(3, 1.0).unwrap()).unwrap();
        // lowest level of h·Sz, h > 0, is index 2
        assert_eq!(p.support(&[3, 2]).unwrap(), vec![4, 5]);
        let q = Projector::new(1, 2, LocalBasis::new(3, 1.0).unwrap()).unwrap();
        assert_eq!(q.support(&[2, 3]).unwrap(), vec![1, 2, 4, 5]);
    }

    #[test]
    fn config_validation() {
        let ok = ProtocolConfig::xx_single(3, 1.2, 10, 1);
        assert!(ok.validate().is_ok());
        let mut bad = ok.clone();
        bad.rank = 4;
        assert_eq!(bad.validate().unwrap_err(), Error::RankOutOfRange { rank: 4, d: 3 });
        let mut star = ok.clone();
        star.layout = SystemLayout::star(2, 3);
        assert!(matches!(star.validate(), Err(Error::WrongTopology { .. })));
        let mut betas = ok.clone();
        betas.target_betas = vec![0.0, 1.0];
        assert!(betas.validate().is_err());
        let mut flat = ok;
        flat.hamiltonian = HamiltonianSpec::xx(1.0, 0.0);
        assert_eq!(flat.validate().unwrap_err(), Error::DegenerateLocalHamiltonian);
    }
}
