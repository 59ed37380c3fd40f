//! Interacting Hamiltonians on an open chain or a star.
//!
//! Site 0 is always the regulator. On a chain the targets follow in order,
//! so site 1 is the target adjacent to the regulator and site L the farthest.
//! On a star site 0 is the hub and sites 1..=L form the ring.

use faer::Mat;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::linalg::{kron, real, scaled, CMat, ZERO};
use crate::qudit::spin::{SpinOperators, SpinScale};
use crate::qudit::tensor::{embed_adjacent, embed_product};

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Topology {
    Chain,
    Star,
}

impl Topology {
    pub fn name(self) -> &'static str {
        match self {
            Topology::Chain => "chain",
            Topology::Star => "star",
        }
    }
}

/// Geometry of the regulator plus `targets` target qudits of dimension `d`.
#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct SystemLayout {
    pub topology: Topology,
    /// Number of target qudits L.
    pub targets: usize,
    pub d: usize,
    /// Operator normalization; `None` picks [`SpinScale::conventional`].
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub scale: Option<SpinScale>,
}

impl SystemLayout {
    pub fn chain(targets: usize, d: usize) -> Self {
        Self {
            topology: Topology::Chain,
            targets,
            d,
            scale: None,
        }
    }

    pub fn star(targets: usize, d: usize) -> Self {
        Self {
            topology: Topology::Star,
            targets,
            d,
            scale: None,
        }
    }

    pub fn with_scale(mut self, scale: SpinScale) -> Self {
        self.scale = Some(scale);
        self
    }

    pub fn validate(&self) -> Result<()> {
        if self.d < 2 {
            return Err(Error::InvalidDimension { d: self.d });
        }
        if self.targets == 0 {
            return Err(Error::InvalidParameter {
                name: "targets",
                value: 0.0,
                reason: "at least one target qudit is required",
            });
        }
        Ok(())
    }

    pub fn spin_scale(&self) -> SpinScale {
        self.scale.unwrap_or_else(|| SpinScale::conventional(self.d))
    }

    pub fn sites(&self) -> usize {
        self.targets + 1
    }

    pub fn regulator_site(&self) -> usize {
        0
    }

    pub fn target_sites(&self) -> std::ops::RangeInclusive<usize> {
        1..=self.targets
    }

    pub fn dims(&self) -> Vec<usize> {
        vec![self.d; self.sites()]
    }

    /// Total Hilbert-space dimension d^(L+1).
    pub fn dim(&self) -> usize {
        self.d.pow(self.sites() as u32)
    }

    pub fn operators(&self) -> Result<SpinOperators> {
        SpinOperators::with_scale(self.d, self.spin_scale())
    }
}

/// Model and couplings. Energies are in units of the local field scale.
#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
#[serde(tag = "model", rename_all = "snake_case", deny_unknown_fields)]
pub enum HamiltonianSpec {
    /// J·Σ [SxSx + SySy + Δ·SzSz] + h·Σ Sz; Δ = 0 is the XX model.
    Xxz {
        #[serde(rename = "J")]
        j: f64,
        #[serde(rename = "Delta")]
        delta: f64,
        h: f64,
    },
    /// J·Σ [cosθ·S·S + sinθ·(S·S)²] + h·Σ Sz
    Bbh {
        #[serde(rename = "J")]
        j: f64,
        theta: f64,
        h: f64,
    },
    /// h·Sz_hub + J·Σ_i (Sx_hub Sx_i + Sy_hub Sy_i)
    SpinStar {
        #[serde(rename = "J")]
        j: f64,
        h: f64,
    },
}

impl HamiltonianSpec {
    pub fn xx(j: f64, h: f64) -> Self {
        HamiltonianSpec::Xxz { j, delta: 0.0, h }
    }

    pub fn name(&self) -> &'static str {
        match self {
            HamiltonianSpec::Xxz { .. } => "xxz",
            HamiltonianSpec::Bbh { .. } => "bbh",
            HamiltonianSpec::SpinStar { .. } => "spin_star",
        }
    }

    pub fn coupling(&self) -> f64 {
        match *self {
            HamiltonianSpec::Xxz { j, .. } | HamiltonianSpec::Bbh { j, .. } | HamiltonianSpec::SpinStar { j, .. } => j,
        }
    }

    /// Local field; also fixes the energy ordering of every site's basis.
    pub fn field(&self) -> f64 {
        match *self {
            HamiltonianSpec::Xxz { h, .. } | HamiltonianSpec::Bbh { h, .. } | HamiltonianSpec::SpinStar { h, .. } => h,
        }
    }

    /// Δ for XXZ, θ for BBH, 0 for the star.
    pub fn anisotropy_or_angle(&self) -> f64 {
        match *self {
            HamiltonianSpec::Xxz { delta, .. } => delta,
            HamiltonianSpec::Bbh { theta, .. } => theta,
            HamiltonianSpec::SpinStar { .. } => 0.0,
        }
    }

    pub fn with_coupling(mut self, value: f64) -> Self {
        match &mut self {
            HamiltonianSpec::Xxz { j, .. } | HamiltonianSpec::Bbh { j, .. } | HamiltonianSpec::SpinStar { j, .. } => {
                *j = value
            }
        }
        self
    }

    pub fn validate(&self) -> Result<()> {
        let finite = |name, v: f64| {
            if v.is_finite() {
                Ok(())
            } else {
                Err(Error::InvalidParameter {
                    name,
                    value: v,
                    reason: "must be finite",
                })
            }
        };
        finite("J", self.coupling())?;
        finite("h", self.field())?;
        match self {
            HamiltonianSpec::Xxz { delta, .. } => finite("Delta", *delta),
            HamiltonianSpec::Bbh { theta, .. } => finite("theta", *theta),
            HamiltonianSpec::SpinStar { .. } => Ok(()),
        }
    }

    pub fn build(&self, layout: &SystemLayout) -> Result<CMat> {
        self.validate()?;
        match *self {
            HamiltonianSpec::Xxz { j, delta, h } => build_xxz(layout, j, delta, h),
            HamiltonianSpec::Bbh { j, theta, h } => build_bbh(layout, j, theta, h),
            HamiltonianSpec::SpinStar { j, h } => {
                if layout.topology != Topology::Star {
                    return Err(Error::WrongTopology {
                        model: "spin-star",
                        expected: "star",
                    });
                }
                spin_star(layout, j, h)
            }
        }
    }
}

fn require_chain(layout: &SystemLayout, model: &'static str) -> Result<()> {
    layout.validate()?;
    if layout.topology != Topology::Chain {
        return Err(Error::WrongTopology {
            model,
            expected: "chain",
        });
    }
    Ok(())
}

/// h·Σ_j Sz_j over `sites`, built directly as a diagonal.
fn field_term(layout: &SystemLayout, ops: &SpinOperators, h: f64, sites: &[usize]) -> CMat {
    let dims = layout.dims();
    let n = layout.dim();
    let m = ops.sz_diagonal();
    let stride = crate::qudit::tensor::strides(&dims);
    Mat::from_fn(n, n, |r, c| {
        if r != c {
            return ZERO;
        }
        let e: f64 = sites.iter().map(|&s| m[(r / stride[s]) % dims[s]]).sum();
        real(h * e)
    })
}

fn chain_from_bond(layout: &SystemLayout, ops: &SpinOperators, bond: CMat, h: f64) -> Result<CMat> {
    let dims = layout.dims();
    let sites: Vec<usize> = (0..layout.sites()).collect();
    let mut total = field_term(layout, ops, h, &sites);
    for j in 0..layout.targets {
        total += embed_adjacent(bond.as_ref(), j, &dims)?;
    }
    Ok(total)
}

/// XXZ chain with the field on every site, regulator included.
pub fn build_xxz(layout: &SystemLayout, j: f64, delta: f64, h: f64) -> Result<CMat> {
    require_chain(layout, "XXZ")?;
    let ops = layout.operators()?;
    let zz = kron(ops.sz.as_ref(), ops.sz.as_ref());
    let bond = kron(ops.sx.as_ref(), ops.sx.as_ref())
        + kron(ops.sy.as_ref(), ops.sy.as_ref())
        + scaled(zz.as_ref(), real(delta));
    chain_from_bond(layout, &ops, scaled(bond.as_ref(), real(j)), h)
}

/// S_a · S_b on a pair of sites, as a d²×d² matrix.
pub fn heisenberg_bond(ops: &SpinOperators) -> CMat {
    kron(ops.sx.as_ref(), ops.sx.as_ref())
        + kron(ops.sy.as_ref(), ops.sy.as_ref())
        + kron(ops.sz.as_ref(), ops.sz.as_ref())
}

/// Bilinear-biquadratic chain. θ is used through cos and sin only, so any
/// representative modulo 2π gives the same matrix.
pub fn build_bbh(layout: &SystemLayout, j: f64, theta: f64, h: f64) -> Result<CMat> {
    require_chain(layout, "BBH")?;
    let ops = layout.operators()?;
    let b = heisenberg_bond(&ops);
    let b2 = &b * &b;
    let bond = scaled(b.as_ref(), real(j * theta.cos())) + scaled(b2.as_ref(), real(j * theta.sin()));
    chain_from_bond(layout, &ops, bond, h)
}

fn spin_star(layout: &SystemLayout, j: f64, h: f64) -> Result<CMat> {
    layout.validate()?;
    let ops = layout.operators()?;
    let dims = layout.dims();
    let mut total = field_term(layout, &ops, h, &[0]);
    for i in layout.target_sites() {
        let xx = embed_product(&[(0, ops.sx.as_ref()), (i, ops.sx.as_ref())], &dims)?;
        let yy = embed_product(&[(0, ops.sy.as_ref()), (i, ops.sy.as_ref())], &dims)?;
        total += scaled((xx + yy).as_ref(), real(j));
    }
    Ok(total)
}

/// Spin-star Hamiltonian with `l` ring sites, conventional normalization.
/// Ring sites carry no field.
pub fn build_spin_star(l: usize, d: usize, j: f64, h: f64) -> Result<CMat> {
    spin_star(&SystemLayout::star(l, d), j, h)
}

/// Σ_j Sz_j over all sites, in the layout's normalization.
pub fn total_sz(layout: &SystemLayout) -> Result<CMat> {
    layout.validate()?;
    let ops = layout.operators()?;
    let sites: Vec<usize> = (0..layout.sites()).collect();
    Ok(field_term(layout, &ops, 1.0, &sites))
}
