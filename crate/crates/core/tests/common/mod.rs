#![allow(dead_code)]

use qudit_zeno::c64;
use qudit_zeno::linalg::{hermitize, trace, CMat};
use qudit_zeno::DensityMatrix;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

pub fn rng(seed: u64) -> ChaCha8Rng {
    ChaCha8Rng::seed_from_u64(seed)
}

pub fn ginibre(rng: &mut impl Rng, rows: usize, cols: usize) -> CMat {
    CMat::from_fn(rows, cols, |_, _| {
        c64::new(rng.gen_range(-1.0..1.0), rng.gen_range(-1.0..1.0))
    })
}

/// G·G†/Tr, full rank with probability one.
pub fn random_density(rng: &mut impl Rng, dims: &[usize]) -> DensityMatrix {
    let n: usize = dims.iter().product();
    let g = ginibre(rng, n, n);
    let mut rho = &g * g.adjoint();
    let t = trace(rho.as_ref()).re;
    rho = CMat::from_fn(n, n, |i, j| rho[(i, j)] / t);
    hermitize(&mut rho);
    DensityMatrix::new(dims.to_vec(), rho).unwrap()
}

pub fn random_pure(rng: &mut impl Rng, dims: &[usize]) -> (Vec<c64>, DensityMatrix) {
    let n: usize = dims.iter().product();
    let g = ginibre(rng, n, 1);
    let norm: f64 = (0..n).map(|i| g[(i, 0)].norm_sqr()).sum::<f64>().sqrt();
    let psi: Vec<c64> = (0..n).map(|i| g[(i, 0)] / norm).collect();
    let rho = DensityMatrix::pure(dims.to_vec(), &psi).unwrap();
    (psi, rho)
}

pub fn random_hermitian(rng: &mut impl Rng, n: usize) -> CMat {
    let g = ginibre(rng, n, n);
    let mut h = &g + g.adjoint();
    hermitize(&mut h);
    h
}
