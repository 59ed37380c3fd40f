//! Embedding local operators into a product space and tracing subsystems out.

use faer::{c64, Mat, MatRef};

use super::state::DensityMatrix;
use crate::error::{Error, Result};
use crate::linalg::{identity, kron, CMat, ZERO};

fn check_site(site: usize, dims: &[usize]) -> Result<()> {
    if site >= dims.len() {
        return Err(Error::SiteOutOfRange {
            site,
            sites: dims.len(),
        });
    }
    Ok(())
}

/// I ⊗ … ⊗ op ⊗ … ⊗ I with `op` acting on `site`.
pub fn embed_operator(op: MatRef<'_, c64>, site: usize, dims: &[usize]) -> Result<CMat> {
    embed_product(&[(site, op)], dims)
}

/// Kronecker product placing each listed operator on its site and the
/// identity elsewhere. Sites must be distinct.
pub fn embed_product(ops: &[(usize, MatRef<'_, c64>)], dims: &[usize]) -> Result<CMat> {
    for (n, &(site, op)) in ops.iter().enumerate() {
        check_site(site, dims)?;
        if op.nrows() != dims[site] || op.ncols() != dims[site] {
            return Err(Error::DimensionMismatch {
                expected: dims[site],
                found: op.nrows(),
            });
        }
        if ops[..n].iter().any(|&(s, _)| s == site) {
            return Err(Error::InvalidParameter {
                name: "site",
                value: site as f64,
                reason: "listed twice in one product",
            });
        }
    }
    // collapse runs of identities into one factor
    let mut out: Option<CMat> = None;
    let mut pending = 1usize;
    let push = |out: Option<CMat>, m: MatRef<'_, c64>| match out {
        None => m.to_owned(),
        Some(acc) => kron(acc.as_ref(), m),
    };
    for (site, &d) in dims.iter().enumerate() {
        match ops.iter().find(|&&(s, _)| s == site) {
            Some(&(_, op)) => {
                if pending > 1 {
                    out = Some(push(out, identity(pending).as_ref()));
                }
                pending = 1;
                out = Some(push(out, op));
            }
            None => pending *= d,
        }
    }
    if pending > 1 || out.is_none() {
        out = Some(push(out, identity(pending).as_ref()));
    }
    Ok(out.unwrap())
}

/// Embeds a two-site operator acting on the adjacent pair (`site`, `site + 1`).
pub fn embed_adjacent(op: MatRef<'_, c64>, site: usize, dims: &[usize]) -> Result<CMat> {
    check_site(site + 1, dims)?;
    let local = dims[site] * dims[site + 1];
    if op.nrows() != local || op.ncols() != local {
        return Err(Error::DimensionMismatch {
            expected: local,
            found: op.nrows(),
        });
    }
    let left: usize = dims[..site].iter().product();
    let right: usize = dims[site + 2..].iter().product();
    let mut out = op.to_owned();
    if left > 1 {
        out = kron(identity(left).as_ref(), out.as_ref());
    }
    if right > 1 {
        out = kron(out.as_ref(), identity(right).as_ref());
    }
    Ok(out)
}

/// Row-major strides of a product index: site 0 is the most significant digit.
pub fn strides(dims: &[usize]) -> Vec<usize> {
    let mut s = vec![1; dims.len()];
    for i in (0..dims.len().saturating_sub(1)).rev() {
        s[i] = s[i + 1] * dims[i + 1];
    }
    s
}

/// Offsets of every multi-index over `sites`, enumerated in row-major order.
fn offsets(sites: &[usize], dims: &[usize], stride: &[usize]) -> Vec<usize> {
    let mut out = vec![0usize];
    for &s in sites {
        let mut next = Vec::with_capacity(out.len() * dims[s]);
        for &o in &out {
            for digit in 0..dims[s] {
                next.push(o + digit * stride[s]);
            }
        }
        out = next;
    }
    out
}

/// Reduced matrix on the `keep` sites, in the order given. No validation of
/// the input is performed.
pub fn partial_trace_matrix(rho: MatRef<'_, c64>, dims: &[usize], keep: &[usize]) -> Result<CMat> {
    if keep.is_empty() {
        return Err(Error::EmptyKeepSet);
    }
    let total: usize = dims.iter().product();
    if rho.nrows() != total || rho.ncols() != total {
        return Err(Error::DimensionMismatch {
            expected: total,
            found: rho.nrows(),
        });
    }
    for (n, &k) in keep.iter().enumerate() {
        check_site(k, dims)?;
        if keep[..n].contains(&k) {
            return Err(Error::InvalidParameter {
                name: "keep",
                value: k as f64,
                reason: "duplicate site",
            });
        }
    }
    let stride = strides(dims);
    let traced: Vec<usize> = (0..dims.len()).filter(|s| !keep.contains(s)).collect();
    let kept_off = offsets(keep, dims, &stride);
    let traced_off = offsets(&traced, dims, &stride);
    let n = kept_off.len();
    let mut out = Mat::<c64>::zeros(n, n);
    for (j, &cj) in kept_off.iter().enumerate() {
        for (i, &ci) in kept_off.iter().enumerate() {
            let mut acc = ZERO;
            for &t in &traced_off {
                acc += rho[(ci + t, cj + t)];
            }
            out[(i, j)] = acc;
        }
    }
    Ok(out)
}

/// Reduced density matrix on the `keep` sites, order preserved.
pub fn partial_trace(rho: &DensityMatrix, keep: &[usize]) -> Result<DensityMatrix> {
    let data = partial_trace_matrix(rho.matrix(), rho.dims(), keep)?;
    let dims = keep.iter().map(|&k| rho.dims()[k]).collect();
    DensityMatrix::from_parts(dims, data)
}
