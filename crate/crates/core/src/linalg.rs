//! Dense complex matrix helpers on top of `faer`.

use faer::linalg::solvers::Solve;
use faer::{c64, Mat, MatRef, Side};

use crate::error::{Error, Result};

/// Dense complex matrix.
pub type CMat = Mat<c64>;

pub const ZERO: c64 = c64 { re: 0.0, im: 0.0 };
pub const ONE: c64 = c64 { re: 1.0, im: 0.0 };
pub const I: c64 = c64 { re: 0.0, im: 1.0 };

#[inline]
pub fn real(x: f64) -> c64 {
    c64::new(x, 0.0)
}

pub fn identity(n: usize) -> CMat {
    Mat::identity(n, n)
}

pub fn zeros(n: usize, m: usize) -> CMat {
    Mat::zeros(n, m)
}

pub fn dagger(a: MatRef<'_, c64>) -> CMat {
    a.adjoint().to_owned()
}

pub fn scaled(a: MatRef<'_, c64>, s: c64) -> CMat {
    Mat::from_fn(a.nrows(), a.ncols(), |i, j| a[(i, j)] * s)
}

pub fn trace(a: MatRef<'_, c64>) -> c64 {
    (0..a.nrows().min(a.ncols())).map(|i| a[(i, i)]).sum()
}

/// Largest entry modulus.
pub fn max_abs(a: MatRef<'_, c64>) -> f64 {
    let mut m = 0.0f64;
    for j in 0..a.ncols() {
        for i in 0..a.nrows() {
            m = m.max(a[(i, j)].norm());
        }
    }
    m
}

pub fn max_abs_diff(a: MatRef<'_, c64>, b: MatRef<'_, c64>) -> f64 {
    assert_eq!((a.nrows(), a.ncols()), (b.nrows(), b.ncols()));
    let mut m = 0.0f64;
    for j in 0..a.ncols() {
        for i in 0..a.nrows() {
            m = m.max((a[(i, j)] - b[(i, j)]).norm());
        }
    }
    m
}

/// max |A_ij − conj(A_ji)|
pub fn hermiticity_error(a: MatRef<'_, c64>) -> f64 {
    if a.nrows() != a.ncols() {
        return f64::INFINITY;
    }
    let n = a.nrows();
    let mut m = 0.0f64;
    for j in 0..n {
        for i in 0..=j {
            m = m.max((a[(i, j)] - a[(j, i)].conj()).norm());
        }
    }
    m
}

/// Replaces `a` with (A + A†)/2.
pub fn hermitize(a: &mut CMat) {
    let n = a.nrows();
    for j in 0..n {
        for i in 0..j {
            let v = (a[(i, j)] + a[(j, i)].conj()) * 0.5;
            a[(i, j)] = v;
            a[(j, i)] = v.conj();
        }
        let d = a[(j, j)].re;
        a[(j, j)] = real(d);
    }
}

pub fn commutator(a: MatRef<'_, c64>, b: MatRef<'_, c64>) -> CMat {
    a * b - b * a
}

pub fn kron(a: MatRef<'_, c64>, b: MatRef<'_, c64>) -> CMat {
    a.kron(b)
}

/// Copies the rows and columns listed in `rows`/`cols`.
pub fn select(a: MatRef<'_, c64>, rows: &[usize], cols: &[usize]) -> CMat {
    Mat::from_fn(rows.len(), cols.len(), |i, j| a[(rows[i], cols[j])])
}

/// Induced 1-norm (max column sum).
pub fn norm_one(a: MatRef<'_, c64>) -> f64 {
    (0..a.ncols())
        .map(|j| (0..a.nrows()).map(|i| a[(i, j)].norm()).sum::<f64>())
        .fold(0.0, f64::max)
}

/// Eigendecomposition of a Hermitian matrix, eigenvalues ascending.
#[derive(Clone, Debug)]
pub struct HermitianEigen {
    pub values: Vec<f64>,
    pub vectors: CMat,
}

impl HermitianEigen {
    /// Only the lower triangle of `a` is read.
    pub fn new(a: MatRef<'_, c64>) -> Result<Self> {
        if a.nrows() != a.ncols() {
            return Err(Error::DimensionMismatch {
                expected: a.nrows(),
                found: a.ncols(),
            });
        }
        let evd = a
            .self_adjoint_eigen(Side::Lower)
            .map_err(|e| Error::Decomposition(format!("{e:?}")))?;
        let s = evd.S();
        let values = (0..a.nrows()).map(|i| s[i].re).collect();
        Ok(Self {
            values,
            vectors: evd.U().to_owned(),
        })
    }

    /// V · diag(f(λ)) · V†
    pub fn map(&self, f: impl Fn(f64) -> c64) -> CMat {
        let n = self.values.len();
        let weights: Vec<c64> = self.values.iter().map(|&l| f(l)).collect();
        let v = &self.vectors;
        let scaled = Mat::from_fn(n, n, |i, j| v[(i, j)] * weights[j]);
        &scaled * v.adjoint()
    }
}

/// Eigenvalues of a Hermitian matrix, ascending.
pub fn eigvalsh(a: MatRef<'_, c64>) -> Result<Vec<f64>> {
    let vals = a
        .self_adjoint_eigenvalues(Side::Lower)
        .map_err(|e| Error::Decomposition(format!("{e:?}")))?;
    Ok(vals)
}

/// General complex eigendecomposition: (eigenvalues, right eigenvectors as columns).
pub fn eig(a: MatRef<'_, c64>) -> Result<(Vec<c64>, CMat)> {
    let evd = a.eigen().map_err(|e| Error::Decomposition(format!("{e:?}")))?;
    let s = evd.S();
    let values = (0..a.nrows()).map(|i| s[i]).collect();
    Ok((values, evd.U().to_owned()))
}

const PADE13: [f64; 14] = [
    64764752532480000.0,
    32382376266240000.0,
    7771770303897600.0,
    1187353796428800.0,
    129060195264000.0,
    10559470521600.0,
    670442572800.0,
    33522128640.0,
    1323241920.0,
    40840800.0,
    960960.0,
    16380.0,
    182.0,
    1.0,
];
const THETA13: f64 = 5.371920351148152;

/// Matrix exponential of a general complex matrix by degree-13 Padé
/// approximation with scaling and squaring.
pub fn expm(a: MatRef<'_, c64>) -> Result<CMat> {
    let n = a.nrows();
    if n != a.ncols() {
        return Err(Error::DimensionMismatch {
            expected: n,
            found: a.ncols(),
        });
    }
    let norm = norm_one(a);
    if !norm.is_finite() {
        return Err(Error::InvalidParameter {
            name: "expm argument norm",
            value: norm,
            reason: "must be finite",
        });
    }
    let s = if norm > THETA13 {
        (norm / THETA13).log2().ceil().max(0.0) as i32
    } else {
        0
    };
    let a = scaled(a, real(0.5f64.powi(s)));
    let b = &PADE13;
    let id = identity(n);
    let a2 = &a * &a;
    let a4 = &a2 * &a2;
    let a6 = &a4 * &a2;

    let lin = |c6: f64, c4: f64, c2: f64, c0: f64| -> CMat {
        Mat::from_fn(n, n, |i, j| {
            a6[(i, j)] * c6 + a4[(i, j)] * c4 + a2[(i, j)] * c2 + id[(i, j)] * c0
        })
    };
    let inner_u = &a6 * lin(b[13], b[11], b[9], 0.0);
    let u_poly = &inner_u + lin(b[7], b[5], b[3], b[1]);
    let u = &a * &u_poly;
    let inner_v = &a6 * lin(b[12], b[10], b[8], 0.0);
    let v = &inner_v + lin(b[6], b[4], b[2], b[0]);

    let p = &v + &u;
    let q = &v - &u;
    let mut r = q.partial_piv_lu().solve(&p);
    for _ in 0..s {
        r = &r * &r;
    }
    Ok(r)
}
