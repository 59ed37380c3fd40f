//! Closed-form fidelities of a single target after N rank-1 measurements,
//! β = 0 start. They serve as exact references for the numerical engine.

use crate::error::{Error, Result};

fn pow(x: f64, n: u64) -> f64 {
    match i32::try_from(n) {
        Ok(e) => x.powi(e),
        Err(_) => x.powf(n as f64),
    }
}

/// XX coupling, one target of dimension `d` ∈ {2, 3, 4, 5}, ground-state
/// projector on the regulator. `jtau` is the product Jτ in units of the
/// local field.
pub fn fidelity_xx_rank1(d: usize, n: u64, jtau: f64) -> Result<f64> {
    let x = jtau;
    let denominator = match d {
        2 => 1.0 + pow((2.0 * x).cos(), 2 * n),
        3 => 1.0 + pow(x.cos(), 2 * n) + pow((x / 2f64.sqrt()).cos(), 4 * n),
        4 => {
            let r13 = 13f64.sqrt();
            let mixed = x.cos() * (r13 * x / 2.0).cos() + 2.0 / r13 * x.sin() * (r13 * x / 2.0).sin();
            1.0 + pow((1.5 * x).cos(), 2 * n) + pow((1.5f64.sqrt() * x).cos(), 4 * n) + pow(mixed, 2 * n)
        }
        5 => {
            let r33 = 33f64.sqrt();
            let a = (9.0 + 11.0 * (2.0 * x).cos() + 2.0 * (22f64.sqrt() * x).cos()) / 22.0;
            let b =
                ((11.0 + r33) * (0.5 * (3.0 - r33) * x).cos() + (11.0 - r33) * (0.5 * (3.0 + r33) * x).cos()) / 22.0;
            1.0 + pow((2.0 * x).cos(), 2 * n) + pow((3f64.sqrt() * x).cos(), 4 * n) + pow(a, 2 * n) + pow(b, 2 * n)
        }
        _ => return Err(Error::UnsupportedDimension { d }),
    };
    Ok(1.0 / denominator)
}

/// a_mn^± = m·cosθ ± n·sinθ
pub fn a_coefficient(m: f64, n: f64, sign: f64, theta: f64) -> f64 {
    m * theta.cos() + sign * n * theta.sin()
}

/// Bilinear-biquadratic coupling at angle θ, one spin-1 target, ground-state
/// projector on the regulator.
pub fn fidelity_bbh_rank1_d3(n: u64, theta: f64, jtau: f64) -> f64 {
    let a10 = a_coefficient(1.0, 0.0, 1.0, theta);
    let a13m = a_coefficient(1.0, 3.0, -1.0, theta);
    let a11m = a_coefficient(1.0, 1.0, -1.0, theta);
    let bracket = 7.0 + 3.0 * (2.0 * a10 * jtau).cos() + 6.0 * (a13m * jtau).cos() + 2.0 * (3.0 * a11m * jtau).cos();
    1.0 / (1.0 + pow((a10 * jtau).cos(), 2 * n) + pow(bracket / 18.0, n))
}
