use proptest::prelude::*;
use qudit_zeno::hamiltonians::{build_bbh, build_spin_star, build_xxz, total_sz, HamiltonianSpec, SystemLayout};
use qudit_zeno::linalg::{hermiticity_error, max_abs, max_abs_diff, CMat};
use qudit_zeno::SpinScale;

/// Permutation matrix exchanging sites `a` and `b` of a uniform product space.
fn swap_sites(dims: &[usize], a: usize, b: usize) -> CMat {
    let n: usize = dims.iter().product();
    let strides = qudit_zeno::qudit::tensor::strides(dims);
    let mut p = CMat::zeros(n, n);
    for x in 0..n {
        let da = (x / strides[a]) % dims[a];
        let db = (x / strides[b]) % dims[b];
        let y = x - da * strides[a] - db * strides[b] + db * strides[a] + da * strides[b];
        p[(y, x)] = qudit_zeno::linalg::ONE;
    }
    p
}

#[test]
fn xx_is_xxz_at_zero_anisotropy() {
    let layout = SystemLayout::chain(2, 3);
    let a = build_xxz(&layout, 0.9, 0.0, 1.0).unwrap();
    let b = HamiltonianSpec::xx(0.9, 1.0).build(&layout).unwrap();
    assert_eq!(max_abs_diff(a.as_ref(), b.as_ref()), 0.0);
}

#[test]
fn star_without_coupling_is_hub_field() {
    let h = build_spin_star(3, 3, 0.0, 1.3).unwrap();
    let n = h.nrows();
    // hub digit is the most significant
    for x in 0..n {
        let m = 1.0 - (x / 27) as f64;
        assert!((h[(x, x)].re - 1.3 * m).abs() < 1e-15);
    }
    let off = CMat::from_fn(n, n, |i, j| if i == j { qudit_zeno::linalg::ZERO } else { h[(i, j)] });
    assert_eq!(max_abs(off.as_ref()), 0.0);
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(24))]

    #[test]
    fn xxz_hermitian_and_conserving(j in -2.0f64..2.0, delta in -2.0f64..2.0, h in -2.0f64..2.0, d in 2usize..4, l in 1usize..3) {
        let layout = SystemLayout::chain(l, d);
        let hm = build_xxz(&layout, j, delta, h).unwrap();
        prop_assert!(hermiticity_error(hm.as_ref()) < 1e-12);
        let sz = total_sz(&layout).unwrap();
        prop_assert!(max_abs((&hm * &sz - &sz * &hm).as_ref()) < 1e-12);
    }

    #[test]
    fn bbh_hermitian_and_conserving(j in -2.0f64..2.0, theta in -7.0f64..7.0, h in -2.0f64..2.0, d in 2usize..4) {
        let layout = SystemLayout::chain(2, d);
        let hm = build_bbh(&layout, j, theta, h).unwrap();
        prop_assert!(hermiticity_error(hm.as_ref()) < 1e-12);
        let sz = total_sz(&layout).unwrap();
        prop_assert!(max_abs((&hm * &sz - &sz * &hm).as_ref()) < 1e-12);
    }

    #[test]
    fn star_symmetric_under_ring_swaps(j in -2.0f64..2.0, h in -2.0f64..2.0, d in 2usize..4) {
        let l = 3;
        let layout = SystemLayout::star(l, d);
        let hm = build_spin_star(l, d, j, h).unwrap();
        prop_assert!(hermiticity_error(hm.as_ref()) < 1e-12);
        let dims = layout.dims();
        for (a, b) in [(1, 2), (1, 3), (2, 3)] {
            let p = swap_sites(&dims, a, b);
            let conj = &p * &hm * p.adjoint();
            prop_assert!(max_abs_diff(conj.as_ref(), hm.as_ref()) < 1e-12);
        }
    }

    #[test]
    fn normalization_scales_coupling_and_field(j in -2.0f64..2.0, h in -2.0f64..2.0) {
        // Pauli operators are twice the spin-1/2 ones; the bond is quadratic
        let spin = build_xxz(&SystemLayout::chain(1, 2).with_scale(SpinScale::Spin), 4.0 * j, 0.0, 2.0 * h).unwrap();
        let pauli = build_xxz(&SystemLayout::chain(1, 2).with_scale(SpinScale::Pauli), j, 0.0, h).unwrap();
        prop_assert!(max_abs_diff(spin.as_ref(), pauli.as_ref()) < 1e-13);
    }
}
