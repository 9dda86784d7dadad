use std::f64::consts::TAU;

use ionjc::fock_core::{coupling_f, laguerre, rabi_frequency, sideband_element};
use ionjc::ModelParams;
use nalgebra::DMatrix;
use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{One, ToPrimitive, Zero};
use proptest::prelude::*;

/// `<n| cos(η(a + a†) + Δφ) |n + k>` from the spectral decomposition of the
/// truncated position operator. Rows far below the cutoff are exact to
/// rounding.
fn mode_function_matrix(eta: f64, delta_phi: f64, dim: usize) -> DMatrix<f64> {
    let mut x = DMatrix::<f64>::zeros(dim, dim);
    for n in 1..dim {
        let s = (n as f64).sqrt();
        x[(n - 1, n)] = s;
        x[(n, n - 1)] = s;
    }
    let eig = x.symmetric_eigen();
    let v = &eig.eigenvectors;
    let mut diag = DMatrix::<f64>::zeros(dim, dim);
    for i in 0..dim {
        diag[(i, i)] = (eta * eig.eigenvalues[i] + delta_phi).cos();
    }
    v * diag * v.transpose()
}

fn binomial(n: usize, r: usize) -> BigInt {
    let mut acc = BigInt::one();
    for i in 0..r {
        acc = acc * BigInt::from(n - i) / BigInt::from(i + 1);
    }
    acc
}

/// Exact `L_n^{(k)}(x)` for rational `x`, from the explicit sum, together
/// with the sum of the absolute values of its terms.
fn laguerre_exact(n: usize, k: usize, x: &BigRational) -> (f64, f64) {
    let mut total = BigRational::zero();
    let mut magnitude = BigRational::zero();
    let mut x_pow = BigRational::one();
    let mut fact = BigInt::one();
    for j in 0..=n {
        if j > 0 {
            x_pow = &x_pow * x;
            fact *= BigInt::from(j);
        }
        let term = BigRational::from_integer(binomial(n + k, n - j)) * &x_pow
            / BigRational::from_integer(fact.clone());
        magnitude += term.clone();
        if j % 2 == 0 {
            total += term;
        } else {
            total -= term;
        }
    }
    (total.to_f64().unwrap(), magnitude.to_f64().unwrap())
}

#[test]
fn laguerre_matches_exact_rational_sum() {
    let points = [(1, 16), (1, 4), (3, 2), (4, 1), (37, 8)];
    for &(num, den) in &points {
        let exact_x = BigRational::new(BigInt::from(num), BigInt::from(den));
        let x = num as f64 / den as f64;
        for k in 0..=4 {
            for n in 0..=40 {
                let (exact, scale) = laguerre_exact(n, k, &exact_x);
                let got = laguerre(n, k, x);
                assert!(
                    (got - exact).abs() <= 4e-15 * scale.max(1.0) * (n + 1) as f64,
                    "L_{n}^({k})({x}) = {got}, exact {exact}"
                );
            }
        }
    }
}

#[test]
fn sideband_element_is_a_mode_function_matrix_element() {
    let dim = 120;
    for &(eta, delta_phi) in &[(0.05, 0.0), (0.2, 0.0), (0.2, 1.1), (0.3, -2.4), (0.6, 0.3)] {
        let g = mode_function_matrix(eta, delta_phi, dim);
        for k in 0..=4 {
            let p = ModelParams::new(k, eta, delta_phi);
            for n in 0..=25 {
                let oracle = g[(n, n + k)];
                let got = sideband_element(n, &p);
                assert!((got - oracle).abs() < 1e-12, "k={k} n={n} eta={eta}: {got} vs {oracle}");
            }
        }
    }
}

#[test]
fn coupling_f_relates_to_sideband_element() {
    let p = ModelParams::new(3, 0.25, 0.7);
    for n in 0..30 {
        let ratio: f64 = ((n + 1)..=(n + 3)).map(|v| v as f64).product::<f64>().sqrt();
        let f = coupling_f(n, &p);
        assert_eq!(f.im, 0.0);
        let g = sideband_element(n, &p);
        assert!((f.re * ratio - g).abs() <= 1e-14 * g.abs());
    }
}

#[test]
fn rabi_frequency_scales_with_pump_number() {
    let p = ModelParams::new(2, 0.2, 0.4);
    for n in 0..10 {
        let base = rabi_frequency(0, n, &p);
        assert!((base.re - 2.0 * sideband_element(n, &p)).abs() < 1e-15);
        for m in [1usize, 4, 99, 1599] {
            let r = rabi_frequency(m, n, &p);
            assert!((r - base * ((m + 1) as f64).sqrt()).norm() < 1e-13 * r.norm().max(1e-300));
        }
    }
}

#[test]
fn odd_sideband_vanishes_at_zero_phase() {
    for k in [1usize, 3, 5] {
        let p = ModelParams::new(k, 0.2, 0.0);
        for n in 0..20 {
            assert_eq!(sideband_element(n, &p), 0.0);
        }
    }
}

proptest! {
    #[test]
    fn phase_reflection(k in 0usize..6, n in 0usize..40, eta in 0.01f64..0.5, dphi in -6.0f64..6.0) {
        let a = coupling_f(n, &ModelParams::new(k, eta, dphi)).re;
        let b = coupling_f(n, &ModelParams::new(k, eta, -dphi)).re;
        let sign = if k % 2 == 0 { 1.0 } else { -1.0 };
        prop_assert!((b - sign * a).abs() <= 1e-14 * a.abs().max(1e-300));
    }

    #[test]
    fn phase_periodicity(k in 0usize..6, n in 0usize..40, eta in 0.01f64..0.5, dphi in 0.0f64..TAU) {
        let a = sideband_element(n, &ModelParams::new(k, eta, dphi));
        let b = sideband_element(n, &ModelParams::new(k, eta, dphi + TAU));
        // elements are bounded by one; exact zeros at odd k meet sin(2π) ~ 1e-16
        prop_assert!((a - b).abs() <= 1e-15 + 1e-12 * a.abs());
    }

    #[test]
    fn mode_function_bounds_couplings(k in 0usize..4, n in 0usize..60, eta in 0.01f64..1.0, dphi in -3.2f64..3.2) {
        // |<n|cos(...)|n+k>| <= ||cos(...)|| = 1
        prop_assert!(sideband_element(n, &ModelParams::new(k, eta, dphi)).abs() <= 1.0 + 1e-14);
    }
}
