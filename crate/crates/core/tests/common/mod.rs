//! Independent reference implementations shared by the integration tests.
#![allow(dead_code)]

use std::f64::consts::PI;

use ionjc::C64;
use nalgebra::DMatrix;

/// `ln n!` by direct summation.
pub fn ln_fact(n: usize) -> f64 {
    (2..=n).map(|v| (v as f64).ln()).sum()
}

/// `e^{|β|²/2} <n|D(β)|m> = <n| e^{βa†} e^{-β*a} |m>`, from the normal
/// ordered product of two finite series; no Laguerre polynomials involved.
pub fn displacement_normal_ordered(n: usize, m: usize, beta: C64) -> C64 {
    let lf: Vec<f64> = (0..=n.max(m)).map(ln_fact).collect();
    normal_ordered_with(&lf, n, m, beta)
}

fn normal_ordered_with(lf: &[f64], n: usize, m: usize, beta: C64) -> C64 {
    let mut total = C64::new(0.0, 0.0);
    for j in 0..=n.min(m) {
        let log_mag = 0.5 * (lf[n] + lf[m]) - lf[j] - lf[n - j] - lf[m - j];
        total += log_mag.exp() * beta.powu((n - j) as u32) * (-beta.conj()).powu((m - j) as u32);
    }
    total
}

/// `Φ(β) = Σ ρ_mn e^{|β|²/2} <n|D(β)|m>`.
pub fn characteristic_oracle(rho: &DMatrix<C64>, beta: C64) -> C64 {
    let lf: Vec<f64> = (0..rho.nrows()).map(ln_fact).collect();
    let mut total = C64::new(0.0, 0.0);
    for m in 0..rho.nrows() {
        for n in 0..rho.ncols() {
            total += rho[(m, n)] * normal_ordered_with(&lf, n, m, beta);
        }
    }
    total
}

fn gauss_legendre_unit(order: usize) -> Vec<(f64, f64)> {
    // Golub-Welsch: eigenvalues of the Jacobi matrix
    let mut jacobi = DMatrix::<f64>::zeros(order, order);
    for i in 1..order {
        let b = i as f64 / ((4 * i * i - 1) as f64).sqrt();
        jacobi[(i, i - 1)] = b;
        jacobi[(i - 1, i)] = b;
    }
    let eig = jacobi.symmetric_eigen();
    (0..order)
        .map(|i| {
            let x = eig.eigenvalues[i];
            let v = eig.eigenvectors[(0, i)];
            (0.5 * (x + 1.0), v * v)
        })
        .collect()
}

fn filter(b: f64, w: f64) -> f64 {
    let z = b / (2.0 * w);
    if z >= 1.0 {
        0.0
    } else {
        2.0 / PI * (z.acos() - z * (1.0 - z * z).sqrt())
    }
}

/// Direct 2-D Fourier quadrature of `π^{-2} ∫ d²β e^{β*α - βα*} Ω_w(|β|) Φ(β)`.
/// Radial: `b = 2w(1 - s²)` with Gauss-Legendre in `s`; angular: trapezoid.
pub struct FourierOracle {
    /// `(β, weight, Φ(β))`
    nodes: Vec<(C64, f64, C64)>,
}

impl FourierOracle {
    pub fn new(rho: &DMatrix<C64>, w: f64, radial: usize, angular: usize) -> Self {
        let mut nodes = Vec::with_capacity(radial * angular);
        for (s, ws) in gauss_legendre_unit(radial) {
            let b = 2.0 * w * (1.0 - s * s);
            let jac = 4.0 * w * s;
            for j in 0..angular {
                let phi = 2.0 * PI * j as f64 / angular as f64;
                let beta = C64::from_polar(b, phi);
                let weight = ws * jac * b * (2.0 * PI / angular as f64) * filter(b, w) / (PI * PI);
                if weight != 0.0 {
                    nodes.push((beta, weight, characteristic_oracle(rho, beta)));
                }
            }
        }
        FourierOracle { nodes }
    }

    pub fn eval(&self, alpha: C64) -> C64 {
        let mut total = C64::new(0.0, 0.0);
        for &(beta, weight, phi_val) in &self.nodes {
            let exponent = beta.conj() * alpha - beta * alpha.conj();
            total += weight * exponent.exp() * phi_val;
        }
        total
    }
}

/// One random block `(m, n)` of the quantized-pump model.
#[derive(Debug, Clone, Copy)]
pub struct RabiCase {
    pub m: usize,
    pub n: usize,
    pub k: usize,
    pub eta: f64,
    pub delta_phi: f64,
}

impl RabiCase {
    pub fn params(&self) -> ionjc::ModelParams {
        ionjc::ModelParams::new(self.k, self.eta, self.delta_phi)
    }
}

/// `count` cases with `k <= 3`, `η <= 0.3` and a Rabi frequency that is
/// not (numerically) zero, from a fixed seed.
pub fn rabi_cases(seed: u64, count: usize) -> Vec<RabiCase> {
    use rand::{Rng, SeedableRng};
    let mut rng = rand::rngs::StdRng::seed_from_u64(seed);
    let mut out = Vec::with_capacity(count);
    while out.len() < count {
        let case = RabiCase {
            m: rng.gen_range(0..60),
            n: rng.gen_range(0..25),
            k: rng.gen_range(0..=3),
            eta: rng.gen_range(0.02..=0.3),
            delta_phi: rng.gen_range(0.0..std::f64::consts::TAU),
        };
        if ionjc::fock_core::rabi_frequency(case.m, case.n, &case.params()).norm() > 1e-3 {
            out.push(case);
        }
    }
    out
}

/// `|<1, m+1, n+k| e^{-iHt} |2, m, n>|²` for the block Hamiltonian
/// `[[-Δ/2, Ω/2], [Ω*/2, Δ/2]]`, by numerical diagonalization.
pub fn two_level_transfer(rabi: C64, detuning: f64, t: f64) -> f64 {
    let h = nalgebra::Matrix2::new(
        C64::new(-0.5 * detuning, 0.0),
        0.5 * rabi,
        0.5 * rabi.conj(),
        C64::new(0.5 * detuning, 0.0),
    );
    let eig = h.symmetric_eigen();
    let v = eig.eigenvectors;
    let phases = nalgebra::Matrix2::from_diagonal(&nalgebra::Vector2::new(
        C64::from_polar(1.0, -eig.eigenvalues[0] * t),
        C64::from_polar(1.0, -eig.eigenvalues[1] * t),
    ));
    let u = v * phases * v.adjoint();
    u[(1, 0)].norm_sqr()
}
