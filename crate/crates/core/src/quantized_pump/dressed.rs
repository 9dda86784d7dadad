use nalgebra::Matrix2;

use crate::error::{Error, Result};
use crate::fock_core::{rabi_frequency, ModelParams};
use crate::C64;

/// Eigendata of the `(m, n)` block: `|ψ±> = c± (|2,m,n> + α± |1,m+1,n+k>)`
/// with energy `ω̃±`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct DressedTriple {
    pub alpha_plus: C64,
    pub alpha_minus: C64,
    pub c_plus: f64,
    pub c_minus: f64,
    pub omega_plus: f64,
    pub omega_minus: f64,
    /// `ω̃+ - ω̃- = sqrt(Δω̃² + |Ω̃|²)`, evaluated without the block's
    /// common energy so that phase differences carry no trace of `ν̃`, `ω̃21`.
    pub splitting: f64,
    /// Common energy `(ω̃+ + ω̃-)/2`.
    pub center: f64,
}

impl DressedTriple {
    /// `(α, c, ω)` for branch `+` (`true`) or `-`.
    pub fn branch(&self, plus: bool) -> (C64, f64, f64) {
        if plus {
            (self.alpha_plus, self.c_plus, self.omega_plus)
        } else {
            (self.alpha_minus, self.c_minus, self.omega_minus)
        }
    }
}

/// Mean energy of the `(m, n)` block,
/// `½{Δω̃(2m+1) + ν̃(2n-2km) + ω̃21(2m+2)}`.
pub(crate) fn block_center(m: usize, n: usize, params: &ModelParams) -> f64 {
    let (m, n, k) = (m as f64, n as f64, params.k as f64);
    0.5 * (params.delta_omega_tilde * (2.0 * m + 1.0)
        + params.nu_tilde * (2.0 * n - 2.0 * k * m)
        + params.omega21_tilde * (2.0 * m + 2.0))
}

/// Dressed eigendata of the `(m, n)` block.
pub fn dressed(m: usize, n: usize, params: &ModelParams) -> Result<DressedTriple> {
    let rabi = rabi_frequency(m, n, params);
    if rabi.norm() == 0.0 {
        return Err(Error::DegenerateBlock { m, n });
    }
    Ok(dressed_from_rabi(rabi, params.delta_omega_tilde, block_center(m, n, params)))
}

/// Roots of `Ω α² - 2Δ α - Ω* = 0`; the smaller one is taken from
/// `α+ α- = -Ω*/Ω` to avoid cancellation when `|Δ| >> |Ω|`.
pub(crate) fn dressed_from_rabi(rabi: C64, detuning: f64, center: f64) -> DressedTriple {
    let splitting = detuning.hypot(rabi.norm());
    let (alpha_plus, alpha_minus) = if detuning >= 0.0 {
        let big = detuning + splitting;
        (C64::new(big, 0.0) / rabi, -rabi.conj() / big)
    } else {
        let big = detuning - splitting;
        (-rabi.conj() / big, C64::new(big, 0.0) / rabi)
    };
    let norm = |a: C64| 1.0 / (1.0 + a.norm_sqr()).sqrt();
    DressedTriple {
        alpha_plus,
        alpha_minus,
        c_plus: norm(alpha_plus),
        c_minus: norm(alpha_minus),
        omega_plus: center + 0.5 * splitting,
        omega_minus: center - 0.5 * splitting,
        splitting,
        center,
    }
}

/// The `(m, n)` block of the full Hamiltonian in the basis
/// `(|2,m,n>, |1,m+1,n+k>)`, in units of `|κ|`.
pub fn block_hamiltonian(m: usize, n: usize, params: &ModelParams) -> Matrix2<C64> {
    let center = block_center(m, n, params);
    let half_rabi = 0.5 * rabi_frequency(m, n, params);
    let half_detuning = 0.5 * params.delta_omega_tilde;
    Matrix2::new(
        C64::new(center - half_detuning, 0.0),
        half_rabi,
        half_rabi.conj(),
        C64::new(center + half_detuning, 0.0),
    )
}
