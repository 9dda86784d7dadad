//! Regularized Glauber-Sudarshan P functions of motional states.
//!
//! `P_Ω(α) = Σ ρ_mn P_Ω,nm(α)`, where the elements come from a radial
//! integral over the filtered displacement matrix elements. The elements
//! depend only on the filter and the grid, so they are tabulated once
//! ([`PElementTable`], optionally cached on disk) and applied to any number
//! of density matrices.

mod filter;
mod quadrature;
mod table;

pub use filter::{filter_omega, lambda_nm, FilterSpec, DEFAULT_QUADRATURE_ORDER, MIN_QUADRATURE_ORDER};
pub use quadrature::gauss_legendre;
pub use table::{
    CacheStatus, GridSpec, PElementTable, PhaseSpaceGrid, CACHE_FORMAT_VERSION, IMAG_TOL, QUADRATURE_TOL,
};

use nalgebra::DMatrix;
use quadrature::RadialRule;

use crate::error::{Error, Result};
use crate::sum::ComplexNeumaier;
use crate::C64;

/// Single element `P_Ω,nm(α)`, certified by comparing quadrature orders
/// `q` and `2q`.
pub fn p_element(n: usize, m: usize, alpha: C64, spec: &FilterSpec) -> Result<C64> {
    spec.validate()?;
    let d = n.abs_diff(m);
    let r = alpha.norm();
    // Λ_nm J_{n-m} = Λ_mn J_{m-n}: put the larger index first so the Bessel
    // order is non-negative
    let lambda = |b: f64| lambda_nm(n.max(m), n.min(m), b);
    let coarse = RadialRule::new(spec.w, spec.quadrature_order).integrate(d, r, lambda);
    let fine = RadialRule::new(spec.w, 2 * spec.quadrature_order).integrate(d, r, lambda);
    let difference = (fine - coarse).abs();
    if !(difference <= QUADRATURE_TOL) {
        return Err(Error::QuadratureNotConverged { difference, tolerance: QUADRATURE_TOL });
    }
    let phi = if r == 0.0 { 0.0 } else { alpha.arg() };
    Ok(C64::from_polar(fine, (n as f64 - m as f64) * phi))
}

/// `P_Ω` of `rho` on `grid`. Builds a fresh element table; use
/// [`PElementTable`] directly to share one across several states.
pub fn p_function(rho: &DMatrix<C64>, grid: &GridSpec, spec: &FilterSpec) -> Result<PhaseSpaceGrid> {
    let n_max = rho.nrows().saturating_sub(1);
    PElementTable::build(n_max, spec, grid)?.apply(rho)
}

/// `Φ(β) = Tr{ρ D(β)} e^{|β|²/2} = Σ ρ_mn e^{i(n-m)φ_β} Λ_nm(|β|)`.
pub fn characteristic_function(rho: &DMatrix<C64>, beta: C64) -> C64 {
    let r = beta.norm();
    let phi = if r == 0.0 { 0.0 } else { beta.arg() };
    let mut acc = ComplexNeumaier::default();
    for m in 0..rho.nrows() {
        for n in 0..rho.ncols() {
            let phase = C64::from_polar(1.0, (n as f64 - m as f64) * phi);
            acc.add(rho[(m, n)] * phase * lambda_nm(n, m, r));
        }
    }
    acc.value()
}
