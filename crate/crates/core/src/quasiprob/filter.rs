use std::f64::consts::FRAC_2_PI;

use crate::error::{Error, Result};
use crate::fock_core::laguerre;
use crate::fock_core::special::ln_factorial;

/// Default number of Gauss-Legendre nodes for the radial integral.
pub const DEFAULT_QUADRATURE_ORDER: usize = 200;
/// Smallest accepted quadrature order.
pub const MIN_QUADRATURE_ORDER: usize = 64;

/// Width and quadrature order of the radial filter.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct FilterSpec {
    pub w: f64,
    pub quadrature_order: usize,
}

impl FilterSpec {
    pub fn new(w: f64) -> Self {
        FilterSpec { w, quadrature_order: DEFAULT_QUADRATURE_ORDER }
    }

    pub fn validate(&self) -> Result<()> {
        if !(self.w > 0.0 && self.w.is_finite()) {
            return Err(Error::validation("filter_w", format!("must be positive, got {}", self.w)));
        }
        if self.quadrature_order < MIN_QUADRATURE_ORDER {
            return Err(Error::validation(
                "quadrature_order",
                format!("must be at least {MIN_QUADRATURE_ORDER}, got {}", self.quadrature_order),
            ));
        }
        Ok(())
    }
}

/// Radially symmetric filter `Ω_w(|β|)`: the autocorrelation of a disk of
/// radius `w`, normalized to one at the origin and vanishing beyond `2w`.
pub fn filter_omega(beta_abs: f64, w: f64) -> f64 {
    let z = beta_abs / (2.0 * w);
    if z >= 1.0 {
        return 0.0;
    }
    FRAC_2_PI * (z.acos() - z * (1.0 - z * z).sqrt())
}

/// Radial part of `<n|D(β)|m> = e^{-|β|²/2} e^{i(n-m)φ_β} Λ_nm(|β|)`.
pub fn lambda_nm(n: usize, m: usize, beta_abs: f64) -> f64 {
    let (low, high) = if m >= n { (n, m) } else { (m, n) };
    let d = high - low;
    let x = beta_abs * beta_abs;
    let poly = laguerre(low, d, x);
    if d == 0 {
        return poly;
    }
    if beta_abs == 0.0 {
        return 0.0;
    }
    let prefactor = (0.5 * (ln_factorial(low) - ln_factorial(high)) + d as f64 * beta_abs.ln()).exp();
    let sign = if m > n && d % 2 == 1 { -1.0 } else { 1.0 };
    sign * prefactor * poly
}
