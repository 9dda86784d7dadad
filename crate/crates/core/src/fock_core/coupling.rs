//! Diagonal part of the standing-wave mode function that survives the
//! vibrational rotating-wave approximation on the k-th sideband.

use super::params::ModelParams;
use super::special::{laguerre, ln_factorial, ln_rising_ratio};
use crate::C64;

/// `cos(Δφ + kπ/2)`, with the quarter-turn part taken exactly so that odd
/// sidebands at `Δφ = 0` give an exact zero.
fn sideband_phase_factor(k: usize, delta_phi: f64) -> f64 {
    let (c, s) = match k % 4 {
        0 => (1.0, 0.0),
        1 => (0.0, 1.0),
        2 => (-1.0, 0.0),
        _ => (0.0, -1.0),
    };
    let mut out = 0.0;
    if c != 0.0 {
        out += c * delta_phi.cos();
    }
    if s != 0.0 {
        out -= s * delta_phi.sin();
    }
    out
}

/// `f_k(n; η) = <n| f̂_k(a†a; η) |n>`.
///
/// `½ e^{iΔφ - η²/2} (iη)^k n!/(n+k)! L_n^{(k)}(η²)` plus its complex
/// conjugate, so the value is always real.
pub fn coupling_f(n: usize, params: &ModelParams) -> C64 {
    let k = params.k;
    let eta2 = params.eta * params.eta;
    let log_mag =
        k as f64 * params.eta.ln() + ln_factorial(n) - ln_factorial(n + k) - 0.5 * eta2;
    let value = log_mag.exp() * laguerre(n, k, eta2) * sideband_phase_factor(k, params.delta_phi);
    C64::new(value, 0.0)
}

/// Matrix element `<n| f̂_k a^k |n+k> = f_k(n;η) sqrt((n+k)!/n!)`.
///
/// This is the coupling of `|2,n>` to `|1,n+k>` in units of the (classical
/// or quantized) pump strength, and half the single-photon Rabi frequency.
pub fn sideband_element(n: usize, params: &ModelParams) -> f64 {
    let k = params.k;
    let eta2 = params.eta * params.eta;
    let log_mag = k as f64 * params.eta.ln() - 0.5 * ln_rising_ratio(n, k) - 0.5 * eta2;
    log_mag.exp() * laguerre(n, k, eta2) * sideband_phase_factor(k, params.delta_phi)
}

/// Nonlinear k-quantum Rabi frequency `Ω̃_mn = 2 sqrt(m+1) f_k(n;η) sqrt((n+k)!/n!)`
/// in units of `|κ|` (with `arg κ = 0`).
pub fn rabi_frequency(m: usize, n: usize, params: &ModelParams) -> C64 {
    let value = 2.0 * ((m + 1) as f64).sqrt() * sideband_element(n, params);
    C64::from_polar(1.0, params.arg_kappa) * value
}

#[cfg(test)]
mod tests {
    use super::*;
    use approx::assert_relative_eq;
    use std::f64::consts::FRAC_PI_2;

    #[test]
    fn odd_sideband_vanishes_at_zero_phase() {
        let p = ModelParams::new(1, 0.2, 0.0);
        for n in 0..50 {
            assert_eq!(coupling_f(n, &p), C64::new(0.0, 0.0));
            assert_eq!(rabi_frequency(2, n, &p), C64::new(0.0, 0.0));
        }
    }

    #[test]
    fn carrier_ground_state() {
        let p = ModelParams::new(0, 0.3, 0.0);
        assert_relative_eq!(coupling_f(0, &p).re, (-0.045f64).exp(), epsilon = 1e-15);
        assert_relative_eq!(rabi_frequency(0, 0, &p).re, 2.0 * (-0.045f64).exp(), epsilon = 1e-15);
    }

    #[test]
    fn third_sideband_quarter_phase() {
        let p = ModelParams::new(3, 0.2, FRAC_PI_2);
        let f = coupling_f(0, &p);
        assert_relative_eq!(f.re, (-0.02f64).exp() * 0.008 / 6.0, max_relative = 1e-14);
        assert_eq!(f.im, 0.0);
        assert_relative_eq!(f.re, 1.3069e-3, max_relative = 1e-4);
    }

    #[test]
    fn rabi_scales_with_sqrt_pump_number() {
        let p = ModelParams::new(2, 0.2, 0.4);
        for n in 0..20 {
            let base = rabi_frequency(0, n, &p);
            assert_relative_eq!((rabi_frequency(3, n, &p) / base).re, 2.0, epsilon = 1e-14);
        }
    }

    #[test]
    fn phase_reflection_parity() {
        for k in 0..6 {
            let p = ModelParams::new(k, 0.25, 0.7);
            let q = ModelParams::new(k, 0.25, -0.7);
            let sign = if k % 2 == 0 { 1.0 } else { -1.0 };
            for n in 0..10 {
                let a = coupling_f(n, &p);
                let b = coupling_f(n, &q);
                assert_relative_eq!(b.re, sign * a.conj().re, epsilon = 1e-15);
            }
        }
    }
}
