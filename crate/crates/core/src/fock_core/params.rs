use crate::error::{Error, Result};

pub const DEFAULT_TAIL_EPSILON: f64 = 1e-12;

/// Physical constants of the vibronic model. Frequencies carry a tilde in
/// the usual notation: they are measured in units of the coupling `|kappa|`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct ModelParams {
    /// Sideband order.
    pub k: usize,
    /// Lamb-Dicke parameter.
    pub eta: f64,
    /// Standing-wave phase (position of the trap relative to the wave).
    pub delta_phi: f64,
    /// Laser detuning from the k-th sideband, `Δω / |κ|`.
    pub delta_omega_tilde: f64,
    /// Trap frequency, `ν / |κ|`.
    pub nu_tilde: f64,
    /// Electronic transition frequency, `ω21 / |κ|`.
    pub omega21_tilde: f64,
    /// Phase of the coupling constant. Only `0` is supported.
    pub arg_kappa: f64,
}

impl ModelParams {
    pub fn new(k: usize, eta: f64, delta_phi: f64) -> Self {
        ModelParams {
            k,
            eta,
            delta_phi,
            delta_omega_tilde: 0.0,
            nu_tilde: 0.0,
            omega21_tilde: 0.0,
            arg_kappa: 0.0,
        }
    }

    pub fn with_detuning(mut self, delta_omega_tilde: f64) -> Self {
        self.delta_omega_tilde = delta_omega_tilde;
        self
    }

    pub fn with_frequencies(mut self, nu_tilde: f64, omega21_tilde: f64) -> Self {
        self.nu_tilde = nu_tilde;
        self.omega21_tilde = omega21_tilde;
        self
    }

    /// Scaled laser frequency `ω̃_L = ω̃21 - k ν̃ + Δω̃`.
    pub fn omega_laser_tilde(&self) -> f64 {
        self.omega21_tilde - self.k as f64 * self.nu_tilde + self.delta_omega_tilde
    }

    pub fn validate(&self) -> Result<()> {
        if !(self.eta.is_finite() && self.eta > 0.0) {
            return Err(Error::validation("eta", "must be finite and > 0"));
        }
        if !self.delta_phi.is_finite() {
            return Err(Error::validation("delta_phi", "must be finite"));
        }
        if !self.delta_omega_tilde.is_finite() {
            return Err(Error::validation("delta_omega_tilde", "must be finite"));
        }
        if !self.nu_tilde.is_finite() {
            return Err(Error::validation("nu_tilde", "must be finite"));
        }
        if !self.omega21_tilde.is_finite() {
            return Err(Error::validation("omega21_tilde", "must be finite"));
        }
        if self.arg_kappa != 0.0 {
            return Err(Error::validation("arg_kappa", "only arg(kappa) = 0 is supported"));
        }
        Ok(())
    }
}

/// Fock-space cutoffs for the motional and pump modes.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct TruncationPolicy {
    /// Largest motional Fock number kept.
    pub n_max_motion: usize,
    /// Largest pump Fock number kept.
    pub m_max_pump: usize,
    /// Largest probability mass allowed to be discarded per mode.
    pub tail_epsilon: f64,
}

impl TruncationPolicy {
    /// Cutoffs large enough for coherent states of the given amplitudes.
    pub fn for_amplitudes(alpha_abs: f64, beta_abs: f64, tail_epsilon: f64) -> Self {
        TruncationPolicy {
            n_max_motion: super::suggest_truncation(alpha_abs, tail_epsilon),
            // the pump window is trimmed on both sides, eps/2 each
            m_max_pump: super::suggest_truncation(beta_abs, 0.5 * tail_epsilon),
            tail_epsilon,
        }
    }
}

impl Default for TruncationPolicy {
    fn default() -> Self {
        TruncationPolicy {
            n_max_motion: 0,
            m_max_pump: 0,
            tail_epsilon: DEFAULT_TAIL_EPSILON,
        }
    }
}
