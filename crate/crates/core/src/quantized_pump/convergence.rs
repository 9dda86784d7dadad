use super::observables::sigma22_quantized_series;
use crate::error::{Error, Result};
use crate::fock_core::{suggest_truncation, ModelParams, TruncationPolicy};
use crate::semiclassical::sigma22_time_ordered;
use crate::C64;

/// Quantized-pump excited population against the classical-pump one for a
/// single pump amplitude, on the common grid of scaled times `τ = |β0| t̃`.
#[derive(Debug, Clone, PartialEq)]
pub struct PumpConvergence {
    pub beta0_abs: f64,
    /// `Δω̃ = r |β0|`, so that both models see the same `r`.
    pub delta_omega_tilde: f64,
    pub taus: Vec<f64>,
    pub semiclassical: Vec<f64>,
    pub quantized: Vec<f64>,
    /// `max_τ |σ22_quantized - σ22_semiclassical|`.
    pub sup_distance: f64,
}

/// Compares the quantized pump with the classical limit for each `|β0|` in
/// `beta0_list`. The classical reference is the time-ordered solution from
/// `|1, α0>` at `τ = 0` with relative detuning `r`; `params.delta_omega_tilde`
/// is ignored and set per amplitude.
pub fn convergence_metric(
    params: &ModelParams,
    alpha0: C64,
    r: f64,
    beta0_list: &[f64],
    taus: &[f64],
    policy: &TruncationPolicy,
    tol: f64,
) -> Result<Vec<PumpConvergence>> {
    if taus.first().is_some_and(|&t| t != 0.0) {
        return Err(Error::validation("t_start", "the pump comparison starts at tau = 0"));
    }
    let semiclassical = sigma22_time_ordered(alpha0, r, taus, params, policy, tol)?;
    beta0_list
        .iter()
        .map(|&beta| {
            if !(beta > 0.0 && beta.is_finite()) {
                return Err(Error::validation("beta0_list", format!("amplitude {beta} must be positive")));
            }
            let p = params.with_detuning(r * beta);
            let pump_policy = TruncationPolicy {
                m_max_pump: policy
                    .m_max_pump
                    .max(suggest_truncation(beta, 0.5 * policy.tail_epsilon)),
                ..*policy
            };
            let times: Vec<f64> = taus.iter().map(|tau| tau / beta).collect();
            let quantized =
                sigma22_quantized_series(1, &times, alpha0, C64::new(beta, 0.0), &p, &pump_policy)?;
            let sup_distance = quantized
                .iter()
                .zip(&semiclassical)
                .map(|(a, b)| (a - b).abs())
                .fold(0.0, f64::max);
            Ok(PumpConvergence {
                beta0_abs: beta,
                delta_omega_tilde: r * beta,
                taus: taus.to_vec(),
                semiclassical: semiclassical.clone(),
                quantized,
                sup_distance,
            })
        })
        .collect()
}
