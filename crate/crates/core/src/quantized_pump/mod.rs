//! Quantized pump: replacing the classical laser amplitude by a pump mode
//! makes the Hamiltonian time independent. It decomposes into 2×2 blocks
//! `{|2,m,n>, |1,m+1,n+k>}` plus uncoupled ground-branch states, so the
//! propagator and all observables are Poisson-weighted sums over dressed
//! states. No composite-space matrix is ever built.

mod convergence;
mod dressed;
mod observables;
mod state;

pub use convergence::{convergence_metric, PumpConvergence};
pub use dressed::{block_hamiltonian, dressed, DressedTriple};
pub use observables::{
    rho_vib, sigma22_quantized, sigma22_quantized_series, DensityMatrixVib,
};
pub use state::{evolve, BasisLabel, CompositeState};

use crate::error::{Error, Result};
use crate::fock_core::{poisson_window, PoissonWindow, TruncationPolicy};

/// Pump-photon window for `|β0|`, cut at `policy.m_max_pump`.
pub(crate) fn pump_window(beta_abs: f64, policy: &TruncationPolicy) -> Result<PoissonWindow> {
    let mut window = poisson_window(beta_abs, policy.tail_epsilon);
    if window.hi > policy.m_max_pump {
        if window.lo > policy.m_max_pump {
            return Err(Error::TruncationTooSmall { tail: 1.0, epsilon: policy.tail_epsilon });
        }
        let keep = policy.m_max_pump - window.lo + 1;
        let dropped: f64 = window.weights[keep..].iter().sum();
        window.weights.truncate(keep);
        window.hi = policy.m_max_pump;
        window.tail_mass += dropped;
    }
    if window.tail_mass > policy.tail_epsilon {
        return Err(Error::TruncationTooSmall {
            tail: window.tail_mass,
            epsilon: policy.tail_epsilon,
        });
    }
    Ok(window)
}
