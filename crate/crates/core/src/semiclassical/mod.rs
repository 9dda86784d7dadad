//! Classical pump: the interaction-picture Hamiltonian
//! `e^{-irτ} A21 f̂_k a^k + h.c.` is explicitly time dependent.
//!
//! Time-ordered evolution is integrated numerically; the closed form that
//! drops the time-ordering prescription is evaluated through the dressed
//! states of the integrated Hamiltonian. Everything is in scaled units:
//! `τ = |κ β_cl| t` and `r = Δω / |κ β_cl|`.

mod ode;

pub use ode::{Dopri5, StepStats};

use nalgebra::DMatrix;

use crate::error::{Error, Result};
use crate::fock_core::{coherent_vector, sideband_element, ModelParams, TruncationPolicy};
use crate::sum::Neumaier;
use crate::C64;

pub const DEFAULT_TOL: f64 = 1e-10;

/// Scaled time `τ`, its origin `τ0` and the scaled mismatch `r`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct ScaledTime {
    pub tau: f64,
    pub tau0: f64,
    pub r: f64,
}

impl ScaledTime {
    pub fn new(tau: f64, tau0: f64, r: f64) -> Self {
        debug_assert!(tau >= tau0);
        ScaledTime { tau, tau0, r }
    }
}

/// `h(τ) = i (e^{-irτ} - e^{-irτ0})`.
pub fn h_function(st: &ScaledTime) -> C64 {
    let i = C64::i();
    i * (C64::from_polar(1.0, -st.r * st.tau) - C64::from_polar(1.0, -st.r * st.tau0))
}

/// `h(τ) / r`, written as `2 sin(rΔτ/2)/r · e^{-ir(τ+τ0)/2}` so it stays
/// accurate for small `r`; at `r = 0` it is the limit `τ - τ0`.
pub fn h_over_r(st: &ScaledTime) -> C64 {
    let span = st.tau - st.tau0;
    if st.r == 0.0 {
        return C64::new(span, 0.0);
    }
    let magnitude = 2.0 * (0.5 * st.r * span).sin() / st.r;
    C64::from_polar(magnitude, -0.5 * st.r * (st.tau + st.tau0))
}

/// State over `|1,n>` and `|2,n>`, `n = 0..=cutoff`, in the interaction
/// picture.
#[derive(Debug, Clone, PartialEq)]
pub struct VibronicState {
    pub amp_ground: Vec<C64>,
    pub amp_excited: Vec<C64>,
}

impl VibronicState {
    pub fn zeros(cutoff: usize) -> Self {
        VibronicState {
            amp_ground: vec![C64::new(0.0, 0.0); cutoff + 1],
            amp_excited: vec![C64::new(0.0, 0.0); cutoff + 1],
        }
    }

    /// `|level, n>` with `level` 1 (ground) or 2 (excited).
    pub fn basis(level: u8, n: usize, cutoff: usize) -> Self {
        let mut s = Self::zeros(cutoff);
        match level {
            1 => s.amp_ground[n] = C64::new(1.0, 0.0),
            _ => s.amp_excited[n] = C64::new(1.0, 0.0),
        }
        s
    }

    /// `|1, α0>` truncated per `policy`.
    pub fn ground_coherent(alpha0: C64, policy: &TruncationPolicy) -> Result<Self> {
        let coh = coherent_vector(alpha0, policy)?;
        let cutoff = coh.cutoff();
        let mut s = Self::zeros(cutoff);
        s.amp_ground = coh.entries;
        Ok(s)
    }

    pub fn cutoff(&self) -> usize {
        self.amp_ground.len() - 1
    }

    pub fn norm_sqr(&self) -> f64 {
        let mut acc = Neumaier::default();
        for z in self.amp_ground.iter().chain(&self.amp_excited) {
            acc.add(z.norm_sqr());
        }
        acc.value()
    }

    /// Excited-state population `σ22`.
    pub fn excited_population(&self) -> f64 {
        let mut acc = Neumaier::default();
        for z in &self.amp_excited {
            acc.add(z.norm_sqr());
        }
        acc.value()
    }

    fn to_flat(&self) -> Vec<C64> {
        self.amp_ground.iter().chain(&self.amp_excited).copied().collect()
    }

    fn from_flat(flat: &[C64]) -> Self {
        let half = flat.len() / 2;
        VibronicState {
            amp_ground: flat[..half].to_vec(),
            amp_excited: flat[half..].to_vec(),
        }
    }
}

/// Dense interaction-picture Hamiltonian at scaled time `tau`, in units of
/// `|κ β_cl|`. Basis order: `|1,0..=cutoff>` then `|2,0..=cutoff>`.
pub fn interaction_generator(
    tau: f64,
    r: f64,
    params: &ModelParams,
    cutoff: usize,
) -> Result<DMatrix<C64>> {
    if cutoff < params.k {
        return Err(Error::validation("cutoff", "must be at least the sideband order k"));
    }
    let dim = cutoff + 1;
    let mut h = DMatrix::from_element(2 * dim, 2 * dim, C64::new(0.0, 0.0));
    let phase = C64::from_polar(1.0, -r * tau);
    for n in 0..=cutoff - params.k {
        let element = phase * sideband_element(n, params);
        h[(dim + n, n + params.k)] = element;
        h[(n + params.k, dim + n)] = element.conj();
    }
    Ok(h)
}

/// Numerically time-ordered evolution of `psi0` from `tau0`, sampled at
/// the (non-decreasing) scaled times in `grid`.
pub fn propagate_time_ordered(
    psi0: &VibronicState,
    tau0: f64,
    r: f64,
    grid: &[f64],
    params: &ModelParams,
    tol: f64,
) -> Result<Vec<VibronicState>> {
    Ok(propagate_with_stats(psi0, tau0, r, grid, params, tol)?.0)
}

pub fn propagate_with_stats(
    psi0: &VibronicState,
    tau0: f64,
    r: f64,
    grid: &[f64],
    params: &ModelParams,
    tol: f64,
) -> Result<(Vec<VibronicState>, StepStats)> {
    if !(tol > 0.0) {
        return Err(Error::validation("tol", "must be > 0"));
    }
    if grid.iter().any(|&t| t < tau0) || grid.windows(2).any(|w| w[1] < w[0]) {
        return Err(Error::validation("grid", "times must be non-decreasing and >= tau0"));
    }
    let cutoff = psi0.cutoff();
    let k = params.k;
    let dim = cutoff + 1;
    let couplings: Vec<f64> = if cutoff >= k {
        (0..=cutoff - k).map(|n| sideband_element(n, params)).collect()
    } else {
        Vec::new()
    };

    let minus_i = C64::new(0.0, -1.0);
    let rhs = |tau: f64, y: &[C64], dy: &mut [C64]| {
        dy.fill(C64::new(0.0, 0.0));
        let phase = C64::from_polar(1.0, -r * tau);
        for (n, &g) in couplings.iter().enumerate() {
            let upper = phase * g;
            let ground = n + k;
            let excited = dim + n;
            dy[excited] += minus_i * upper * y[ground];
            dy[ground] += minus_i * upper.conj() * y[excited];
        }
    };
    let (flat, stats) = Dopri5::new(tol).integrate(rhs, tau0, &psi0.to_flat(), grid)?;
    Ok((flat.iter().map(|y| VibronicState::from_flat(y)).collect(), stats))
}

/// `σ22(τ)` of the time-ordered evolution from `|1, α0>` at `grid[0]`.
pub fn sigma22_time_ordered(
    alpha0: C64,
    r: f64,
    grid: &[f64],
    params: &ModelParams,
    policy: &TruncationPolicy,
    tol: f64,
) -> Result<Vec<f64>> {
    let psi0 = VibronicState::ground_coherent(alpha0, policy)?;
    let tau0 = grid.first().copied().unwrap_or(0.0);
    let states = propagate_time_ordered(&psi0, tau0, r, grid, params, tol)?;
    Ok(states.iter().map(VibronicState::excited_population).collect())
}

/// Excited population `σ'22(τ)` when the time ordering is dropped, for the
/// initial state `|1, α0>` at `st.tau0`.
///
/// Evaluates the full double sign sum over the dressed states
/// `c(|2,n> ± e^{-i arg(f h)} |1,n+k>)` with eigenvalues
/// `±|f_k(n) h/r| sqrt((n+k)!/n!)`.
pub fn sigma22_no_ordering(
    alpha0: C64,
    params: &ModelParams,
    st: &ScaledTime,
    policy: &TruncationPolicy,
) -> Result<f64> {
    let weights = motional_weights(alpha0, policy)?;
    Ok(sigma22_no_ordering_with_weights(&weights, params, st))
}

fn motional_weights(alpha0: C64, policy: &TruncationPolicy) -> Result<Vec<f64>> {
    let coh = coherent_vector(alpha0, policy)?;
    Ok(coh.entries.iter().map(|z| z.norm_sqr()).collect())
}

fn sigma22_no_ordering_with_weights(weights: &[f64], params: &ModelParams, st: &ScaledTime) -> f64 {
    let k = params.k;
    let hr = h_over_r(st);
    // arg(f h) = arg(f · (h/r)) shifted by π when r < 0
    let sign_r = if st.r < 0.0 { -1.0 } else { 1.0 };
    let mut acc = Neumaier::default();
    for n in 0..weights.len().saturating_sub(k) {
        let weight = weights[n + k];
        if weight == 0.0 {
            continue;
        }
        let g = sideband_element(n, params);
        let fh = hr * (g * sign_r);
        let omega = (hr * g).norm();
        let mixing_phase = C64::from_polar(1.0, -fh.arg());
        let branches = [(1.0, omega), (-1.0, -omega)];
        let mut term = C64::new(0.0, 0.0);
        for &(s, w) in &branches {
            for &(s_prime, w_prime) in &branches {
                let alpha = mixing_phase * s;
                let alpha_prime = mixing_phase * s_prime;
                term += C64::from_polar(1.0, w - w_prime) * alpha_prime.conj() * alpha;
            }
        }
        acc.add(0.25 * term.re * weight);
    }
    acc.value()
}

/// `σ'22` on a grid of scaled times, origin `tau0`.
pub fn sigma22_no_ordering_series(
    alpha0: C64,
    params: &ModelParams,
    r: f64,
    tau0: f64,
    grid: &[f64],
    policy: &TruncationPolicy,
) -> Result<Vec<f64>> {
    let weights = motional_weights(alpha0, policy)?;
    Ok(grid
        .iter()
        .map(|&tau| sigma22_no_ordering_with_weights(&weights, params, &ScaledTime::new(tau, tau0, r)))
        .collect())
}

/// Side-by-side excited populations with and without time ordering.
#[derive(Debug, Clone, PartialEq)]
pub struct OrderingReport {
    pub taus: Vec<f64>,
    pub ordered: Vec<f64>,
    pub no_ordering: Vec<f64>,
    /// `max_τ |σ22(τ) - σ'22(τ)|`.
    pub sup_distance: f64,
    /// Time at which the supremum is attained.
    pub tau_at_sup: f64,
    /// First grid time where the gap exceeds the threshold.
    pub first_crossing: Option<f64>,
    pub threshold: f64,
    pub ode_stats: StepStats,
}

/// Runs both solvers from `|1, α0>` at `grid[0]` and measures their gap.
pub fn compare_ordering(
    params: &ModelParams,
    alpha0: C64,
    r: f64,
    grid: &[f64],
    policy: &TruncationPolicy,
    tol: f64,
    threshold: f64,
) -> Result<OrderingReport> {
    let tau0 = grid.first().copied().unwrap_or(0.0);
    let psi0 = VibronicState::ground_coherent(alpha0, policy)?;
    let (states, ode_stats) = propagate_with_stats(&psi0, tau0, r, grid, params, tol)?;
    let ordered: Vec<f64> = states.iter().map(VibronicState::excited_population).collect();
    let no_ordering = sigma22_no_ordering_series(alpha0, params, r, tau0, grid, policy)?;
    Ok(divergence(grid, ordered, no_ordering, threshold, ode_stats))
}

fn divergence(
    grid: &[f64],
    ordered: Vec<f64>,
    no_ordering: Vec<f64>,
    threshold: f64,
    ode_stats: StepStats,
) -> OrderingReport {
    let mut sup_distance = 0.0;
    let mut tau_at_sup = grid.first().copied().unwrap_or(0.0);
    let mut first_crossing = None;
    for ((&tau, a), b) in grid.iter().zip(&ordered).zip(&no_ordering) {
        let gap = (a - b).abs();
        if gap > sup_distance {
            sup_distance = gap;
            tau_at_sup = tau;
        }
        if first_crossing.is_none() && gap > threshold {
            first_crossing = Some(tau);
        }
    }
    OrderingReport {
        taus: grid.to_vec(),
        ordered,
        no_ordering,
        sup_distance,
        tau_at_sup,
        first_crossing,
        threshold,
        ode_stats,
    }
}
