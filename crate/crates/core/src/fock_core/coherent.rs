use super::params::TruncationPolicy;
use super::special::ln_factorial;
use crate::error::{Error, Result};
use crate::sum::{neumaier_sum, Neumaier};
use crate::C64;

/// Truncated Fock amplitudes with the probability mass left out.
#[derive(Debug, Clone, PartialEq)]
pub struct ComplexAmplitudeVector {
    pub entries: Vec<C64>,
    pub tail_mass: f64,
}

impl ComplexAmplitudeVector {
    pub fn norm_sqr(&self) -> f64 {
        let mut acc = Neumaier::default();
        for z in &self.entries {
            acc.add(z.norm_sqr());
        }
        acc.value()
    }

    pub fn cutoff(&self) -> usize {
        self.entries.len().saturating_sub(1)
    }
}

/// Contiguous block of Poisson weights `p_j = e^{-μ} μ^j / j!` for
/// `j in lo..=hi` together with the mass outside it.
#[derive(Debug, Clone, PartialEq)]
pub struct PoissonWindow {
    pub lo: usize,
    pub hi: usize,
    pub weights: Vec<f64>,
    pub tail_mass: f64,
}

impl PoissonWindow {
    pub fn iter(&self) -> impl Iterator<Item = (usize, f64)> + '_ {
        self.weights.iter().enumerate().map(move |(i, &w)| (self.lo + i, w))
    }

    pub fn weight(&self, j: usize) -> f64 {
        if j < self.lo || j > self.hi {
            0.0
        } else {
            self.weights[j - self.lo]
        }
    }
}

fn ln_poisson(mean: f64, j: usize) -> f64 {
    if mean == 0.0 {
        return if j == 0 { 0.0 } else { f64::NEG_INFINITY };
    }
    -mean + j as f64 * mean.ln() - ln_factorial(j)
}

/// First index above the mode where the Poisson log-weight has dropped far
/// below anything that could matter against `epsilon`.
fn negligible_above(mean: f64, epsilon: f64) -> usize {
    let amp = mean.sqrt();
    let floor = epsilon.ln() - 60.0;
    let mut n = (mean + 6.0 * amp + 10.0).ceil() as usize;
    while ln_poisson(mean, n) > floor {
        n += (amp.ceil() as usize).max(8);
    }
    n
}

/// Poisson mass strictly above `n`, by direct summation.
fn poisson_tail_above(mean: f64, n: usize, epsilon: f64) -> f64 {
    if mean == 0.0 {
        return 0.0;
    }
    let end = negligible_above(mean, epsilon).max(n + 1);
    let mut acc = Neumaier::default();
    for j in (n + 1..=end).rev() {
        acc.add(ln_poisson(mean, j).exp());
    }
    acc.value()
}

/// Smallest cutoff `N` such that the Poisson(`|α₀|²`) mass above `N` is
/// below `tail_epsilon`.
pub fn suggest_truncation(alpha0_abs: f64, tail_epsilon: f64) -> usize {
    let mean = alpha0_abs * alpha0_abs;
    if mean == 0.0 {
        return 0;
    }
    let top = negligible_above(mean, tail_epsilon);
    let mut acc = Neumaier::default();
    for n in (1..=top).rev() {
        acc.add(ln_poisson(mean, n).exp());
        // acc now holds the mass above n - 1
        if acc.value() >= tail_epsilon {
            return n;
        }
    }
    0
}

/// Window of pump Fock numbers around `|β₀|²` holding all but
/// `tail_epsilon` of the Poisson mass; each side discards at most half.
///
/// Weights are built by ratio recurrence outward from the mode and then
/// normalized over the full numerical support, so they stay accurate to
/// rounding even when `|β₀|²` is in the tens of thousands.
pub fn poisson_window(amplitude_abs: f64, tail_epsilon: f64) -> PoissonWindow {
    let mean = amplitude_abs * amplitude_abs;
    if mean == 0.0 {
        return PoissonWindow { lo: 0, hi: 0, weights: vec![1.0], tail_mass: 0.0 };
    }
    let mode = mean.floor() as usize;
    let cutoff = 1e-30 * tail_epsilon;

    let mut below = Vec::new();
    let mut w = 1.0;
    let mut j = mode;
    while j > 0 {
        w *= j as f64 / mean;
        j -= 1;
        if w < cutoff {
            break;
        }
        below.push(w);
    }
    let mut above = Vec::new();
    let mut w = 1.0;
    let mut j = mode;
    loop {
        j += 1;
        w *= mean / j as f64;
        if w < cutoff {
            break;
        }
        above.push(w);
    }
    let start = mode - below.len();
    let mut support: Vec<f64> = below.into_iter().rev().collect();
    support.push(1.0);
    support.extend(above);
    let total = neumaier_sum(support.iter().copied());
    for v in support.iter_mut() {
        *v /= total;
    }

    let half = 0.5 * tail_epsilon;
    let mut lower = Neumaier::default();
    let mut first = 0;
    while first + 1 < support.len() && lower.value() + support[first] <= half {
        lower.add(support[first]);
        first += 1;
    }
    let mut upper = Neumaier::default();
    let mut last = support.len() - 1;
    while last > first && upper.value() + support[last] <= half {
        upper.add(support[last]);
        last -= 1;
    }
    PoissonWindow {
        lo: start + first,
        hi: start + last,
        weights: support[first..=last].to_vec(),
        tail_mass: lower.value() + upper.value(),
    }
}

/// Coherent state `|α₀>` truncated at `policy.n_max_motion`.
pub fn coherent_vector(alpha0: C64, policy: &TruncationPolicy) -> Result<ComplexAmplitudeVector> {
    let cutoff = policy.n_max_motion;
    let modulus = alpha0.norm();
    let phase = alpha0.arg();
    let mean = modulus * modulus;
    let entries = (0..=cutoff)
        .map(|n| {
            if modulus == 0.0 {
                return if n == 0 { C64::new(1.0, 0.0) } else { C64::new(0.0, 0.0) };
            }
            let log_mag = -0.5 * mean + n as f64 * modulus.ln() - 0.5 * ln_factorial(n);
            C64::from_polar(log_mag.exp(), n as f64 * phase)
        })
        .collect();
    let tail_mass = poisson_tail_above(mean, cutoff, policy.tail_epsilon);
    if tail_mass > policy.tail_epsilon {
        return Err(Error::TruncationTooSmall {
            tail: tail_mass,
            epsilon: policy.tail_epsilon,
        });
    }
    Ok(ComplexAmplitudeVector { entries, tail_mass })
}
