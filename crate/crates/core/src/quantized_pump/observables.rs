use nalgebra::DMatrix;
use rayon::prelude::*;

use super::dressed::dressed_from_rabi;
use super::pump_window;
use super::state::check_level;
use crate::error::Result;
use crate::fock_core::{coherent_vector, rabi_frequency, ModelParams, TruncationPolicy};
use crate::sum::{ComplexNeumaier, Neumaier};
use crate::C64;

/// Excited population of one block, `|x+ e^{-iω+ t} + x- e^{-iω- t}|²`,
/// weighted by the initial occupation of the block.
#[derive(Debug, Clone, Copy)]
struct BlockTerm {
    weight: f64,
    x: [C64; 2],
    splitting: f64,
}

impl BlockTerm {
    /// Four-term sum over dressed-state pairs. Only the phase difference
    /// `ω+ - ω-` appears, so the common block energy never enters.
    fn value(&self, t: f64) -> f64 {
        let signs = [1.0, -1.0];
        let mut total = 0.0;
        for (i, s) in signs.iter().enumerate() {
            for (j, s_prime) in signs.iter().enumerate() {
                let gap = 0.5 * (s - s_prime) * self.splitting;
                total += (C64::from_polar(1.0, -gap * t) * self.x[i] * self.x[j].conj()).re;
            }
        }
        self.weight * total
    }
}

fn block_terms(
    level: u8,
    alpha0: C64,
    beta0: C64,
    params: &ModelParams,
    policy: &TruncationPolicy,
) -> Result<Vec<BlockTerm>> {
    check_level(level)?;
    params.validate()?;
    let k = params.k;
    let motion: Vec<f64> = coherent_vector(alpha0, policy)?.entries.iter().map(|z| z.norm_sqr()).collect();
    let pump = pump_window(beta0.norm(), policy)?;
    let mut terms = Vec::new();
    for (mp, pump_weight) in pump.iter() {
        // block (m, n) holds |2,m,n> and |1,m+1,n+k>
        let (m, n_range) = match level {
            2 => (mp, 0..motion.len()),
            _ if mp == 0 => continue,
            _ => (mp - 1, 0..motion.len().saturating_sub(k)),
        };
        for n in n_range {
            let weight = pump_weight * if level == 2 { motion[n] } else { motion[n + k] };
            if weight == 0.0 {
                continue;
            }
            let rabi = rabi_frequency(m, n, params);
            if rabi.norm() == 0.0 {
                if level == 2 {
                    let one = C64::new(1.0, 0.0);
                    terms.push(BlockTerm { weight, x: [one, C64::new(0.0, 0.0)], splitting: 0.0 });
                }
                continue;
            }
            let d = dressed_from_rabi(rabi, params.delta_omega_tilde, 0.0);
            let x = [true, false].map(|plus| {
                let (alpha, c, _) = d.branch(plus);
                let overlap = if level == 2 { C64::new(1.0, 0.0) } else { alpha.conj() };
                c * c * overlap
            });
            terms.push(BlockTerm { weight, x, splitting: d.splitting });
        }
    }
    Ok(terms)
}

/// Excited population at scaled time `t̃` for the initial state
/// `|1> ⊗ |β0> ⊗ |α0>`.
pub fn sigma22_quantized(
    t: f64,
    alpha0: C64,
    beta0: C64,
    params: &ModelParams,
    policy: &TruncationPolicy,
) -> Result<f64> {
    Ok(sigma22_quantized_series(1, &[t], alpha0, beta0, params, policy)?[0])
}

/// Excited population on a grid of scaled times, starting from
/// `|level> ⊗ |β0> ⊗ |α0>` at `t̃ = 0`. Time points are evaluated in
/// parallel; each one is a sequential compensated sum, so the result does
/// not depend on the thread count.
pub fn sigma22_quantized_series(
    level: u8,
    times: &[f64],
    alpha0: C64,
    beta0: C64,
    params: &ModelParams,
    policy: &TruncationPolicy,
) -> Result<Vec<f64>> {
    let terms = block_terms(level, alpha0, beta0, params, policy)?;
    Ok(times
        .par_iter()
        .map(|&t| {
            let mut acc = Neumaier::default();
            for term in &terms {
                acc.add(term.value(t));
            }
            acc.value()
        })
        .collect())
}

/// Reduced motional density matrix.
#[derive(Debug, Clone, PartialEq)]
pub struct DensityMatrixVib {
    pub matrix: DMatrix<C64>,
    /// `|1 - tr ρ|`, the mass lost to the Fock cutoffs.
    pub trace_defect: f64,
}

impl DensityMatrixVib {
    pub fn dim(&self) -> usize {
        self.matrix.nrows()
    }

    pub fn trace(&self) -> f64 {
        (0..self.dim()).map(|i| self.matrix[(i, i)].re).sum()
    }

    pub fn populations(&self) -> Vec<f64> {
        (0..self.dim()).map(|i| self.matrix[(i, i)].re).collect()
    }

    /// `max |ρ - ρ†|`.
    pub fn hermiticity_error(&self) -> f64 {
        let diff = &self.matrix - self.matrix.adjoint();
        diff.iter().map(|z| z.norm()).fold(0.0, f64::max)
    }

    pub fn min_eigenvalue(&self) -> f64 {
        let herm = (&self.matrix + self.matrix.adjoint()) * C64::new(0.5, 0.0);
        herm.symmetric_eigenvalues().iter().copied().fold(f64::INFINITY, f64::min)
    }
}

/// Motional components of the evolved state for one initial pump number
/// `mp`, split by electronic level. Each vector is taken relative to the
/// pump-and-electronic phase of its group, which is common to all its
/// entries and drops out of `ρ_vib`; what remains are the motional phases
/// `e^{-iν̃ n t}` and the dressed-state beats.
fn branch_vectors(
    level: u8,
    mp: usize,
    motion: &[C64],
    t: f64,
    params: &ModelParams,
) -> (Vec<C64>, Vec<C64>) {
    let k = params.k;
    let dim = motion.len() + k;
    let zero = C64::new(0.0, 0.0);
    let mut excited = vec![zero; dim];
    let mut ground = vec![zero; dim];
    let motional = |n: usize| C64::from_polar(1.0, -params.nu_tilde * n as f64 * t);
    let half_detuning = C64::from_polar(1.0, -0.5 * params.delta_omega_tilde * t);
    for (n0, &a) in motion.iter().enumerate() {
        if a == zero {
            continue;
        }
        let (m, n) = match level {
            2 => (mp, n0),
            _ if mp == 0 || n0 < k => {
                ground[n0] += a * motional(n0);
                continue;
            }
            _ => (mp - 1, n0 - k),
        };
        let rabi = rabi_frequency(m, n, params);
        if rabi.norm() == 0.0 {
            if level == 2 {
                excited[n] += a * motional(n);
            } else {
                ground[n + k] += a * motional(n + k);
            }
            continue;
        }
        let d = dressed_from_rabi(rabi, params.delta_omega_tilde, 0.0);
        for plus in [true, false] {
            let (alpha, c, _) = d.branch(plus);
            let beat = C64::from_polar(1.0, -(if plus { 0.5 } else { -0.5 }) * d.splitting * t);
            let proj = c * a * if level == 2 { C64::new(1.0, 0.0) } else { alpha.conj() };
            excited[n] += c * proj * beat * half_detuning * motional(n);
            ground[n + k] += c * alpha * proj * beat * half_detuning.conj() * motional(n + k);
        }
    }
    (excited, ground)
}

/// `ρ_vib(t̃)`, traced over the ion and the pump, for the initial state
/// `|level> ⊗ |β0> ⊗ |α0>`. Rows and columns run over `0..=n_max + k`.
///
/// Built as a Poisson-weighted sum of outer products, so it is Hermitian
/// and positive semidefinite by construction.
pub fn rho_vib(
    t: f64,
    level: u8,
    alpha0: C64,
    beta0: C64,
    params: &ModelParams,
    policy: &TruncationPolicy,
) -> Result<DensityMatrixVib> {
    check_level(level)?;
    params.validate()?;
    let motion = coherent_vector(alpha0, policy)?;
    let pump = pump_window(beta0.norm(), policy)?;
    let dim = motion.entries.len() + params.k;
    let mut acc = vec![ComplexNeumaier::default(); dim * (dim + 1) / 2];
    for (mp, weight) in pump.iter() {
        let (excited, ground) = branch_vectors(level, mp, &motion.entries, t, params);
        for v in [&excited, &ground] {
            let mut idx = 0;
            for i in 0..dim {
                let vi = v[i] * weight;
                for j in i..dim {
                    acc[idx].add(vi * v[j].conj());
                    idx += 1;
                }
            }
        }
    }
    let mut matrix = DMatrix::zeros(dim, dim);
    let mut idx = 0;
    for i in 0..dim {
        for j in i..dim {
            let z = acc[idx].value();
            idx += 1;
            if i == j {
                matrix[(i, i)] = C64::new(z.re, 0.0);
            } else {
                matrix[(i, j)] = z;
                matrix[(j, i)] = z.conj();
            }
        }
    }
    let mut rho = DensityMatrixVib { matrix, trace_defect: 0.0 };
    rho.trace_defect = (1.0 - rho.trace()).abs();
    Ok(rho)
}
