use std::collections::BTreeMap;

use nalgebra::Vector2;

use super::dressed::{block_center, block_hamiltonian, dressed_from_rabi};
use super::pump_window;
use crate::error::{Error, Result};
use crate::fock_core::{coherent_vector, rabi_frequency, ModelParams, TruncationPolicy};
use crate::sum::Neumaier;
use crate::C64;

/// `|level, m, n>`: electronic level (1 or 2), pump and motional Fock numbers.
#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct BasisLabel {
    pub level: u8,
    pub m: usize,
    pub n: usize,
}

impl BasisLabel {
    pub fn new(level: u8, m: usize, n: usize) -> Self {
        BasisLabel { level, m, n }
    }
}

/// Where a basis state sits in the block decomposition.
enum Slot {
    /// Component 0 (`|2,m,n>`) or 1 (`|1,m+1,n+k>`) of block `(m, n)`.
    Block(usize, usize, usize),
    /// Uncoupled: `|1,0,n>` or `|1,m,q<k>`.
    Free,
}

fn classify(label: BasisLabel, k: usize) -> Slot {
    match label.level {
        2 => Slot::Block(label.m, label.n, 0),
        _ if label.m >= 1 && label.n >= k => Slot::Block(label.m - 1, label.n - k, 1),
        _ => Slot::Free,
    }
}

/// Bare energy of `|level, m, n>` in units of `|κ|` (ground level at zero).
fn bare_energy(label: BasisLabel, params: &ModelParams) -> f64 {
    let electronic = if label.level == 2 { params.omega21_tilde } else { 0.0 };
    electronic + params.omega_laser_tilde() * label.m as f64 + params.nu_tilde * label.n as f64
}

/// Sparse state of ion ⊗ pump ⊗ motion.
#[derive(Debug, Clone, Default, PartialEq)]
pub struct CompositeState {
    pub amps: BTreeMap<BasisLabel, C64>,
    /// Probability dropped by the Fock cutoffs when the state was built.
    pub truncated_mass: f64,
}

impl CompositeState {
    pub fn basis(level: u8, m: usize, n: usize) -> Self {
        let mut amps = BTreeMap::new();
        amps.insert(BasisLabel::new(level, m, n), C64::new(1.0, 0.0));
        CompositeState { amps, truncated_mass: 0.0 }
    }

    /// `|level> ⊗ |β0> ⊗ |α0>`, truncated per `policy`.
    pub fn product(level: u8, beta0: C64, alpha0: C64, policy: &TruncationPolicy) -> Result<Self> {
        check_level(level)?;
        let motion = coherent_vector(alpha0, policy)?;
        let pump = pump_window(beta0.norm(), policy)?;
        let mut amps = BTreeMap::new();
        for (m, weight) in pump.iter() {
            let b = C64::from_polar(weight.sqrt(), m as f64 * beta0.arg());
            for (n, a) in motion.entries.iter().enumerate() {
                amps.insert(BasisLabel::new(level, m, n), b * a);
            }
        }
        Ok(CompositeState {
            amps,
            truncated_mass: motion.tail_mass + pump.tail_mass,
        })
    }

    pub fn get(&self, label: BasisLabel) -> C64 {
        self.amps.get(&label).copied().unwrap_or_default()
    }

    pub fn norm_sqr(&self) -> f64 {
        let mut acc = Neumaier::default();
        for z in self.amps.values() {
            acc.add(z.norm_sqr());
        }
        acc.value()
    }

    pub fn excited_population(&self) -> f64 {
        let mut acc = Neumaier::default();
        for (label, z) in &self.amps {
            if label.level == 2 {
                acc.add(z.norm_sqr());
            }
        }
        acc.value()
    }

    /// `<ψ|H|ψ>` in units of `|κ|`.
    pub fn energy(&self, params: &ModelParams) -> f64 {
        let mut acc = Neumaier::default();
        for ((m, n), v) in self.blocks(params.k) {
            let h = block_hamiltonian(m, n, params);
            acc.add(v.dotc(&(h * v)).re);
        }
        for (label, z) in &self.amps {
            if matches!(classify(*label, params.k), Slot::Free) {
                acc.add(bare_energy(*label, params) * z.norm_sqr());
            }
        }
        acc.value()
    }

    fn blocks(&self, k: usize) -> BTreeMap<(usize, usize), Vector2<C64>> {
        let mut blocks: BTreeMap<(usize, usize), Vector2<C64>> = BTreeMap::new();
        for (label, z) in &self.amps {
            if let Slot::Block(m, n, slot) = classify(*label, k) {
                blocks.entry((m, n)).or_insert_with(Vector2::zeros)[slot] = *z;
            }
        }
        blocks
    }
}

pub(crate) fn check_level(level: u8) -> Result<()> {
    if level == 1 || level == 2 {
        Ok(())
    } else {
        Err(Error::validation("level", format!("must be 1 or 2, got {level}")))
    }
}

/// Exact evolution for scaled time `t̃` (units of `1/|κ|`).
///
/// Each coupled block is propagated through its dressed states; vanishing
/// Rabi frequencies fall back to bare phases, as do the uncoupled states.
pub fn evolve(initial: &CompositeState, t: f64, params: &ModelParams) -> Result<CompositeState> {
    params.validate()?;
    for label in initial.amps.keys() {
        check_level(label.level)?;
    }
    let k = params.k;
    let phase = |energy: f64| C64::from_polar(1.0, -energy * t);
    let mut amps = BTreeMap::new();
    for (label, z) in &initial.amps {
        if matches!(classify(*label, k), Slot::Free) {
            amps.insert(*label, z * phase(bare_energy(*label, params)));
        }
    }
    for ((m, n), v) in initial.blocks(k) {
        let rabi = rabi_frequency(m, n, params);
        let center = block_center(m, n, params);
        // The block center is factored out so the relative phase inside the
        // block does not inherit the rounding of a large absolute energy.
        let common = phase(center);
        let out = if rabi.norm() == 0.0 {
            let half = 0.5 * params.delta_omega_tilde;
            Vector2::new(v[0] * phase(-half), v[1] * phase(half)) * common
        } else {
            let d = dressed_from_rabi(rabi, params.delta_omega_tilde, center);
            let mut out = Vector2::zeros();
            for plus in [true, false] {
                let (alpha, c, _) = d.branch(plus);
                let offset = if plus { 0.5 * d.splitting } else { -0.5 * d.splitting };
                let eigvec = Vector2::new(C64::new(c, 0.0), alpha * c);
                out += eigvec * (eigvec.dotc(&v) * phase(offset));
            }
            out * common
        };
        amps.insert(BasisLabel::new(2, m, n), out[0]);
        amps.insert(BasisLabel::new(1, m + 1, n + k), out[1]);
    }
    Ok(CompositeState {
        amps,
        truncated_mass: initial.truncated_mass,
    })
}
