use std::collections::HashMap;
use std::fs;
use std::path::Path;

use nalgebra::DMatrix;
use rayon::prelude::*;
use sha2::{Digest, Sha256};

use super::filter::FilterSpec;
use super::quadrature::{pair_count, pair_index, RadialRule};
use crate::error::{Error, Result};
use crate::sum::ComplexNeumaier;
use crate::C64;

/// Largest accepted change of any element when the quadrature order doubles.
pub const QUADRATURE_TOL: f64 = 1e-10;
/// Largest accepted imaginary part of an assembled P function value.
pub const IMAG_TOL: f64 = 1e-10;

const MAGIC: &[u8; 8] = b"IONJCPT\0";
pub const CACHE_FORMAT_VERSION: u32 = 1;

/// Rectangular grid in the complex `α` plane, endpoints included.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct GridSpec {
    pub re_min: f64,
    pub re_max: f64,
    pub n_re: usize,
    pub im_min: f64,
    pub im_max: f64,
    pub n_im: usize,
}

impl GridSpec {
    /// `[-half_width, half_width]²` with `points` samples per axis.
    pub fn square(half_width: f64, points: usize) -> Self {
        GridSpec {
            re_min: -half_width,
            re_max: half_width,
            n_re: points,
            im_min: -half_width,
            im_max: half_width,
            n_im: points,
        }
    }

    pub fn validate(&self) -> Result<()> {
        for (name, lo, hi, n) in [
            ("grid_re", self.re_min, self.re_max, self.n_re),
            ("grid_im", self.im_min, self.im_max, self.n_im),
        ] {
            if !(lo.is_finite() && hi.is_finite()) {
                return Err(Error::validation(name, "bounds must be finite"));
            }
            if n < 2 || hi <= lo {
                return Err(Error::validation(name, "need at least two points and max > min"));
            }
        }
        Ok(())
    }

    pub fn len(&self) -> usize {
        self.n_re * self.n_im
    }

    pub fn is_empty(&self) -> bool {
        self.len() == 0
    }

    fn axis(lo: f64, hi: f64, n: usize, i: usize) -> f64 {
        if i + 1 == n {
            hi
        } else {
            lo + (hi - lo) * i as f64 / (n - 1) as f64
        }
    }

    /// Point `index = i_re * n_im + i_im`.
    pub fn point(&self, index: usize) -> C64 {
        let (i_re, i_im) = (index / self.n_im, index % self.n_im);
        C64::new(
            Self::axis(self.re_min, self.re_max, self.n_re, i_re),
            Self::axis(self.im_min, self.im_max, self.n_im, i_im),
        )
    }

    pub fn cell_area(&self) -> f64 {
        (self.re_max - self.re_min) / (self.n_re - 1) as f64 * (self.im_max - self.im_min)
            / (self.n_im - 1) as f64
    }
}

/// Real field `P_Ω(α)` sampled on a [`GridSpec`].
#[derive(Debug, Clone, PartialEq)]
pub struct PhaseSpaceGrid {
    pub spec: GridSpec,
    /// Same ordering as [`GridSpec::point`].
    pub values: Vec<f64>,
    /// Largest `|Im P_Ω|` seen during assembly.
    pub imag_residual: f64,
    /// Bound on the quadrature error of every value.
    pub certified_error: f64,
}

impl PhaseSpaceGrid {
    pub fn min(&self) -> f64 {
        self.values.iter().copied().fold(f64::INFINITY, f64::min)
    }

    pub fn max(&self) -> f64 {
        self.values.iter().copied().fold(f64::NEG_INFINITY, f64::max)
    }

    pub fn argmin(&self) -> C64 {
        let (idx, _) = self
            .values
            .iter()
            .enumerate()
            .fold((0, f64::INFINITY), |best, (i, &v)| if v < best.1 { (i, v) } else { best });
        self.spec.point(idx)
    }

    /// `Σ P_Ω ΔA`, close to one when the state fits inside the grid.
    pub fn riemann_sum(&self) -> f64 {
        crate::sum::neumaier_sum(self.values.iter().copied()) * self.spec.cell_area()
    }
}

/// Unique `|α|` of the grid points, plus each point's radius index and
/// `e^{iφ_α}`. Radii equal up to rounding of `|α|²` at 1e-12 share a slot.
fn radial_layout(grid: &GridSpec) -> (Vec<f64>, Vec<usize>, Vec<C64>) {
    let mut slots: HashMap<i64, usize> = HashMap::new();
    let mut radii = Vec::new();
    let mut point_radius = Vec::with_capacity(grid.len());
    let mut point_phase = Vec::with_capacity(grid.len());
    for idx in 0..grid.len() {
        let alpha = grid.point(idx);
        let key = (alpha.norm_sqr() * 1e12).round() as i64;
        let slot = *slots.entry(key).or_insert_with(|| {
            radii.push(alpha.norm());
            radii.len() - 1
        });
        point_radius.push(slot);
        let r = alpha.norm();
        point_phase.push(if r == 0.0 { C64::new(1.0, 0.0) } else { alpha / r });
    }
    (radii, point_radius, point_phase)
}

/// Radial integrals `R_nm(|α|)` for `n <= m <= n_max` at every distinct
/// radius of a grid, so that `P_Ω,nm(α) = e^{i(n-m)φ_α} R_nm(|α|)` and
/// `P_Ω,mn = conj(P_Ω,nm)`. The table depends only on `(n_max, w, grid)`
/// and is reused for every density matrix.
#[derive(Debug, Clone, PartialEq)]
pub struct PElementTable {
    pub n_max: usize,
    pub filter: FilterSpec,
    pub grid: GridSpec,
    radii: Vec<f64>,
    radial: Vec<f64>,
    point_radius: Vec<usize>,
    point_phase: Vec<C64>,
    /// Largest element change between quadrature orders `q` and `2q`.
    pub quadrature_error: f64,
}

impl PElementTable {
    /// Computes every element at orders `q` and `2q`, keeps the latter and
    /// fails if any element moved by more than [`QUADRATURE_TOL`].
    pub fn build(n_max: usize, filter: &FilterSpec, grid: &GridSpec) -> Result<Self> {
        filter.validate()?;
        grid.validate()?;
        let (radii, point_radius, point_phase) = radial_layout(grid);
        let pairs = pair_count(n_max);
        let coarse = RadialRule::new(filter.w, filter.quadrature_order);
        let fine = RadialRule::new(filter.w, 2 * filter.quadrature_order);
        let coarse_lambda = coarse.lambda_table(n_max);
        let fine_lambda = fine.lambda_table(n_max);
        let rows: Vec<(Vec<f64>, f64)> = radii
            .par_iter()
            .map(|&r| {
                let mut lo = vec![0.0; pairs];
                let mut hi = vec![0.0; pairs];
                coarse.integrate_pairs(n_max, r, &coarse_lambda, &mut lo);
                fine.integrate_pairs(n_max, r, &fine_lambda, &mut hi);
                let diff = lo.iter().zip(&hi).map(|(a, b)| (a - b).abs()).fold(0.0, f64::max);
                (hi, diff)
            })
            .collect();
        let quadrature_error = rows.iter().map(|r| r.1).fold(0.0, f64::max);
        if !(quadrature_error <= QUADRATURE_TOL) {
            return Err(Error::QuadratureNotConverged {
                difference: quadrature_error,
                tolerance: QUADRATURE_TOL,
            });
        }
        let radial = rows.into_iter().flat_map(|r| r.0).collect();
        Ok(PElementTable {
            n_max,
            filter: *filter,
            grid: *grid,
            radii,
            radial,
            point_radius,
            point_phase,
            quadrature_error,
        })
    }

    pub fn distinct_radii(&self) -> usize {
        self.radii.len()
    }

    /// `P_Ω,nm` at grid point `index`.
    pub fn element(&self, n: usize, m: usize, index: usize) -> C64 {
        let (lo, hi) = if n <= m { (n, m) } else { (m, n) };
        let pairs = pair_count(self.n_max);
        let r = self.radial[self.point_radius[index] * pairs + pair_index(self.n_max, lo, hi)];
        let phase = self.point_phase[index].powu((hi - lo) as u32);
        if n >= m {
            phase * r
        } else {
            phase.conj() * r
        }
    }

    /// `P_Ω(α) = Σ ρ_mn P_Ω,nm(α)` on every grid point, with
    /// `ρ_mn = <m|ρ|n>`. Points are independent and evaluated in parallel,
    /// each as an ordered compensated sum.
    pub fn apply(&self, rho: &DMatrix<C64>) -> Result<PhaseSpaceGrid> {
        let dim = rho.nrows();
        if rho.ncols() != dim || dim == 0 || dim > self.n_max + 1 {
            return Err(Error::validation(
                "rho",
                format!("expected a square matrix of size at most {}", self.n_max + 1),
            ));
        }
        let pairs = pair_count(self.n_max);
        let results: Vec<C64> = (0..self.grid.len())
            .into_par_iter()
            .map(|idx| {
                let row = &self.radial[self.point_radius[idx] * pairs..][..pairs];
                let u = self.point_phase[idx];
                let mut powers = Vec::with_capacity(dim);
                let mut acc_phase = C64::new(1.0, 0.0);
                for _ in 0..dim {
                    powers.push(acc_phase);
                    acc_phase *= u;
                }
                let mut acc = ComplexNeumaier::default();
                for n in 0..dim {
                    for m in n..dim {
                        let r = row[pair_index(self.n_max, n, m)];
                        let d = m - n;
                        // P_nm = e^{-idφ} R, P_mn = e^{idφ} R
                        acc.add(rho[(m, n)] * powers[d].conj() * r);
                        if d > 0 {
                            acc.add(rho[(n, m)] * powers[d] * r);
                        }
                    }
                }
                acc.value()
            })
            .collect();
        let imag_residual = results.iter().map(|z| z.im.abs()).fold(0.0, f64::max);
        if imag_residual > IMAG_TOL {
            return Err(Error::validation(
                "rho",
                format!("P function has imaginary part {imag_residual:e}; is ρ Hermitian?"),
            ));
        }
        let weight: f64 = rho.iter().map(|z| z.norm()).sum();
        Ok(PhaseSpaceGrid {
            spec: self.grid,
            values: results.iter().map(|z| z.re).collect(),
            imag_residual,
            certified_error: self.quadrature_error * weight,
        })
    }

    // ---- on-disk cache ----

    /// Content hash of everything the table depends on.
    pub fn cache_key(n_max: usize, filter: &FilterSpec, grid: &GridSpec) -> String {
        let digest = Sha256::digest(header_bytes(n_max, filter, grid));
        digest[..16].iter().map(|b| format!("{b:02x}")).collect()
    }

    pub fn cache_file_name(n_max: usize, filter: &FilterSpec, grid: &GridSpec) -> String {
        format!("ptable-{}.bin", Self::cache_key(n_max, filter, grid))
    }

    /// Layout: header (magic, format version, `n_max`, `w`, quadrature
    /// order, grid spec, tolerance), quadrature error, radius count, radii,
    /// radial values, then a SHA-256 of all preceding bytes. Little endian.
    pub fn to_bytes(&self) -> Vec<u8> {
        let mut out = header_bytes(self.n_max, &self.filter, &self.grid);
        out.extend(self.quadrature_error.to_le_bytes());
        out.extend((self.radii.len() as u64).to_le_bytes());
        for v in self.radii.iter().chain(&self.radial) {
            out.extend(v.to_le_bytes());
        }
        let digest = Sha256::digest(&out);
        out.extend(digest);
        out
    }

    pub fn from_bytes(bytes: &[u8], n_max: usize, filter: &FilterSpec, grid: &GridSpec) -> Result<Self> {
        let header = header_bytes(n_max, filter, grid);
        if bytes.len() < header.len() + 16 + 32 {
            return Err(Error::Cache("file truncated".into()));
        }
        let (body, digest) = bytes.split_at(bytes.len() - 32);
        if Sha256::digest(body).as_slice() != digest {
            return Err(Error::Cache("checksum mismatch".into()));
        }
        if body[..8] != MAGIC[..] {
            return Err(Error::Cache("not an element table".into()));
        }
        if body[8..12] != CACHE_FORMAT_VERSION.to_le_bytes() {
            return Err(Error::Cache("unsupported format version".into()));
        }
        if body[..header.len()] != header[..] {
            return Err(Error::Cache("header does not match the requested table".into()));
        }
        let mut words = body[header.len()..]
            .chunks_exact(8)
            .map(|c| <[u8; 8]>::try_from(c).expect("chunk of 8"));
        let mut next = || words.next().ok_or_else(|| Error::Cache("file truncated".into()));
        let quadrature_error = f64::from_le_bytes(next()?);
        let n_radii = u64::from_le_bytes(next()?) as usize;
        let (radii, point_radius, point_phase) = radial_layout(grid);
        if n_radii != radii.len() {
            return Err(Error::Cache("radius count does not match the grid".into()));
        }
        for r in &radii {
            if f64::from_le_bytes(next()?).to_bits() != r.to_bits() {
                return Err(Error::Cache("radii do not match the grid".into()));
            }
        }
        let total = n_radii * pair_count(n_max);
        let mut radial = Vec::with_capacity(total);
        for _ in 0..total {
            radial.push(f64::from_le_bytes(next()?));
        }
        if next().is_ok() {
            return Err(Error::Cache("trailing data".into()));
        }
        Ok(PElementTable {
            n_max,
            filter: *filter,
            grid: *grid,
            radii,
            radial,
            point_radius,
            point_phase,
            quadrature_error,
        })
    }

    pub fn save(&self, path: &Path) -> Result<()> {
        let tmp = path.with_extension("tmp");
        fs::write(&tmp, self.to_bytes())?;
        fs::rename(&tmp, path)?;
        Ok(())
    }

    pub fn load(path: &Path, n_max: usize, filter: &FilterSpec, grid: &GridSpec) -> Result<Self> {
        Self::from_bytes(&fs::read(path)?, n_max, filter, grid)
    }

    /// Loads the table from `dir` when a valid cache file exists, otherwise
    /// builds it and writes the file. Unreadable or stale files are replaced.
    pub fn load_or_build(
        dir: &Path,
        n_max: usize,
        filter: &FilterSpec,
        grid: &GridSpec,
    ) -> Result<(Self, CacheStatus)> {
        let path = dir.join(Self::cache_file_name(n_max, filter, grid));
        if path.exists() {
            if let Ok(table) = Self::load(&path, n_max, filter, grid) {
                return Ok((table, CacheStatus::Loaded));
            }
        }
        let table = Self::build(n_max, filter, grid)?;
        fs::create_dir_all(dir)?;
        table.save(&path)?;
        Ok((table, CacheStatus::Built))
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum CacheStatus {
    Loaded,
    Built,
}

fn header_bytes(n_max: usize, filter: &FilterSpec, grid: &GridSpec) -> Vec<u8> {
    let mut out = Vec::with_capacity(112);
    out.extend(MAGIC);
    out.extend(CACHE_FORMAT_VERSION.to_le_bytes());
    out.extend((n_max as u64).to_le_bytes());
    out.extend(filter.w.to_le_bytes());
    out.extend((filter.quadrature_order as u64).to_le_bytes());
    out.extend(grid.re_min.to_le_bytes());
    out.extend(grid.re_max.to_le_bytes());
    out.extend((grid.n_re as u64).to_le_bytes());
    out.extend(grid.im_min.to_le_bytes());
    out.extend(grid.im_max.to_le_bytes());
    out.extend((grid.n_im as u64).to_le_bytes());
    out.extend(QUADRATURE_TOL.to_le_bytes());
    out
}
