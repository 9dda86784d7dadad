use std::collections::BTreeMap;
use std::fmt::Write as _;
use std::str::FromStr;

use crate::error::{Error, Result};
use crate::fock_core::{ModelParams, TruncationPolicy, DEFAULT_TAIL_EPSILON};
use crate::quasiprob::{FilterSpec, GridSpec, DEFAULT_QUADRATURE_ORDER};
use crate::C64;

/// Motional tail mass used for P functions when the config does not set
/// one. The P field error scales like the square root of the tail mass.
pub const PFUNCTION_TAIL_EPSILON: f64 = 1e-18;

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Mode {
    Sigma22ClassicalOrdered,
    Sigma22ClassicalNoOrdering,
    Sigma22Quantized,
    CompareOrdering,
    ComparePump,
    PFunction,
}

impl Mode {
    pub const ALL: [Mode; 6] = [
        Mode::Sigma22ClassicalOrdered,
        Mode::Sigma22ClassicalNoOrdering,
        Mode::Sigma22Quantized,
        Mode::CompareOrdering,
        Mode::ComparePump,
        Mode::PFunction,
    ];

    pub fn name(self) -> &'static str {
        match self {
            Mode::Sigma22ClassicalOrdered => "sigma22-classical-ordered",
            Mode::Sigma22ClassicalNoOrdering => "sigma22-classical-noordering",
            Mode::Sigma22Quantized => "sigma22-quantized",
            Mode::CompareOrdering => "compare-ordering",
            Mode::ComparePump => "compare-pump",
            Mode::PFunction => "pfunction",
        }
    }

    fn is_classical(self) -> bool {
        matches!(
            self,
            Mode::Sigma22ClassicalOrdered | Mode::Sigma22ClassicalNoOrdering | Mode::CompareOrdering
        )
    }
}

impl FromStr for Mode {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        Mode::ALL
            .into_iter()
            .find(|m| m.name() == s)
            .ok_or_else(|| Error::validation("mode", format!("unknown mode `{s}`")))
    }
}

/// Uniform grid `t_start ..= t_end` with `n_points` samples.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct TimeGrid {
    pub t_start: f64,
    pub t_end: f64,
    pub n_points: usize,
}

impl TimeGrid {
    pub fn points(&self) -> Vec<f64> {
        let span = self.t_end - self.t_start;
        let last = self.n_points.saturating_sub(1).max(1) as f64;
        (0..self.n_points)
            .map(|i| {
                if i + 1 == self.n_points {
                    self.t_end
                } else {
                    self.t_start + span * i as f64 / last
                }
            })
            .collect()
    }
}

/// A fully resolved run description. Every field has a value; optional
/// truncation overrides are `None` when the cutoffs are chosen from the
/// amplitudes.
#[derive(Debug, Clone, PartialEq)]
pub struct RunConfig {
    pub mode: Mode,
    pub params: ModelParams,
    /// Relative detuning `Δω / |κβ|` of the classical pump.
    pub r: f64,
    /// Initial electronic level.
    pub level: u8,
    pub alpha0_abs: f64,
    pub alpha0_arg: f64,
    pub beta0_abs: f64,
    pub beta0_arg: f64,
    pub time: TimeGrid,
    /// Scaled times `t̃` at which P functions are evaluated.
    pub snapshots: Vec<f64>,
    /// Pump amplitudes compared against the classical limit.
    pub beta0_list: Vec<f64>,
    /// Gap that counts as a visible time-ordering effect.
    pub threshold: f64,
    /// ODE tolerance (relative and absolute).
    pub tol: f64,
    pub filter: FilterSpec,
    pub grid: GridSpec,
    pub n_max_motion: Option<usize>,
    pub m_max_pump: Option<usize>,
    pub tail_epsilon: f64,
    /// Output directory.
    pub output: Option<String>,
    /// Directory for element-table cache files.
    pub cache_dir: Option<String>,
}

impl RunConfig {
    pub fn alpha0(&self) -> C64 {
        C64::from_polar(self.alpha0_abs, self.alpha0_arg)
    }

    pub fn beta0(&self) -> C64 {
        C64::from_polar(self.beta0_abs, self.beta0_arg)
    }

    /// Pump amplitudes for `compare-pump`: `beta0_list`, or `beta0_abs`
    /// alone when the list is empty.
    pub fn pump_amplitudes(&self) -> Vec<f64> {
        if self.beta0_list.is_empty() {
            vec![self.beta0_abs]
        } else {
            self.beta0_list.clone()
        }
    }

    /// Fock cutoffs: sized from the amplitudes, then overridden.
    pub fn truncation(&self) -> TruncationPolicy {
        let beta = self.pump_amplitudes().into_iter().fold(self.beta0_abs, f64::max);
        let mut policy = TruncationPolicy::for_amplitudes(self.alpha0_abs, beta, self.tail_epsilon);
        if let Some(n) = self.n_max_motion {
            policy.n_max_motion = n;
        }
        if let Some(m) = self.m_max_pump {
            policy.m_max_pump = m;
        }
        policy
    }

    pub fn validate(&self) -> Result<()> {
        self.params.validate()?;
        let positive = |field: &str, v: f64| {
            if v.is_finite() && v > 0.0 {
                Ok(())
            } else {
                Err(Error::validation(field, format!("must be finite and > 0, got {v}")))
            }
        };
        let finite = |field: &str, v: f64| {
            if v.is_finite() {
                Ok(())
            } else {
                Err(Error::validation(field, "must be finite"))
            }
        };
        if self.level != 1 && self.level != 2 {
            return Err(Error::validation("level", "must be 1 or 2"));
        }
        if self.mode.is_classical() || self.mode == Mode::ComparePump {
            finite("r", self.r)?;
            if self.level != 1 {
                return Err(Error::validation("level", "the classical-pump solvers start in level 1"));
            }
        }
        for (field, v) in [
            ("alpha0_arg", self.alpha0_arg),
            ("beta0_arg", self.beta0_arg),
        ] {
            finite(field, v)?;
        }
        for (field, v) in [("alpha0_abs", self.alpha0_abs), ("beta0_abs", self.beta0_abs)] {
            if !(v.is_finite() && v >= 0.0) {
                return Err(Error::validation(field, "must be finite and >= 0"));
            }
        }
        if self.mode != Mode::PFunction {
            let t = &self.time;
            finite("t_start", t.t_start)?;
            finite("t_end", t.t_end)?;
            if t.n_points < 2 {
                return Err(Error::validation("n_points", "the time grid needs at least 2 points"));
            }
            if t.t_end <= t.t_start {
                return Err(Error::validation("t_end", "must be greater than t_start"));
            }
        }
        if self.mode == Mode::ComparePump {
            if self.time.t_start != 0.0 {
                return Err(Error::validation("t_start", "compare-pump starts at tau = 0"));
            }
            for &b in &self.pump_amplitudes() {
                positive("beta0_list", b)?;
            }
            if self.beta0_list.is_empty() && self.params.delta_omega_tilde != 0.0 {
                let expected = self.r * self.beta0_abs;
                if (self.params.delta_omega_tilde - expected).abs() > 1e-9 * expected.abs().max(1.0) {
                    return Err(Error::validation(
                        "delta_omega_tilde",
                        format!("compare-pump requires delta_omega_tilde = r |beta0| = {expected}"),
                    ));
                }
            }
        }
        if self.mode == Mode::PFunction {
            if self.snapshots.is_empty() {
                return Err(Error::validation("snapshots", "need at least one time"));
            }
            for &t in &self.snapshots {
                if !(t.is_finite() && t >= 0.0) {
                    return Err(Error::validation("snapshots", "times must be finite and >= 0"));
                }
            }
            self.filter.validate()?;
            self.grid.validate()?;
        }
        positive("threshold", self.threshold)?;
        positive("tol", self.tol)?;
        if !(self.tail_epsilon > 0.0 && self.tail_epsilon < 1.0) {
            return Err(Error::validation("tail_epsilon", "must lie in (0, 1)"));
        }
        Ok(())
    }

    /// Canonical `key=value` text; [`parse_config`] reads it back to an equal
    /// config. Floats use the shortest representation that round-trips.
    pub fn to_config_string(&self) -> String {
        let mut out = String::new();
        let p = &self.params;
        let list = |v: &[f64]| v.iter().map(|x| format!("{x:?}")).collect::<Vec<_>>().join(",");
        let mut put = |key: &str, value: String| {
            let _ = writeln!(out, "{key}={value}");
        };
        put("mode", self.mode.name().into());
        put("k", p.k.to_string());
        put("eta", format!("{:?}", p.eta));
        put("delta_phi", format!("{:?}", p.delta_phi));
        put("delta_omega_tilde", format!("{:?}", p.delta_omega_tilde));
        put("nu_tilde", format!("{:?}", p.nu_tilde));
        put("omega21_tilde", format!("{:?}", p.omega21_tilde));
        put("r", format!("{:?}", self.r));
        put("level", self.level.to_string());
        put("alpha0_abs", format!("{:?}", self.alpha0_abs));
        put("alpha0_arg", format!("{:?}", self.alpha0_arg));
        put("beta0_abs", format!("{:?}", self.beta0_abs));
        put("beta0_arg", format!("{:?}", self.beta0_arg));
        put("t_start", format!("{:?}", self.time.t_start));
        put("t_end", format!("{:?}", self.time.t_end));
        put("n_points", self.time.n_points.to_string());
        put("snapshots", list(&self.snapshots));
        put("beta0_list", list(&self.beta0_list));
        put("threshold", format!("{:?}", self.threshold));
        put("tol", format!("{:?}", self.tol));
        put("filter_kind", "radial".into());
        put("filter_w", format!("{:?}", self.filter.w));
        put("quadrature_order", self.filter.quadrature_order.to_string());
        put("grid_re_min", format!("{:?}", self.grid.re_min));
        put("grid_re_max", format!("{:?}", self.grid.re_max));
        put("grid_n_re", self.grid.n_re.to_string());
        put("grid_im_min", format!("{:?}", self.grid.im_min));
        put("grid_im_max", format!("{:?}", self.grid.im_max));
        put("grid_n_im", self.grid.n_im.to_string());
        if let Some(n) = self.n_max_motion {
            put("n_max_motion", n.to_string());
        }
        if let Some(m) = self.m_max_pump {
            put("m_max_pump", m.to_string());
        }
        put("tail_epsilon", format!("{:?}", self.tail_epsilon));
        if let Some(o) = &self.output {
            put("output", o.clone());
        }
        if let Some(c) = &self.cache_dir {
            put("cache_dir", c.clone());
        }
        out
    }
}

/// Every key the parser accepts.
pub const KEYS: &[&str] = &[
    "mode",
    "k",
    "eta",
    "delta_phi",
    "delta_omega_tilde",
    "nu_tilde",
    "omega21_tilde",
    "r",
    "level",
    "alpha0_abs",
    "alpha0_arg",
    "beta0_abs",
    "beta0_arg",
    "t_start",
    "t_end",
    "n_points",
    "snapshots",
    "beta0_list",
    "threshold",
    "tol",
    "filter_kind",
    "filter_w",
    "quadrature_order",
    "grid_re_min",
    "grid_re_max",
    "grid_n_re",
    "grid_im_min",
    "grid_im_max",
    "grid_n_im",
    "n_max_motion",
    "m_max_pump",
    "tail_epsilon",
    "output",
    "cache_dir",
];

struct Entries(BTreeMap<String, String>);

impl Entries {
    fn has(&self, key: &str) -> bool {
        self.0.contains_key(key)
    }

    fn require(&self, key: &str, mode: Mode) -> Result<()> {
        if self.has(key) {
            Ok(())
        } else {
            Err(Error::validation(key, format!("required for mode {}", mode.name())))
        }
    }

    fn get<T: FromStr>(&self, key: &str, default: T) -> Result<T> {
        match self.0.get(key) {
            None => Ok(default),
            Some(raw) => raw
                .parse()
                .map_err(|_| Error::validation(key, format!("cannot parse `{raw}`"))),
        }
    }

    fn opt<T: FromStr>(&self, key: &str) -> Result<Option<T>> {
        self.0
            .get(key)
            .map(|raw| raw.parse().map_err(|_| Error::validation(key, format!("cannot parse `{raw}`"))))
            .transpose()
    }

    fn list(&self, key: &str) -> Result<Vec<f64>> {
        match self.0.get(key) {
            None => Ok(Vec::new()),
            Some(raw) if raw.trim().is_empty() => Ok(Vec::new()),
            Some(raw) => raw
                .split(',')
                .map(|item| {
                    item.trim()
                        .parse()
                        .map_err(|_| Error::validation(key, format!("cannot parse `{}`", item.trim())))
                })
                .collect(),
        }
    }
}

/// Parses flat `key=value` text. Blank lines and `#` comments are skipped;
/// unknown or repeated keys are errors.
pub fn parse_config(text: &str) -> Result<RunConfig> {
    let mut map = BTreeMap::new();
    for (idx, raw) in text.lines().enumerate() {
        let line_no = idx + 1;
        let line = raw.split('#').next().unwrap_or("").trim();
        if line.is_empty() {
            continue;
        }
        let Some((key, value)) = line.split_once('=') else {
            return Err(Error::Parse { line: line_no, message: format!("expected key=value, got `{line}`") });
        };
        let key = key.trim();
        if !KEYS.contains(&key) {
            return Err(Error::Parse { line: line_no, message: format!("unknown key `{key}`") });
        }
        if map.insert(key.to_string(), value.trim().to_string()).is_some() {
            return Err(Error::Parse { line: line_no, message: format!("duplicate key `{key}`") });
        }
    }
    let e = Entries(map);

    let mode: Mode = match e.0.get("mode") {
        Some(m) => m.parse()?,
        None => return Err(Error::validation("mode", "missing")),
    };
    e.require("k", mode)?;
    e.require("eta", mode)?;
    e.require("alpha0_abs", mode)?;
    match mode {
        Mode::Sigma22ClassicalOrdered | Mode::Sigma22ClassicalNoOrdering | Mode::CompareOrdering => {
            e.require("r", mode)?;
            e.require("t_end", mode)?;
        }
        Mode::Sigma22Quantized => {
            e.require("beta0_abs", mode)?;
            e.require("t_end", mode)?;
        }
        Mode::ComparePump => {
            e.require("r", mode)?;
            e.require("t_end", mode)?;
            if !e.has("beta0_list") {
                e.require("beta0_abs", mode)?;
            }
        }
        Mode::PFunction => {
            e.require("beta0_abs", mode)?;
            e.require("snapshots", mode)?;
            e.require("filter_w", mode)?;
        }
    }
    let filter_kind: String = e.get("filter_kind", "radial".to_string())?;
    if filter_kind != "radial" {
        return Err(Error::validation("filter_kind", "only the radial filter is supported"));
    }

    let params = ModelParams {
        k: e.get("k", 0usize)?,
        eta: e.get("eta", 0.0)?,
        delta_phi: e.get("delta_phi", 0.0)?,
        delta_omega_tilde: e.get("delta_omega_tilde", 0.0)?,
        nu_tilde: e.get("nu_tilde", 0.0)?,
        omega21_tilde: e.get("omega21_tilde", 0.0)?,
        arg_kappa: 0.0,
    };
    let default_grid = GridSpec::square(4.0, 161);
    let (default_level, default_tail) = if mode == Mode::PFunction {
        (2u8, PFUNCTION_TAIL_EPSILON)
    } else {
        (1u8, DEFAULT_TAIL_EPSILON)
    };
    let config = RunConfig {
        mode,
        params,
        r: e.get("r", 0.0)?,
        level: e.get("level", default_level)?,
        alpha0_abs: e.get("alpha0_abs", 0.0)?,
        alpha0_arg: e.get("alpha0_arg", 0.0)?,
        beta0_abs: e.get("beta0_abs", 0.0)?,
        beta0_arg: e.get("beta0_arg", 0.0)?,
        time: TimeGrid {
            t_start: e.get("t_start", 0.0)?,
            t_end: e.get("t_end", 0.0)?,
            n_points: e.get("n_points", 2000usize)?,
        },
        snapshots: e.list("snapshots")?,
        beta0_list: e.list("beta0_list")?,
        threshold: e.get("threshold", 0.1)?,
        tol: e.get("tol", crate::semiclassical::DEFAULT_TOL)?,
        filter: FilterSpec {
            w: e.get("filter_w", 1.7)?,
            quadrature_order: e.get("quadrature_order", DEFAULT_QUADRATURE_ORDER)?,
        },
        grid: GridSpec {
            re_min: e.get("grid_re_min", default_grid.re_min)?,
            re_max: e.get("grid_re_max", default_grid.re_max)?,
            n_re: e.get("grid_n_re", default_grid.n_re)?,
            im_min: e.get("grid_im_min", default_grid.im_min)?,
            im_max: e.get("grid_im_max", default_grid.im_max)?,
            n_im: e.get("grid_n_im", default_grid.n_im)?,
        },
        n_max_motion: e.opt("n_max_motion")?,
        m_max_pump: e.opt("m_max_pump")?,
        tail_epsilon: e.get("tail_epsilon", default_tail)?,
        output: e.opt("output")?,
        cache_dir: e.opt("cache_dir")?,
    };
    config.validate()?;
    Ok(config)
}
