use std::fmt::Write as _;
use std::fs;
use std::path::Path;

use serde_json::{json, Value};
use sha2::{Digest, Sha256};

use super::config::RunConfig;
use crate::error::{Error, Result};

pub const VERSION: &str = env!("CARGO_PKG_VERSION");

/// Hex SHA-256 of the canonical config text.
pub fn config_hash(config: &RunConfig) -> String {
    let digest = Sha256::digest(config.to_config_string().as_bytes());
    digest.iter().map(|b| format!("{b:02x}")).collect()
}

/// 17 significant digits, enough to round-trip any f64.
pub fn format_float(x: f64) -> String {
    format!("{x:.16e}")
}

/// Column-oriented table rendered as CSV with `#` metadata lines.
#[derive(Debug, Clone, PartialEq)]
pub struct CsvTable {
    pub meta: Vec<(String, String)>,
    pub columns: Vec<String>,
    pub rows: Vec<Vec<f64>>,
}

impl CsvTable {
    pub fn new(config: &RunConfig, columns: &[&str]) -> Self {
        CsvTable {
            meta: vec![
                ("ionjc".into(), VERSION.into()),
                ("mode".into(), config.mode.name().into()),
                ("config_sha256".into(), config_hash(config)),
            ],
            columns: columns.iter().map(|c| c.to_string()).collect(),
            rows: Vec::new(),
        }
    }

    pub fn push_meta(&mut self, key: &str, value: impl Into<String>) {
        self.meta.push((key.into(), value.into()));
    }

    pub fn render(&self) -> String {
        let mut out = String::new();
        for (k, v) in &self.meta {
            let _ = writeln!(out, "# {k}: {v}");
        }
        out.push_str(&self.columns.join(","));
        out.push('\n');
        for row in &self.rows {
            debug_assert_eq!(row.len(), self.columns.len());
            let line: Vec<String> = row.iter().map(|&x| format_float(x)).collect();
            out.push_str(&line.join(","));
            out.push('\n');
        }
        out
    }
}

pub(crate) fn write_text(path: &Path, text: &str) -> Result<()> {
    if let Some(dir) = path.parent() {
        fs::create_dir_all(dir)?;
    }
    fs::write(path, text)?;
    Ok(())
}

/// Serializes a JSON value with a trailing newline.
pub(crate) fn write_json(path: &Path, value: &Value) -> Result<()> {
    let mut text = serde_json::to_string_pretty(value).map_err(|e| Error::Io(e.into()))?;
    text.push('\n');
    write_text(path, &text)
}

/// Full parameter record for the sidecar.
pub fn params_json(config: &RunConfig) -> Value {
    let p = &config.params;
    json!({
        "mode": config.mode.name(),
        "k": p.k,
        "eta": p.eta,
        "delta_phi": p.delta_phi,
        "delta_omega_tilde": p.delta_omega_tilde,
        "nu_tilde": p.nu_tilde,
        "omega21_tilde": p.omega21_tilde,
        "arg_kappa": p.arg_kappa,
        "r": config.r,
        "level": config.level,
        "alpha0_abs": config.alpha0_abs,
        "alpha0_arg": config.alpha0_arg,
        "beta0_abs": config.beta0_abs,
        "beta0_arg": config.beta0_arg,
        "time": {
            "t_start": config.time.t_start,
            "t_end": config.time.t_end,
            "n_points": config.time.n_points,
        },
        "snapshots": config.snapshots,
        "beta0_list": config.beta0_list,
        "filter": {
            "kind": "radial",
            "w": config.filter.w,
            "quadrature_order": config.filter.quadrature_order,
        },
        "grid": {
            "re_min": config.grid.re_min,
            "re_max": config.grid.re_max,
            "n_re": config.grid.n_re,
            "im_min": config.grid.im_min,
            "im_max": config.grid.im_max,
            "n_im": config.grid.n_im,
        },
    })
}

/// Machine-readable error report printed on failure.
pub fn error_json(err: &Error) -> Value {
    let mut v = json!({
        "error": err.kind(),
        "message": err.to_string(),
        "exit_code": exit_code(err),
    });
    match err {
        Error::Validation { field, .. } => v["field"] = json!(field),
        Error::Parse { line, .. } => v["line"] = json!(line),
        Error::TruncationTooSmall { tail, epsilon } => {
            v["tail"] = json!(tail);
            v["epsilon"] = json!(epsilon);
        }
        Error::StepFailure { tau, step } => {
            v["tau"] = json!(tau);
            v["step"] = json!(step);
        }
        Error::DegenerateBlock { m, n } => {
            v["m"] = json!(m);
            v["n"] = json!(n);
        }
        Error::QuadratureNotConverged { difference, tolerance } => {
            v["difference"] = json!(difference);
            v["tolerance"] = json!(tolerance);
        }
        _ => {}
    }
    v
}

/// 2 for configuration problems, 3 for everything else.
pub fn exit_code(err: &Error) -> i32 {
    if err.is_config_error() {
        2
    } else {
        3
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::cli_io::preset;

    #[test]
    fn seventeen_significant_digits() {
        let s = format_float(0.1);
        assert_eq!(s, "1.0000000000000001e-1");
        for x in [1.0 / 3.0, -2.5e-300, 6.02214076e23, 0.0] {
            assert_eq!(format_float(x).parse::<f64>().unwrap(), x);
        }
    }

    #[test]
    fn csv_layout() {
        let c = preset("fig2").unwrap();
        let mut t = CsvTable::new(&c, &["tau", "sigma22"]);
        t.rows.push(vec![0.0, 0.5]);
        let text = t.render();
        let lines: Vec<&str> = text.lines().collect();
        assert_eq!(lines[0], format!("# ionjc: {VERSION}"));
        assert_eq!(lines[1], "# mode: compare-ordering");
        assert!(lines[2].starts_with("# config_sha256: "));
        assert_eq!(lines[3], "tau,sigma22");
        assert_eq!(lines[4], "0.0000000000000000e0,5.0000000000000000e-1");
    }

    #[test]
    fn hash_tracks_config() {
        let a = preset("fig3-weak").unwrap();
        let mut b = a.clone();
        assert_eq!(config_hash(&a), config_hash(&b));
        b.r = 0.21;
        assert_ne!(config_hash(&a), config_hash(&b));
        assert_eq!(config_hash(&a).len(), 64);
    }

    #[test]
    fn error_report_fields() {
        let e = Error::Validation { field: "k".into(), message: "bad".into() };
        let v = error_json(&e);
        assert_eq!(v["error"], "ValidationError");
        assert_eq!(v["field"], "k");
        assert_eq!(v["exit_code"], 2);
        let v = error_json(&Error::StepFailure { tau: 1.0, step: 1e-15 });
        assert_eq!(v["exit_code"], 3);
    }
}
