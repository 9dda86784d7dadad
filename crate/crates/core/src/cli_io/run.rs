use std::path::{Path, PathBuf};

use serde_json::{json, Value};

use super::config::{Mode, RunConfig};
use super::output::{params_json, write_json, write_text, CsvTable};
use crate::error::{Error, Result};
use crate::fock_core::{coherent_vector, suggest_truncation, TruncationPolicy};
use crate::quantized_pump::{convergence_metric, pump_window, rho_vib, sigma22_quantized_series};
use crate::quasiprob::{CacheStatus, PElementTable, QUADRATURE_TOL};
use crate::semiclassical::{compare_ordering, sigma22_no_ordering_series, sigma22_time_ordered};

/// Files written by [`run`] and the sidecar content.
#[derive(Debug, Clone)]
pub struct RunOutput {
    pub files: Vec<PathBuf>,
    pub sidecar: Value,
}

/// Caps rayon's global pool at `IONJC_THREADS` when set. Returns the cap.
pub fn configure_threads() -> Result<Option<usize>> {
    let Ok(raw) = std::env::var("IONJC_THREADS") else {
        return Ok(None);
    };
    let n: usize = raw
        .trim()
        .parse()
        .ok()
        .filter(|&n| n > 0)
        .ok_or_else(|| Error::validation("IONJC_THREADS", format!("expected a positive integer, got `{raw}`")))?;
    // A second call in the same process keeps the first pool.
    let _ = rayon::ThreadPoolBuilder::new().num_threads(n).build_global();
    Ok(Some(n))
}

fn motion_report(config: &RunConfig, policy: &TruncationPolicy) -> Result<Value> {
    let motion = coherent_vector(config.alpha0(), policy)?;
    Ok(json!({
        "n_max_motion": policy.n_max_motion,
        "motion_tail_mass": motion.tail_mass,
    }))
}

fn pump_report(beta_abs: f64, policy: &TruncationPolicy) -> Result<Value> {
    let window = pump_window(beta_abs, policy)?;
    Ok(json!({
        "beta0_abs": beta_abs,
        "m_max_pump": policy.m_max_pump,
        "window": [window.lo, window.hi],
        "pump_tail_mass": window.tail_mass,
    }))
}

/// Runs `config` and writes `<mode>.csv` (or one grid CSV per snapshot) and
/// `<mode>.json` into `out_dir`.
pub fn run(config: &RunConfig, out_dir: &Path) -> Result<RunOutput> {
    config.validate()?;
    let policy = config.truncation();
    let mut files = Vec::new();
    let mut truncation = json!({ "tail_epsilon": policy.tail_epsilon });
    let motion = motion_report(config, &policy)?;
    truncation["motion"] = motion;
    let mut results = json!({});
    let mut tolerances = json!({});
    let stem = config.mode.name();
    let csv_path = out_dir.join(format!("{stem}.csv"));

    match config.mode {
        Mode::Sigma22ClassicalOrdered | Mode::Sigma22ClassicalNoOrdering => {
            let taus = config.time.points();
            let values = if config.mode == Mode::Sigma22ClassicalOrdered {
                tolerances["ode_tol"] = json!(config.tol);
                sigma22_time_ordered(config.alpha0(), config.r, &taus, &config.params, &policy, config.tol)?
            } else {
                sigma22_no_ordering_series(config.alpha0(), &config.params, config.r, taus[0], &taus, &policy)?
            };
            let mut table = CsvTable::new(config, &["tau", "sigma22"]);
            table.rows = taus.iter().zip(&values).map(|(&t, &v)| vec![t, v]).collect();
            write_text(&csv_path, &table.render())?;
            files.push(csv_path);
        }
        Mode::Sigma22Quantized => {
            truncation["pump"] = pump_report(config.beta0_abs, &policy)?;
            let times = config.time.points();
            let values = sigma22_quantized_series(
                config.level,
                &times,
                config.alpha0(),
                config.beta0(),
                &config.params,
                &policy,
            )?;
            let mut table = CsvTable::new(config, &["t_tilde", "sigma22"]);
            table.rows = times.iter().zip(&values).map(|(&t, &v)| vec![t, v]).collect();
            write_text(&csv_path, &table.render())?;
            files.push(csv_path);
        }
        Mode::CompareOrdering => {
            tolerances["ode_tol"] = json!(config.tol);
            let taus = config.time.points();
            let report = compare_ordering(
                &config.params,
                config.alpha0(),
                config.r,
                &taus,
                &policy,
                config.tol,
                config.threshold,
            )?;
            let mut table =
                CsvTable::new(config, &["tau", "sigma22_ordered", "sigma22_no_ordering", "gap"]);
            table.rows = taus
                .iter()
                .zip(report.ordered.iter().zip(&report.no_ordering))
                .map(|(&t, (&a, &b))| vec![t, a, b, (a - b).abs()])
                .collect();
            write_text(&csv_path, &table.render())?;
            files.push(csv_path);
            results = json!({
                "sup_distance": report.sup_distance,
                "tau_at_sup": report.tau_at_sup,
                "threshold": report.threshold,
                "first_crossing": report.first_crossing,
                "ode_steps_accepted": report.ode_stats.accepted,
                "ode_steps_rejected": report.ode_stats.rejected,
            });
        }
        Mode::ComparePump => {
            tolerances["ode_tol"] = json!(config.tol);
            let taus = config.time.points();
            let amplitudes = config.pump_amplitudes();
            let mut pumps = Vec::new();
            for &beta in &amplitudes {
                let pump_policy = TruncationPolicy {
                    m_max_pump: policy.m_max_pump.max(suggest_truncation(beta, 0.5 * policy.tail_epsilon)),
                    ..policy
                };
                pumps.push(pump_report(beta, &pump_policy)?);
            }
            truncation["pump"] = Value::Array(pumps);
            let curves = convergence_metric(
                &config.params,
                config.alpha0(),
                config.r,
                &amplitudes,
                &taus,
                &policy,
                config.tol,
            )?;
            let mut columns = vec!["tau".to_string(), "sigma22_classical".to_string()];
            columns.extend(curves.iter().map(|c| format!("sigma22_quantized_beta{}", c.beta0_abs)));
            let column_refs: Vec<&str> = columns.iter().map(String::as_str).collect();
            let mut table = CsvTable::new(config, &column_refs);
            table.push_meta("time_axis", "tau = |beta0| t_tilde");
            table.rows = (0..taus.len())
                .map(|i| {
                    let mut row = vec![taus[i], curves[0].semiclassical[i]];
                    row.extend(curves.iter().map(|c| c.quantized[i]));
                    row
                })
                .collect();
            write_text(&csv_path, &table.render())?;
            files.push(csv_path);
            results = json!({
                "curves": curves
                    .iter()
                    .map(|c| json!({
                        "beta0_abs": c.beta0_abs,
                        "delta_omega_tilde": c.delta_omega_tilde,
                        "sup_distance": c.sup_distance,
                    }))
                    .collect::<Vec<_>>(),
            });
        }
        Mode::PFunction => {
            truncation["pump"] = pump_report(config.beta0_abs, &policy)?;
            tolerances["quadrature_tol"] = json!(QUADRATURE_TOL);
            tolerances["imag_tol"] = json!(crate::quasiprob::IMAG_TOL);
            let cache_dir = config
                .cache_dir
                .as_ref()
                .map(PathBuf::from)
                .unwrap_or_else(|| out_dir.join("cache"));
            let mut table: Option<PElementTable> = None;
            let mut cache_status = None;
            let mut snapshots = Vec::new();
            for &t in &config.snapshots {
                let rho = rho_vib(t, config.level, config.alpha0(), config.beta0(), &config.params, &policy)?;
                let n_max = rho.dim() - 1;
                if table.as_ref().map_or(true, |tab| tab.n_max != n_max) {
                    let (tab, status) =
                        PElementTable::load_or_build(&cache_dir, n_max, &config.filter, &config.grid)?;
                    cache_status = Some(status);
                    table = Some(tab);
                }
                let tab = table.as_ref().expect("table built above");
                let field = tab.apply(&rho.matrix)?;
                let path = out_dir.join(format!("pfunction_t{t}.csv"));
                let mut csv = CsvTable::new(config, &["re", "im", "p_omega"]);
                csv.push_meta("t_tilde", format!("{t}"));
                csv.rows = field
                    .values
                    .iter()
                    .enumerate()
                    .map(|(i, &v)| {
                        let a = field.spec.point(i);
                        vec![a.re, a.im, v]
                    })
                    .collect();
                write_text(&path, &csv.render())?;
                files.push(path);
                let (min, max) = (field.min(), field.max());
                let argmin = field.argmin();
                snapshots.push(json!({
                    "t_tilde": t,
                    "min": min,
                    "max": max,
                    "min_over_max": min / max,
                    "argmin": [argmin.re, argmin.im],
                    "certified_error": field.certified_error,
                    "imag_residual": field.imag_residual,
                    "riemann_sum": field.riemann_sum(),
                    "trace_defect": rho.trace_defect,
                    "n_max": n_max,
                }));
            }
            let tab = table.as_ref();
            results = json!({
                "snapshots": snapshots,
                "element_table": {
                    "cache": match cache_status {
                        Some(CacheStatus::Loaded) => "loaded",
                        Some(CacheStatus::Built) => "built",
                        None => "unused",
                    },
                    "distinct_radii": tab.map(PElementTable::distinct_radii),
                    "quadrature_error": tab.map(|t| t.quadrature_error),
                },
            });
        }
    }

    let sidecar = json!({
        "ionjc": super::output::VERSION,
        "config_sha256": super::output::config_hash(config),
        "params": params_json(config),
        "truncation": truncation,
        "tolerances": tolerances,
        "results": results,
        "files": files
            .iter()
            .map(|f| f.file_name().map(|s| s.to_string_lossy().into_owned()))
            .collect::<Vec<_>>(),
    });
    let json_path = out_dir.join(format!("{stem}.json"));
    write_json(&json_path, &sidecar)?;
    files.push(json_path);
    Ok(RunOutput { files, sidecar })
}
