//! Parameter sets of the published figures. Physical parameters follow the
//! figure captions; time windows are our own choices where the captions
//! give none.

use std::f64::consts::FRAC_PI_2;

use super::config::{Mode, RunConfig, TimeGrid, PFUNCTION_TAIL_EPSILON};
use crate::error::{Error, Result};
use crate::fock_core::{ModelParams, DEFAULT_TAIL_EPSILON};
use crate::quasiprob::{FilterSpec, GridSpec};
use crate::semiclassical::DEFAULT_TOL;

pub const PRESET_NAMES: [&str; 4] = ["fig2", "fig3-weak", "fig3-strong", "fig4"];

fn base(mode: Mode, params: ModelParams) -> RunConfig {
    RunConfig {
        mode,
        params,
        r: 0.0,
        level: 1,
        alpha0_abs: 0.0,
        alpha0_arg: 0.0,
        beta0_abs: 0.0,
        beta0_arg: 0.0,
        time: TimeGrid { t_start: 0.0, t_end: 1.0, n_points: 2000 },
        snapshots: Vec::new(),
        beta0_list: Vec::new(),
        threshold: 0.1,
        tol: DEFAULT_TOL,
        filter: FilterSpec::new(1.7),
        grid: GridSpec::square(4.0, 161),
        n_max_motion: None,
        m_max_pump: None,
        tail_epsilon: DEFAULT_TAIL_EPSILON,
        output: None,
        cache_dir: None,
    }
}

/// Time-ordering comparison, `r = 0.005`.
fn fig2() -> RunConfig {
    let mut c = base(Mode::CompareOrdering, ModelParams::new(2, 0.2, 0.0));
    c.r = 0.005;
    c.alpha0_abs = 12f64.sqrt();
    c.time = TimeGrid { t_start: 0.0, t_end: 150.0, n_points: 2000 };
    c
}

/// Quantized against classical pump. The window is `τ ∈ [0, 1.5 |β0|]`,
/// i.e. `t̃ ∈ [0, 1.5]`.
fn fig3(beta0: f64) -> RunConfig {
    let r = 0.2;
    let mut c = base(Mode::ComparePump, ModelParams::new(2, 0.2, 0.0).with_detuning(r * beta0));
    c.r = r;
    c.alpha0_abs = 12f64.sqrt();
    c.beta0_abs = beta0;
    c.time = TimeGrid { t_start: 0.0, t_end: 1.5 * beta0, n_points: 2000 };
    c
}

fn fig4() -> RunConfig {
    let params = ModelParams::new(3, 0.2, FRAC_PI_2)
        .with_detuning(8.0)
        .with_frequencies(5000.0, 0.0);
    let mut c = base(Mode::PFunction, params);
    c.level = 2;
    c.alpha0_abs = 5f64.sqrt();
    c.beta0_abs = 40.0;
    c.snapshots = vec![4.0, 13.0, 50.0];
    c.time = TimeGrid { t_start: 0.0, t_end: 50.0, n_points: 2 };
    c.filter = FilterSpec::new(1.7);
    c.tail_epsilon = PFUNCTION_TAIL_EPSILON;
    c
}

pub fn preset(name: &str) -> Result<RunConfig> {
    match name {
        "fig2" => Ok(fig2()),
        "fig3-weak" => Ok(fig3(20.0)),
        "fig3-strong" => Ok(fig3(100.0)),
        "fig4" => Ok(fig4()),
        other => Err(Error::UnknownPreset(other.to_string())),
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::cli_io::parse_config;

    #[test]
    fn caption_values() {
        assert_eq!(preset("fig2").unwrap().params.k, 2);
        assert_eq!(preset("fig3-weak").unwrap().params.delta_omega_tilde, 4.0);
        assert_eq!(preset("fig3-strong").unwrap().params.delta_omega_tilde, 20.0);
        let f4 = preset("fig4").unwrap();
        assert_eq!(f4.filter.w, 1.7);
        assert_eq!(f4.params.k, 3);
        assert_eq!(f4.params.nu_tilde, 5000.0);
        assert_eq!(f4.beta0_abs, 40.0);
        assert!((f4.alpha0_abs * f4.alpha0_abs - 5.0).abs() < 1e-14);
    }

    #[test]
    fn presets_validate_and_round_trip() {
        for name in PRESET_NAMES {
            let c = preset(name).unwrap();
            c.validate().unwrap();
            assert_eq!(parse_config(&c.to_config_string()).unwrap(), c, "{name}");
        }
    }

    #[test]
    fn unknown_preset() {
        assert!(matches!(preset("fig5"), Err(Error::UnknownPreset(_))));
    }
}
