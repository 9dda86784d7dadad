//! Run orchestration: flat `key=value` configs, figure presets, and CSV and
//! JSON output.

mod config;
mod output;
mod presets;
mod run;

pub use config::{parse_config, Mode, RunConfig, TimeGrid, KEYS, PFUNCTION_TAIL_EPSILON};
pub use output::{config_hash, error_json, exit_code, format_float, params_json, CsvTable, VERSION};
pub use presets::{preset, PRESET_NAMES};
pub use run::{configure_threads, run, RunOutput};
