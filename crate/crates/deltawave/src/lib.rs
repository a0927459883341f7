//! Command-line driver for `deltawave-core`: scenario files, run
//! orchestration and the CSV/JSON artifacts of each mode.

// `!(x > 0.0)` also rejects NaN
#![allow(clippy::neg_cmp_op_on_partial_ord)]

pub mod checks;
pub mod config;
pub mod error;
pub mod modes;
pub mod output;
pub mod plot;

use std::fs;
use std::path::Path;

pub use config::{parse_config, parse_config_str, Mode, ScenarioConfig};
pub use error::CliError;
pub use output::{Status, Summary};

/// What a finished run reports back.
pub struct Outcome {
    pub summary: Summary,
    /// 0 when every check passed, 1 otherwise.
    pub exit_code: i32,
}

/// Runs the mode, writes its artifacts and `summary.json` to `config.out`,
/// and `plot.gp` when `gnuplot` is set.
pub fn run_scenario(config: &ScenarioConfig, gnuplot: bool) -> Result<Outcome, CliError> {
    let dir = config.out.as_path();
    fs::create_dir_all(dir).map_err(|e| CliError::io(dir, e))?;
    let mut art = modes::Artifacts::default();
    let quantities = modes::run_mode(config, dir, &mut art)?;
    if gnuplot {
        write_plot(dir, &art)?;
    }
    let summary = Summary::new(config, art.files, quantities);
    output::write_json(&dir.join("summary.json"), &summary)?;
    let exit_code = if summary.status == Status::Pass { 0 } else { 1 };
    Ok(Outcome { summary, exit_code })
}

fn write_plot(dir: &Path, art: &modes::Artifacts) -> Result<(), CliError> {
    let path = dir.join("plot.gp");
    fs::write(&path, plot::script(&art.plots)).map_err(|e| CliError::io(path, e))
}
