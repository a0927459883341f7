use std::path::PathBuf;
use std::process::ExitCode;

use clap::Parser;
use deltawave::{parse_config, run_scenario, Mode, Status};

/// Exact and lattice wave-packet scattering off a point interaction.
#[derive(Parser)]
#[command(name = "deltawave", version)]
struct Args {
    /// coeffs, evolve-exact, evolve-grid, delay-scan, spin-coeffs,
    /// spin-evolve, spin-delay or crosscheck
    mode: Mode,
    /// Scenario file of `key = value` lines
    #[arg(long)]
    config: Option<PathBuf>,
    /// Override one key, applied after the file; repeatable
    #[arg(long = "set", value_name = "KEY=VALUE")]
    set: Vec<String>,
    /// Output directory
    #[arg(long)]
    out: Option<PathBuf>,
    /// Also write plot.gp for the CSV files
    #[arg(long)]
    emit_gnuplot: bool,
}

fn main() -> ExitCode {
    let args = match Args::try_parse() {
        Ok(args) => args,
        Err(e) => {
            let _ = e.print();
            return ExitCode::from(if e.use_stderr() { 2 } else { 0 });
        }
    };
    let mut config = match parse_config(args.mode, args.config.as_deref(), &args.set) {
        Ok(c) => c,
        Err(e) => {
            eprintln!("error: {e}");
            return ExitCode::from(e.exit_code() as u8);
        }
    };
    if let Some(out) = args.out {
        config.out = out;
    }
    if let Some(w) = config.overlap_warning() {
        eprintln!("{w}");
    }
    match run_scenario(&config, args.emit_gnuplot) {
        Ok(outcome) => {
            let s = &outcome.summary;
            for q in s.quantities.iter().filter(|q| q.status == Status::Fail) {
                eprintln!("failed: {} = {:e} (tolerance {:e})", q.name, q.value, q.tolerance.unwrap_or(0.0));
            }
            eprintln!(
                "{}: {} of {} checks passed, results in {}",
                s.mode,
                s.passed,
                s.checks,
                config.out.display()
            );
            ExitCode::from(outcome.exit_code as u8)
        }
        Err(e) => {
            eprintln!("error: {e}");
            ExitCode::from(e.exit_code() as u8)
        }
    }
}
