//! Scenario files: `key = value` lines, `#` starts a comment. Command-line
//! `--set key=value` pairs are applied after the file, in order.

use std::fmt;
use std::path::{Path, PathBuf};
use std::str::FromStr;

use deltawave_core::lattice::{Coupling, LatticeOptions, Stencil};
use deltawave_core::{GaussianPacket, PhysParams};

use crate::error::CliError;

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Mode {
    Coeffs,
    EvolveExact,
    EvolveGrid,
    DelayScan,
    SpinCoeffs,
    SpinEvolve,
    SpinDelay,
    Crosscheck,
}

impl Mode {
    pub const ALL: [Mode; 8] = [
        Mode::Coeffs,
        Mode::EvolveExact,
        Mode::EvolveGrid,
        Mode::DelayScan,
        Mode::SpinCoeffs,
        Mode::SpinEvolve,
        Mode::SpinDelay,
        Mode::Crosscheck,
    ];

    pub fn name(self) -> &'static str {
        match self {
            Mode::Coeffs => "coeffs",
            Mode::EvolveExact => "evolve-exact",
            Mode::EvolveGrid => "evolve-grid",
            Mode::DelayScan => "delay-scan",
            Mode::SpinCoeffs => "spin-coeffs",
            Mode::SpinEvolve => "spin-evolve",
            Mode::SpinDelay => "spin-delay",
            Mode::Crosscheck => "crosscheck",
        }
    }

    /// Modes of the structureless particle, which require `omega = 0`.
    pub fn is_scalar(self) -> bool {
        matches!(self, Mode::Coeffs | Mode::EvolveExact | Mode::EvolveGrid | Mode::DelayScan)
    }
}

impl fmt::Display for Mode {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

impl FromStr for Mode {
    type Err = String;

    fn from_str(s: &str) -> Result<Self, String> {
        Mode::ALL
            .into_iter()
            .find(|m| m.name() == s)
            .ok_or_else(|| format!("unknown mode `{s}`"))
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum ScanVariable {
    Coupling,
    Momentum,
}

/// Everything a run needs, with defaults filled in. Optional fields are
/// derived from the others when unset.
#[derive(Debug, Clone, PartialEq)]
pub struct ScenarioConfig {
    pub mode: Mode,
    pub out: PathBuf,

    pub hbar: f64,
    pub mass: f64,
    pub g: f64,
    pub omega: f64,
    pub p0: f64,
    pub dp: f64,
    pub x0: f64,

    /// Relative quadrature tolerance.
    pub tol: f64,
    pub talbot_nodes: usize,
    pub t_final: f64,
    /// Samples of the origin amplitude on `[0, t_final]`.
    pub t_count: usize,
    /// Momentum grid for wave functions; `p_max` defaults to
    /// `p0 + 12 max(δp, sqrt(2mħω))`.
    pub p_nodes: usize,
    pub p_max: Option<f64>,

    /// Momentum sweep of the coefficient modes; one row at `p0` when
    /// `sweep_count = 1`.
    pub sweep_min: f64,
    pub sweep_max: f64,
    pub sweep_count: usize,

    pub scan: ScanVariable,
    pub scan_min: f64,
    pub scan_max: f64,
    pub scan_count: usize,
    /// Also run a lattice centroid fit at every scan point.
    pub scan_centroid: bool,

    pub dx: Option<f64>,
    pub dt: Option<f64>,
    pub stride: usize,
    pub stencil: Stencil,
    pub matched: bool,

    /// Momentum spread of the delay runs; `x0` is moved to six widths.
    pub delay_dp: f64,
    /// Length of the fitted centroid trace after separation.
    pub fit_span: f64,
    /// Lattice of the centroid runs; `delay_dx` defaults to `ħ/8p0`,
    /// `delay_dt` to `0.8 m delay_dx²/ħ`.
    pub delay_dx: Option<f64>,
    pub delay_dt: Option<f64>,

    pub seed: u64,
    pub samples: usize,
}

impl ScenarioConfig {
    pub fn defaults(mode: Mode) -> Self {
        ScenarioConfig {
            mode,
            out: PathBuf::from("deltawave-out"),
            hbar: 1.0,
            mass: 1.0,
            g: 1.0,
            omega: if mode.is_scalar() { 0.0 } else { 1.0 },
            p0: 5.0,
            dp: 0.2,
            x0: -30.0,
            tol: 1e-10,
            talbot_nodes: 256,
            t_final: 12.0,
            t_count: 61,
            p_nodes: 1024,
            p_max: None,
            sweep_min: 0.5,
            sweep_max: 10.0,
            sweep_count: 1,
            scan: ScanVariable::Coupling,
            scan_min: -2.0,
            scan_max: 2.0,
            scan_count: 8,
            scan_centroid: false,
            dx: None,
            dt: None,
            stride: 100,
            stencil: Stencil::Compact,
            matched: true,
            delay_dp: 0.05,
            fit_span: 10.0,
            delay_dx: None,
            delay_dt: None,
            seed: 20_261_015,
            samples: 1000,
        }
    }

    pub fn params(&self) -> PhysParams {
        PhysParams::new(self.hbar, self.mass, self.g, self.omega).expect("validated")
    }

    /// The parameters with the level splitting removed.
    pub fn scalar_params(&self) -> PhysParams {
        PhysParams::scalar(self.hbar, self.mass, self.g).expect("validated")
    }

    pub fn packet(&self) -> GaussianPacket {
        GaussianPacket::new(self.p0, self.dp, self.x0).expect("validated")
    }

    pub fn p_max(&self) -> f64 {
        self.p_max.unwrap_or_else(|| {
            let flip = (2.0 * self.mass * self.hbar * self.omega).sqrt();
            self.p0 + 12.0 * self.dp.max(flip)
        })
    }

    pub fn dx(&self) -> f64 {
        self.dx.unwrap_or(self.hbar / (20.0 * self.p0))
    }

    pub fn dt(&self) -> f64 {
        self.dt.unwrap_or_else(|| {
            let dx = self.dx();
            self.mass * dx * dx / self.hbar
        })
    }

    pub fn lattice_options(&self) -> LatticeOptions {
        LatticeOptions {
            stencil: self.stencil,
            coupling: if self.matched { Coupling::Matched(self.p0) } else { Coupling::Bare },
        }
    }

    pub fn delay_dx(&self) -> f64 {
        self.delay_dx.unwrap_or(self.hbar / (8.0 * self.p0))
    }

    pub fn delay_dt(&self) -> f64 {
        self.delay_dt.unwrap_or_else(|| {
            let dx = self.delay_dx();
            0.8 * self.mass * dx * dx / self.hbar
        })
    }

    /// Packet of the delay runs: `delay_dp`, launched at least six
    /// position widths from the origin.
    pub fn delay_packet(&self) -> GaussianPacket {
        let x0 = self.x0.min(-6.0 * self.hbar / (2.0 * self.delay_dp));
        GaussianPacket::new(self.p0, self.delay_dp, x0).expect("validated")
    }

    /// `|x0| < 3ħ/2δp`: the packet overlaps the origin at `t = 0`.
    pub fn overlap_warning(&self) -> Option<String> {
        let limit = 3.0 * self.hbar / (2.0 * self.dp);
        (self.x0.abs() < limit).then(|| {
            format!(
                "warning: |x0| = {} is below 3ħ/(2δp) = {limit}; the initial packet is not clear of the origin",
                self.x0.abs()
            )
        })
    }

    /// Key-value listing of the resolved configuration, in a fixed order.
    pub fn entries(&self) -> Vec<(&'static str, String)> {
        let num = crate::output::fmt_f64;
        let opt = |v: Option<f64>| v.map_or_else(|| "auto".to_string(), num);
        vec![
            ("mode", self.mode.to_string()),
            ("hbar", num(self.hbar)),
            ("mass", num(self.mass)),
            ("g", num(self.g)),
            ("omega", num(self.omega)),
            ("p0", num(self.p0)),
            ("dp", num(self.dp)),
            ("x0", num(self.x0)),
            ("tol", num(self.tol)),
            ("talbot_nodes", self.talbot_nodes.to_string()),
            ("t_final", num(self.t_final)),
            ("t_count", self.t_count.to_string()),
            ("p_nodes", self.p_nodes.to_string()),
            ("p_max", num(self.p_max())),
            ("sweep_min", num(self.sweep_min)),
            ("sweep_max", num(self.sweep_max)),
            ("sweep_count", self.sweep_count.to_string()),
            (
                "scan",
                match self.scan {
                    ScanVariable::Coupling => "g",
                    ScanVariable::Momentum => "p0",
                }
                .to_string(),
            ),
            ("scan_min", num(self.scan_min)),
            ("scan_max", num(self.scan_max)),
            ("scan_count", self.scan_count.to_string()),
            ("scan_centroid", self.scan_centroid.to_string()),
            ("dx", opt(self.dx)),
            ("dt", opt(self.dt)),
            ("stride", self.stride.to_string()),
            (
                "stencil",
                match self.stencil {
                    Stencil::Compact => "compact",
                    Stencil::ThreePoint => "three-point",
                }
                .to_string(),
            ),
            ("coupling", if self.matched { "matched" } else { "bare" }.to_string()),
            ("delay_dp", num(self.delay_dp)),
            ("fit_span", num(self.fit_span)),
            ("delay_dx", opt(self.delay_dx)),
            ("delay_dt", opt(self.delay_dt)),
            ("seed", self.seed.to_string()),
            ("samples", self.samples.to_string()),
        ]
    }

    fn set(&mut self, key: &str, value: &str) -> Result<(), String> {
        fn real(v: &str) -> Result<f64, String> {
            v.parse::<f64>().map_err(|_| format!("`{v}` is not a number"))
        }
        fn count(v: &str) -> Result<usize, String> {
            v.parse::<usize>().map_err(|_| format!("`{v}` is not a non-negative integer"))
        }
        fn auto(v: &str) -> Result<Option<f64>, String> {
            if v == "auto" {
                Ok(None)
            } else {
                real(v).map(Some)
            }
        }
        fn flag(v: &str) -> Result<bool, String> {
            match v {
                "true" | "yes" | "1" => Ok(true),
                "false" | "no" | "0" => Ok(false),
                _ => Err(format!("`{v}` is not a boolean")),
            }
        }
        match key {
            "mode" => self.mode = value.parse()?,
            "hbar" => self.hbar = real(value)?,
            "mass" | "m" => self.mass = real(value)?,
            "g" => self.g = real(value)?,
            "omega" => self.omega = real(value)?,
            "p0" => self.p0 = real(value)?,
            "dp" => self.dp = real(value)?,
            "x0" => self.x0 = real(value)?,
            "tol" => self.tol = real(value)?,
            "talbot_nodes" => self.talbot_nodes = count(value)?,
            "t_final" => self.t_final = real(value)?,
            "t_count" => self.t_count = count(value)?,
            "p_nodes" => self.p_nodes = count(value)?,
            "p_max" => self.p_max = auto(value)?,
            "sweep_min" => self.sweep_min = real(value)?,
            "sweep_max" => self.sweep_max = real(value)?,
            "sweep_count" => self.sweep_count = count(value)?,
            "scan" => {
                self.scan = match value {
                    "g" => ScanVariable::Coupling,
                    "p0" => ScanVariable::Momentum,
                    _ => return Err(format!("`{value}` is not a scan variable (g, p0)")),
                }
            }
            "scan_min" => self.scan_min = real(value)?,
            "scan_max" => self.scan_max = real(value)?,
            "scan_count" => self.scan_count = count(value)?,
            "scan_centroid" => self.scan_centroid = flag(value)?,
            "dx" => self.dx = auto(value)?,
            "dt" => self.dt = auto(value)?,
            "stride" => self.stride = count(value)?,
            "stencil" => {
                self.stencil = match value {
                    "compact" => Stencil::Compact,
                    "three-point" => Stencil::ThreePoint,
                    _ => return Err(format!("`{value}` is not a stencil (compact, three-point)")),
                }
            }
            "coupling" => {
                self.matched = match value {
                    "matched" => true,
                    "bare" => false,
                    _ => return Err(format!("`{value}` is not a coupling (matched, bare)")),
                }
            }
            "delay_dp" => self.delay_dp = real(value)?,
            "fit_span" => self.fit_span = real(value)?,
            "delay_dx" => self.delay_dx = auto(value)?,
            "delay_dt" => self.delay_dt = auto(value)?,
            "seed" => self.seed = value.parse().map_err(|_| format!("`{value}` is not a seed"))?,
            "samples" => self.samples = count(value)?,
            _ => return Err(format!("unknown key `{key}`")),
        }
        Ok(())
    }

    fn validate(&self) -> Result<(), CliError> {
        let bad = |field: &'static str, reason: &str| {
            Err(CliError::Validation {
                field,
                reason: reason.to_string(),
            })
        };
        let positive = [
            ("hbar", self.hbar),
            ("mass", self.mass),
            ("p0", self.p0),
            ("dp", self.dp),
            ("t_final", self.t_final),
            ("delay_dp", self.delay_dp),
            ("fit_span", self.fit_span),
        ];
        for (field, v) in positive {
            if !(v > 0.0 && v.is_finite()) {
                return bad(field, "must be positive and finite");
            }
        }
        for (field, v) in [("g", self.g), ("sweep_min", self.sweep_min), ("sweep_max", self.sweep_max)] {
            if !v.is_finite() {
                return bad(field, "must be finite");
            }
        }
        if !(self.x0 < 0.0 && self.x0.is_finite()) {
            return bad("x0", "the packet must start on the left, x0 < 0");
        }
        if !(self.omega >= 0.0 && self.omega.is_finite()) {
            return bad("omega", "must be finite and non-negative");
        }
        if self.mode.is_scalar() && self.omega != 0.0 {
            return bad("omega", "the structureless modes need omega = 0");
        }
        if !(self.dp < self.p0) {
            return bad("dp", "must be smaller than p0");
        }
        if !(self.delay_dp < self.p0) {
            return bad("delay_dp", "must be smaller than p0");
        }
        if !(self.tol > 0.0 && self.tol < 1e-2) {
            return bad("tol", "must lie in (0, 0.01)");
        }
        if self.talbot_nodes < 16 {
            return bad("talbot_nodes", "must be at least 16");
        }
        if self.t_count < 2 {
            return bad("t_count", "must be at least 2");
        }
        if self.p_nodes < 16 || self.p_nodes % 2 != 0 {
            return bad("p_nodes", "must be even and at least 16");
        }
        if let Some(p) = self.p_max {
            if !(p > self.p0) {
                return bad("p_max", "must exceed p0");
            }
        }
        if self.sweep_count == 0 {
            return bad("sweep_count", "must be at least 1");
        }
        if self.sweep_count > 1 && !(self.sweep_min > 0.0 && self.sweep_max > self.sweep_min) {
            return bad("sweep_max", "sweep needs 0 < sweep_min < sweep_max");
        }
        if self.scan_count == 0 {
            return bad("scan_count", "must be at least 1");
        }
        if !(self.scan_min.is_finite() && self.scan_max.is_finite() && self.scan_max >= self.scan_min) {
            return bad("scan_max", "must be finite and at least scan_min");
        }
        if self.scan == ScanVariable::Momentum && !(self.scan_min > 0.0) {
            return bad("scan_min", "momenta must be positive");
        }
        for (field, v) in [("dx", self.dx), ("dt", self.dt), ("delay_dx", self.delay_dx), ("delay_dt", self.delay_dt)] {
            if let Some(v) = v {
                if !(v > 0.0 && v.is_finite()) {
                    return bad(field, "must be positive and finite");
                }
            }
        }
        if self.dx() * self.p0 / self.hbar >= 1.0 {
            return bad("dx", "the carrier must be resolved: dx < ħ/p0");
        }
        if self.delay_dx() * self.p0 / self.hbar >= 1.0 {
            return bad("delay_dx", "the carrier must be resolved: delay_dx < ħ/p0");
        }
        if self.stride == 0 {
            return bad("stride", "must be at least 1");
        }
        if self.samples == 0 {
            return bad("samples", "must be at least 1");
        }
        Ok(())
    }
}

/// Applies `key = value` lines from `text`; `source_name` labels errors.
fn apply_lines(config: &mut ScenarioConfig, text: &str, source_name: &str) -> Result<(), CliError> {
    for (k, raw) in text.lines().enumerate() {
        let line = raw.split('#').next().unwrap_or("").trim();
        if line.is_empty() {
            continue;
        }
        let parse = |message: String| CliError::Parse {
            source_name: source_name.to_string(),
            line: k + 1,
            message,
        };
        let (key, value) = line
            .split_once('=')
            .ok_or_else(|| parse(format!("expected `key = value`, found `{line}`")))?;
        let (key, value) = (key.trim(), value.trim());
        if key.is_empty() || value.is_empty() {
            return Err(parse(format!("expected `key = value`, found `{line}`")));
        }
        config.set(key, value).map_err(parse)?;
    }
    Ok(())
}

/// Defaults for `mode`, then the file, then the overrides.
pub fn parse_config(mode: Mode, file: Option<&Path>, overrides: &[String]) -> Result<ScenarioConfig, CliError> {
    let mut config = ScenarioConfig::defaults(mode);
    if let Some(path) = file {
        let text = std::fs::read_to_string(path).map_err(|e| CliError::io(path, e))?;
        apply_lines(&mut config, &text, &path.display().to_string())?;
    }
    for (k, item) in overrides.iter().enumerate() {
        apply_lines(&mut config, item, &format!("--set #{}", k + 1))?;
    }
    if config.mode != mode {
        return Err(CliError::Validation {
            field: "mode",
            reason: format!("the file asks for `{}` but the command line runs `{mode}`", config.mode),
        });
    }
    config.validate()?;
    Ok(config)
}

/// As [`parse_config`], from text instead of a file.
pub fn parse_config_str(mode: Mode, text: &str, overrides: &[String]) -> Result<ScenarioConfig, CliError> {
    let mut config = ScenarioConfig::defaults(mode);
    apply_lines(&mut config, text, "<config>")?;
    for (k, item) in overrides.iter().enumerate() {
        apply_lines(&mut config, item, &format!("--set #{}", k + 1))?;
    }
    config.validate()?;
    Ok(config)
}
