//! File formats. Every float is written with 17 significant digits
//! (`{:.16e}`), so a value read back is bit-identical and repeated runs
//! produce identical bytes.

use std::fmt::Write as _;
use std::fs;
use std::io;
use std::path::Path;

use serde::Serialize;
use serde_json::ser::{Formatter, PrettyFormatter};

use crate::error::CliError;

/// Unit strings for column headers, in terms of ħ, m and a length unit L.
pub mod unit {
    pub const MOMENTUM: &str = "hbar/L";
    pub const TIME: &str = "m*L^2/hbar";
    pub const LENGTH: &str = "L";
    pub const ENERGY: &str = "hbar^2/(m*L^2)";
    pub const COUPLING: &str = "hbar^2/(m*L)";
    pub const VELOCITY: &str = "hbar/(m*L)";
    pub const ONE: &str = "1";
    /// Momentum-space amplitude, `|ψ(p)|² dp` dimensionless.
    pub const AMPLITUDE_P: &str = "(L/hbar)^(1/2)";
    pub const DENSITY_P: &str = "L/hbar";
    /// Origin amplitude `C = ∫dq/(2πħ) ψ(q)`.
    pub const ORIGIN: &str = "L^(-1/2)";
}

pub fn fmt_f64(v: f64) -> String {
    if v.is_nan() {
        "nan".to_string()
    } else if v.is_infinite() {
        if v > 0.0 { "inf" } else { "-inf" }.to_string()
    } else {
        // -0 and 0 print alike
        format!("{:.16e}", if v == 0.0 { 0.0 } else { v })
    }
}

/// A CSV table with `name [unit]` headers. Text columns carry no unit.
pub struct Table {
    header: Vec<String>,
    rows: Vec<String>,
}

pub enum Cell {
    Num(f64),
    Int(usize),
    Text(&'static str),
}

impl Table {
    pub fn new(columns: &[(&str, Option<&str>)]) -> Self {
        let header = columns
            .iter()
            .map(|(name, unit)| match unit {
                Some(u) => format!("{name} [{u}]"),
                None => name.to_string(),
            })
            .collect();
        Table { header, rows: Vec::new() }
    }

    pub fn push(&mut self, cells: &[Cell]) {
        assert_eq!(cells.len(), self.header.len(), "row width");
        let mut line = String::new();
        for (k, cell) in cells.iter().enumerate() {
            if k > 0 {
                line.push(',');
            }
            match cell {
                Cell::Num(v) => line.push_str(&fmt_f64(*v)),
                Cell::Int(n) => write!(line, "{n}").unwrap(),
                Cell::Text(s) => line.push_str(s),
            }
        }
        self.rows.push(line);
    }

    pub fn push_nums(&mut self, values: &[f64]) {
        let cells: Vec<Cell> = values.iter().map(|&v| Cell::Num(v)).collect();
        self.push(&cells);
    }

    pub fn render(&self) -> String {
        let mut out = self.header.join(",");
        out.push('\n');
        for row in &self.rows {
            out.push_str(row);
            out.push('\n');
        }
        out
    }

    pub fn write(&self, path: &Path) -> Result<(), CliError> {
        fs::write(path, self.render()).map_err(|e| CliError::io(path, e))
    }
}

/// Pretty JSON whose floats use [`fmt_f64`]; non-finite values become
/// `null`.
struct Fixed17 {
    pretty: PrettyFormatter<'static>,
}

impl Formatter for Fixed17 {
    fn write_f64<W: ?Sized + io::Write>(&mut self, writer: &mut W, value: f64) -> io::Result<()> {
        writer.write_all(fmt_f64(value).as_bytes())
    }

    fn begin_array<W: ?Sized + io::Write>(&mut self, w: &mut W) -> io::Result<()> {
        self.pretty.begin_array(w)
    }

    fn end_array<W: ?Sized + io::Write>(&mut self, w: &mut W) -> io::Result<()> {
        self.pretty.end_array(w)
    }

    fn begin_array_value<W: ?Sized + io::Write>(&mut self, w: &mut W, first: bool) -> io::Result<()> {
        self.pretty.begin_array_value(w, first)
    }

    fn end_array_value<W: ?Sized + io::Write>(&mut self, w: &mut W) -> io::Result<()> {
        self.pretty.end_array_value(w)
    }

    fn begin_object<W: ?Sized + io::Write>(&mut self, w: &mut W) -> io::Result<()> {
        self.pretty.begin_object(w)
    }

    fn end_object<W: ?Sized + io::Write>(&mut self, w: &mut W) -> io::Result<()> {
        self.pretty.end_object(w)
    }

    fn begin_object_key<W: ?Sized + io::Write>(&mut self, w: &mut W, first: bool) -> io::Result<()> {
        self.pretty.begin_object_key(w, first)
    }

    fn begin_object_value<W: ?Sized + io::Write>(&mut self, w: &mut W) -> io::Result<()> {
        self.pretty.begin_object_value(w)
    }

    fn end_object_value<W: ?Sized + io::Write>(&mut self, w: &mut W) -> io::Result<()> {
        self.pretty.end_object_value(w)
    }
}

pub fn to_json<T: Serialize>(value: &T) -> String {
    let mut buf = Vec::new();
    let mut ser = serde_json::Serializer::with_formatter(
        &mut buf,
        Fixed17 {
            pretty: PrettyFormatter::with_indent(b"  "),
        },
    );
    value.serialize(&mut ser).expect("in-memory serialization");
    let mut text = String::from_utf8(buf).expect("serde_json writes UTF-8");
    text.push('\n');
    text
}

pub fn write_json<T: Serialize>(path: &Path, value: &T) -> Result<(), CliError> {
    fs::write(path, to_json(value)).map_err(|e| CliError::io(path, e))
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(rename_all = "lowercase")]
pub enum Status {
    Pass,
    Fail,
    /// Recorded without a tolerance.
    Info,
}

/// One entry of `summary.json`. `error = |value - reference|`, relative
/// when `relative` is set.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct Quantity {
    pub name: String,
    pub unit: &'static str,
    pub value: f64,
    pub reference: Option<f64>,
    pub error: Option<f64>,
    pub relative: bool,
    pub tolerance: Option<f64>,
    pub status: Status,
}

impl Quantity {
    pub fn info(name: impl Into<String>, unit: &'static str, value: f64) -> Self {
        Quantity {
            name: name.into(),
            unit,
            value,
            reference: None,
            error: None,
            relative: false,
            tolerance: None,
            status: Status::Info,
        }
    }

    /// Passes when `|value - reference| ≤ tolerance`.
    pub fn against(name: impl Into<String>, unit: &'static str, value: f64, reference: f64, tolerance: f64) -> Self {
        let error = (value - reference).abs();
        Quantity {
            reference: Some(reference),
            error: Some(error),
            tolerance: Some(tolerance),
            status: if error <= tolerance { Status::Pass } else { Status::Fail },
            ..Quantity::info(name, unit, value)
        }
    }

    /// Passes when `|value - reference| ≤ tolerance |reference|`.
    pub fn relative(name: impl Into<String>, unit: &'static str, value: f64, reference: f64, tolerance: f64) -> Self {
        let error = (value - reference).abs() / reference.abs();
        Quantity {
            reference: Some(reference),
            error: Some(error),
            relative: true,
            tolerance: Some(tolerance),
            status: if error <= tolerance { Status::Pass } else { Status::Fail },
            ..Quantity::info(name, unit, value)
        }
    }

    /// Passes when `value ≤ bound`; the reference is zero.
    pub fn below(name: impl Into<String>, unit: &'static str, value: f64, bound: f64) -> Self {
        Quantity {
            reference: Some(0.0),
            error: Some(value.abs()),
            tolerance: Some(bound),
            status: if value.abs() <= bound { Status::Pass } else { Status::Fail },
            ..Quantity::info(name, unit, value)
        }
    }

    /// A yes/no property, stored as 1 or 0.
    pub fn holds(name: impl Into<String>, ok: bool) -> Self {
        Quantity {
            reference: Some(1.0),
            error: Some(if ok { 0.0 } else { 1.0 }),
            tolerance: Some(0.0),
            status: if ok { Status::Pass } else { Status::Fail },
            ..Quantity::info(name, unit::ONE, if ok { 1.0 } else { 0.0 })
        }
    }

    pub fn is_check(&self) -> bool {
        self.status != Status::Info
    }
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct Summary {
    pub mode: String,
    pub status: Status,
    pub checks: usize,
    pub passed: usize,
    pub failed: usize,
    pub config: std::collections::BTreeMap<&'static str, String>,
    pub files: Vec<String>,
    pub quantities: Vec<Quantity>,
}

impl Summary {
    pub fn new(config: &crate::config::ScenarioConfig, files: Vec<String>, quantities: Vec<Quantity>) -> Self {
        let checks = quantities.iter().filter(|q| q.is_check()).count();
        let failed = quantities.iter().filter(|q| q.status == Status::Fail).count();
        Summary {
            mode: config.mode.to_string(),
            status: if failed == 0 { Status::Pass } else { Status::Fail },
            checks,
            passed: checks - failed,
            failed,
            config: config.entries().into_iter().collect(),
            files,
            quantities,
        }
    }
}

/// `{channel, method, v_mean, delay, fit_residual}`.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct DelayJson {
    pub channel: &'static str,
    pub method: &'static str,
    pub v_mean: f64,
    pub delay: f64,
    pub fit_residual: Option<f64>,
}

impl From<&deltawave_core::delay::DelayReport> for DelayJson {
    fn from(r: &deltawave_core::delay::DelayReport) -> Self {
        DelayJson {
            channel: r.channel.tag(),
            method: r.method.tag(),
            v_mean: r.v_mean,
            delay: r.delay,
            fit_residual: r.fit_residual,
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn seventeen_digits_round_trip() {
        for v in [0.1, -1.0 / 3.0, 6.02214076e23, 5e-324, f64::MAX] {
            let s = fmt_f64(v);
            assert_eq!(s.parse::<f64>().unwrap(), v, "{s}");
        }
        assert_eq!(fmt_f64(0.5), "5.0000000000000000e-1");
        assert_eq!(fmt_f64(-0.0), fmt_f64(0.0));
    }

    #[test]
    fn json_floats_are_fixed_width() {
        let text = to_json(&(0.5, f64::NAN, Some(2.0)));
        let parsed: serde_json::Value = serde_json::from_str(&text).unwrap();
        assert_eq!(parsed[0].as_f64(), Some(0.5));
        assert!(parsed[1].is_null());
        assert!(text.contains("2.0000000000000000e0"));
    }

    #[test]
    fn headers_carry_units() {
        let mut t = Table::new(&[("time", Some(unit::TIME)), ("channel", None)]);
        t.push(&[Cell::Num(1.0), Cell::Text("transmit")]);
        assert_eq!(t.render(), "time [m*L^2/hbar],channel\n1.0000000000000000e0,transmit\n");
    }
}
