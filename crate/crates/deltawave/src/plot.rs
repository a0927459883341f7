//! Companion gnuplot script for the CSV files of a run.

use std::fmt::Write as _;

/// One curve: column `y` against column `x` (1-based), optionally only
/// rows whose text columns hold the given values.
pub struct Series {
    pub x: usize,
    pub y: usize,
    pub filters: Vec<(usize, &'static str)>,
}

impl Series {
    pub fn filtered(x: usize, y: usize, col_a: usize, val_a: &'static str, col_b: usize, val_b: &'static str) -> Self {
        Series {
            x,
            y,
            filters: vec![(col_a, val_a), (col_b, val_b)],
        }
    }

    fn using(&self) -> String {
        if self.filters.is_empty() {
            return format!("{}:{}", self.x, self.y);
        }
        let cond: Vec<String> = self
            .filters
            .iter()
            .map(|(c, v)| format!("strcol({c}) eq \"{v}\""))
            .collect();
        format!("{}:(({}) ? ${} : NaN)", self.x, cond.join(" && "), self.y)
    }

    /// Filtered rows are interleaved with others, so lines would break.
    fn style(&self) -> &'static str {
        if self.filters.is_empty() {
            "lines"
        } else {
            "points"
        }
    }

    fn title(&self) -> String {
        if self.filters.is_empty() {
            "columnheader".to_string()
        } else {
            let parts: Vec<&str> = self.filters.iter().map(|(_, v)| *v).collect();
            format!("\"{}\"", parts.join(" "))
        }
    }
}

pub struct Plot {
    pub file: String,
    pub title: String,
    pub series: Vec<Series>,
}

impl Plot {
    pub fn new(file: &str, title: &str, x: usize, ys: &[usize]) -> Self {
        Plot {
            file: file.to_string(),
            title: title.to_string(),
            series: ys.iter().map(|&y| Series { x, y, filters: Vec::new() }).collect(),
        }
    }
}

/// One PNG page per plot, named after the script's position in the list.
pub fn script(plots: &[Plot]) -> String {
    let mut out = String::new();
    out.push_str("set datafile separator ','\n");
    out.push_str("set terminal pngcairo size 900,600\n");
    out.push_str("set key outside\n");
    out.push_str("set grid\n");
    for (k, plot) in plots.iter().enumerate() {
        writeln!(out).unwrap();
        writeln!(out, "set output 'plot{k}.png'").unwrap();
        writeln!(out, "set title '{}'", plot.title).unwrap();
        let curves: Vec<String> = plot
            .series
            .iter()
            .map(|s| format!("'{}' using {} with {} title {}", plot.file, s.using(), s.style(), s.title()))
            .collect();
        writeln!(out, "plot {}", curves.join(", \\\n     ")).unwrap();
    }
    out
}
