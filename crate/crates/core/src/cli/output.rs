// Copyright 2026 Qubot Contributors
// SPDX-License-Identifier: Apache-2.0

//! CSV and JSON persistence.
//!
//! CSV files start with `#` metadata lines: artifact version, scenario,
//! units and every data-determining configuration key, so a file can be
//! reproduced from its own header. Numbers carry 12 significant digits.
//! Lines end in LF.

use std::fmt::Write;

use serde_json::{json, Map, Value};

use super::config::RunConfig;
use crate::VERSION;

pub const UNITS: &str = "time in 1/Delta; rates in units of Delta";

/// One CSV field.
#[derive(Debug, Clone, Copy, PartialEq)]
pub enum Cell {
    Num(f64),
    Int(usize),
    Missing,
}

impl From<f64> for Cell {
    fn from(x: f64) -> Self {
        Cell::Num(x)
    }
}

impl From<Option<f64>> for Cell {
    fn from(x: Option<f64>) -> Self {
        x.map_or(Cell::Missing, Cell::Num)
    }
}

pub fn format_number(x: f64) -> String {
    // Normalize negative zero so equal data renders identically.
    let x = if x == 0.0 { 0.0 } else { x };
    format!("{x:.11e}")
}

fn format_cell(c: &Cell) -> String {
    match c {
        Cell::Num(x) => format_number(*x),
        Cell::Int(k) => k.to_string(),
        Cell::Missing => String::new(),
    }
}

fn metadata_lines(config: &RunConfig) -> Vec<(String, String)> {
    let mut lines = vec![
        ("version".to_string(), VERSION.to_string()),
        ("scenario".to_string(), config.scenario.scenario().to_string()),
        ("units".to_string(), UNITS.to_string()),
    ];
    lines.extend(config.data_entries().into_iter().map(|(k, v)| (k.to_string(), v)));
    lines
}

/// CSV text with metadata header, column row and data rows.
pub fn csv_document(config: &RunConfig, columns: &[&str], rows: &[Vec<Cell>]) -> String {
    let mut s = String::new();
    for (k, v) in metadata_lines(config) {
        let _ = writeln!(s, "# {k} = {v}");
    }
    s.push_str(&columns.join(","));
    s.push('\n');
    for row in rows {
        debug_assert_eq!(row.len(), columns.len());
        s.push_str(&row.iter().map(format_cell).collect::<Vec<_>>().join(","));
        s.push('\n');
    }
    s
}

/// JSON sidecar: scenario, parameter echo, version and wall-clock duration.
pub fn json_sidecar(config: &RunConfig, wall_clock_seconds: f64, files: &[String], notes: &[String]) -> String {
    let params: Map<String, Value> =
        config.data_entries().into_iter().map(|(k, v)| (k.to_string(), Value::String(v))).collect();
    let doc = json!({
        "scenario": config.scenario.scenario().as_str(),
        "version": VERSION,
        "units": UNITS,
        "params": params,
        "wall_clock_seconds": wall_clock_seconds,
        "files": files,
        "notes": notes,
    });
    let mut s = serde_json::to_string_pretty(&doc).unwrap_or_else(|_| "{}".into());
    s.push('\n');
    s
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::cli::config::parse_config;

    #[test]
    fn twelve_significant_digits() {
        assert_eq!(format_number(1.0), "1.00000000000e0");
        assert_eq!(format_number(-0.0), "0.00000000000e0");
        assert_eq!(format_number(0.000123456789012345), "1.23456789012e-4");
    }

    #[test]
    fn csv_header_echoes_parameters() {
        let c = parse_config("[transient]\ngamma_dephasing = 1\ngamma_forget = 1.5\n").unwrap();
        let csv = csv_document(&c, &["time", "C"], &[vec![Cell::Num(0.0), Cell::Missing]]);
        assert!(csv.contains("# gamma_forget = 1.5\n"));
        assert!(csv.contains("# entropy_base = nats\n"));
        assert!(csv.contains("# fidelity_convention = overlap\n"));
        assert!(csv.contains(&format!("# version = {VERSION}\n")));
        assert!(csv.ends_with("time,C\n0.00000000000e0,\n"));
        assert!(!csv.contains('\r'));
        assert!(!csv.contains("output_dir"));
    }

    #[test]
    fn sidecar_is_valid_json() {
        let c = parse_config("[sweep]\ngamma_forget_grid = 1\ngamma_dephasing_grid = 1\n").unwrap();
        let v: Value = serde_json::from_str(&json_sidecar(&c, 0.5, &["sweep.csv".into()], &[])).unwrap();
        assert_eq!(v["scenario"], "sweep");
        assert_eq!(v["params"]["correction_time"], "0");
        assert_eq!(v["wall_clock_seconds"], 0.5);
    }
}
