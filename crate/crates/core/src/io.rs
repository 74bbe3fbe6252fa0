//! Deterministic text output: CSV with 17 significant digits and a `.`
//! decimal separator regardless of locale.

use std::fmt::Write as _;

/// Formats a float with 17 significant digits (round-trip exact for `f64`).
pub fn fmt_f64(x: f64) -> String {
    if x.is_nan() {
        "nan".to_string()
    } else if x.is_infinite() {
        if x > 0.0 { "inf" } else { "-inf" }.to_string()
    } else if x == 0.0 {
        "0.0000000000000000e0".to_string()
    } else {
        format!("{x:.16e}")
    }
}

/// Minimal CSV builder for numeric tables.
#[derive(Debug, Clone, Default)]
pub struct CsvTable {
    out: String,
}

impl CsvTable {
    pub fn new(columns: &[&str]) -> Self {
        let mut out = String::new();
        out.push_str(&columns.join(","));
        out.push('\n');
        Self { out }
    }

    /// Table preceded by a `# {json}` metadata line.
    pub fn with_header(metadata: &serde_json::Value, columns: &[&str]) -> Self {
        let mut out = String::new();
        let _ = writeln!(out, "# {metadata}");
        out.push_str(&columns.join(","));
        out.push('\n');
        Self { out }
    }

    pub fn row(&mut self, values: &[f64]) {
        let cells: Vec<String> = values.iter().map(|v| fmt_f64(*v)).collect();
        self.out.push_str(&cells.join(","));
        self.out.push('\n');
    }

    pub fn raw_row(&mut self, cells: &[String]) {
        self.out.push_str(&cells.join(","));
        self.out.push('\n');
    }

    pub fn finish(self) -> String {
        self.out
    }
}
