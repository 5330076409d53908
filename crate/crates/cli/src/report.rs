use std::collections::BTreeMap;
use std::fmt::Write as _;
use std::io::IsTerminal;

use serde::{Deserialize, Serialize};
use serde_json::Value;

use crate::args::Format;

pub const SCHEMA_VERSION: u32 = 1;

/// One emitted report. Rows share the column order of `columns`, the first
/// column is the swept parameter.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Report {
    pub schema_version: u32,
    pub command: String,
    pub params: BTreeMap<String, Value>,
    pub columns: Vec<String>,
    pub rows: Vec<Vec<Value>>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub detail: Option<Value>,
    #[serde(default)]
    pub warnings: Vec<String>,
    /// False when the report itself records a failed check.
    pub ok: bool,
}

impl Report {
    pub fn new(command: &str, columns: &[&str]) -> Self {
        Self {
            schema_version: SCHEMA_VERSION,
            command: command.to_string(),
            params: BTreeMap::new(),
            columns: columns.iter().map(|c| c.to_string()).collect(),
            rows: Vec::new(),
            detail: None,
            warnings: Vec::new(),
            ok: true,
        }
    }

    pub fn param(&mut self, key: &str, value: impl Serialize) {
        self.params
            .insert(key.to_string(), serde_json::to_value(value).expect("serializable"));
    }

    pub fn render(&self, format: Format) -> String {
        match format {
            Format::Json => {
                let mut s = serde_json::to_string_pretty(self).expect("serializable");
                s.push('\n');
                s
            }
            Format::Csv => self.to_csv(),
            Format::Human => self.to_human(color_enabled()),
        }
    }

    fn to_csv(&self) -> String {
        let mut w = csv::Writer::from_writer(Vec::new());
        w.write_record(&self.columns).expect("in-memory write");
        for row in &self.rows {
            w.write_record(row.iter().map(cell)).expect("in-memory write");
        }
        String::from_utf8(w.into_inner().expect("in-memory flush")).expect("utf-8")
    }

    fn to_human(&self, color: bool) -> String {
        let mut out = String::new();
        let params: Vec<String> = self
            .params
            .iter()
            .map(|(k, v)| format!("{k}={}", cell(v)))
            .collect();
        let title = format!("{} {}", self.command, params.join(" "));
        if color {
            let _ = writeln!(out, "\x1b[1m{}\x1b[0m", title.trim_end());
        } else {
            let _ = writeln!(out, "{}", title.trim_end());
        }
        if !self.columns.is_empty() {
            let cells: Vec<Vec<String>> = self.rows.iter().map(|r| r.iter().map(cell).collect()).collect();
            let widths: Vec<usize> = (0..self.columns.len())
                .map(|i| {
                    cells
                        .iter()
                        .filter_map(|r| r.get(i).map(String::len))
                        .chain([self.columns[i].len()])
                        .max()
                        .unwrap_or(0)
                })
                .collect();
            let line = |row: &[String]| {
                row.iter()
                    .zip(&widths)
                    .map(|(c, w)| format!("{c:>w$}"))
                    .collect::<Vec<_>>()
                    .join("  ")
            };
            let _ = writeln!(out, "{}", line(&self.columns));
            for row in &cells {
                let _ = writeln!(out, "{}", line(row));
            }
        }
        if let Some(Value::Object(detail)) = &self.detail {
            for (k, v) in detail {
                if !v.is_array() && !v.is_object() && !v.is_null() {
                    let _ = writeln!(out, "{k}: {}", cell(v));
                }
            }
        }
        for w in &self.warnings {
            let tag = if color { "\x1b[33mwarning\x1b[0m" } else { "warning" };
            let _ = writeln!(out, "{tag}: {w}");
        }
        if !self.ok {
            let tag = if color { "\x1b[31mFAILED\x1b[0m" } else { "FAILED" };
            let _ = writeln!(out, "{tag}");
        }
        out
    }
}

fn cell(v: &Value) -> String {
    match v {
        Value::String(s) => s.clone(),
        Value::Null => String::new(),
        Value::Array(items) => items.iter().map(cell).collect::<Vec<_>>().join(" "),
        other => other.to_string(),
    }
}

fn color_enabled() -> bool {
    std::env::var_os("NO_COLOR").is_none_or(|v| v.is_empty()) && std::io::stdout().is_terminal()
}

/// Compares a rendered report with golden text. JSON is compared as values,
/// the other formats line by line ignoring trailing whitespace.
pub fn matches_golden(rendered: &str, golden: &str, format: Format) -> bool {
    match format {
        Format::Json => {
            match (serde_json::from_str::<Value>(rendered), serde_json::from_str::<Value>(golden)) {
                (Ok(a), Ok(b)) => a == b,
                _ => false,
            }
        }
        _ => {
            let a = rendered.lines().map(str::trim_end).filter(|l| !l.is_empty());
            let b = golden.lines().map(str::trim_end).filter(|l| !l.is_empty());
            a.eq(b)
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn sample() -> Report {
        let mut r = Report::new("tsd", &["q", "tsd"]);
        r.param("ring", "fermat-quartic-p3.ring");
        r.rows.push(vec![3.into(), 6.into()]);
        r.rows.push(vec![9.into(), 16.into()]);
        r
    }

    #[test]
    fn json_round_trip() {
        let r = sample();
        let text = r.render(Format::Json);
        let back: Report = serde_json::from_str(&text).unwrap();
        assert_eq!(back, r);
        assert_eq!(back.render(Format::Json), text);
    }

    #[test]
    fn csv_header_and_rows() {
        assert_eq!(sample().render(Format::Csv), "q,tsd\n3,6\n9,16\n");
    }

    #[test]
    fn human_is_aligned() {
        let text = sample().to_human(false);
        let lines: Vec<&str> = text.lines().collect();
        assert_eq!(lines[1], "q  tsd");
        assert_eq!(lines[3], "9   16");
    }

    #[test]
    fn golden_comparison() {
        let r = sample();
        let json = r.render(Format::Json);
        let compact = serde_json::to_string(&r).unwrap();
        assert!(matches_golden(&json, &compact, Format::Json));
        assert!(!matches_golden(&json, &compact.replace("16", "17"), Format::Json));
        assert!(matches_golden("q,tsd\n3,6\n", "q,tsd  \n3,6\n\n", Format::Csv));
    }
}
