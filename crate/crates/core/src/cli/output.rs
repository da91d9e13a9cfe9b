//! Report, frame and plot serialization.
//!
//! Numbers are written with 17 significant digits (`{:.16e}`), which is enough
//! for every `f64` to survive a text round trip.

use crate::integrators::WaveField;
use std::fmt::Write as _;
use std::fs;
use std::io;
use std::path::{Path, PathBuf};

#[derive(Debug, Clone, PartialEq)]
pub enum Value {
    Num(f64),
    Int(i64),
    Bool(bool),
    Text(String),
}

impl From<f64> for Value {
    fn from(v: f64) -> Self {
        Value::Num(v)
    }
}
impl From<usize> for Value {
    fn from(v: usize) -> Self {
        Value::Int(v as i64)
    }
}
impl From<bool> for Value {
    fn from(v: bool) -> Self {
        Value::Bool(v)
    }
}
impl From<&str> for Value {
    fn from(v: &str) -> Self {
        Value::Text(v.to_owned())
    }
}
impl From<String> for Value {
    fn from(v: String) -> Self {
        Value::Text(v)
    }
}

pub fn num(v: f64) -> String {
    if v.is_finite() {
        format!("{v:.16e}")
    } else if v.is_nan() {
        "NaN".into()
    } else if v > 0.0 {
        "inf".into()
    } else {
        "-inf".into()
    }
}

fn csv_cell(s: &str) -> String {
    if s.contains([',', '"', '\n']) {
        format!("\"{}\"", s.replace('"', "\"\""))
    } else {
        s.to_owned()
    }
}

fn json_string(s: &str) -> String {
    serde_json::to_string(s).expect("strings always serialize")
}

impl Value {
    fn csv(&self) -> String {
        match self {
            Value::Num(v) => num(*v),
            Value::Int(v) => v.to_string(),
            Value::Bool(v) => v.to_string(),
            Value::Text(s) => csv_cell(s),
        }
    }

    fn json(&self) -> String {
        match self {
            Value::Num(v) if v.is_finite() => num(*v),
            Value::Num(_) => "null".into(),
            Value::Int(v) => v.to_string(),
            Value::Bool(v) => v.to_string(),
            Value::Text(s) => json_string(s),
        }
    }
}

/// Rows of numbers under named columns.
#[derive(Debug, Clone, Default, PartialEq)]
pub struct Table {
    pub columns: Vec<String>,
    pub rows: Vec<Vec<f64>>,
}

impl Table {
    pub fn new(columns: &[&str]) -> Self {
        Table {
            columns: columns.iter().map(|c| c.to_string()).collect(),
            rows: Vec::new(),
        }
    }

    pub fn push(&mut self, row: Vec<f64>) {
        debug_assert_eq!(row.len(), self.columns.len());
        self.rows.push(row);
    }

    pub fn column(&self, name: &str) -> Option<Vec<f64>> {
        let j = self.columns.iter().position(|c| c == name)?;
        Some(self.rows.iter().map(|r| r[j]).collect())
    }

    pub fn to_csv(&self) -> String {
        let mut out = self.columns.join(",");
        out.push('\n');
        for row in &self.rows {
            let cells: Vec<String> = row.iter().map(|v| num(*v)).collect();
            out.push_str(&cells.join(","));
            out.push('\n');
        }
        out
    }

    fn to_json(&self) -> String {
        let columns: Vec<String> = self.columns.iter().map(|c| json_string(c)).collect();
        let rows: Vec<String> = self
            .rows
            .iter()
            .map(|r| {
                let cells: Vec<String> = r.iter().map(|v| Value::Num(*v).json()).collect();
                format!("[{}]", cells.join(","))
            })
            .collect();
        format!(
            "{{\"columns\":[{}],\"rows\":[{}]}}",
            columns.join(","),
            rows.join(",")
        )
    }
}

/// An ordered flat key/value report with an optional table.
#[derive(Debug, Clone, Default, PartialEq)]
pub struct Report {
    pub entries: Vec<(String, Value)>,
    pub table: Option<Table>,
}

impl Report {
    pub fn set(&mut self, key: impl Into<String>, value: impl Into<Value>) {
        self.entries.push((key.into(), value.into()));
    }

    pub fn get(&self, key: &str) -> Option<&Value> {
        self.entries.iter().find(|(k, _)| k == key).map(|(_, v)| v)
    }

    pub fn to_csv(&self) -> String {
        let mut out = String::from("key,value\n");
        for (k, v) in &self.entries {
            let _ = writeln!(out, "{},{}", csv_cell(k), v.csv());
        }
        out
    }

    pub fn to_json(&self) -> String {
        let mut fields: Vec<String> = self
            .entries
            .iter()
            .map(|(k, v)| format!("  {}: {}", json_string(k), v.json()))
            .collect();
        if let Some(table) = &self.table {
            fields.push(format!("  \"table\": {}", table.to_json()));
        }
        format!("{{\n{}\n}}\n", fields.join(",\n"))
    }
}

pub fn frame_csv(field: &WaveField) -> String {
    let mut out = String::from("x,t,re,im\n");
    for (i, v) in field.values.iter().enumerate() {
        let _ = writeln!(
            out,
            "{},{},{},{}",
            num(field.grid.x(i)),
            num(field.t),
            num(v.re),
            num(v.im)
        );
    }
    out
}

pub fn frame_name(step: usize, ext: &str) -> String {
    format!("frame_{step:06}.{ext}")
}

/// `dir/stem_table.csv` next to `path`.
pub fn table_path(path: &Path) -> PathBuf {
    let stem = path
        .file_stem()
        .and_then(|s| s.to_str())
        .unwrap_or("report");
    path.with_file_name(format!("{stem}_table.csv"))
}

pub fn write_file(path: &Path, contents: &str) -> io::Result<()> {
    if let Some(parent) = path.parent().filter(|p| !p.as_os_str().is_empty()) {
        fs::create_dir_all(parent)?;
    }
    fs::write(path, contents)
}

/// One named polyline.
pub struct Series<'a> {
    pub name: &'a str,
    pub points: Vec<(f64, f64)>,
}

const COLORS: [&str; 4] = ["#1f77b4", "#d62728", "#2ca02c", "#9467bd"];

/// Line plot; with `log_scale` both axes are log10 and non-positive points are dropped.
pub fn svg_plot(title: &str, x_label: &str, series: &[Series<'_>], log_scale: bool) -> String {
    let (w, h, margin) = (640.0, 400.0, 56.0);
    let tx = |v: f64| if log_scale { v.log10() } else { v };
    let pts: Vec<Vec<(f64, f64)>> = series
        .iter()
        .map(|s| {
            s.points
                .iter()
                .filter(|(x, y)| !log_scale || (*x > 0.0 && *y > 0.0))
                .map(|&(x, y)| (tx(x), tx(y)))
                .filter(|(x, y)| x.is_finite() && y.is_finite())
                .collect()
        })
        .collect();
    let all = pts.iter().flatten();
    let (mut x0, mut x1, mut y0, mut y1) = (f64::MAX, f64::MIN, f64::MAX, f64::MIN);
    for &(x, y) in all {
        x0 = x0.min(x);
        x1 = x1.max(x);
        y0 = y0.min(y);
        y1 = y1.max(y);
    }
    if x0 > x1 {
        (x0, x1, y0, y1) = (0.0, 1.0, 0.0, 1.0);
    }
    if x1 - x0 < 1e-300 {
        x1 = x0 + 1.0;
    }
    if y1 - y0 < 1e-300 {
        y0 -= 0.5;
        y1 += 0.5;
    }
    let sx = |x: f64| margin + (x - x0) / (x1 - x0) * (w - 2.0 * margin);
    let sy = |y: f64| h - margin - (y - y0) / (y1 - y0) * (h - 2.0 * margin);

    let mut out = String::new();
    let _ = writeln!(
        out,
        r#"<svg xmlns="http://www.w3.org/2000/svg" width="{w}" height="{h}" viewBox="0 0 {w} {h}">"#
    );
    let _ = writeln!(out, r#"<rect width="100%" height="100%" fill="white"/>"#);
    let _ = writeln!(
        out,
        r#"<rect x="{margin}" y="{margin}" width="{}" height="{}" fill="none" stroke="black"/>"#,
        w - 2.0 * margin,
        h - 2.0 * margin
    );
    let _ = writeln!(
        out,
        r#"<text x="{}" y="24" text-anchor="middle" font-family="sans-serif" font-size="14">{}</text>"#,
        w / 2.0,
        xml_escape(title)
    );
    let scale = if log_scale { " (log10)" } else { "" };
    let _ = writeln!(
        out,
        r#"<text x="{}" y="{}" text-anchor="middle" font-family="sans-serif" font-size="12">{}{scale}</text>"#,
        w / 2.0,
        h - 14.0,
        xml_escape(x_label)
    );
    for (label, x, y) in [
        (x0, margin, h - margin + 16.0),
        (x1, w - margin, h - margin + 16.0),
    ] {
        let _ = writeln!(
            out,
            r#"<text x="{x}" y="{y}" text-anchor="middle" font-family="sans-serif" font-size="10">{label:.3}</text>"#
        );
    }
    for (label, y) in [(y0, h - margin), (y1, margin)] {
        let _ = writeln!(
            out,
            r#"<text x="{}" y="{y}" text-anchor="end" font-family="sans-serif" font-size="10">{label:.3}</text>"#,
            margin - 4.0
        );
    }
    for (k, (s, p)) in series.iter().zip(&pts).enumerate() {
        let color = COLORS[k % COLORS.len()];
        let coords: Vec<String> = p
            .iter()
            .map(|&(x, y)| format!("{:.2},{:.2}", sx(x), sy(y)))
            .collect();
        let _ = writeln!(
            out,
            r#"<polyline fill="none" stroke="{color}" stroke-width="1.5" points="{}"/>"#,
            coords.join(" ")
        );
        let _ = writeln!(
            out,
            r#"<text x="{}" y="{}" font-family="sans-serif" font-size="11" fill="{color}">{}</text>"#,
            w - margin + 4.0,
            margin + 14.0 * (k as f64 + 1.0),
            xml_escape(s.name)
        );
    }
    out.push_str("</svg>\n");
    out
}

fn xml_escape(s: &str) -> String {
    s.replace('&', "&amp;")
        .replace('<', "&lt;")
        .replace('>', "&gt;")
}

/// Re, Im and modulus of one frame against `x`.
pub fn frame_svg(field: &WaveField, title: &str) -> String {
    let xs: Vec<f64> = field.grid.xs().collect();
    let pick = |f: fn(&crate::qmath::ComplexScalar) -> f64| -> Vec<(f64, f64)> {
        xs.iter()
            .zip(&field.values)
            .map(|(&x, v)| (x, f(v)))
            .collect()
    };
    svg_plot(
        title,
        "x",
        &[
            Series {
                name: "Re",
                points: pick(|v| v.re),
            },
            Series {
                name: "Im",
                points: pick(|v| v.im),
            },
            Series {
                name: "|.|",
                points: pick(|v| v.norm()),
            },
        ],
        false,
    )
}
