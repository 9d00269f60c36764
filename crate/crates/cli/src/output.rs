//! Tables, manifests and plots, all written atomically.

use serde::{Deserialize, Serialize};
use std::collections::BTreeMap;
use std::fmt::Write as _;
use std::io::Write;
use std::path::Path;
use thiserror::Error;

#[derive(Debug, Error)]
pub enum OutputError {
    #[error("refusing to write an empty table")]
    EmptyTable,
    #[error("row {row} has {got} cells, header has {want}")]
    RaggedRow { row: usize, got: usize, want: usize },
    #[error("cannot write `{path}`: {source}")]
    Io { path: String, source: std::io::Error },
    #[error("csv: {0}")]
    Csv(#[from] csv::Error),
}

#[derive(Debug, Clone, PartialEq)]
pub enum Cell {
    Float(f64),
    Int(i64),
    Text(String),
}

impl Cell {
    /// Floats use 17 significant digits so the text round-trips exactly.
    pub fn render(&self) -> String {
        match self {
            Cell::Float(x) => format!("{x:.16e}"),
            Cell::Int(i) => i.to_string(),
            Cell::Text(s) => s.clone(),
        }
    }

    fn to_json(&self) -> serde_json::Value {
        match self {
            Cell::Float(x) => serde_json::json!(x),
            Cell::Int(i) => serde_json::json!(i),
            Cell::Text(s) => serde_json::json!(s),
        }
    }
}

impl From<f64> for Cell {
    fn from(x: f64) -> Self {
        Cell::Float(x)
    }
}

impl From<i64> for Cell {
    fn from(x: i64) -> Self {
        Cell::Int(x)
    }
}

impl From<u64> for Cell {
    fn from(x: u64) -> Self {
        Cell::Int(x as i64)
    }
}

impl From<usize> for Cell {
    fn from(x: usize) -> Self {
        Cell::Int(x as i64)
    }
}

impl From<&str> for Cell {
    fn from(x: &str) -> Self {
        Cell::Text(x.to_string())
    }
}

impl From<String> for Cell {
    fn from(x: String) -> Self {
        Cell::Text(x)
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct Table {
    pub columns: Vec<String>,
    pub rows: Vec<Vec<Cell>>,
}

impl Table {
    pub fn new(columns: &[&str]) -> Self {
        Table {
            columns: columns.iter().map(|c| c.to_string()).collect(),
            rows: Vec::new(),
        }
    }

    pub fn push(&mut self, row: Vec<Cell>) {
        self.rows.push(row);
    }

    fn validate(&self) -> Result<(), OutputError> {
        if self.rows.is_empty() {
            return Err(OutputError::EmptyTable);
        }
        for (i, r) in self.rows.iter().enumerate() {
            if r.len() != self.columns.len() {
                return Err(OutputError::RaggedRow {
                    row: i,
                    got: r.len(),
                    want: self.columns.len(),
                });
            }
        }
        Ok(())
    }

    pub fn to_csv(&self) -> Result<Vec<u8>, OutputError> {
        self.validate()?;
        let mut w = csv::WriterBuilder::new()
            .terminator(csv::Terminator::Any(b'\n'))
            .from_writer(Vec::new());
        w.write_record(&self.columns)?;
        for r in &self.rows {
            w.write_record(r.iter().map(Cell::render))?;
        }
        w.into_inner().map_err(|e| OutputError::Io {
            path: "<buffer>".into(),
            source: e.into_error(),
        })
    }

    /// Array of row objects keyed by column name.
    pub fn to_json(&self) -> Result<Vec<u8>, OutputError> {
        self.validate()?;
        let rows: Vec<serde_json::Map<String, serde_json::Value>> = self
            .rows
            .iter()
            .map(|r| self.columns.iter().cloned().zip(r.iter().map(Cell::to_json)).collect())
            .collect();
        let mut out = serde_json::to_vec_pretty(&rows).expect("table serialises");
        out.push(b'\n');
        Ok(out)
    }
}

pub fn write_atomic(path: &Path, bytes: &[u8]) -> Result<(), OutputError> {
    let io = |source| OutputError::Io {
        path: path.display().to_string(),
        source,
    };
    let dir = path.parent().filter(|d| !d.as_os_str().is_empty()).unwrap_or(Path::new("."));
    std::fs::create_dir_all(dir).map_err(io)?;
    let mut tmp = tempfile::NamedTempFile::new_in(dir).map_err(io)?;
    tmp.write_all(bytes).map_err(io)?;
    #[cfg(unix)]
    {
        use std::os::unix::fs::PermissionsExt;
        tmp.as_file().set_permissions(std::fs::Permissions::from_mode(0o644)).map_err(io)?;
    }
    tmp.as_file().sync_all().map_err(io)?;
    tmp.persist(path).map_err(|e| io(e.error))?;
    Ok(())
}

pub fn emit_csv(table: &Table, path: &Path) -> Result<(), OutputError> {
    write_atomic(path, &table.to_csv()?)
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Check {
    pub name: String,
    pub value: f64,
    pub tolerance: f64,
    pub pass: bool,
}

impl Check {
    /// Passes when `value <= tolerance`.
    pub fn at_most(name: impl Into<String>, value: f64, tolerance: f64) -> Self {
        Check {
            name: name.into(),
            value,
            tolerance,
            pass: value <= tolerance,
        }
    }

    /// Passes when `value >= tolerance`.
    pub fn at_least(name: impl Into<String>, value: f64, tolerance: f64) -> Self {
        Check {
            name: name.into(),
            value,
            tolerance,
            pass: value >= tolerance,
        }
    }

    pub fn holds(name: impl Into<String>, ok: bool) -> Self {
        Check {
            name: name.into(),
            value: if ok { 1.0 } else { 0.0 },
            tolerance: 1.0,
            pass: ok,
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct RunManifest {
    pub command: String,
    pub config: serde_json::Value,
    pub version: String,
    pub seed: u64,
    #[serde(default, skip_serializing_if = "Vec::is_empty")]
    pub seed_list: Vec<u64>,
    pub checks: Vec<Check>,
    pub constants: BTreeMap<String, f64>,
    pub artifacts: Vec<String>,
    pub elapsed_s: f64,
    pub error: Option<String>,
}

impl RunManifest {
    pub fn passed(&self) -> bool {
        self.error.is_none() && self.checks.iter().all(|c| c.pass)
    }
}

pub fn emit_manifest(m: &RunManifest, path: &Path) -> Result<(), OutputError> {
    let mut bytes = serde_json::to_vec_pretty(m).expect("manifest serialises");
    bytes.push(b'\n');
    write_atomic(path, &bytes)
}

/// One polyline plot.
#[derive(Debug, Clone, PartialEq)]
pub struct Series {
    pub title: String,
    pub x_label: String,
    pub y_label: String,
    pub log_x: bool,
    pub log_y: bool,
    pub points: Vec<(f64, f64)>,
}

const W: f64 = 640.0;
const H: f64 = 480.0;
const PAD: f64 = 60.0;

fn span(v: impl Iterator<Item = f64>) -> (f64, f64) {
    let (lo, hi) = v.fold((f64::INFINITY, f64::NEG_INFINITY), |(a, b), x| (a.min(x), b.max(x)));
    if hi > lo {
        (lo, hi)
    } else {
        (lo - 0.5, lo + 0.5)
    }
}

impl Series {
    pub fn to_svg(&self) -> Result<String, OutputError> {
        let tx = |x: f64| if self.log_x { x.log10() } else { x };
        let ty = |y: f64| if self.log_y { y.log10() } else { y };
        let pts: Vec<(f64, f64)> = self
            .points
            .iter()
            .map(|&(x, y)| (tx(x), ty(y)))
            .filter(|(x, y)| x.is_finite() && y.is_finite())
            .collect();
        if pts.is_empty() {
            return Err(OutputError::EmptyTable);
        }
        let (x0, x1) = span(pts.iter().map(|p| p.0));
        let (y0, y1) = span(pts.iter().map(|p| p.1));
        let px = |x: f64| PAD + (x - x0) / (x1 - x0) * (W - 2.0 * PAD);
        let py = |y: f64| H - PAD - (y - y0) / (y1 - y0) * (H - 2.0 * PAD);
        let axis = |label: &str, log: bool| if log { format!("log10 {label}") } else { label.to_string() };
        let mut s = String::new();
        let _ = writeln!(s, r#"<svg xmlns="http://www.w3.org/2000/svg" width="{W}" height="{H}" viewBox="0 0 {W} {H}">"#);
        let _ = writeln!(s, r#"<rect width="100%" height="100%" fill="white"/>"#);
        let _ = writeln!(s, r#"<text x="{}" y="24" text-anchor="middle" font-size="16">{}</text>"#, W / 2.0, escape(&self.title));
        let _ = writeln!(
            s,
            r#"<line x1="{PAD}" y1="{}" x2="{}" y2="{}" stroke="black"/>"#,
            H - PAD,
            W - PAD,
            H - PAD
        );
        let _ = writeln!(s, r#"<line x1="{PAD}" y1="{PAD}" x2="{PAD}" y2="{}" stroke="black"/>"#, H - PAD);
        for (v, x) in [(x0, PAD), (x1, W - PAD)] {
            let _ = writeln!(s, r#"<text x="{x}" y="{}" text-anchor="middle" font-size="11">{v:.4}</text>"#, H - PAD + 16.0);
        }
        for (v, y) in [(y0, H - PAD), (y1, PAD)] {
            let _ = writeln!(s, r#"<text x="{}" y="{y}" text-anchor="end" font-size="11">{v:.4}</text>"#, PAD - 4.0);
        }
        let _ = writeln!(
            s,
            r#"<text x="{}" y="{}" text-anchor="middle" font-size="13">{}</text>"#,
            W / 2.0,
            H - 16.0,
            escape(&axis(&self.x_label, self.log_x))
        );
        let _ = writeln!(
            s,
            r#"<text x="16" y="{}" text-anchor="middle" font-size="13" transform="rotate(-90 16 {})">{}</text>"#,
            H / 2.0,
            H / 2.0,
            escape(&axis(&self.y_label, self.log_y))
        );
        let poly: Vec<String> = pts.iter().map(|&(x, y)| format!("{:.3},{:.3}", px(x), py(y))).collect();
        let _ = writeln!(s, r#"<polyline fill="none" stroke="steelblue" stroke-width="2" points="{}"/>"#, poly.join(" "));
        s.push_str("</svg>\n");
        Ok(s)
    }
}

fn escape(s: &str) -> String {
    s.replace('&', "&amp;").replace('<', "&lt;").replace('>', "&gt;")
}

pub fn emit_svg(series: &Series, path: &Path) -> Result<(), OutputError> {
    write_atomic(path, series.to_svg()?.as_bytes())
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn floats_render_with_seventeen_digits() {
        assert_eq!(Cell::Float(0.1).render(), "1.0000000000000001e-1");
        assert_eq!(Cell::Float(-2.0).render(), "-2.0000000000000000e0");
        assert_eq!(Cell::Int(7).render(), "7");
    }

    #[test]
    fn ragged_rows_are_rejected() {
        let mut t = Table::new(&["a", "b"]);
        t.push(vec![1.0.into()]);
        assert!(matches!(t.to_csv(), Err(OutputError::RaggedRow { .. })));
    }

    #[test]
    fn svg_has_axes_and_polyline() {
        let s = Series {
            title: "t".into(),
            x_label: "N".into(),
            y_label: "ratio".into(),
            log_x: true,
            log_y: true,
            points: vec![(16.0, 1.0), (32.0, 2.0), (64.0, 4.0)],
        };
        let svg = s.to_svg().unwrap();
        assert!(svg.contains("<polyline") && svg.contains("log10 N") && svg.contains("log10 ratio"));
    }
}
