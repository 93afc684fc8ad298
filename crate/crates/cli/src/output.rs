//! On-disk artifacts: front CSVs, the JSON summary, EAF surfaces and their
//! SVG rendering. Every number is written with 6 significant digits.

use std::fmt::Write as _;
use std::fs;
use std::path::Path;

use islandfs_core::engine::EngineConfig;
use islandfs_core::metrics::{AttainmentSurfaces, Summary, Surface};
use islandfs_core::{ObjectivePair, Solution};
use serde::{Deserialize, Serialize};
use serde_json::Value;

use crate::CliError;

/// `x` with 6 significant digits, trailing zeros dropped.
pub fn sig6(x: f64) -> String {
    if x == 0.0 {
        return "0".into();
    }
    if !x.is_finite() {
        return x.to_string();
    }
    let exp = x.abs().log10().floor() as i32;
    if (-5..6).contains(&exp) {
        let decimals = (5 - exp).max(0) as usize;
        trim_zeros(format!("{x:.decimals$}"))
    } else {
        let s = format!("{x:.5e}");
        let (mantissa, e) = s.split_once('e').expect("exponent form");
        format!("{}e{e}", trim_zeros(mantissa.to_owned()))
    }
}

fn trim_zeros(s: String) -> String {
    if s.contains('.') {
        s.trim_end_matches('0').trim_end_matches('.').to_owned()
    } else {
        s
    }
}

fn round6(x: f64) -> f64 {
    sig6(x).parse().expect("formatted float parses")
}

fn io_err(path: &Path) -> impl FnOnce(std::io::Error) -> CliError + '_ {
    move |source| CliError::Io { path: path.to_path_buf(), source }
}

fn format_err(path: &Path, message: impl ToString) -> CliError {
    CliError::Format {
        path: path.to_path_buf(),
        message: message.to_string(),
    }
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct FrontRow {
    pub key: u64,
    pub cardinality_count: usize,
    pub cardinality_score: f64,
    pub train_auc: f64,
    pub test_auc: f64,
    pub mask: String,
}

impl FrontRow {
    pub fn train_objectives(&self) -> ObjectivePair {
        ObjectivePair::new(self.cardinality_score, self.train_auc)
    }

    pub fn test_objectives(&self) -> ObjectivePair {
        ObjectivePair::new(self.cardinality_score, self.test_auc)
    }
}

/// Front rows by ascending cardinality, then key.
pub fn front_rows(front: &[Solution]) -> Result<Vec<FrontRow>, CliError> {
    let mut rows: Vec<FrontRow> = front
        .iter()
        .map(|s| {
            let missing = || CliError::Incomplete { key: s.key };
            Ok(FrontRow {
                key: s.key,
                cardinality_count: s.mask.popcount(),
                cardinality_score: s.cardinality().ok_or_else(missing)?,
                train_auc: s.auc().ok_or_else(missing)?,
                test_auc: s.test_auc.ok_or_else(missing)?,
                mask: s.mask.to_string(),
            })
        })
        .collect::<Result<_, CliError>>()?;
    rows.sort_by(|a, b| a.cardinality_count.cmp(&b.cardinality_count).then(a.key.cmp(&b.key)));
    Ok(rows)
}

pub fn write_front(path: &Path, rows: &[FrontRow]) -> Result<(), CliError> {
    let mut w = csv::Writer::from_path(path).map_err(|e| format_err(path, e))?;
    let header = ["key", "cardinality_count", "cardinality_score", "train_auc", "test_auc", "mask"];
    w.write_record(header).map_err(|e| format_err(path, e))?;
    for r in rows {
        w.write_record([
            r.key.to_string(),
            r.cardinality_count.to_string(),
            sig6(r.cardinality_score),
            sig6(r.train_auc),
            sig6(r.test_auc),
            r.mask.clone(),
        ])
        .map_err(|e| format_err(path, e))?;
    }
    w.flush().map_err(io_err(path))
}

pub fn read_front(path: &Path) -> Result<Vec<FrontRow>, CliError> {
    let text = fs::read_to_string(path).map_err(io_err(path))?;
    csv::Reader::from_reader(text.as_bytes())
        .deserialize()
        .collect::<Result<_, _>>()
        .map_err(|e| format_err(path, e))
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct SummaryFile {
    pub config: EngineConfig,
    pub seeds: Vec<u64>,
    #[serde(flatten)]
    pub summary: Summary,
}

fn round_floats(v: &mut Value) {
    match v {
        Value::Number(n) if n.is_f64() => {
            let x = n.as_f64().expect("f64 number");
            *v = serde_json::Number::from_f64(round6(x)).map_or(Value::Null, Value::Number);
        }
        Value::Array(items) => items.iter_mut().for_each(round_floats),
        Value::Object(map) => map.values_mut().for_each(round_floats),
        _ => {}
    }
}

pub fn write_summary(path: &Path, summary: &SummaryFile) -> Result<(), CliError> {
    let mut v = serde_json::to_value(summary).map_err(|e| format_err(path, e))?;
    round_floats(&mut v);
    let text = serde_json::to_string_pretty(&v).map_err(|e| format_err(path, e))?;
    fs::write(path, text + "\n").map_err(io_err(path))
}

pub fn read_summary(path: &Path) -> Result<SummaryFile, CliError> {
    let text = fs::read_to_string(path).map_err(io_err(path))?;
    serde_json::from_str(&text).map_err(|e| format_err(path, e))
}

fn levels(s: &AttainmentSurfaces) -> [(&'static str, &Surface); 3] {
    [("best", &s.best), ("median", &s.median), ("worst", &s.worst)]
}

pub fn write_eaf(path: &Path, s: &AttainmentSurfaces) -> Result<(), CliError> {
    let mut w = csv::Writer::from_path(path).map_err(|e| format_err(path, e))?;
    w.write_record(["level", "cardinality_score", "auc"]).map_err(|e| format_err(path, e))?;
    for (name, surface) in levels(s) {
        for p in &surface.points {
            w.write_record([name.to_owned(), sig6(p.cardinality), sig6(p.auc)])
                .map_err(|e| format_err(path, e))?;
        }
    }
    w.flush().map_err(io_err(path))
}

#[derive(Clone, Debug, PartialEq, Deserialize)]
pub struct EafRow {
    pub level: String,
    pub cardinality_score: f64,
    pub auc: f64,
}

pub fn read_eaf(path: &Path) -> Result<Vec<EafRow>, CliError> {
    let text = fs::read_to_string(path).map_err(io_err(path))?;
    csv::Reader::from_reader(text.as_bytes())
        .deserialize()
        .collect::<Result<_, _>>()
        .map_err(|e| format_err(path, e))
}

/// Boundary of the attained region: vertical from AUC 0 under the first
/// breakpoint, alternating steps, then flat out to cardinality 1.
fn staircase(points: &[ObjectivePair]) -> Vec<(f64, f64)> {
    let mut line = Vec::new();
    let Some(first) = points.first() else {
        return line;
    };
    line.push((first.cardinality, 0.0));
    for (i, p) in points.iter().enumerate() {
        if i > 0 {
            line.push((p.cardinality, points[i - 1].auc));
        }
        line.push((p.cardinality, p.auc));
    }
    line.push((1.0, points[points.len() - 1].auc));
    line
}

/// Self-contained SVG plot of the three surfaces over `[0,1] x [0,1]`.
pub fn render_svg(s: &AttainmentSurfaces) -> String {
    const SIZE: f64 = 400.0;
    const PAD: f64 = 50.0;
    let x = |c: f64| PAD + c * SIZE;
    let y = |a: f64| PAD + (1.0 - a) * SIZE;
    let total = SIZE + 2.0 * PAD;
    let mut svg = String::new();
    let _ = writeln!(
        svg,
        r#"<svg xmlns="http://www.w3.org/2000/svg" width="{total}" height="{total}" viewBox="0 0 {total} {total}">"#
    );
    let _ = writeln!(svg, r#"<rect x="0" y="0" width="{total}" height="{total}" fill="white"/>"#);
    let _ = writeln!(
        svg,
        r#"<rect x="{PAD}" y="{PAD}" width="{SIZE}" height="{SIZE}" fill="none" stroke="black"/>"#
    );
    for i in 0..=10 {
        let t = i as f64 / 10.0;
        let label = sig6(t);
        let _ = writeln!(
            svg,
            r#"<text x="{}" y="{}" font-size="10" text-anchor="middle">{label}</text>"#,
            x(t),
            y(0.0) + 15.0
        );
        let _ = writeln!(
            svg,
            r#"<text x="{}" y="{}" font-size="10" text-anchor="end">{label}</text>"#,
            x(0.0) - 5.0,
            y(t) + 3.0
        );
    }
    let _ = writeln!(
        svg,
        r#"<text x="{}" y="{}" font-size="12" text-anchor="middle">cardinality score</text>"#,
        x(0.5),
        total - 10.0
    );
    let _ = writeln!(
        svg,
        r#"<text x="15" y="{}" font-size="12" text-anchor="middle" transform="rotate(-90 15 {})">AUC</text>"#,
        y(0.5),
        y(0.5)
    );
    let colours = ["#1b9e77", "#d95f02", "#7570b3"];
    for (i, ((name, surface), colour)) in levels(s).into_iter().zip(colours).enumerate() {
        let pts: Vec<String> = staircase(&surface.points)
            .into_iter()
            .map(|(c, a)| format!("{:.2},{:.2}", x(c), y(a)))
            .collect();
        let _ = writeln!(
            svg,
            r#"<polyline fill="none" stroke="{colour}" stroke-width="2" points="{}"/>"#,
            pts.join(" ")
        );
        let ly = PAD + 15.0 + 15.0 * i as f64;
        let _ = writeln!(
            svg,
            r#"<text x="{}" y="{ly}" font-size="11" fill="{colour}">{name}</text>"#,
            x(1.0) - 60.0
        );
    }
    svg.push_str("</svg>\n");
    svg
}
