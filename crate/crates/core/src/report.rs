//! Output documents, Table-style text output and the prominence/relation
//! scatter plot.

use std::collections::BTreeMap;
use std::fmt::Write as _;
use std::fs;
use std::path::Path;

use serde::{Deserialize, Serialize};

use crate::compare::{DivergenceReport, PipelineConfig};
use crate::dematel::AnalysisResult;
use crate::error::Result;
use crate::search::{SearchOutcome, SearchSpec};

pub const TOOL_NAME: &str = env!("CARGO_PKG_NAME");
pub const TOOL_VERSION: &str = env!("CARGO_PKG_VERSION");

/// Everything needed to reproduce an output document.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct RunManifest {
    pub tool: String,
    pub version: String,
    pub command: String,
    pub inputs: Vec<String>,
    pub config: PipelineConfig,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub search: Option<SearchSpec>,
    pub timestamp: String,
}

impl RunManifest {
    pub fn new(command: &str, inputs: Vec<String>, config: PipelineConfig) -> Self {
        Self {
            tool: TOOL_NAME.to_string(),
            version: TOOL_VERSION.to_string(),
            command: command.to_string(),
            inputs,
            config,
            search: None,
            timestamp: chrono::Utc::now().to_rfc3339_opts(chrono::SecondsFormat::Secs, true),
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ResultDocument {
    pub manifest: RunManifest,
    /// Keyed by pipeline name (`defuzzify-first`, `defuzzify-last`).
    pub pipelines: BTreeMap<String, AnalysisResult>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub divergence: Option<DivergenceReport>,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct SearchDocument {
    pub manifest: RunManifest,
    pub search: SearchOutcome,
}

fn fmt_rank(r: f64) -> String {
    if r.fract() == 0.0 {
        format!("{r:.0}")
    } else {
        format!("{r}")
    }
}

/// Fixed-width table with Object, R, C, R+C, R-C and both rank columns;
/// values at 3 decimals.
pub fn format_table(title: &str, res: &AnalysisResult) -> String {
    let headers = ["Object", "R", "C", "R+C", "R-C", "R+C Rank", "R-C Rank"];
    let rows: Vec<[String; 7]> = (0..res.len())
        .map(|i| {
            [
                res.objects[i].clone(),
                format!("{:.3}", res.r[i]),
                format!("{:.3}", res.c[i]),
                format!("{:.3}", res.prominence[i]),
                format!("{:.3}", res.relation[i]),
                fmt_rank(res.prominence_rank[i]),
                fmt_rank(res.relation_rank[i]),
            ]
        })
        .collect();
    let widths: Vec<usize> = (0..headers.len())
        .map(|k| {
            rows.iter()
                .map(|r| r[k].chars().count())
                .chain([headers[k].len()])
                .max()
                .unwrap_or(0)
        })
        .collect();
    let line = |cells: &[String]| -> String {
        let mut s = String::new();
        for (k, cell) in cells.iter().enumerate() {
            if k == 0 {
                let _ = write!(s, "{cell:<w$}", w = widths[k]);
            } else {
                let _ = write!(s, "  {cell:>w$}", w = widths[k]);
            }
        }
        s.push('\n');
        s
    };
    let mut out = format!("{title}\n");
    out += &line(&headers.map(String::from));
    out += &format!(
        "{}\n",
        "-".repeat(widths.iter().sum::<usize>() + 2 * (widths.len() - 1))
    );
    for r in &rows {
        out += &line(r);
    }
    out
}

/// One CSV row per (pipeline, object).
pub fn format_csv(pipelines: &BTreeMap<String, AnalysisResult>) -> Result<String> {
    let mut w = csv::Writer::from_writer(Vec::new());
    w.write_record([
        "pipeline",
        "object",
        "r",
        "c",
        "prominence",
        "relation",
        "prominence_rank",
        "relation_rank",
    ])?;
    for (name, res) in pipelines {
        for i in 0..res.len() {
            w.write_record([
                name.clone(),
                res.objects[i].clone(),
                res.r[i].to_string(),
                res.c[i].to_string(),
                res.prominence[i].to_string(),
                res.relation[i].to_string(),
                res.prominence_rank[i].to_string(),
                res.relation_rank[i].to_string(),
            ])?;
        }
    }
    let bytes = w
        .into_inner()
        .map_err(|e| std::io::Error::other(e.to_string()))?;
    Ok(String::from_utf8(bytes).expect("csv output is utf-8"))
}

const WIDTH: f64 = 640.0;
const HEIGHT: f64 = 480.0;
const MARGIN_LEFT: f64 = 70.0;
const MARGIN_RIGHT: f64 = 30.0;
const MARGIN_TOP: f64 = 40.0;
const MARGIN_BOTTOM: f64 = 60.0;
const SERIES_COLORS: [&str; 2] = ["#d62728", "#1f77b4"];

fn padded(lo: f64, hi: f64) -> (f64, f64) {
    let span = hi - lo;
    let pad = if span > 1e-9 {
        span * 0.1
    } else {
        lo.abs().max(1.0) * 0.1
    };
    (lo - pad, hi + pad)
}

fn escape(s: &str) -> String {
    s.replace('&', "&amp;")
        .replace('<', "&lt;")
        .replace('>', "&gt;")
        .replace('"', "&quot;")
}

/// Prominence (R+C, horizontal) against relation (R-C, vertical), one
/// marker and label per object per series. The first series is drawn red,
/// the second blue.
pub fn render_scatter(series: &[(&str, &AnalysisResult)]) -> String {
    let all = || {
        series
            .iter()
            .flat_map(|(_, r)| r.prominence.iter().zip(&r.relation))
    };
    let (mut x_lo, mut x_hi, mut y_lo, mut y_hi) =
        (f64::INFINITY, f64::NEG_INFINITY, 0.0f64, 0.0f64);
    for (&x, &y) in all() {
        x_lo = x_lo.min(x);
        x_hi = x_hi.max(x);
        y_lo = y_lo.min(y);
        y_hi = y_hi.max(y);
    }
    if !x_lo.is_finite() {
        (x_lo, x_hi) = (0.0, 1.0);
    }
    let (x_lo, x_hi) = padded(x_lo, x_hi);
    let (y_lo, y_hi) = padded(y_lo, y_hi);
    let plot_w = WIDTH - MARGIN_LEFT - MARGIN_RIGHT;
    let plot_h = HEIGHT - MARGIN_TOP - MARGIN_BOTTOM;
    let sx = |x: f64| MARGIN_LEFT + (x - x_lo) / (x_hi - x_lo) * plot_w;
    let sy = |y: f64| MARGIN_TOP + (y_hi - y) / (y_hi - y_lo) * plot_h;

    let mut s = String::new();
    let _ = writeln!(
        s,
        r#"<svg xmlns="http://www.w3.org/2000/svg" width="{WIDTH}" height="{HEIGHT}" viewBox="0 0 {WIDTH} {HEIGHT}" font-family="sans-serif" font-size="12">"#
    );
    let _ = writeln!(
        s,
        r#"<rect x="0" y="0" width="{WIDTH}" height="{HEIGHT}" fill="white"/>"#
    );
    let _ = writeln!(
        s,
        r#"<rect class="frame" x="{MARGIN_LEFT}" y="{MARGIN_TOP}" width="{plot_w}" height="{plot_h}" fill="none" stroke="black"/>"#
    );

    for k in 0..=4 {
        let t = k as f64 / 4.0;
        let xv = x_lo + t * (x_hi - x_lo);
        let yv = y_lo + t * (y_hi - y_lo);
        let _ = writeln!(
            s,
            r#"<text class="tick" x="{:.2}" y="{:.2}" text-anchor="middle">{:.2}</text>"#,
            sx(xv),
            MARGIN_TOP + plot_h + 18.0,
            xv
        );
        let _ = writeln!(
            s,
            r#"<text class="tick" x="{:.2}" y="{:.2}" text-anchor="end">{:.2}</text>"#,
            MARGIN_LEFT - 6.0,
            sy(yv) + 4.0,
            yv
        );
    }

    let zero = sy(0.0);
    let _ = writeln!(
        s,
        r##"<line class="zero-line" x1="{MARGIN_LEFT}" y1="{zero:.2}" x2="{:.2}" y2="{zero:.2}" stroke="#888" stroke-dasharray="4 3"/>"##,
        MARGIN_LEFT + plot_w
    );
    let _ = writeln!(
        s,
        r#"<text class="axis-title" x="{:.2}" y="{:.2}" text-anchor="middle">R+C</text>"#,
        MARGIN_LEFT + plot_w / 2.0,
        HEIGHT - 15.0
    );
    let _ = writeln!(
        s,
        r#"<text class="axis-title" x="18" y="{:.2}" text-anchor="middle" transform="rotate(-90 18 {:.2})">R−C</text>"#,
        MARGIN_TOP + plot_h / 2.0,
        MARGIN_TOP + plot_h / 2.0
    );

    for (k, (name, res)) in series.iter().enumerate() {
        let color = SERIES_COLORS[k % SERIES_COLORS.len()];
        let class = format!("series-{k}");
        let _ = writeln!(
            s,
            r#"<rect class="legend-swatch" x="{:.2}" y="{:.2}" width="10" height="10" fill="{color}"/>"#,
            MARGIN_LEFT + 10.0 + 160.0 * k as f64,
            MARGIN_TOP - 24.0
        );
        let _ = writeln!(
            s,
            r#"<text class="legend" x="{:.2}" y="{:.2}">{}</text>"#,
            MARGIN_LEFT + 26.0 + 160.0 * k as f64,
            MARGIN_TOP - 15.0,
            escape(name)
        );
        let _ = writeln!(s, r#"<g class="{class}">"#);
        for i in 0..res.len() {
            let (x, y) = (sx(res.prominence[i]), sy(res.relation[i]));
            let _ = writeln!(
                s,
                r#"<circle class="marker {class}" cx="{x:.2}" cy="{y:.2}" r="4" fill="{color}"/>"#
            );
            let _ = writeln!(
                s,
                r#"<text class="label {class}" x="{:.2}" y="{:.2}" fill="{color}">{}</text>"#,
                x + 6.0,
                y - 6.0,
                escape(&res.objects[i])
            );
        }
        s.push_str("</g>\n");
    }
    s.push_str("</svg>\n");
    s
}

pub fn write_scatter(series: &[(&str, &AnalysisResult)], path: &Path) -> Result<()> {
    fs::write(path, render_scatter(series))?;
    Ok(())
}
