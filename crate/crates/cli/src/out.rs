//! Artifact emission: RFC-4180-style CSV, pretty JSON with the config
//! embedded, and a hand-rolled SVG line plot. All numeric fields go
//! through one fixed format so identical runs produce identical bytes.

use crate::fail::{CliError, CliResult};
use serde::Serialize;
use std::path::Path;

pub fn num(v: f64) -> String {
    format!("{v:.12e}")
}

pub fn write_csv(path: &Path, header: &[&str], rows: &[Vec<String>]) -> CliResult<()> {
    let mut w = csv::Writer::from_path(path)
        .map_err(|e| CliError::config(format!("cannot open {}: {e}", path.display())))?;
    w.write_record(header)
        .and_then(|_| rows.iter().try_for_each(|r| w.write_record(r)))
        .and_then(|_| w.flush().map_err(Into::into))
        .map_err(|e| CliError::config(format!("csv write {}: {e}", path.display())))
}

pub fn write_json<T: Serialize>(path: &Path, value: &T) -> CliResult<String> {
    let text = serde_json::to_string_pretty(value)
        .map_err(|e| CliError::config(format!("serialize: {e}")))?;
    std::fs::write(path, text.as_bytes()).map_err(CliError::io)?;
    Ok(text)
}

/// One curve per height: log10 of the shell tail against R, with simple
/// axes and per-curve labels. Geometry only, no styling dependencies.
pub fn tail_plot_svg(heights: &[f64], radii: &[f64], rows: &[Vec<f64>]) -> String {
    let (w, h) = (640.0, 420.0);
    let (ml, mr, mt, mb) = (70.0, 110.0, 20.0, 50.0);
    let logs: Vec<Vec<f64>> = rows
        .iter()
        .map(|row| row.iter().map(|v| v.max(1e-300).log10()).collect())
        .collect();
    let ymin = logs.iter().flatten().cloned().fold(f64::INFINITY, f64::min).floor();
    let ymax = logs.iter().flatten().cloned().fold(f64::NEG_INFINITY, f64::max).ceil();
    let (xmin, xmax) = (radii[0], *radii.last().unwrap());
    let sx = |r: f64| ml + (r - xmin) / (xmax - xmin).max(1e-12) * (w - ml - mr);
    let sy = |v: f64| h - mb - (v - ymin) / (ymax - ymin).max(1e-12) * (h - mt - mb);
    let palette = ["#1b6ca8", "#c0392b", "#2e7d32", "#8e44ad", "#b8860b"];

    let mut s = String::new();
    s.push_str(&format!(
        "<svg xmlns=\"http://www.w3.org/2000/svg\" width=\"{w}\" height=\"{h}\" \
         viewBox=\"0 0 {w} {h}\" font-family=\"sans-serif\" font-size=\"12\">\n"
    ));
    s.push_str(&format!(
        "<rect x=\"0\" y=\"0\" width=\"{w}\" height=\"{h}\" fill=\"white\"/>\n"
    ));
    s.push_str(&format!(
        "<line x1=\"{ml}\" y1=\"{0}\" x2=\"{1}\" y2=\"{0}\" stroke=\"black\"/>\n",
        h - mb,
        w - mr
    ));
    s.push_str(&format!(
        "<line x1=\"{ml}\" y1=\"{mt}\" x2=\"{ml}\" y2=\"{}\" stroke=\"black\"/>\n",
        h - mb
    ));
    for &r in radii {
        s.push_str(&format!(
            "<text x=\"{:.1}\" y=\"{:.1}\" text-anchor=\"middle\">{r}</text>\n",
            sx(r),
            h - mb + 18.0
        ));
    }
    let mut yv = ymin;
    while yv <= ymax + 1e-9 {
        s.push_str(&format!(
            "<text x=\"{:.1}\" y=\"{:.1}\" text-anchor=\"end\">1e{yv:.0}</text>\n",
            ml - 8.0,
            sy(yv) + 4.0
        ));
        yv += ((ymax - ymin) / 6.0).max(1.0).ceil();
    }
    s.push_str(&format!(
        "<text x=\"{:.1}\" y=\"{:.1}\" text-anchor=\"middle\">shell radius R</text>\n",
        (ml + w - mr) / 2.0,
        h - 10.0
    ));
    s.push_str(&format!(
        "<text x=\"16\" y=\"{:.1}\" transform=\"rotate(-90 16 {0:.1})\" \
         text-anchor=\"middle\">sup |u - alpha|</text>\n",
        (mt + h - mb) / 2.0
    ));
    for (i, (&a, row)) in heights.iter().zip(&logs).enumerate() {
        let color = palette[i % palette.len()];
        let pts: Vec<String> = radii
            .iter()
            .zip(row)
            .map(|(&r, &v)| format!("{:.2},{:.2}", sx(r), sy(v)))
            .collect();
        s.push_str(&format!(
            "<polyline points=\"{}\" fill=\"none\" stroke=\"{color}\" stroke-width=\"1.5\"/>\n",
            pts.join(" ")
        ));
        s.push_str(&format!(
            "<text x=\"{:.1}\" y=\"{:.1}\" fill=\"{color}\">a = {a}</text>\n",
            w - mr + 8.0,
            sy(*row.last().unwrap()) + 4.0
        ));
    }
    s.push_str("</svg>\n");
    s
}
