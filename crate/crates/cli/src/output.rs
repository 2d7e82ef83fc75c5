//! CSV, JSON and SVG emission with atomic file replacement.

use std::io::Write;
use std::path::Path;

use copula_forge::{MarginTag, SampleMatrix};

use crate::error::CliError;

/// Writes `bytes` to a temporary file beside `path`, then renames it into place.
pub fn write_atomic(path: &Path, bytes: &[u8]) -> Result<(), CliError> {
    let dir = match path.parent() {
        Some(p) if !p.as_os_str().is_empty() => p,
        _ => Path::new("."),
    };
    let mut tmp = tempfile::NamedTempFile::new_in(dir).map_err(|e| CliError::Io(format!("{}: {e}", dir.display())))?;
    tmp.write_all(bytes)?;
    tmp.flush()?;
    tmp.persist(path)
        .map_err(|e| CliError::Io(format!("{}: {}", path.display(), e.error)))?;
    Ok(())
}

/// Seventeen significant digits, enough to round-trip any `f64`.
pub fn fmt_f64(x: f64) -> String {
    format!("{x:.16e}")
}

fn csv_bytes(header: &[String], rows: impl Iterator<Item = Vec<String>>) -> Result<Vec<u8>, CliError> {
    let mut w = csv::WriterBuilder::new()
        .terminator(csv::Terminator::Any(b'\n'))
        .from_writer(Vec::new());
    let io = |e: csv::Error| CliError::Io(e.to_string());
    w.write_record(header).map_err(io)?;
    for r in rows {
        w.write_record(&r).map_err(io)?;
    }
    w.into_inner().map_err(|e| CliError::Io(e.to_string()))
}

/// `x0,…,x{d−1}` header followed by one line per row.
pub fn sample_csv(s: &SampleMatrix) -> Result<Vec<u8>, CliError> {
    let header: Vec<String> = (0..s.d()).map(|j| format!("x{j}")).collect();
    csv_bytes(&header, s.rows().map(|r| r.iter().map(|&v| fmt_f64(v)).collect()))
}

/// Generic numeric table with a header.
pub fn table_csv(header: &[&str], rows: &[Vec<String>]) -> Result<Vec<u8>, CliError> {
    let header: Vec<String> = header.iter().map(|h| h.to_string()).collect();
    csv_bytes(&header, rows.iter().cloned())
}

/// Parses a sample CSV written by [`sample_csv`].
pub fn parse_sample_csv(bytes: &[u8], tag: MarginTag) -> Result<SampleMatrix, CliError> {
    let mut r = csv::Reader::from_reader(bytes);
    let mut rows = Vec::new();
    for rec in r.records() {
        let rec = rec.map_err(|e| CliError::Io(e.to_string()))?;
        let row = rec
            .iter()
            .map(|f| f.parse::<f64>().map_err(|e| CliError::Io(format!("`{f}`: {e}"))))
            .collect::<Result<Vec<_>, _>>()?;
        rows.push(row);
    }
    if rows.is_empty() {
        let d = r.headers().map_err(|e| CliError::Io(e.to_string()))?.len();
        return SampleMatrix::from_vec(0, d, Vec::new(), tag).map_err(CliError::Run);
    }
    SampleMatrix::from_rows(&rows, tag).map_err(CliError::Run)
}

const SVG_SIZE: f64 = 400.0;
const SVG_PAD: f64 = 30.0;

fn svg_frame(body: &str, title: &str) -> String {
    format!(
        "<svg xmlns=\"http://www.w3.org/2000/svg\" width=\"{w}\" height=\"{w}\" viewBox=\"0 0 {w} {w}\">\n\
         <rect x=\"0\" y=\"0\" width=\"{w}\" height=\"{w}\" fill=\"white\"/>\n\
         <rect x=\"{p}\" y=\"{p}\" width=\"{i}\" height=\"{i}\" fill=\"none\" stroke=\"black\"/>\n\
         <text x=\"{p}\" y=\"{t}\" font-size=\"12\">{title}</text>\n{body}</svg>\n",
        w = SVG_SIZE,
        p = SVG_PAD,
        i = SVG_SIZE - 2.0 * SVG_PAD,
        t = SVG_PAD - 8.0,
    )
}

fn scale(v: f64, lo: f64, hi: f64) -> f64 {
    let t = if hi > lo { (v - lo) / (hi - lo) } else { 0.5 };
    SVG_PAD + t * (SVG_SIZE - 2.0 * SVG_PAD)
}

/// Scatter plot of the first two columns.
pub fn scatter_svg(s: &SampleMatrix, title: &str) -> String {
    let range = |j: usize| {
        let c = s.column(j);
        let lo = c.iter().copied().fold(f64::INFINITY, f64::min);
        let hi = c.iter().copied().fold(f64::NEG_INFINITY, f64::max);
        (lo, hi)
    };
    let ((x0, x1), (y0, y1)) = (range(0), range(1));
    let mut body = String::new();
    for r in s.rows() {
        let x = scale(r[0], x0, x1);
        let y = SVG_SIZE - scale(r[1], y0, y1);
        body.push_str(&format!("<circle cx=\"{x:.2}\" cy=\"{y:.2}\" r=\"1\" fill=\"steelblue\"/>\n"));
    }
    svg_frame(&body, title)
}

/// Histogram bars scaled to the tallest bin.
pub fn histogram_svg(counts: &[usize], title: &str) -> String {
    let top = counts.iter().copied().max().unwrap_or(0).max(1) as f64;
    let inner = SVG_SIZE - 2.0 * SVG_PAD;
    let w = inner / counts.len().max(1) as f64;
    let mut body = String::new();
    for (k, &c) in counts.iter().enumerate() {
        let h = inner * c as f64 / top;
        body.push_str(&format!(
            "<rect x=\"{:.2}\" y=\"{:.2}\" width=\"{:.2}\" height=\"{:.2}\" fill=\"steelblue\" stroke=\"white\"/>\n",
            SVG_PAD + k as f64 * w,
            SVG_SIZE - SVG_PAD - h,
            w,
            h
        ));
    }
    svg_frame(&body, title)
}
