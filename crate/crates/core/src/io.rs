//! Tab-separated tables and `key=value` manifests.
//!
//! Floats are written in Rust's shortest round-trip exponent form, so a table
//! read back yields the same bits.

use std::fmt::Write as _;
use std::fs;
use std::io::BufRead;
use std::path::Path;

use crate::error::{Error, Result};
use crate::integrator::PdfCurve;
use crate::market::EmpiricalHistogram;

/// Formats one float for a table cell.
pub fn cell(x: f64) -> String {
    format!("{x:e}")
}

/// Renders a table with a header row.
pub fn render_table(header: &[&str], columns: &[&[f64]]) -> String {
    let rows = columns.first().map_or(0, |c| c.len());
    let mut out = header.join("\t");
    out.push('\n');
    for i in 0..rows {
        let line: Vec<String> = columns.iter().map(|c| cell(c[i])).collect();
        out.push_str(&line.join("\t"));
        out.push('\n');
    }
    out
}

/// Parses a numeric table, skipping blank lines, `#` comments and a
/// non-numeric header line. Every row must have `columns` fields.
pub fn parse_table<R: BufRead>(reader: R, columns: usize) -> Result<Vec<Vec<f64>>> {
    let mut out = vec![Vec::new(); columns];
    let mut header_allowed = true;
    for (idx, line) in reader.lines().enumerate() {
        let line = line?;
        let text = line.trim();
        if text.is_empty() || text.starts_with('#') {
            continue;
        }
        let fields: Vec<&str> = text.split(['\t', ',']).map(str::trim).collect();
        let parsed: std::result::Result<Vec<f64>, _> = fields.iter().map(|f| f.parse::<f64>()).collect();
        match parsed {
            Ok(values) if values.len() >= columns => {
                for (col, v) in out.iter_mut().zip(values) {
                    col.push(v);
                }
                header_allowed = false;
            }
            Err(_) if header_allowed => header_allowed = false,
            _ => {
                return Err(Error::Parse {
                    line: idx + 1,
                    message: format!("expected {columns} numeric fields"),
                });
            }
        }
    }
    if out[0].is_empty() {
        return Err(Error::EmptyInput);
    }
    Ok(out)
}

pub fn curve_table(curve: &PdfCurve) -> String {
    render_table(
        &["log_return", "density", "stderr"],
        &[&curve.grid, &curve.density, &curve.stderr],
    )
}

pub fn histogram_table(hist: &EmpiricalHistogram) -> String {
    render_table(
        &["bin_center", "density", "errbar"],
        &[&hist.bin_centers, &hist.density, &hist.errbar],
    )
}

/// Grid, density and standard error read from a curve table.
#[derive(Debug, Clone, PartialEq)]
pub struct CurveTable {
    pub grid: Vec<f64>,
    pub density: Vec<f64>,
    pub stderr: Vec<f64>,
}

pub fn read_curve<R: BufRead>(reader: R) -> Result<CurveTable> {
    let mut cols = parse_table(reader, 3)?;
    let stderr = cols.pop().unwrap_or_default();
    let density = cols.pop().unwrap_or_default();
    let grid = cols.pop().unwrap_or_default();
    crate::integrator::check_grid(&grid)?;
    Ok(CurveTable { grid, density, stderr })
}

/// Rebuilds a histogram from its table. Counts follow from the Poisson
/// error bars as `(density / errbar)^2`.
pub fn read_histogram<R: BufRead>(reader: R) -> Result<EmpiricalHistogram> {
    let cols = parse_table(reader, 3)?;
    let (centers, density, errbar) = (&cols[0], &cols[1], &cols[2]);
    let n = centers.len();
    if n < 2 {
        return Err(Error::InvalidParameter("a histogram needs at least 2 bins".into()));
    }
    crate::integrator::check_grid(centers)?;
    let width = (centers[n - 1] - centers[0]) / (n - 1) as f64;
    let counts: Vec<u64> = density
        .iter()
        .zip(errbar)
        .map(|(d, e)| if *e > 0.0 { (d / e).powi(2).round() as u64 } else { 0 })
        .collect();
    let total: u64 = counts.iter().sum();
    if total == 0 {
        return Err(Error::EmptyInput);
    }
    Ok(EmpiricalHistogram {
        bin_centers: centers.clone(),
        density: density.clone(),
        errbar: errbar.clone(),
        counts,
        range: width * n as f64,
        lower: centers[0] - 0.5 * width,
        sample_count: total as usize,
        out_of_range: 0,
    })
}

/// Ordered `key=value` lines.
#[derive(Debug, Clone, Default, PartialEq)]
pub struct Manifest {
    entries: Vec<(String, String)>,
}

impl Manifest {
    pub fn new() -> Self {
        Self::default()
    }

    pub fn set(&mut self, key: &str, value: impl ToString) -> &mut Self {
        let value = value.to_string().replace('\n', " ");
        match self.entries.iter_mut().find(|(k, _)| k == key) {
            Some(entry) => entry.1 = value,
            None => self.entries.push((key.to_string(), value)),
        }
        self
    }

    pub fn float(&mut self, key: &str, value: f64) -> &mut Self {
        self.set(key, cell(value))
    }

    pub fn get(&self, key: &str) -> Option<&str> {
        self.entries.iter().find(|(k, _)| k == key).map(|(_, v)| v.as_str())
    }

    pub fn entries(&self) -> &[(String, String)] {
        &self.entries
    }

    pub fn render(&self) -> String {
        let mut out = String::new();
        for (k, v) in &self.entries {
            let _ = writeln!(out, "{k}={v}");
        }
        out
    }

    pub fn parse(text: &str) -> Result<Self> {
        let mut m = Self::new();
        for (idx, line) in text.lines().enumerate() {
            let line = line.trim();
            if line.is_empty() || line.starts_with('#') {
                continue;
            }
            let (k, v) = line.split_once('=').ok_or_else(|| Error::Parse {
                line: idx + 1,
                message: "expected key=value".into(),
            })?;
            m.set(k.trim(), v.trim());
        }
        Ok(m)
    }
}

/// Writes `contents` to `dir/name`, creating `dir` if needed.
pub fn write_file(dir: &Path, name: &str, contents: &str) -> Result<()> {
    fs::create_dir_all(dir)?;
    fs::write(dir.join(name), contents)?;
    Ok(())
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn tables_round_trip_bits() {
        let a = [0.1, -1e-300, 3.0];
        let b = [std::f64::consts::PI, 0.0, 1.0 / 3.0];
        let text = render_table(&["a", "b"], &[&a, &b]);
        let cols = parse_table(text.as_bytes(), 2).unwrap();
        assert_eq!(cols[0], a);
        assert_eq!(cols[1], b);
    }

    #[test]
    fn table_errors() {
        assert!(matches!(parse_table("x\ty\n".as_bytes(), 2), Err(Error::EmptyInput)));
        assert!(matches!(
            parse_table("1\t2\n3\n".as_bytes(), 2),
            Err(Error::Parse { line: 2, .. })
        ));
    }

    #[test]
    fn histogram_counts_come_back() {
        let text = "bin_center\tdensity\terrbar\n-0.25\t1.5\t0.8660254037844386\n0.25\t0.5\t0.5\n0.75\t0\t0\n";
        let h = read_histogram(text.as_bytes()).unwrap();
        assert_eq!(h.counts, vec![3, 1, 0]);
        assert_eq!(h.sample_count, 4);
        assert_eq!(h.lower, -0.5);
    }

    #[test]
    fn manifest_round_trip() {
        let mut m = Manifest::new();
        m.set("command", "pdf").float("sigma", 0.035).set("command", "ck");
        let back = Manifest::parse(&m.render()).unwrap();
        assert_eq!(back, m);
        assert_eq!(back.get("command"), Some("ck"));
    }
}
