//! Price sheets, log-returns and normalized return histograms.

use std::io::BufRead;

use chrono::{DateTime, NaiveDate, NaiveDateTime};

use crate::error::{Error, Result};

/// Tolerance on the sampling interval before a pair counts as a gap.
pub const GAP_TOLERANCE: f64 = 0.1;

/// A validated price sheet: strictly increasing timestamps in epoch seconds
/// and positive prices.
#[derive(Debug, Clone, PartialEq)]
pub struct PriceSeries {
    timestamps: Vec<i64>,
    prices: Vec<f64>,
    interval: i64,
}

impl PriceSeries {
    /// Builds a series; `interval` defaults to the median spacing.
    pub fn new(timestamps: Vec<i64>, prices: Vec<f64>, interval: Option<i64>) -> Result<Self> {
        if timestamps.len() != prices.len() {
            return Err(Error::DimensionMismatch {
                expected: timestamps.len(),
                actual: prices.len(),
            });
        }
        if timestamps.len() < 2 {
            return Err(Error::EmptyInput);
        }
        for (i, &p) in prices.iter().enumerate() {
            if !(p > 0.0 && p.is_finite()) {
                return Err(Error::Parse {
                    line: i + 1,
                    message: format!("price must be positive, got {p}"),
                });
            }
        }
        for (i, w) in timestamps.windows(2).enumerate() {
            if w[1] <= w[0] {
                return Err(Error::NonMonotonic {
                    line: i + 2,
                    timestamp: w[1],
                    previous: w[0],
                });
            }
        }
        let interval = match interval {
            Some(tau) if tau > 0 => tau,
            Some(tau) => {
                return Err(Error::InvalidParameter(format!("interval must be positive, got {tau}")));
            }
            None => median_spacing(&timestamps),
        };
        Ok(Self {
            timestamps,
            prices,
            interval,
        })
    }

    pub fn timestamps(&self) -> &[i64] {
        &self.timestamps
    }

    pub fn prices(&self) -> &[f64] {
        &self.prices
    }

    /// Sampling period in seconds.
    pub fn interval(&self) -> i64 {
        self.interval
    }

    pub fn len(&self) -> usize {
        self.prices.len()
    }

    pub fn is_empty(&self) -> bool {
        self.prices.is_empty()
    }

    /// Same series with every price multiplied by `factor`.
    pub fn rescaled(&self, factor: f64) -> Result<Self> {
        Self::new(
            self.timestamps.clone(),
            self.prices.iter().map(|p| p * factor).collect(),
            Some(self.interval),
        )
    }
}

fn median_spacing(ts: &[i64]) -> i64 {
    let mut d: Vec<i64> = ts.windows(2).map(|w| w[1] - w[0]).collect();
    d.sort_unstable();
    d[d.len() / 2]
}

/// Parsing options for [`load_price_sheet`].
#[derive(Debug, Clone, Copy, Default, PartialEq, Eq)]
pub struct SheetOptions {
    /// Field separator; detected from the first data line when absent.
    pub delimiter: Option<char>,
    /// Sampling period in seconds; the median spacing when absent.
    pub interval: Option<i64>,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
enum TimeFormat {
    Epoch,
    Iso,
}

fn parse_epoch(field: &str) -> Option<i64> {
    field.parse::<i64>().ok()
}

fn parse_iso(field: &str) -> Option<i64> {
    if let Ok(t) = DateTime::parse_from_rfc3339(field) {
        return Some(t.timestamp());
    }
    for fmt in [
        "%Y-%m-%dT%H:%M:%S",
        "%Y-%m-%d %H:%M:%S",
        "%Y-%m-%dT%H:%M",
        "%Y-%m-%d %H:%M",
    ] {
        if let Ok(t) = NaiveDateTime::parse_from_str(field, fmt) {
            return Some(t.and_utc().timestamp());
        }
    }
    NaiveDate::parse_from_str(field, "%Y-%m-%d")
        .ok()
        .and_then(|d| d.and_hms_opt(0, 0, 0))
        .map(|t| t.and_utc().timestamp())
}

fn split_fields(line: &str, delimiter: Option<char>) -> Vec<&str> {
    match delimiter {
        None | Some(' ') => line.split_whitespace().collect(),
        Some(c) => line.split(c).map(str::trim).collect(),
    }
}

fn detect_delimiter(line: &str) -> Option<char> {
    [',', '\t', ';'].into_iter().find(|&c| line.contains(c))
}

/// Reads a two-column sheet of `timestamp, price` records.
///
/// Timestamps are integer epoch seconds or ISO-8601, decided once per file
/// from the first data line. A leading line whose first field is neither is
/// taken as a header. Blank lines and lines starting with `#` are skipped.
pub fn load_price_sheet<R: BufRead>(reader: R, options: SheetOptions) -> Result<PriceSeries> {
    let mut delimiter = options.delimiter;
    let mut format = None;
    let mut timestamps = Vec::new();
    let mut prices = Vec::new();
    let mut seen_data = false;

    for (idx, line) in reader.lines().enumerate() {
        let line = line?;
        let lineno = idx + 1;
        let text = line.trim().trim_start_matches('\u{feff}');
        if text.is_empty() || text.starts_with('#') {
            continue;
        }
        if delimiter.is_none() {
            delimiter = detect_delimiter(text);
        }
        let fields = split_fields(text, delimiter);
        let first = fields[0];
        let fmt = match format {
            Some(f) => f,
            None => {
                let detected = if parse_epoch(first).is_some() {
                    Some(TimeFormat::Epoch)
                } else if parse_iso(first).is_some() {
                    Some(TimeFormat::Iso)
                } else {
                    None
                };
                match detected {
                    Some(f) => {
                        format = Some(f);
                        f
                    }
                    None if !seen_data => {
                        // header line; the delimiter is re-detected on data
                        seen_data = true;
                        if options.delimiter.is_none() {
                            delimiter = None;
                        }
                        continue;
                    }
                    None => {
                        return Err(Error::Parse {
                            line: lineno,
                            message: format!("unrecognized timestamp {first:?}"),
                        });
                    }
                }
            }
        };
        seen_data = true;
        if fields.len() < 2 {
            return Err(Error::Parse {
                line: lineno,
                message: "expected a timestamp and a price".into(),
            });
        }
        let t = match fmt {
            TimeFormat::Epoch => parse_epoch(first),
            TimeFormat::Iso => parse_iso(first),
        }
        .ok_or_else(|| Error::Parse {
            line: lineno,
            message: format!("unrecognized timestamp {first:?}"),
        })?;
        let price: f64 = fields[1].parse().map_err(|_| Error::Parse {
            line: lineno,
            message: format!("invalid price {:?}", fields[1]),
        })?;
        if !(price > 0.0 && price.is_finite()) {
            return Err(Error::Parse {
                line: lineno,
                message: format!("price must be positive, got {}", fields[1]),
            });
        }
        if let Some(&prev) = timestamps.last() {
            if t <= prev {
                return Err(Error::NonMonotonic {
                    line: lineno,
                    timestamp: t,
                    previous: prev,
                });
            }
        }
        timestamps.push(t);
        prices.push(price);
    }
    if timestamps.is_empty() {
        return Err(Error::EmptyInput);
    }
    if timestamps.len() < 2 {
        return Err(Error::InvalidParameter(
            "a price sheet needs at least two records".into(),
        ));
    }
    PriceSeries::new(timestamps, prices, options.interval)
}

/// Log-returns at a fixed stride with the pairs dropped across gaps.
#[derive(Debug, Clone, PartialEq)]
pub struct LogReturns {
    pub values: Vec<f64>,
    pub stride: usize,
    pub skipped_gaps: usize,
}

/// `ln(P_i / P_{i-stride})` for every pair whose time separation is within
/// `stride * interval * (1 + GAP_TOLERANCE)`.
pub fn log_returns(series: &PriceSeries, stride: usize) -> Result<LogReturns> {
    if stride == 0 {
        return Err(Error::InvalidParameter("stride must be at least 1".into()));
    }
    if series.len() <= stride {
        return Err(Error::InvalidParameter(format!(
            "a series of {} prices has no returns at stride {stride}",
            series.len()
        )));
    }
    let limit = stride as f64 * series.interval as f64 * (1.0 + GAP_TOLERANCE);
    let (t, p) = (&series.timestamps, &series.prices);
    let mut values = Vec::with_capacity(series.len() - stride);
    let mut skipped_gaps = 0;
    for i in stride..series.len() {
        if (t[i] - t[i - stride]) as f64 > limit {
            skipped_gaps += 1;
        } else {
            values.push((p[i] / p[i - stride]).ln());
        }
    }
    Ok(LogReturns {
        values,
        stride,
        skipped_gaps,
    })
}

/// Where the histogram range is centered.
#[derive(Debug, Clone, Copy, Default, PartialEq, Eq)]
pub enum Centering {
    #[default]
    Zero,
    Mean,
}

impl std::str::FromStr for Centering {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s {
            "zero" => Ok(Self::Zero),
            "mean" => Ok(Self::Mean),
            _ => Err(Error::InvalidParameter(format!("unknown centering {s:?}"))),
        }
    }
}

/// Bin count, total range and centering of a return histogram.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct HistogramConfig {
    pub bins: usize,
    pub range: f64,
    pub centering: Centering,
}

/// Normalized bin densities with Poisson error bars.
#[derive(Debug, Clone, PartialEq)]
pub struct EmpiricalHistogram {
    pub bin_centers: Vec<f64>,
    pub density: Vec<f64>,
    pub errbar: Vec<f64>,
    pub counts: Vec<u64>,
    pub range: f64,
    pub lower: f64,
    pub sample_count: usize,
    pub out_of_range: usize,
}

impl EmpiricalHistogram {
    pub fn bins(&self) -> usize {
        self.counts.len()
    }

    pub fn bin_width(&self) -> f64 {
        self.range / self.bins() as f64
    }

    pub fn upper(&self) -> f64 {
        self.lower + self.range
    }

    /// Sum of density times bin width.
    pub fn mass(&self) -> f64 {
        self.density.iter().sum::<f64>() * self.bin_width()
    }
}

/// Counts returns into `bins` uniform bins of total width `range`; the
/// density of bin j is `C_j / (w * n_in)` and its error bar `sqrt(C_j) / (w * n_in)`.
pub fn build_histogram(returns: &[f64], config: &HistogramConfig) -> Result<EmpiricalHistogram> {
    let HistogramConfig { bins, range, centering } = *config;
    if bins < 2 {
        return Err(Error::InvalidParameter(format!("need at least 2 bins, got {bins}")));
    }
    if !(range > 0.0 && range.is_finite()) {
        return Err(Error::InvalidParameter(format!("range must be positive, got {range}")));
    }
    if returns.is_empty() {
        return Err(Error::EmptyInput);
    }
    let center = match centering {
        Centering::Zero => 0.0,
        Centering::Mean => returns.iter().sum::<f64>() / returns.len() as f64,
    };
    let lower = center - 0.5 * range;
    let width = range / bins as f64;
    let mut counts = vec![0u64; bins];
    let mut out_of_range = 0;
    for &x in returns {
        let u = (x - lower) / width;
        if !(u >= 0.0) || u > bins as f64 {
            out_of_range += 1;
            continue;
        }
        // the upper edge belongs to the last bin
        let j = (u as usize).min(bins - 1);
        counts[j] += 1;
    }
    let inside = returns.len() - out_of_range;
    if inside == 0 {
        return Err(Error::AllOutOfRange(returns.len()));
    }
    let norm = width * inside as f64;
    Ok(EmpiricalHistogram {
        bin_centers: (0..bins).map(|j| lower + (j as f64 + 0.5) * width).collect(),
        density: counts.iter().map(|&c| c as f64 / norm).collect(),
        errbar: counts.iter().map(|&c| (c as f64).sqrt() / norm).collect(),
        counts,
        range,
        lower,
        sample_count: returns.len(),
        out_of_range,
    })
}

#[cfg(test)]
mod tests {
    use super::*;

    fn sheet(text: &str) -> Result<PriceSeries> {
        load_price_sheet(text.as_bytes(), SheetOptions::default())
    }

    #[test]
    fn two_rows() {
        let s = sheet("0,100\n60,105\n").unwrap();
        assert_eq!(s.len(), 2);
        assert_eq!(s.interval(), 60);
        let r = log_returns(&s, 1).unwrap();
        assert!((r.values[0] - 0.048_790_164_169_432).abs() < 1e-12);
    }

    #[test]
    fn header_iso_and_delimiters() {
        let s = sheet("time;close\n2024-01-02T09:30:00;10\n2024-01-02T09:31:00;11\n").unwrap();
        assert_eq!(s.timestamps()[1] - s.timestamps()[0], 60);
        let s = sheet("t price\n0 1.5\n60\t2\n").unwrap();
        assert_eq!(s.prices(), &[1.5, 2.0]);
        let s = sheet("2024-01-02 09:30:00\t3\n2024-01-02 09:35:00\t4\n").unwrap();
        assert_eq!(s.interval(), 300);
        let s = sheet("2024-01-02T09:30:00Z,3\n2024-01-02T09:35:00+00:00,4\n").unwrap();
        assert_eq!(s.interval(), 300);
    }

    #[test]
    fn rejections_carry_line_numbers() {
        assert!(matches!(sheet("0,100\n60,-3\n"), Err(Error::Parse { line: 2, .. })));
        assert!(matches!(sheet("0,100\n60,abc\n"), Err(Error::Parse { line: 2, .. })));
        assert!(matches!(
            sheet("0,100\n60,1\n60,2\n"),
            Err(Error::NonMonotonic { line: 3, .. })
        ));
        assert!(matches!(sheet(""), Err(Error::EmptyInput)));
        assert!(matches!(sheet("time,price\n"), Err(Error::EmptyInput)));
        assert!(matches!(sheet("0,100\nx,1\n"), Err(Error::Parse { line: 2, .. })));
    }

    #[test]
    fn gaps_are_skipped() {
        let s = PriceSeries::new(vec![0, 60, 120, 3600, 3660], vec![1.0, 2.0, 3.0, 4.0, 5.0], None).unwrap();
        let r = log_returns(&s, 1).unwrap();
        assert_eq!(r.values.len(), 3);
        assert_eq!(r.skipped_gaps, 1);
        let r = log_returns(&s, 2).unwrap();
        assert_eq!(r.values.len(), 1);
        assert_eq!(r.skipped_gaps, 2);
        assert!(log_returns(&s, 5).is_err());
    }

    #[test]
    fn four_samples_two_bins() {
        let cfg = HistogramConfig {
            bins: 2,
            range: 1.0,
            centering: Centering::Zero,
        };
        let h = build_histogram(&[-0.1, -0.2, -0.3, -0.4], &cfg).unwrap();
        assert_eq!(h.counts, vec![4, 0]);
        assert_eq!(h.density, vec![2.0, 0.0]);
        assert_eq!(h.errbar, vec![1.0, 0.0]);
        assert_eq!(h.mass(), 1.0);
        assert!(matches!(build_histogram(&[5.0], &cfg), Err(Error::AllOutOfRange(1))));
    }
}
