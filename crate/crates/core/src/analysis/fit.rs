use rayon::prelude::*;

use crate::error::{Error, Result};
use crate::integrator::{interpolate_density, pdf_curve, uniform_grid, PdfCurve, SamplingConfig};
use crate::market::EmpiricalHistogram;
use crate::model::ModelParams;

/// Agreement between a model curve and a histogram.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct FitMetrics {
    /// RMS of `ln(model) - ln(data)` over bins with counts.
    pub log_rmse: f64,
    /// Fraction of all bins where the model lies within `errbar_multiple` error bars.
    pub within: f64,
    /// Same fraction on the central third of the bins.
    pub within_central: f64,
    /// Same fraction on the two outer thirds together.
    pub within_outer: f64,
    /// Sum of squared standardized residuals over all bins.
    pub chi2: f64,
    pub bins_used: usize,
    pub bins: usize,
}

/// Error-bar multiple used for the within-error-bar fractions.
pub const DEFAULT_ERRBAR_MULTIPLE: f64 = 2.0;

/// Interpolates the curve at every bin center and scores it against the data.
///
/// An empty bin is given the error bar of a single count, so a model that
/// predicts a fraction of a count there is still compatible with it.
pub fn compare_model_to_data(hist: &EmpiricalHistogram, curve: &PdfCurve, errbar_multiple: f64) -> Result<FitMetrics> {
    compare_densities(hist, &curve.grid, &curve.density, errbar_multiple)
}

pub(crate) fn compare_densities(
    hist: &EmpiricalHistogram,
    grid: &[f64],
    density: &[f64],
    errbar_multiple: f64,
) -> Result<FitMetrics> {
    let n = hist.bins();
    let (lo, hi) = (hist.bin_centers[0], hist.bin_centers[n - 1]);
    let slack = 1e-9 * hist.bin_width();
    if grid[0] > lo + slack || grid[grid.len() - 1] < hi - slack {
        return Err(Error::Coverage {
            grid_lo: grid[0],
            grid_hi: grid[grid.len() - 1],
            hist_lo: lo,
            hist_hi: hi,
        });
    }
    let clamp = |x: f64| x.clamp(grid[0], grid[grid.len() - 1]);
    let one_count = 1.0 / (hist.bin_width() * (hist.sample_count - hist.out_of_range) as f64);

    let (mut sq, mut used, mut chi2) = (0.0, 0usize, 0.0);
    let mut inside = [0usize; 2];
    let mut totals = [0usize; 2];
    let third = n / 3;
    for j in 0..n {
        let model = interpolate_density(grid, density, clamp(hist.bin_centers[j])).expect("clamped into the grid");
        let data = hist.density[j];
        let err = if hist.counts[j] == 0 { one_count } else { hist.errbar[j] };
        if hist.counts[j] > 0 && model > 0.0 {
            sq += (model.ln() - data.ln()).powi(2);
            used += 1;
        }
        let z = (model - data) / err;
        chi2 += z * z;
        let region = usize::from(j >= third && j < n - third);
        totals[region] += 1;
        if (model - data).abs() <= errbar_multiple * err {
            inside[region] += 1;
        }
    }
    let frac = |a: usize, b: usize| if b == 0 { 0.0 } else { a as f64 / b as f64 };
    Ok(FitMetrics {
        log_rmse: if used == 0 {
            f64::INFINITY
        } else {
            (sq / used as f64).sqrt()
        },
        within: frac(inside[0] + inside[1], n),
        within_central: frac(inside[1], totals[1]),
        within_outer: frac(inside[0], totals[0]),
        chi2,
        bins_used: used,
        bins: n,
    })
}

/// One evaluated parameter triple.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct SweepRow {
    pub gamma: f64,
    pub p: f64,
    pub sigma: f64,
    pub metrics: FitMetrics,
}

/// Fits every `(gamma, p, sigma)` triple to the histogram, keeping the rate,
/// horizon and slice count of `template`. The model grid spans the histogram
/// range with `grid_points` nodes. Rows come back sorted by log-RMSE, ties
/// in input order.
pub fn parameter_sweep(
    hist: &EmpiricalHistogram,
    triples: &[(f64, f64, f64)],
    template: &ModelParams,
    grid_points: usize,
    sampling: &SamplingConfig,
    errbar_multiple: f64,
) -> Result<Vec<SweepRow>> {
    if triples.is_empty() {
        return Err(Error::InvalidParameter("empty parameter grid".into()));
    }
    let grid = uniform_grid(hist.lower, hist.upper(), grid_points)?;
    let mut rows = triples
        .par_iter()
        .map(|&(gamma, p, sigma)| {
            let params = ModelParams::new(gamma, p, sigma, template.rate(), template.horizon(), template.slices())?;
            let curve = pdf_curve(0.0, &grid, &params, sampling)?;
            Ok(SweepRow {
                gamma,
                p,
                sigma,
                metrics: compare_model_to_data(hist, &curve, errbar_multiple)?,
            })
        })
        .collect::<Result<Vec<_>>>()?;
    rows.sort_by(|a, b| a.metrics.log_rmse.total_cmp(&b.metrics.log_rmse));
    Ok(rows)
}
