use crate::error::{Error, Result};
use crate::integrator::{pdf_curve, PdfCurve, SamplingConfig};
use crate::model::ModelParams;

use super::metric::{extreme_price_metric, ExtremeMetric};

/// Curves for several slice counts on one grid, with all pairwise metrics.
#[derive(Debug, Clone)]
pub struct ConvergenceReport {
    pub params: ModelParams,
    pub dims: Vec<usize>,
    pub curves: Vec<PdfCurve>,
    /// `pairwise[i][j]` compares `curves[i]` with `curves[j]`.
    pub pairwise: Vec<Vec<ExtremeMetric>>,
}

impl ConvergenceReport {
    /// Metrics between consecutive entries of `dims`.
    pub fn successive(&self) -> impl Iterator<Item = (usize, usize, ExtremeMetric)> + '_ {
        (1..self.dims.len()).map(move |k| (self.dims[k - 1], self.dims[k], self.pairwise[k - 1][k]))
    }

    /// Largest relative standard error at the two grid ends over all curves.
    pub fn max_endpoint_relative_stderr(&self) -> f64 {
        self.curves
            .iter()
            .flat_map(|c| {
                let n = c.len() - 1;
                [c.stderr[0] / c.density[0], c.stderr[n] / c.density[n]]
            })
            .fold(0.0, f64::max)
    }
}

/// Evaluates the density for every slice count in `dims` on the same grid.
pub fn convergence_study(
    params: &ModelParams,
    dims: &[usize],
    grid: &[f64],
    sampling: &SamplingConfig,
) -> Result<ConvergenceReport> {
    if dims.is_empty() {
        return Err(Error::InvalidParameter("no slice counts given".into()));
    }
    if let Some(&d) = dims.iter().find(|&&d| d < 2) {
        return Err(Error::InvalidParameter(format!(
            "convergence needs at least 2 slices, got {d}"
        )));
    }
    let curves = dims
        .iter()
        .map(|&d| pdf_curve(0.0, grid, &params.with_slices(d)?, sampling))
        .collect::<Result<Vec<_>>>()?;
    let n = dims.len();
    let mut pairwise = vec![vec![ExtremeMetric::ZERO; n]; n];
    for i in 0..n {
        for j in i + 1..n {
            let m = extreme_price_metric(&curves[i], &curves[j])?;
            pairwise[i][j] = m;
            pairwise[j][i] = m;
        }
    }
    Ok(ConvergenceReport {
        params: *params,
        dims: dims.to_vec(),
        curves,
        pairwise,
    })
}
