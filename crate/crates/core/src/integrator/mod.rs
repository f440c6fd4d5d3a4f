//! Finite-dimensional approximation of the transition density of the
//! log-price, evaluated on a grid of final log-returns and normalized on that
//! grid.

mod kernel;
mod oracle;

use rayon::prelude::*;

pub use kernel::{default_half_width, radial_kernel, straight_line_box, transition_kernel, KernelEstimate};
pub use oracle::{gaussian_closed_form, quadrature_oracle, quadrature_oracle_in, ORACLE_MAX_SLICES};

use crate::error::{Error, Result};
use crate::model::ModelParams;
use crate::sampling::{cmc_points, sobol_batch, GeneratorKind, SampleBatch, DEFAULT_REPLICAS};
use kernel::{RadialDraws, RadialModel};

/// Grid size used when none is given.
pub const DEFAULT_GRID_POINTS: usize = 40;
/// Points per replica used when none is given.
pub const DEFAULT_POINTS: usize = 1 << 16;
/// Tail mass (fraction of the total) above which a curve carries a warning.
pub const OUTSIDE_MASS_WARNING: f64 = 0.01;

/// How unit-cube points are turned into paths.
#[derive(Debug, Clone, Copy, PartialEq)]
pub enum Scheme {
    /// Straight-line bridge with a radial proposal; needs `D` coordinates.
    Radial,
    /// Uniform box around the straight line; needs `D - 1` coordinates.
    /// `None` selects [`default_half_width`].
    Box { half_width: Option<f64>, clip: Option<f64> },
}

impl Scheme {
    pub fn name(&self) -> &'static str {
        match self {
            Scheme::Radial => "radial",
            Scheme::Box { .. } => "box",
        }
    }

    /// Dimension of the unit-cube points the scheme consumes.
    pub fn batch_dim(&self, params: &ModelParams) -> usize {
        match self {
            Scheme::Radial => params.slices(),
            Scheme::Box { .. } => params.intermediate_dim(),
        }
    }

    pub fn half_width(&self, params: &ModelParams) -> Option<f64> {
        match *self {
            Scheme::Radial => None,
            Scheme::Box { half_width, clip } => Some(half_width.unwrap_or_else(|| default_half_width(params, clip))),
        }
    }
}

/// Sample sizes, seed and scheme for one integration run.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct SamplingConfig {
    pub points: usize,
    pub replicas: usize,
    pub seed: u64,
    pub sampler: GeneratorKind,
    pub scheme: Scheme,
}

impl Default for SamplingConfig {
    fn default() -> Self {
        Self {
            points: DEFAULT_POINTS,
            replicas: DEFAULT_REPLICAS,
            seed: 0,
            sampler: GeneratorKind::SobolShifted,
            scheme: Scheme::Radial,
        }
    }
}

impl SamplingConfig {
    pub fn with_points(mut self, points: usize) -> Self {
        self.points = points;
        self
    }

    pub fn with_seed(mut self, seed: u64) -> Self {
        self.seed = seed;
        self
    }

    pub fn with_scheme(mut self, scheme: Scheme) -> Self {
        self.scheme = scheme;
        self
    }

    /// Batch for the given point dimension.
    pub fn batch(&self, dim: usize) -> Result<SampleBatch> {
        match self.sampler {
            GeneratorKind::SobolShifted => sobol_batch(dim, self.points, self.replicas, self.seed),
            GeneratorKind::CrudeMc => cmc_points(dim, self.points, self.seed),
        }
    }
}

/// Unnormalized kernel estimates at the given final log-returns.
///
/// All targets share one sample batch, so neighbouring grid points see the
/// same quasi-random paths. Work is split over targets; each sum runs in a
/// fixed order, so results do not depend on the thread count.
pub fn kernel_estimates(
    log_returns: &[f64],
    params: &ModelParams,
    sampling: &SamplingConfig,
) -> Result<Vec<KernelEstimate>> {
    if params.slices() == 1 {
        let e = params.exponent();
        return Ok(log_returns
            .iter()
            .map(|&l| KernelEstimate {
                value: (-e.of_increments([l])).exp(),
                stderr: 0.0,
            })
            .collect());
    }
    let batch = sampling.batch(sampling.scheme.batch_dim(params))?;
    match sampling.scheme {
        Scheme::Radial => {
            let model = RadialModel::new(params);
            let plans: Vec<_> = log_returns.par_iter().map(|&l| model.plan(l)).collect();
            let mut sums = vec![Vec::with_capacity(batch.replicas()); log_returns.len()];
            for r in 0..batch.replicas() {
                let draws = RadialDraws::new(&batch, r, params.slices());
                let replica: Vec<(f64, f64)> = plans.par_iter().map(|plan| model.sums(plan, &draws)).collect();
                for (acc, s) in sums.iter_mut().zip(replica) {
                    acc.push(s);
                }
            }
            Ok(plans
                .iter()
                .zip(&sums)
                .map(|(plan, s)| kernel::combine(batch.kind(), batch.points_per_replica(), s, model.scale_factor(plan)))
                .collect())
        }
        Scheme::Box { .. } => {
            let w = sampling.scheme.half_width(params).expect("box scheme has a width");
            log_returns
                .par_iter()
                .map(|&l| {
                    let bx = straight_line_box(0.0, l, params, w)?;
                    transition_kernel(0.0, l, params, &batch, &bx)
                })
                .collect()
        }
    }
}

/// Normalized density of the final log-return on a grid.
#[derive(Debug, Clone, PartialEq)]
pub struct PdfCurve {
    /// Initial log-price; carried as a label only.
    pub x0: f64,
    /// Final log-returns `x_T - x_0`, strictly increasing.
    pub grid: Vec<f64>,
    pub density: Vec<f64>,
    pub stderr: Vec<f64>,
    pub params: ModelParams,
    pub meta: CurveMeta,
    pub warnings: Vec<String>,
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct CurveMeta {
    pub points: usize,
    pub replicas: usize,
    pub seed: u64,
    pub sampler: GeneratorKind,
    pub scheme: Scheme,
    pub half_width: Option<f64>,
    /// Trapezoid integral of the unnormalized kernel over the grid.
    pub raw_mass: f64,
    /// Estimated fraction of the mass beyond the grid ends.
    pub outside_mass: f64,
}

impl PdfCurve {
    pub fn len(&self) -> usize {
        self.grid.len()
    }

    pub fn is_empty(&self) -> bool {
        self.grid.is_empty()
    }

    /// Trapezoid integral of the density over the grid.
    pub fn mass(&self) -> f64 {
        trapezoid(&self.grid, &self.density)
    }

    /// Linear interpolation in log-density (linear where a value is zero).
    /// `None` outside the grid.
    pub fn interpolate(&self, x: f64) -> Option<f64> {
        interpolate_density(&self.grid, &self.density, x)
    }

    pub fn peak(&self) -> (f64, f64) {
        self.grid.iter().zip(&self.density).fold(
            (f64::NAN, f64::NEG_INFINITY),
            |a, (&x, &y)| if y > a.1 { (x, y) } else { a },
        )
    }
}

/// Evaluates and normalizes the transition density at every grid point.
pub fn pdf_curve(x0: f64, grid: &[f64], params: &ModelParams, sampling: &SamplingConfig) -> Result<PdfCurve> {
    check_grid(grid)?;
    let estimates = kernel_estimates(grid, params, sampling)?;
    let raw: Vec<f64> = estimates.iter().map(|e| e.value).collect();
    let mass = trapezoid(grid, &raw);
    if !(mass > 0.0 && mass.is_finite()) {
        return Err(Error::Numeric(format!(
            "unnormalized density has mass {mass} on the grid [{}, {}]",
            grid[0],
            grid[grid.len() - 1]
        )));
    }
    let density: Vec<f64> = raw.iter().map(|v| v / mass).collect();
    let stderr = estimates.iter().map(|e| e.stderr / mass).collect();
    let outside = outside_mass_fraction(grid, &density);
    let mut warnings = Vec::new();
    if outside > OUTSIDE_MASS_WARNING {
        warnings.push(format!(
            "about {:.1}% of the mass lies outside the grid [{}, {}]",
            100.0 * outside,
            grid[0],
            grid[grid.len() - 1]
        ));
    }
    let batch_points = match sampling.sampler {
        GeneratorKind::SobolShifted => sampling.replicas,
        GeneratorKind::CrudeMc => 1,
    };
    Ok(PdfCurve {
        x0,
        grid: grid.to_vec(),
        density,
        stderr,
        params: *params,
        meta: CurveMeta {
            points: sampling.points,
            replicas: batch_points,
            seed: sampling.seed,
            sampler: sampling.sampler,
            scheme: sampling.scheme,
            half_width: sampling.scheme.half_width(params),
            raw_mass: mass,
            outside_mass: outside,
        },
        warnings,
    })
}

/// Half-width around the drift point `r T` at which the unnormalized density
/// has fallen `decades` orders of magnitude below its value at `r T`.
///
/// Found by doubling then bisection on a small fixed sample, so the result is
/// deterministic but only accurate to a few percent.
pub fn decade_half_span(params: &ModelParams, decades: f64, sampling: &SamplingConfig) -> Result<f64> {
    if !(decades > 0.0 && decades.is_finite()) {
        return Err(Error::InvalidParameter(format!(
            "decades must be positive, got {decades}"
        )));
    }
    let probe = SamplingConfig {
        points: sampling.points.min(1 << 12),
        ..*sampling
    };
    let center = params.rate() * params.horizon();
    let target = -decades * std::f64::consts::LN_10;
    let peak = kernel_estimates(&[center], params, &probe)?[0].value;
    if !(peak > 0.0) {
        return Err(Error::Numeric("density vanishes at the drift point".into()));
    }
    let drop = |s: f64| -> Result<f64> {
        let v = kernel_estimates(&[center - s, center + s], params, &probe)?;
        Ok((0.5 * (v[0].value + v[1].value) / peak).ln())
    };
    let mut hi = params.sigma() * params.horizon().sqrt();
    let mut lo = 0.0;
    let mut doublings = 0;
    while drop(hi)? > target {
        lo = hi;
        hi *= 2.0;
        doublings += 1;
        if doublings > 60 {
            return Err(Error::Numeric("density does not decay".into()));
        }
    }
    for _ in 0..40 {
        let mid = 0.5 * (lo + hi);
        if drop(mid)? > target {
            lo = mid;
        } else {
            hi = mid;
        }
    }
    Ok(0.5 * (lo + hi))
}

pub(crate) fn check_grid(grid: &[f64]) -> Result<()> {
    if grid.len() < 2 {
        return Err(Error::InvalidParameter(format!(
            "a grid needs at least two points, got {}",
            grid.len()
        )));
    }
    if grid.iter().any(|x| !x.is_finite()) || grid.windows(2).any(|w| w[1] <= w[0]) {
        return Err(Error::InvalidParameter(
            "grid must be finite and strictly increasing".into(),
        ));
    }
    Ok(())
}

/// `count` equally spaced points from `lo` to `hi` inclusive.
pub fn uniform_grid(lo: f64, hi: f64, count: usize) -> Result<Vec<f64>> {
    if count < 2 || !(hi > lo) || !lo.is_finite() || !hi.is_finite() {
        return Err(Error::InvalidParameter(format!(
            "cannot build a grid of {count} points on [{lo}, {hi}]"
        )));
    }
    let h = (hi - lo) / (count - 1) as f64;
    Ok((0..count)
        .map(|i| if i == count - 1 { hi } else { lo + h * i as f64 })
        .collect())
}

/// Grid of `count` points of total width `span` centered on `center`.
pub fn centered_grid(span: f64, count: usize, center: f64) -> Result<Vec<f64>> {
    if !(span > 0.0) {
        return Err(Error::InvalidParameter(format!("span must be positive, got {span}")));
    }
    uniform_grid(center - 0.5 * span, center + 0.5 * span, count)
}

/// Trapezoid rule on an arbitrary grid.
pub fn trapezoid(grid: &[f64], values: &[f64]) -> f64 {
    grid.windows(2)
        .zip(values.windows(2))
        .map(|(x, y)| 0.5 * (x[1] - x[0]) * (y[0] + y[1]))
        .sum()
}

pub(crate) fn interpolate_density(grid: &[f64], values: &[f64], x: f64) -> Option<f64> {
    let n = grid.len();
    if n == 0 || x < grid[0] || x > grid[n - 1] {
        return None;
    }
    let k = match grid.binary_search_by(|g| g.partial_cmp(&x).unwrap()) {
        Ok(k) => return Some(values[k]),
        Err(k) => k,
    };
    let (x0, x1) = (grid[k - 1], grid[k]);
    let (y0, y1) = (values[k - 1], values[k]);
    let t = (x - x0) / (x1 - x0);
    if y0 > 0.0 && y1 > 0.0 {
        Some((y0.ln() + t * (y1.ln() - y0.ln())).exp())
    } else {
        Some(y0 + t * (y1 - y0))
    }
}

/// Fraction of the total mass beyond the grid ends, extrapolating each end
/// with the exponential decay of its last two values.
pub fn outside_mass_fraction(grid: &[f64], density: &[f64]) -> f64 {
    let n = grid.len();
    let inside = trapezoid(grid, density);
    let tail = |end: usize, next: usize| -> f64 {
        let (f_end, f_next) = (density[end], density[next]);
        let h = (grid[next] - grid[end]).abs();
        if f_end <= 0.0 {
            0.0
        } else if f_next > f_end {
            f_end * h / (f_next / f_end).ln()
        } else {
            // no decay at the edge: the tail is at least as heavy as the grid
            f_end * (grid[n - 1] - grid[0])
        }
    };
    let outside = tail(0, 1) + tail(n - 1, n - 2);
    outside / (inside + outside)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn grids() {
        let g = centered_grid(0.011, 40, 0.0).unwrap();
        assert_eq!(g.len(), 40);
        assert!((g[0] + 0.0055).abs() < 1e-15);
        assert_eq!(g[39], 0.0055);
        assert!(uniform_grid(1.0, 0.0, 5).is_err());
        assert!(uniform_grid(0.0, 1.0, 1).is_err());
        assert!(check_grid(&[0.0, 0.0, 1.0]).is_err());
        assert!(check_grid(&[0.0]).is_err());
    }

    #[test]
    fn trapezoid_is_exact_for_lines() {
        let g = [0.0, 0.5, 2.0];
        assert!((trapezoid(&g, &[1.0, 2.0, 5.0]) - 6.0).abs() < 1e-15);
    }

    #[test]
    fn log_interpolation() {
        let g = [0.0, 1.0];
        let v = [1.0, std::f64::consts::E.powi(-2)];
        let mid = interpolate_density(&g, &v, 0.5).unwrap();
        assert!((mid - (-1.0f64).exp()).abs() < 1e-15);
        assert_eq!(interpolate_density(&g, &v, 1.5), None);
        assert_eq!(interpolate_density(&g, &[0.0, 2.0], 0.25), Some(0.5));
    }

    #[test]
    fn outside_mass_of_a_truncated_exponential() {
        // e^{-|x|} on [-3, 3]: true outside fraction is e^{-3}
        let g = uniform_grid(-3.0, 3.0, 601).unwrap();
        let d: Vec<f64> = g.iter().map(|x: &f64| (-x.abs()).exp()).collect();
        let f = outside_mass_fraction(&g, &d);
        assert!((f - (-3.0f64).exp()).abs() < 1e-3, "{f}");
        let flat = vec![1.0; 601];
        assert!(outside_mass_fraction(&g, &flat) > 0.4);
    }
}
