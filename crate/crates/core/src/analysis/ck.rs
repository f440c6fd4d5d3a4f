use crate::error::{Error, Result};
use crate::integrator::{outside_mass_fraction, pdf_curve, trapezoid, PdfCurve, SamplingConfig};
use crate::model::ModelParams;

/// Default number of intermediate log-price nodes.
pub const DEFAULT_CK_MESH: usize = 81;

/// Direct density against the two-step composition through time `K`.
#[derive(Debug, Clone)]
pub struct CkReport {
    pub direct: PdfCurve,
    /// Composition, normalized on the direct grid.
    pub composed: Vec<f64>,
    pub composed_stderr: Vec<f64>,
    /// `|direct - composed|` per grid point.
    pub residual: Vec<f64>,
    /// `residual` over the combined standard error.
    pub z: Vec<f64>,
    /// Slice counts of the first and second leg.
    pub split: (usize, usize),
    /// Intermediate log-returns and the first-leg density on them.
    pub intermediate: Vec<f64>,
    pub first_leg: Vec<f64>,
    pub max_residual: f64,
    pub mean_residual: f64,
    pub max_z: f64,
    pub composed_mass: f64,
    pub warnings: Vec<String>,
}

fn check_uniform(grid: &[f64]) -> Result<f64> {
    let h = (grid[grid.len() - 1] - grid[0]) / (grid.len() - 1) as f64;
    for (k, w) in grid.windows(2).enumerate() {
        if ((w[1] - w[0]) - h).abs() > 1e-9 * h {
            return Err(Error::InvalidParameter(format!(
                "composition needs a uniform grid; step {k} is {} against {h}",
                w[1] - w[0]
            )));
        }
    }
    Ok(h)
}

/// Compares the density over `[0, T]` with the composition of the densities
/// over `[0, K]` and `[K, T]`.
///
/// Both legs keep the time step of the direct problem: the first gets
/// `round(D * split)` slices and the second the rest. The intermediate grid has
/// `mesh` nodes with the spacing of `grid` so every difference `x - y` lands on
/// one lattice, on which the second leg is evaluated. Each leg is normalized
/// on its own nodes and uses its own seed offset, so the three estimates are
/// independent.
pub fn ck_residual(
    params: &ModelParams,
    split: f64,
    grid: &[f64],
    mesh: usize,
    sampling: &SamplingConfig,
) -> Result<CkReport> {
    if !(split > 0.0 && split < 1.0) {
        return Err(Error::InvalidParameter(format!(
            "split must lie in (0, 1), got {split}"
        )));
    }
    if mesh < 3 {
        return Err(Error::InvalidParameter(format!(
            "intermediate mesh needs 3 nodes, got {mesh}"
        )));
    }
    let d = params.slices();
    if d < 2 {
        return Err(Error::InvalidParameter("composition needs at least 2 slices".into()));
    }
    let d1 = ((d as f64 * split).round() as usize).clamp(1, d - 1);
    let d2 = d - d1;
    let dt = params.dt();
    let first = params.with_horizon(d1 as f64 * dt, d1)?;
    let second = params.with_horizon(d2 as f64 * dt, d2)?;

    let direct = pdf_curve(0.0, grid, params, sampling)?;
    let h = check_uniform(grid)?;
    let g = grid.len();

    // intermediate nodes around the first leg's drift point
    let half = (mesh - 1) as f64 / 2.0;
    let y0 = first.rate() * first.horizon() - half * h;
    let ys: Vec<f64> = (0..mesh).map(|k| y0 + k as f64 * h).collect();
    // x_i - y_k = z0 + (i - k + mesh - 1) h
    let z0 = grid[0] - ys[mesh - 1];
    let zs: Vec<f64> = (0..g + mesh - 1).map(|m| z0 + m as f64 * h).collect();

    let leg1 = pdf_curve(0.0, &ys, &first, &sampling.with_seed(sampling.seed.wrapping_add(1)))?;
    let leg2 = pdf_curve(0.0, &zs, &second, &sampling.with_seed(sampling.seed.wrapping_add(2)))?;

    let mut warnings = Vec::new();
    let outside = outside_mass_fraction(&ys, &leg1.density);
    if outside > 0.01 {
        warnings.push(format!(
            "about {:.1}% of the first leg lies outside the intermediate grid",
            100.0 * outside
        ));
    }

    let mut raw = vec![0.0; g];
    let mut var = vec![0.0; g];
    for i in 0..g {
        let (mut s, mut v) = (0.0, 0.0);
        for k in 0..mesh {
            let w = if k == 0 || k == mesh - 1 { 0.5 * h } else { h };
            let m = i + mesh - 1 - k;
            let (p1, e1) = (leg1.density[k], leg1.stderr[k]);
            let (p2, e2) = (leg2.density[m], leg2.stderr[m]);
            s += w * p1 * p2;
            v += (w * e1 * p2).powi(2) + (w * p1 * e2).powi(2);
        }
        raw[i] = s;
        var[i] = v;
    }
    let mass = trapezoid(grid, &raw);
    if !(mass > 0.0 && mass.is_finite()) {
        return Err(Error::Numeric(format!("composed density has mass {mass}")));
    }
    let composed: Vec<f64> = raw.iter().map(|v| v / mass).collect();
    let composed_stderr: Vec<f64> = var.iter().map(|v| v.sqrt() / mass).collect();
    let residual: Vec<f64> = direct
        .density
        .iter()
        .zip(&composed)
        .map(|(a, b)| (a - b).abs())
        .collect();
    let z: Vec<f64> = residual
        .iter()
        .zip(&direct.stderr)
        .zip(&composed_stderr)
        .map(|((r, e1), e2)| {
            let e = e1.hypot(*e2);
            if *r == 0.0 {
                0.0
            } else {
                r / e
            }
        })
        .collect();
    let peak = direct.peak().1;
    Ok(CkReport {
        composed_mass: trapezoid(grid, &composed),
        max_residual: residual.iter().fold(0.0, |a: f64, &b| a.max(b)) / peak,
        mean_residual: residual.iter().sum::<f64>() / g as f64 / peak,
        max_z: z.iter().fold(0.0, |a: f64, &b| a.max(b)),
        direct,
        composed,
        composed_stderr,
        residual,
        z,
        split: (d1, d2),
        intermediate: ys,
        first_leg: leg1.density,
        warnings,
    })
}
