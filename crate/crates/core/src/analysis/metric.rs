use crate::error::{Error, Result};
use crate::integrator::PdfCurve;

/// Disagreement between two curves at the ends of their shared grid.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct ExtremeMetric {
    /// Mean absolute difference at the lowest and highest grid point.
    pub absolute: f64,
    /// `absolute` over the mean of the four endpoint densities.
    pub relative: f64,
    /// Largest absolute difference anywhere, over the larger peak.
    pub sup_relative: f64,
}

impl ExtremeMetric {
    pub const ZERO: Self = Self {
        absolute: 0.0,
        relative: 0.0,
        sup_relative: 0.0,
    };
}

pub(crate) fn check_same_grid(a: &[f64], b: &[f64]) -> Result<()> {
    if a.len() != b.len() {
        return Err(Error::GridMismatch(format!("{} points against {}", a.len(), b.len())));
    }
    if let Some(i) = a.iter().zip(b).position(|(x, y)| x != y) {
        return Err(Error::GridMismatch(format!("point {i} is {} against {}", a[i], b[i])));
    }
    Ok(())
}

/// Endpoint convergence metric between two curves on an identical grid.
pub fn extreme_price_metric(a: &PdfCurve, b: &PdfCurve) -> Result<ExtremeMetric> {
    check_same_grid(&a.grid, &b.grid)?;
    let n = a.len() - 1;
    let (fa, fb) = (&a.density, &b.density);
    let absolute = 0.5 * ((fa[0] - fb[0]).abs() + (fa[n] - fb[n]).abs());
    let scale = 0.25 * ((fa[0] + fb[0]) + (fa[n] + fb[n]));
    let relative = if absolute == 0.0 { 0.0 } else { absolute / scale };
    let peak = a.peak().1.max(b.peak().1);
    let sup = fa.iter().zip(fb).map(|(x, y)| (x - y).abs()).fold(0.0, f64::max);
    Ok(ExtremeMetric {
        absolute,
        relative,
        sup_relative: if sup == 0.0 { 0.0 } else { sup / peak },
    })
}
