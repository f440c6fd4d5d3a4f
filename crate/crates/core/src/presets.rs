//! Named parameter sets for the market fits and the slice-count studies.

use crate::error::{Error, Result};
use crate::model::ModelParams;

/// Model parameters and histogram layout fitted to one market and time scale.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct MarketPreset {
    pub name: &'static str,
    /// Sampling interval the fit refers to.
    pub label: &'static str,
    pub gamma: f64,
    pub p: f64,
    pub sigma: f64,
    pub rate: f64,
    /// Total log-return span of the plot and the histogram.
    pub span: f64,
    pub bins: usize,
}

impl MarketPreset {
    /// Model with `T = 1` in units of the sampling interval.
    pub fn params(&self, slices: usize) -> Result<ModelParams> {
        ModelParams::new(self.gamma, self.p, self.sigma, self.rate, 1.0, slices)
    }
}

#[allow(clippy::too_many_arguments)]
const fn market(
    name: &'static str,
    label: &'static str,
    gamma: f64,
    p: f64,
    sigma: f64,
    rate: f64,
    span: f64,
    bins: usize,
) -> MarketPreset {
    MarketPreset {
        name,
        label,
        gamma,
        p,
        sigma,
        rate,
        span,
        bins,
    }
}

pub const MARKET_PRESETS: [MarketPreset; 13] = [
    market("amazon-1m", "1m", 0.15, 1.15, 0.035, 0.0, 0.011, 120),
    market("ge-1m", "1m", 0.15, 1.15, 0.0326, 0.0, 0.014, 120),
    market("apple-1m", "1m", 0.15, 1.15, 0.0321, 0.0, 0.009, 120),
    market("amazon-5m", "5m", 0.2, 1.2, 0.0119, 0.0, 0.016, 75),
    market("ge-5m", "5m", 0.2, 1.2, 0.0111, 0.0, 0.014, 77),
    market("apple-5m", "5m", 0.2, 1.2, 0.0107, 0.0, 0.011, 75),
    market("amazon-30m", "30m", 0.23, 1.23, 0.00945, -0.0001, 0.034, 11),
    market("ge-30m", "30m", 0.23, 1.23, 0.0099, 0.0002, 0.04, 17),
    market("apple-30m", "30m", 0.23, 1.23, 0.0094, -0.00015, 0.034, 11),
    market("dowjones-1d", "1d", 0.35, 1.35, 0.062, 0.0005, 0.12, 70),
    market("sp500-1d", "1d", 0.35, 1.35, 0.062, 0.0005, 0.12, 70),
    market("dowjones-7d", "7d", 0.42, 1.42, 0.023, 0.002, 0.14, 50),
    market("sp500-7d", "7d", 0.42, 1.42, 0.023, 0.002, 0.14, 50),
];

/// Looks a market preset up by name.
pub fn market_preset(name: &str) -> Result<&'static MarketPreset> {
    MARKET_PRESETS.iter().find(|m| m.name == name).ok_or_else(|| {
        let names: Vec<&str> = MARKET_PRESETS.iter().map(|m| m.name).collect();
        Error::InvalidParameter(format!("unknown preset {name:?}; known: {}", names.join(", ")))
    })
}

/// `(gamma, p, sigma)` triples used to study convergence in the slice count
/// with `gamma = 1`.
pub const CONVERGENCE_GAMMA_ONE: [(f64, f64, f64); 3] = [(1.0, 1.2, 0.0027), (1.0, 1.5, 0.0037), (1.0, 1.7, 0.004)];

/// Same for `gamma < 1` and one `gamma = 0.8` case.
pub const CONVERGENCE_GAMMA_BELOW_ONE: [(f64, f64, f64); 5] = [
    (0.5, 1.5, 0.015),
    (0.2, 1.3, 0.014),
    (0.29, 1.275, 0.013),
    (0.8, 1.7, 0.0085),
    (0.4, 1.4, 0.014),
];

/// Log-return span of the `gamma = 1` convergence plots.
pub const CONVERGENCE_SPAN: f64 = 0.16;

/// Standard deviation of the Gaussian drawn over the convergence plots.
pub const CONVERGENCE_REFERENCE_SIGMA: f64 = 0.00128;
