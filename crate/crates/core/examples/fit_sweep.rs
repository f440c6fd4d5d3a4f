//! Ranks a small parameter grid against a histogram of fat-tailed returns.

use pathdensity::analysis::{parameter_sweep, DEFAULT_ERRBAR_MULTIPLE};
use pathdensity::market::{build_histogram, Centering, HistogramConfig};
use pathdensity::{ModelParams, SamplingConfig};

fn main() -> pathdensity::Result<()> {
    // Student-t-like returns from a ratio of uniforms
    let mut state: u64 = 42;
    let mut next = || {
        state = state
            .wrapping_mul(6364136223846793005)
            .wrapping_add(1442695040888963407);
        (state >> 11) as f64 / (1u64 << 53) as f64
    };
    let returns: Vec<f64> = (0..50_000)
        .map(|_| {
            let (u, v) = (next(), next());
            0.001 * (2.0 * u - 1.0) / v.max(1e-3).sqrt()
        })
        .collect();
    let hist = build_histogram(
        &returns,
        &HistogramConfig {
            bins: 40,
            range: 0.008,
            centering: Centering::Zero,
        },
    )?;

    let mut triples = Vec::new();
    for gamma in [1.0, 0.5] {
        for p in [1.3, 1.7, 2.0] {
            for sigma in [0.001, 0.0015] {
                triples.push((gamma, p, sigma));
            }
        }
    }
    let template = ModelParams::new(1.0, 2.0, 1.0, 0.0, 1.0, 6)?;
    let sampling = SamplingConfig::default().with_points(1 << 12);
    let rows = parameter_sweep(&hist, &triples, &template, 61, &sampling, DEFAULT_ERRBAR_MULTIPLE)?;
    println!(
        "{:>6} {:>5} {:>8} {:>9} {:>7}",
        "gamma", "p", "sigma", "log_rmse", "within"
    );
    for r in &rows {
        println!(
            "{:>6} {:>5} {:>8} {:>9.4} {:>7.2}",
            r.gamma, r.p, r.sigma, r.metrics.log_rmse, r.metrics.within
        );
    }
    Ok(())
}
