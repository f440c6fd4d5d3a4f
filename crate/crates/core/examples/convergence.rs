//! How the density changes as the number of time slices grows.

use pathdensity::analysis::convergence_study;
use pathdensity::integrator::{centered_grid, decade_half_span};
use pathdensity::{ModelParams, SamplingConfig};

fn main() -> pathdensity::Result<()> {
    let sampling = SamplingConfig::default().with_points(1 << 14);
    for (gamma, p, sigma) in [(1.0, 1.5, 0.0037), (0.5, 1.5, 0.015)] {
        let params = ModelParams::new(gamma, p, sigma, 0.0, 1.0, 12)?;
        let half = decade_half_span(&params, 2.0, &sampling)?;
        let grid = centered_grid(2.0 * half, 40, 0.0)?;
        let report = convergence_study(&params, &[6, 8, 10, 12], &grid, &sampling)?;
        println!("gamma={gamma} p={p} sigma={sigma}");
        for (a, b, m) in report.successive() {
            println!("  D={a:>2} -> D={b:>2}: endpoint difference {:.2}%", 100.0 * m.relative);
        }
        println!("  endpoint noise {:.3}%", 100.0 * report.max_endpoint_relative_stderr());
    }
    Ok(())
}
