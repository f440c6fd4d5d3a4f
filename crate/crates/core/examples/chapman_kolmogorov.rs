//! Composing two half-horizon densities reproduces the full one only when
//! the process is Markovian, i.e. gamma = 1.

use pathdensity::analysis::{ck_residual, DEFAULT_CK_MESH};
use pathdensity::integrator::{centered_grid, decade_half_span};
use pathdensity::{ModelParams, SamplingConfig};

fn main() -> pathdensity::Result<()> {
    let sampling = SamplingConfig::default().with_points(1 << 14);
    for (gamma, p, sigma) in [(1.0, 2.0, 0.1), (1.0, 1.5, 0.0037), (0.5, 1.5, 0.015)] {
        let params = ModelParams::new(gamma, p, sigma, 0.0, 1.0, 8)?;
        let half = decade_half_span(&params, 2.0, &sampling)?;
        let grid = centered_grid(2.0 * half, 40, 0.0)?;
        let r = ck_residual(&params, 0.5, &grid, DEFAULT_CK_MESH, &sampling)?;
        println!(
            "gamma={gamma} p={p}: max residual {:.2e} of the peak, {:.1} standard errors",
            r.max_residual, r.max_z
        );
    }
    Ok(())
}
