//! With gamma = 1 and p = 2 the path integral is Brownian motion; the
//! computed density should sit on the normal curve.

use pathdensity::integrator::{centered_grid, gaussian_closed_form, trapezoid};
use pathdensity::{pdf_curve, ModelParams, SamplingConfig};

fn main() -> pathdensity::Result<()> {
    let (sigma, rate, horizon) = (0.1, 0.02, 1.0);
    let params = ModelParams::new(1.0, 2.0, sigma, rate, horizon, 10)?;
    let grid = centered_grid(8.0 * sigma, 41, rate * horizon)?;
    let curve = pdf_curve(0.0, &grid, &params, &SamplingConfig::default())?;

    let exact: Vec<f64> = grid
        .iter()
        .map(|&x| gaussian_closed_form(0.0, x, sigma, rate, horizon))
        .collect();
    let mass = trapezoid(&grid, &exact);
    println!("{:>10} {:>12} {:>12} {:>10}", "x", "computed", "normal", "stderr");
    for i in (0..grid.len()).step_by(4) {
        println!(
            "{:>10.4} {:>12.6} {:>12.6} {:>10.2e}",
            grid[i],
            curve.density[i],
            exact[i] / mass,
            curve.stderr[i]
        );
    }
    Ok(())
}
