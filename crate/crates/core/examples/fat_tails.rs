//! Lowering gamma and p fattens the tails. Each curve is printed next to a
//! normal with the same peak height and variance.

use pathdensity::integrator::{centered_grid, trapezoid};
use pathdensity::presets::market_preset;
use pathdensity::{pdf_curve, SamplingConfig};

fn main() -> pathdensity::Result<()> {
    for name in ["sp500-1d", "amazon-1m", "ge-1m"] {
        let preset = market_preset(name)?;
        let params = preset.params(11)?;
        let grid = centered_grid(preset.span, 40, preset.rate)?;
        let curve = pdf_curve(0.0, &grid, &params, &SamplingConfig::default())?;

        let moment = |k: i32| {
            let f: Vec<f64> = grid.iter().zip(&curve.density).map(|(x, f)| x.powi(k) * f).collect();
            trapezoid(&grid, &f)
        };
        let (mean, var) = (moment(1), moment(2) - moment(1).powi(2));
        let peak = curve.peak().1;
        println!("{name}: gamma={} p={} sigma={}", preset.gamma, preset.p, preset.sigma);
        for i in [0, 4, 10, 20] {
            let normal = peak * (-(grid[i] - mean).powi(2) / (2.0 * var)).exp();
            println!(
                "  x={:+.5}  model {:.4e}  normal {:.4e}",
                grid[i], curve.density[i], normal
            );
        }
    }
    Ok(())
}
