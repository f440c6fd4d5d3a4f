//! Sobol points, their random shifts, and a crude comparison with
//! pseudo-random points.

use pathdensity::sampling::{cmc_points, sobol_batch, sobol_points};

fn main() -> pathdensity::Result<()> {
    let pts = sobol_points(3, 8)?;
    for p in pts.iter() {
        println!("{p:?}");
    }

    let batch = sobol_batch(3, 8, 2, 7)?;
    println!("shift of replica 1: {:?}", batch.shift(1));

    // error of the unit-square mean of x*y, exact value 1/4
    for n in [256, 1024, 4096] {
        let mean = |set: &pathdensity::sampling::PointSet| set.iter().map(|p| p[0] * p[1]).sum::<f64>() / n as f64;
        let qmc = mean(&sobol_points(2, n)?) - 0.25;
        let mc = mean(&cmc_points(2, n, 1)?.replica(0)) - 0.25;
        println!("n={n:>5}: sobol {qmc:+.2e}  pseudo-random {mc:+.2e}");
    }
    Ok(())
}
