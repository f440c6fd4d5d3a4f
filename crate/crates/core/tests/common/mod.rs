use pathdensity::sampling::PointSet;

pub fn reference_points() -> Vec<Vec<f64>> {
    include_str!("../data/sobol_reference_d8_n32.tsv")
        .lines()
        .filter(|l| !l.starts_with('#') && !l.trim().is_empty())
        .map(|l| l.split('\t').map(|v| v.parse().unwrap()).collect())
        .collect()
}

/// Largest gap between the empirical and the true measure over all dyadic
/// boxes `[0, a/2^k) x [0, b/2^k)` with `k <= 6`.
pub fn dyadic_discrepancy(points: &[[f64; 2]]) -> f64 {
    let n = points.len() as f64;
    let mut worst: f64 = 0.0;
    for k in 1..=6 {
        let m = 1u32 << k;
        for a in 1..=m {
            for b in 1..=m {
                let (x, y) = (a as f64 / m as f64, b as f64 / m as f64);
                let inside = points.iter().filter(|p| p[0] < x && p[1] < y).count() as f64;
                worst = worst.max((inside / n - x * y).abs());
            }
        }
    }
    worst
}

pub fn pairs(set: &PointSet) -> Vec<[f64; 2]> {
    set.iter().map(|p| [p[0], p[1]]).collect()
}
