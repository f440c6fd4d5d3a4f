//! Loads a price sheet, takes log-returns and bins them.
//!
//! Pass a CSV path to use real data; otherwise a synthetic minute series is
//! generated.

use std::fs::File;
use std::io::BufReader;

use pathdensity::market::{build_histogram, load_price_sheet, log_returns, Centering, HistogramConfig, SheetOptions};
use pathdensity::PriceSeries;

fn synthetic() -> pathdensity::Result<PriceSeries> {
    let mut state: u64 = 0x9e37_79b9_7f4a_7c15;
    let mut x: f64 = 100f64.ln();
    let (mut times, mut prices) = (Vec::new(), Vec::new());
    for i in 0..20_000i64 {
        state = state
            .wrapping_mul(6364136223846793005)
            .wrapping_add(1442695040888963407);
        let u = (state >> 11) as f64 / (1u64 << 53) as f64;
        // Laplace steps have fatter tails than normal ones
        x += -0.0005 * (1.0 - 2.0 * (u - 0.5).abs()).ln() * (u - 0.5).signum();
        // skip the night between trading days
        times.push(i + (i / 390) * 1050);
        prices.push(x.exp());
    }
    PriceSeries::new(times.into_iter().map(|t| 60 * t).collect(), prices, None)
}

fn main() -> pathdensity::Result<()> {
    let series = match std::env::args().nth(1) {
        Some(path) => load_price_sheet(BufReader::new(File::open(path)?), SheetOptions::default())?,
        None => synthetic()?,
    };
    for stride in [1, 5] {
        let returns = log_returns(&series, stride)?;
        let cfg = HistogramConfig {
            bins: 30,
            range: 0.006 * (stride as f64).sqrt(),
            centering: Centering::Zero,
        };
        let h = build_histogram(&returns.values, &cfg)?;
        println!(
            "stride {stride}: {} returns, {} gaps skipped, {} outside the range",
            returns.values.len(),
            returns.skipped_gaps,
            h.out_of_range
        );
        for j in (0..h.bins()).step_by(3) {
            println!(
                "  {:+.5} {:>10.3} +- {:.3}",
                h.bin_centers[j], h.density[j], h.errbar[j]
            );
        }
    }
    Ok(())
}
