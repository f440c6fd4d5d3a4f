use pathdensity::analysis::{
    ck_residual, compare_model_to_data, convergence_study, extreme_price_metric, parameter_sweep,
    DEFAULT_ERRBAR_MULTIPLE,
};
use pathdensity::integrator::{centered_grid, decade_half_span, uniform_grid};
use pathdensity::market::{build_histogram, Centering, EmpiricalHistogram, HistogramConfig};
use pathdensity::{pdf_curve, Error, ModelParams, PdfCurve, SamplingConfig};
use proptest::prelude::*;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use rand_distr::{Distribution, Normal};

fn small() -> SamplingConfig {
    SamplingConfig::default().with_points(1 << 12)
}

fn curve(gamma: f64, p: f64, sigma: f64, slices: usize, grid: &[f64]) -> PdfCurve {
    let prm = ModelParams::new(gamma, p, sigma, 0.0, 1.0, slices).unwrap();
    pdf_curve(0.0, grid, &prm, &small()).unwrap()
}

fn gaussian_hist(sd: f64, n: usize, bins: usize, seed: u64) -> EmpiricalHistogram {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let normal = Normal::new(0.0, sd).unwrap();
    let xs: Vec<f64> = (0..n).map(|_| normal.sample(&mut rng)).collect();
    build_histogram(
        &xs,
        &HistogramConfig {
            bins,
            range: 8.0 * sd,
            centering: Centering::Zero,
        },
    )
    .unwrap()
}

/// Histogram-shaped curve: one grid point per bin center.
fn as_curve(h: &EmpiricalHistogram, template: &PdfCurve) -> PdfCurve {
    PdfCurve {
        grid: h.bin_centers.clone(),
        density: h.density.clone(),
        stderr: h.errbar.clone(),
        ..template.clone()
    }
}

#[test]
fn metric_of_identical_curves_is_zero() {
    let grid = centered_grid(0.02, 40, 0.0).unwrap();
    let a = curve(0.5, 1.5, 0.015, 6, &grid);
    let m = extreme_price_metric(&a, &a).unwrap();
    assert_eq!((m.absolute, m.relative, m.sup_relative), (0.0, 0.0, 0.0));
    let b = curve(0.5, 1.5, 0.015, 6, &centered_grid(0.03, 40, 0.0).unwrap());
    assert!(matches!(extreme_price_metric(&a, &b), Err(Error::GridMismatch(_))));
}

#[test]
fn metric_is_a_pseudometric() {
    let grid = centered_grid(0.01, 40, 0.0).unwrap();
    let curves: Vec<PdfCurve> = [4, 6, 9].iter().map(|&d| curve(0.5, 1.5, 0.015, d, &grid)).collect();
    for a in &curves {
        for b in &curves {
            let ab = extreme_price_metric(a, b).unwrap().absolute;
            assert_eq!(ab, extreme_price_metric(b, a).unwrap().absolute);
            for c in &curves {
                let ac = extreme_price_metric(a, c).unwrap().absolute;
                let cb = extreme_price_metric(c, b).unwrap().absolute;
                assert!(ab <= ac + cb + 1e-15);
            }
        }
    }
}

#[test]
fn convergence_report_shape() {
    let prm = ModelParams::new(1.0, 1.5, 0.0037, 0.0, 1.0, 10).unwrap();
    let grid = centered_grid(0.03, 40, 0.0).unwrap();
    let r = convergence_study(&prm, &[4, 6, 8], &grid, &small()).unwrap();
    assert_eq!(r.curves.len(), 3);
    for i in 0..3 {
        assert_eq!(r.pairwise[i][i].absolute, 0.0);
        for j in 0..3 {
            assert_eq!(r.pairwise[i][j], r.pairwise[j][i]);
        }
        assert_eq!(r.curves[i].params.slices(), [4, 6, 8][i]);
    }
    assert_eq!(r.successive().count(), 2);
    let single = convergence_study(&prm, &[5], &grid, &small()).unwrap();
    assert_eq!(single.pairwise.len(), 1);
    assert_eq!(single.pairwise[0][0].absolute, 0.0);
    assert!(convergence_study(&prm, &[], &grid, &small()).is_err());
    assert!(convergence_study(&prm, &[1, 4], &grid, &small()).is_err());
}

#[test]
fn convergence_is_reproducible() {
    let prm = ModelParams::new(0.2, 1.3, 0.014, 0.0, 1.0, 10).unwrap();
    let grid = centered_grid(2e-5, 40, 0.0).unwrap();
    let a = convergence_study(&prm, &[5, 7], &grid, &small()).unwrap();
    let b = convergence_study(&prm, &[5, 7], &grid, &small()).unwrap();
    for (x, y) in a.curves.iter().zip(&b.curves) {
        assert_eq!(x.density, y.density);
    }
    assert_eq!(a.pairwise, b.pairwise);
}

#[test]
fn composition_holds_for_the_gaussian() {
    let prm = ModelParams::new(1.0, 2.0, 0.1, 0.0, 1.0, 10).unwrap();
    let grid = centered_grid(0.6, 40, 0.0).unwrap();
    let r = ck_residual(&prm, 0.5, &grid, 81, &small()).unwrap();
    assert_eq!(r.split, (5, 5));
    assert!(r.max_z < 3.0, "{}", r.max_z);
    assert!((r.composed_mass - 1.0).abs() < 1e-6);
    assert!(r.residual.iter().all(|v| *v >= 0.0));
    assert!(r.warnings.is_empty());
}

#[test]
fn composition_fails_below_gamma_one() {
    let prm = ModelParams::new(0.5, 1.5, 0.015, 0.0, 1.0, 6).unwrap();
    let span = 2.0 * decade_half_span(&prm, 2.0, &small()).unwrap();
    let grid = centered_grid(span, 40, 0.0).unwrap();
    let r = ck_residual(&prm, 0.5, &grid, 81, &small()).unwrap();
    assert!(r.max_z > 5.0, "{}", r.max_z);
    assert!((r.composed_mass - 1.0).abs() < 1e-6);
}

#[test]
fn composition_rejects_bad_input() {
    let prm = ModelParams::new(1.0, 2.0, 0.1, 0.0, 1.0, 4).unwrap();
    let grid = centered_grid(0.6, 40, 0.0).unwrap();
    assert!(ck_residual(&prm, 0.0, &grid, 81, &small()).is_err());
    assert!(ck_residual(&prm, 1.0, &grid, 81, &small()).is_err());
    let uneven = [-0.3, -0.1, 0.0, 0.3];
    assert!(ck_residual(&prm, 0.5, &uneven, 81, &small()).is_err());
}

#[test]
fn histogram_against_itself() {
    let h = gaussian_hist(0.002, 20_000, 40, 1);
    let template = curve(1.0, 2.0, 0.002, 1, &centered_grid(0.016, 40, 0.0).unwrap());
    let c = as_curve(&h, &template);
    let f = compare_model_to_data(&h, &c, DEFAULT_ERRBAR_MULTIPLE).unwrap();
    assert_eq!(f.log_rmse, 0.0);
    assert_eq!(f.within, 1.0);
    assert_eq!(f.chi2, 0.0);
}

#[test]
fn gaussian_data_against_the_true_gaussian() {
    let sd = 0.002;
    let h = gaussian_hist(sd, 100_000, 70, 2);
    let grid = uniform_grid(h.lower, h.upper(), 141).unwrap();
    let c = curve(1.0, 2.0, sd, 1, &grid);
    let f = compare_model_to_data(&h, &c, DEFAULT_ERRBAR_MULTIPLE).unwrap();
    assert!(f.within >= 0.9, "{f:?}");
}

#[test]
fn narrow_curves_are_rejected() {
    let h = gaussian_hist(0.002, 1000, 20, 3);
    let c = curve(1.0, 2.0, 0.002, 1, &centered_grid(0.01, 40, 0.0).unwrap());
    assert!(matches!(
        compare_model_to_data(&h, &c, DEFAULT_ERRBAR_MULTIPLE),
        Err(Error::Coverage { .. })
    ));
}

#[test]
fn comparison_ignores_a_common_shift() {
    let sd = 0.002;
    let h = gaussian_hist(sd, 50_000, 50, 4);
    let grid = uniform_grid(h.lower, h.upper(), 101).unwrap();
    let c = curve(1.0, 2.0, sd, 1, &grid);
    let a = compare_model_to_data(&h, &c, DEFAULT_ERRBAR_MULTIPLE).unwrap();
    let shift = 0.25;
    let mut hs = h.clone();
    hs.bin_centers.iter_mut().for_each(|x| *x += shift);
    hs.lower += shift;
    let mut cs = c.clone();
    cs.grid.iter_mut().for_each(|x| *x += shift);
    let b = compare_model_to_data(&hs, &cs, DEFAULT_ERRBAR_MULTIPLE).unwrap();
    assert!((a.log_rmse - b.log_rmse).abs() < 1e-9);
    assert!((a.chi2 - b.chi2).abs() < 1e-6 * a.chi2);
    assert_eq!(a.within, b.within);
}

#[test]
fn sweep_finds_the_generating_parameters() {
    let sd = 0.002;
    let h = gaussian_hist(sd, 100_000, 60, 5);
    let template = ModelParams::new(1.0, 2.0, 1.0, 0.0, 1.0, 4).unwrap();
    let triples = [
        (1.0, 2.0, 0.0016),
        (1.0, 2.0, 0.002),
        (1.0, 2.0, 0.0025),
        (1.0, 1.5, 0.002),
        (0.5, 1.5, 0.002),
    ];
    let rows = parameter_sweep(&h, &triples, &template, 61, &small(), DEFAULT_ERRBAR_MULTIPLE).unwrap();
    assert_eq!(rows.len(), 5);
    assert_eq!((rows[0].gamma, rows[0].p, rows[0].sigma), (1.0, 2.0, 0.002));
    assert!(rows.windows(2).all(|w| w[0].metrics.log_rmse <= w[1].metrics.log_rmse));

    let one = parameter_sweep(&h, &triples[..1], &template, 61, &small(), DEFAULT_ERRBAR_MULTIPLE).unwrap();
    assert_eq!(one.len(), 1);
    assert!(parameter_sweep(&h, &[], &template, 61, &small(), DEFAULT_ERRBAR_MULTIPLE).is_err());
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(16))]

    #[test]
    fn metric_is_symmetric_on_random_curves(
        a in prop::collection::vec(0.01f64..10.0, 8),
        b in prop::collection::vec(0.01f64..10.0, 8),
    ) {
        let grid = centered_grid(1.0, 8, 0.0).unwrap();
        let t = curve(1.0, 2.0, 0.2, 1, &grid);
        let ca = PdfCurve { density: a, ..t.clone() };
        let cb = PdfCurve { density: b, ..t };
        let ab = extreme_price_metric(&ca, &cb).unwrap();
        let ba = extreme_price_metric(&cb, &ca).unwrap();
        prop_assert_eq!(ab, ba);
        prop_assert!(ab.absolute >= 0.0);
    }
}

#[test]
fn gamma_one_curves_settle_as_slices_grow() {
    let (p, sigma): (f64, f64) = (1.5, 0.0037);
    let sd = sigma
        * (2f64.powf(2.0 / p) * statrs::function::gamma::gamma(3.0 / p) / statrs::function::gamma::gamma(1.0 / p))
            .sqrt();
    let prm = ModelParams::new(1.0, p, sigma, 0.0, 1.0, 15).unwrap();
    let grid = centered_grid(6.0 * sd, 40, 0.0).unwrap();
    let r = convergence_study(
        &prm,
        &[9, 12, 15],
        &grid,
        &SamplingConfig::default().with_points(1 << 15),
    )
    .unwrap();
    let (early, late) = (r.pairwise[0][1].relative, r.pairwise[1][2].relative);
    assert!(late < early, "{early} {late}");
    assert!(late < 0.03, "{late}");
    assert!(r.max_endpoint_relative_stderr() < 0.01);
}
