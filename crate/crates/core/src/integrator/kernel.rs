//! Estimators of the unnormalized transition kernel.
//!
//! Two change-of-variables schemes share the same integrand:
//!
//! * `Box`: intermediate log-prices are drawn uniformly from an axis-aligned
//!   box around the straight line from `x0` to `xT`.
//! * `Radial`: increments are written as the straight-line step plus a
//!   deviation in the zero-sum subspace, `delta = a * H z`, with `H` an
//!   orthonormal (Helmert) basis of that subspace. `z = rho * theta` with
//!   `theta` uniform on the sphere (normalized Gaussian coordinates) and
//!   `log rho` drawn from a logistic law whose location and scale come from a
//!   deterministic pilot scan of the radial profile. For `gamma = 1, p = 2`
//!   the integrand depends on `rho` alone and the estimate is exact up to a
//!   one-dimensional quadrature error.

use std::f64::consts::PI;

use rayon::prelude::*;
use statrs::function::erf::erfc_inv;
use statrs::function::gamma::ln_gamma;

use crate::error::{Error, Result};
use crate::model::{Exponent, ModelParams};
use crate::sampling::{GeneratorKind, IntegrationBox, SampleBatch};

/// Unnormalized kernel value with its standard error.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct KernelEstimate {
    pub value: f64,
    pub stderr: f64,
}

/// Smallest coordinate fed to inverse CDFs.
const U_EPS: f64 = 1.0 / 9_007_199_254_740_992.0;

/// Default box half-width `8 sigma sqrt(T) max(1, (2 sigma)^((p-2)/p))`,
/// optionally clipped.
pub fn default_half_width(params: &ModelParams, clip: Option<f64>) -> f64 {
    let s = params.sigma();
    let p = params.p();
    let w = 8.0 * s * params.horizon().sqrt() * (2.0 * s).powf((p - 2.0) / p).max(1.0);
    match clip {
        Some(c) => w.min(c),
        None => w,
    }
}

/// Box of the given half-width centered on the straight line from `x0` to `xt`.
pub fn straight_line_box(x0: f64, xt: f64, params: &ModelParams, half_width: f64) -> Result<IntegrationBox> {
    let d = params.intermediate_dim();
    let step = (xt - x0) / params.slices() as f64;
    let centers = (1..=d).map(|k| x0 + step * k as f64).collect();
    IntegrationBox::new(centers, vec![half_width; d])
}

/// Per-replica sums `(sum w, sum w^2)` turned into a mean and standard error.
///
/// Shifted batches use the spread of replica means; crude Monte Carlo uses the
/// per-point variance.
pub(crate) fn combine(kind: GeneratorKind, n: usize, sums: &[(f64, f64)], scale: f64) -> KernelEstimate {
    let nf = n as f64;
    match kind {
        GeneratorKind::CrudeMc if sums.len() == 1 => {
            let (s, s2) = sums[0];
            let mean = s / nf;
            let var = if n > 1 {
                ((s2 - s * mean) / (nf - 1.0)).max(0.0)
            } else {
                0.0
            };
            KernelEstimate {
                value: scale * mean,
                stderr: scale * (var / nf).sqrt(),
            }
        }
        _ => {
            let r = sums.len() as f64;
            let means: Vec<f64> = sums.iter().map(|(s, _)| s / nf).collect();
            let mean = means.iter().sum::<f64>() / r;
            let var = if sums.len() > 1 {
                means.iter().map(|m| (m - mean) * (m - mean)).sum::<f64>() / (r - 1.0)
            } else {
                0.0
            };
            KernelEstimate {
                value: scale * mean,
                stderr: scale * (var / r).sqrt(),
            }
        }
    }
}

/// Kernel estimate by uniform sampling of an explicit box.
///
/// For a single time slice there is nothing to integrate and the value is the
/// weight of the two-point path.
pub fn transition_kernel(
    x0: f64,
    xt: f64,
    params: &ModelParams,
    batch: &SampleBatch,
    bx: &IntegrationBox,
) -> Result<KernelEstimate> {
    let exponent = params.exponent();
    if params.slices() == 1 {
        return Ok(KernelEstimate {
            value: (-exponent.of_increments([xt - x0])).exp(),
            stderr: 0.0,
        });
    }
    let d = params.intermediate_dim();
    if bx.dim() != d {
        return Err(Error::DimensionMismatch {
            expected: d,
            actual: bx.dim(),
        });
    }
    if batch.dim() != d {
        return Err(Error::DimensionMismatch {
            expected: d,
            actual: batch.dim(),
        });
    }
    // weights are accumulated relative to the straight-line path, which
    // minimizes the exponent
    let step = (xt - x0) / params.slices() as f64;
    let floor = exponent.of_increments(std::iter::repeat_n(step, params.slices()));
    let n = batch.points_per_replica();
    let sums: Vec<(f64, f64)> = (0..batch.replicas())
        .map(|r| {
            let mut u = vec![0.0; d];
            let mut x = vec![0.0; d + 2];
            x[0] = x0;
            x[d + 1] = xt;
            let mut acc = (0.0, 0.0);
            for i in 0..n {
                batch.point_into(r, i, &mut u);
                bx.map_into(&u, &mut x[1..=d]);
                let w = (floor - exponent.of_log_prices(&x)).exp();
                acc.0 += w;
                acc.1 += w * w;
            }
            acc
        })
        .collect();
    Ok(combine(batch.kind(), n, &sums, bx.jacobian() * (-floor).exp()))
}

/// Orthonormal basis of the zero-sum subspace of R^D (Helmert contrasts),
/// applied without materializing the matrix.
#[derive(Debug, Clone)]
struct Helmert {
    // c_j = 1/sqrt((j+1)(j+2)), j = 0..D-2
    coeff: Vec<f64>,
}

impl Helmert {
    fn new(steps: usize) -> Self {
        let coeff = (0..steps - 1)
            .map(|j| 1.0 / (((j + 1) * (j + 2)) as f64).sqrt())
            .collect();
        Self { coeff }
    }

    /// `out = H z`, with `out.len() = z.len() + 1`.
    fn apply(&self, z: &[f64], out: &mut [f64]) {
        let d = z.len();
        let mut tail = 0.0;
        for i in (0..=d).rev() {
            if i < d {
                tail += self.coeff[i] * z[i];
            }
            out[i] = tail;
            if i >= 1 {
                out[i] -= i as f64 * self.coeff[i - 1] * z[i - 1];
            }
        }
    }
}

/// Quasi-random draws for the radial scheme, independent of the endpoints.
///
/// Row layout: `[t, v_0, .., v_{D-1}]` where `t` is a standard logistic
/// variate and `v = H theta` the increment pattern of a unit deviation.
pub(crate) struct RadialDraws {
    steps: usize,
    rows: Vec<f64>,
}

impl RadialDraws {
    pub(crate) fn new(batch: &SampleBatch, replica: usize, steps: usize) -> Self {
        let d = steps - 1;
        let width = steps + 1;
        let n = batch.points_per_replica();
        let helmert = Helmert::new(steps);
        let mut rows = vec![0.0; n * width];
        rows.par_chunks_mut(width * 1024)
            .enumerate()
            .for_each(|(chunk, block)| {
                let mut u = vec![0.0; steps];
                let mut z = vec![0.0; d];
                for (k, row) in block.chunks_exact_mut(width).enumerate() {
                    batch.point_into(replica, chunk * 1024 + k, &mut u);
                    let u0 = u[0].clamp(U_EPS, 1.0 - U_EPS);
                    row[0] = (u0 / (1.0 - u0)).ln();
                    let mut norm2 = 0.0;
                    for (zj, &uj) in z.iter_mut().zip(&u[1..]) {
                        *zj = std_normal_quantile(uj.clamp(U_EPS, 1.0 - U_EPS));
                        norm2 += *zj * *zj;
                    }
                    let inv = if norm2 > 0.0 { 1.0 / norm2.sqrt() } else { 0.0 };
                    z.iter_mut().for_each(|zj| *zj *= inv);
                    helmert.apply(&z, &mut row[1..]);
                }
            });
        Self { steps, rows }
    }

    fn iter(&self) -> impl Iterator<Item = (f64, &[f64])> {
        self.rows.chunks_exact(self.steps + 1).map(|r| (r[0], &r[1..]))
    }
}

fn std_normal_quantile(u: f64) -> f64 {
    -std::f64::consts::SQRT_2 * erfc_inv(2.0 * u)
}

/// `ln` of the standard logistic density.
#[inline]
fn ln_logistic_pdf(t: f64) -> f64 {
    let a = t.abs();
    -a - 2.0 * (-a).exp().ln_1p()
}

/// Everything the radial scheme needs for one endpoint pair.
#[derive(Debug, Clone, Copy)]
pub(crate) struct RadialPlan {
    step: f64,
    scale: f64,
    loc: f64,
    spread: f64,
    ln_const: f64,
    peak: f64,
}

/// Parameters shared by all endpoint pairs of one model.
#[derive(Debug, Clone)]
pub(crate) struct RadialModel {
    exponent: Exponent,
    steps: usize,
    dim: usize,
    scale: f64,
    helmert: Helmert,
    // ln |J| + ln A_d
    ln_measure: f64,
}

impl RadialModel {
    pub(crate) fn new(params: &ModelParams) -> Self {
        let steps = params.slices();
        let dim = steps - 1;
        let scale = params.sigma() * params.dt().sqrt();
        let df = dim as f64;
        let ln_jac = df * scale.ln() - 0.5 * (steps as f64).ln();
        let ln_sphere = (2.0f64).ln() + 0.5 * df * PI.ln() - ln_gamma(0.5 * df);
        Self {
            exponent: params.exponent(),
            steps,
            dim,
            scale,
            helmert: Helmert::new(steps),
            ln_measure: ln_jac + ln_sphere,
        }
    }

    fn exponent_at(&self, step: f64, radius: f64, pattern: &[f64]) -> f64 {
        let k = self.scale * radius;
        self.exponent.of_increments(pattern.iter().map(|v| step + k * v))
    }

    /// Pilot scan of `h(U) = ln mean_theta exp(-E) + d U`, `rho = e^U`, over
    /// the `2d` coordinate directions.
    pub(crate) fn plan(&self, log_return: f64) -> RadialPlan {
        let step = log_return / self.steps as f64;
        let d = self.dim;
        let mut patterns = vec![0.0; 2 * d * self.steps];
        let mut z = vec![0.0; d];
        for j in 0..d {
            for (sign, offset) in [(1.0, 2 * j), (-1.0, 2 * j + 1)] {
                z.iter_mut().for_each(|v| *v = 0.0);
                z[j] = sign;
                self.helmert
                    .apply(&z, &mut patterns[offset * self.steps..(offset + 1) * self.steps]);
            }
        }
        let df = d as f64;
        let profile = |u: f64| -> f64 {
            let rho = u.exp();
            let exps: Vec<f64> = patterns
                .chunks_exact(self.steps)
                .map(|pat| -self.exponent_at(step, rho, pat))
                .collect();
            let top = exps.iter().cloned().fold(f64::NEG_INFINITY, f64::max);
            let mean = exps.iter().map(|e| (e - top).exp()).sum::<f64>() / exps.len() as f64;
            top + mean.ln() + df * u
        };

        // coarse scan for the mode, then a fine scan around it
        let coarse: Vec<(f64, f64)> = (-160..=160)
            .map(|k| {
                let u = 0.25 * k as f64;
                (u, profile(u))
            })
            .collect();
        let (u_mode, _) = coarse
            .iter()
            .cloned()
            .fold((0.0, f64::NEG_INFINITY), |a, b| if b.1 > a.1 { b } else { a });
        let fine: Vec<(f64, f64)> = (-400..=400)
            .map(|k| {
                let u = u_mode + 0.02 * k as f64;
                (u, profile(u))
            })
            .collect();
        let peak = fine.iter().map(|p| p.1).fold(f64::NEG_INFINITY, f64::max);
        let (mut m0, mut m1, mut m2) = (0.0, 0.0, 0.0);
        for &(u, h) in &fine {
            let w = (h - peak).exp();
            m0 += w;
            m1 += w * u;
            m2 += w * u * u;
        }
        let loc = m1 / m0;
        let sd = (m2 / m0 - loc * loc).max(0.0).sqrt();
        // logistic sd is s pi / sqrt 3; widen by half and keep d s >= 1.2 so
        // the left tail of the weight stays bounded
        let spread = (1.5 * sd * 3f64.sqrt() / PI).max(1.2 / df).max(0.02);
        RadialPlan {
            step,
            scale: self.scale,
            loc,
            spread,
            ln_const: self.ln_measure + peak,
            peak,
        }
    }

    /// Sums of relative weights over one replica of draws.
    pub(crate) fn sums(&self, plan: &RadialPlan, draws: &RadialDraws) -> (f64, f64) {
        let df = self.dim as f64;
        let mut acc = (0.0, 0.0);
        for (t, pattern) in draws.iter() {
            let u = plan.loc + plan.spread * t;
            let rho = u.exp();
            let k = plan.scale * rho;
            let e = self.exponent.of_increments(pattern.iter().map(|v| plan.step + k * v));
            let ln_q = ln_logistic_pdf(t) - plan.spread.ln();
            let w = (-e + df * u - ln_q - plan.peak).exp();
            acc.0 += w;
            acc.1 += w * w;
        }
        acc
    }

    pub(crate) fn scale_factor(&self, plan: &RadialPlan) -> f64 {
        plan.ln_const.exp()
    }
}

/// Kernel estimate with the radial scheme.
///
/// The batch needs `D` coordinates: one radial and `D - 1` directional.
pub fn radial_kernel(x0: f64, xt: f64, params: &ModelParams, batch: &SampleBatch) -> Result<KernelEstimate> {
    if params.slices() == 1 {
        return Ok(KernelEstimate {
            value: (-params.exponent().of_increments([xt - x0])).exp(),
            stderr: 0.0,
        });
    }
    if batch.dim() != params.slices() {
        return Err(Error::DimensionMismatch {
            expected: params.slices(),
            actual: batch.dim(),
        });
    }
    let model = RadialModel::new(params);
    let plan = model.plan(xt - x0);
    let sums: Vec<(f64, f64)> = (0..batch.replicas())
        .map(|r| model.sums(&plan, &RadialDraws::new(batch, r, params.slices())))
        .collect();
    Ok(combine(
        batch.kind(),
        batch.points_per_replica(),
        &sums,
        model.scale_factor(&plan),
    ))
}
