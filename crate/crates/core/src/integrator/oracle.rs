//! Independent references for the quasi-Monte Carlo estimates.

use std::f64::consts::PI;

use crate::error::{Error, Result};
use crate::model::ModelParams;
use crate::sampling::IntegrationBox;

use super::kernel::{default_half_width, straight_line_box};

/// Largest slice count accepted by [`quadrature_oracle`].
pub const ORACLE_MAX_SLICES: usize = 4;

/// Normal density of `xt` with mean `x0 + r T` and variance `sigma^2 T`: the
/// exact propagator for `gamma = 1, p = 2`.
pub fn gaussian_closed_form(x0: f64, xt: f64, sigma: f64, rate: f64, horizon: f64) -> f64 {
    let var = sigma * sigma * horizon;
    let dev = xt - x0 - rate * horizon;
    (-dev * dev / (2.0 * var)).exp() / (2.0 * PI * var).sqrt()
}

/// Tensor-product trapezoid rule over the default straight-line box, i.e. the
/// same truncated integral the box scheme samples.
pub fn quadrature_oracle(x0: f64, xt: f64, params: &ModelParams, mesh: usize) -> Result<f64> {
    if params.slices() == 1 {
        let e = params.exponent().of_increments([xt - x0]);
        return Ok((-e).exp());
    }
    let bx = straight_line_box(x0, xt, params, default_half_width(params, None))?;
    quadrature_oracle_in(x0, xt, params, mesh, &bx)
}

/// Tensor-product trapezoid rule over an explicit box with `mesh` nodes per
/// coordinate.
pub fn quadrature_oracle_in(x0: f64, xt: f64, params: &ModelParams, mesh: usize, bx: &IntegrationBox) -> Result<f64> {
    if params.slices() > ORACLE_MAX_SLICES {
        return Err(Error::DimensionTooLarge {
            slices: params.slices(),
            max: ORACLE_MAX_SLICES,
        });
    }
    if mesh < 16 {
        return Err(Error::InvalidParameter(format!(
            "the quadrature mesh needs at least 16 nodes, got {mesh}"
        )));
    }
    let exponent = params.exponent();
    if params.slices() == 1 {
        return Ok((-exponent.of_increments([xt - x0])).exp());
    }
    let d = params.intermediate_dim();
    if bx.dim() != d {
        return Err(Error::DimensionMismatch {
            expected: d,
            actual: bx.dim(),
        });
    }

    let nodes: Vec<Vec<(f64, f64)>> = (0..d)
        .map(|k| {
            let c = bx.centers()[k];
            let w = bx.half_widths()[k];
            let h = 2.0 * w / (mesh - 1) as f64;
            (0..mesh)
                .map(|i| {
                    let weight = if i == 0 || i == mesh - 1 { 0.5 * h } else { h };
                    (c - w + h * i as f64, weight)
                })
                .collect()
        })
        .collect();

    let mut path = vec![0.0; d + 2];
    path[0] = x0;
    path[d + 1] = xt;
    let mut idx = vec![0usize; d];
    let mut total = 0.0;
    loop {
        let mut weight = 1.0;
        for k in 0..d {
            let (x, w) = nodes[k][idx[k]];
            path[k + 1] = x;
            weight *= w;
        }
        total += weight * (-exponent.of_log_prices(&path)).exp();

        // odometer increment
        let mut k = 0;
        loop {
            idx[k] += 1;
            if idx[k] < mesh {
                break;
            }
            idx[k] = 0;
            k += 1;
            if k == d {
                return Ok(total);
            }
        }
    }
}
