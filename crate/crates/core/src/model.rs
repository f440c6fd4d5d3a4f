//! Model parameters, discrete log-price paths and the non-quadratic action.
//!
//! A path is weighted by `exp(-E)` with
//!
//! ```text
//! E = 1/(2 sigma^p) * ( sum_i |(x_{i+1} - x_i)/dt - r|^p * dt^f(p, gamma) )^gamma
//! f(p, gamma) = p - (p/2)^gamma / gamma
//! ```
//!
//! which reduces to the Gaussian (geometric Brownian motion) exponent for
//! `gamma = 1, p = 2`. Every quantity depends on log-price differences only,
//! so multiplying all prices by a constant leaves it unchanged.

use crate::error::{Error, Result};

/// Cap applied to the exponent before exponentiation. Paths deep in the tails
/// get weight `exp(-1e300) = 0` instead of a NaN.
pub const EXPONENT_CAP: f64 = 1e300;

/// Parameters of one path-integral problem.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct ModelParams {
    gamma: f64,
    p: f64,
    sigma: f64,
    rate: f64,
    horizon: f64,
    slices: usize,
}

impl ModelParams {
    /// Validates and builds a parameter set.
    ///
    /// `slices` is the number of time steps; the integral runs over
    /// `slices - 1` intermediate log-prices.
    pub fn new(gamma: f64, p: f64, sigma: f64, rate: f64, horizon: f64, slices: usize) -> Result<Self> {
        if !(gamma > 0.0 && gamma <= 1.0) {
            return Err(Error::InvalidParameter(format!(
                "gamma must lie in (0, 1], got {gamma}"
            )));
        }
        if !(1.0..=2.0).contains(&p) {
            return Err(Error::InvalidParameter(format!("p must lie in [1, 2], got {p}")));
        }
        if !(sigma > 0.0 && sigma.is_finite()) {
            return Err(Error::InvalidParameter(format!("sigma must be positive, got {sigma}")));
        }
        if !rate.is_finite() {
            return Err(Error::InvalidParameter(format!("rate must be finite, got {rate}")));
        }
        if !(horizon > 0.0 && horizon.is_finite()) {
            return Err(Error::InvalidParameter(format!(
                "horizon must be positive, got {horizon}"
            )));
        }
        if slices == 0 {
            return Err(Error::InvalidParameter("at least one time slice is required".into()));
        }
        let params = Self {
            gamma,
            p,
            sigma,
            rate,
            horizon,
            slices,
        };
        let beta = params.beta();
        if !(beta.is_finite() && beta > 0.0) {
            return Err(Error::InvalidParameter(format!(
                "beta = 1/(2 sigma^p) is not finite for sigma = {sigma}, p = {p}"
            )));
        }
        Ok(params)
    }

    /// Builds parameters from `beta_p` instead of `sigma`, using
    /// `sigma = (2 beta)^(-1/p)`.
    pub fn from_beta(gamma: f64, p: f64, beta: f64, rate: f64, horizon: f64, slices: usize) -> Result<Self> {
        if !(beta > 0.0 && beta.is_finite()) {
            return Err(Error::InvalidParameter(format!("beta must be positive, got {beta}")));
        }
        Self::new(gamma, p, (2.0 * beta).powf(-1.0 / p), rate, horizon, slices)
    }

    pub fn gamma(&self) -> f64 {
        self.gamma
    }

    pub fn p(&self) -> f64 {
        self.p
    }

    pub fn sigma(&self) -> f64 {
        self.sigma
    }

    pub fn rate(&self) -> f64 {
        self.rate
    }

    pub fn horizon(&self) -> f64 {
        self.horizon
    }

    pub fn slices(&self) -> usize {
        self.slices
    }

    /// Number of intermediate log-prices integrated over.
    pub fn intermediate_dim(&self) -> usize {
        self.slices - 1
    }

    pub fn dt(&self) -> f64 {
        self.horizon / self.slices as f64
    }

    /// `beta_p = 1 / (2 sigma^p)`, always derived from `sigma`.
    pub fn beta(&self) -> f64 {
        0.5 / self.sigma.powf(self.p)
    }

    /// `f(p, gamma)` for these parameters.
    pub fn scaling_exponent(&self) -> f64 {
        scaling_exponent_unchecked(self.p, self.gamma)
    }

    pub fn with_slices(&self, slices: usize) -> Result<Self> {
        Self::new(self.gamma, self.p, self.sigma, self.rate, self.horizon, slices)
    }

    /// Same model over a different horizon with the given slice count.
    pub fn with_horizon(&self, horizon: f64, slices: usize) -> Result<Self> {
        Self::new(self.gamma, self.p, self.sigma, self.rate, horizon, slices)
    }

    /// The Gaussian (geometric Brownian motion) case `gamma = 1, p = 2`.
    pub fn is_gaussian(&self) -> bool {
        self.gamma == 1.0 && self.p == 2.0
    }

    pub(crate) fn exponent(&self) -> Exponent {
        Exponent::new(self)
    }
}

/// A discretized log-price path `x_0 .. x_D` with a fixed step `dt`.
#[derive(Debug, Clone, PartialEq)]
pub struct DiscretePath {
    log_prices: Vec<f64>,
    dt: f64,
}

impl DiscretePath {
    pub fn new(log_prices: Vec<f64>, dt: f64) -> Result<Self> {
        if log_prices.len() < 2 {
            return Err(Error::InvalidParameter(format!(
                "a path needs at least two points, got {}",
                log_prices.len()
            )));
        }
        if !(dt > 0.0 && dt.is_finite()) {
            return Err(Error::InvalidParameter(format!("dt must be positive, got {dt}")));
        }
        if log_prices.iter().any(|x| !x.is_finite()) {
            return Err(Error::InvalidParameter("log-prices must be finite".into()));
        }
        Ok(Self { log_prices, dt })
    }

    /// The minimal-action path `x_i = x_0 + r i dt`.
    pub fn risk_free(x0: f64, params: &ModelParams) -> Self {
        let dt = params.dt();
        let log_prices = (0..=params.slices())
            .map(|i| x0 + params.rate() * i as f64 * dt)
            .collect();
        Self { log_prices, dt }
    }

    /// Builds the path for `params` from its endpoints and intermediate points.
    pub fn from_endpoints(x0: f64, intermediate: &[f64], xt: f64, params: &ModelParams) -> Result<Self> {
        if intermediate.len() != params.intermediate_dim() {
            return Err(Error::DimensionMismatch {
                expected: params.intermediate_dim(),
                actual: intermediate.len(),
            });
        }
        let mut log_prices = Vec::with_capacity(params.slices() + 1);
        log_prices.push(x0);
        log_prices.extend_from_slice(intermediate);
        log_prices.push(xt);
        Self::new(log_prices, params.dt())
    }

    pub fn log_prices(&self) -> &[f64] {
        &self.log_prices
    }

    pub fn dt(&self) -> f64 {
        self.dt
    }

    pub fn steps(&self) -> usize {
        self.log_prices.len() - 1
    }

    /// Discrete excess drifts `(x_{i+1} - x_i)/dt - r`.
    pub fn excess_drifts(&self, rate: f64) -> impl Iterator<Item = f64> + '_ {
        self.log_prices.windows(2).map(move |w| (w[1] - w[0]) / self.dt - rate)
    }

    fn check(&self, params: &ModelParams) -> Result<()> {
        if self.steps() != params.slices() {
            return Err(Error::DimensionMismatch {
                expected: params.slices() + 1,
                actual: self.log_prices.len(),
            });
        }
        let dt = params.dt();
        if (self.dt - dt).abs() > 1e-12 * dt {
            return Err(Error::InvalidParameter(format!(
                "path step {} does not match T/D = {dt}",
                self.dt
            )));
        }
        Ok(())
    }
}

/// `f(p, gamma) = p - (p/2)^gamma / gamma`, the time-step power that keeps the
/// finite-dimensional approximations stable as the slice count grows.
pub fn scaling_exponent(p: f64, gamma: f64) -> Result<f64> {
    if !(gamma > 0.0) {
        return Err(Error::InvalidParameter(format!("gamma must be positive, got {gamma}")));
    }
    if !p.is_finite() {
        return Err(Error::InvalidParameter(format!("p must be finite, got {p}")));
    }
    Ok(scaling_exponent_unchecked(p, gamma))
}

fn scaling_exponent_unchecked(p: f64, gamma: f64) -> f64 {
    if gamma == 1.0 {
        // p - p/2 is exact in binary floating point
        p - p / 2.0
    } else {
        p - (p / 2.0).powf(gamma) / gamma
    }
}

/// Full exponent `E` of the finite-dimensional path weight.
pub fn discrete_exponent(path: &DiscretePath, params: &ModelParams) -> Result<f64> {
    path.check(params)?;
    Ok(params.exponent().of_log_prices(path.log_prices()))
}

/// `exp(-E)`, the unnormalized probability of a path.
pub fn path_weight(path: &DiscretePath, params: &ModelParams) -> Result<f64> {
    discrete_exponent(path, params).map(|e| (-e).exp())
}

/// Riemann-sum action `beta * sum_i |Omega_i|^p dt` with the discrete
/// curvature `Omega_i = (x_{i+1} - x_i)/dt - r`.
///
/// `p = 2` gives the arbitrage action, `p = 1` the maximal-earnings action.
pub fn continuum_action(path: &DiscretePath, p: f64, rate: f64, beta: f64) -> Result<f64> {
    if !(1.0..=2.0).contains(&p) {
        return Err(Error::InvalidParameter(format!("p must lie in [1, 2], got {p}")));
    }
    let sum: f64 = path.excess_drifts(rate).map(|w| w.abs().powf(p)).sum();
    Ok(beta * sum * path.dt())
}

/// Precomputed constants of the exponent, shared by every path evaluated for
/// one parameter set.
#[derive(Debug, Clone, Copy)]
pub(crate) struct Exponent {
    p: f64,
    gamma: f64,
    rate: f64,
    inv_dt: f64,
    time_factor: f64,
    prefactor: f64,
}

impl Exponent {
    fn new(params: &ModelParams) -> Self {
        let dt = params.dt();
        Self {
            p: params.p(),
            gamma: params.gamma(),
            rate: params.rate(),
            inv_dt: 1.0 / dt,
            time_factor: dt.powf(params.scaling_exponent()),
            prefactor: params.beta(),
        }
    }

    #[inline]
    fn term(&self, step: f64) -> f64 {
        let w = (step * self.inv_dt - self.rate).abs();
        if self.p == 2.0 {
            w * w
        } else if self.p == 1.0 {
            w
        } else {
            w.powf(self.p)
        }
    }

    /// Exponent of a path given by its log-price increments.
    #[inline]
    pub(crate) fn of_increments<I: IntoIterator<Item = f64>>(&self, steps: I) -> f64 {
        let sum: f64 = steps.into_iter().map(|s| self.term(s)).sum();
        self.finish(sum)
    }

    pub(crate) fn of_log_prices(&self, x: &[f64]) -> f64 {
        self.of_increments(x.windows(2).map(|w| w[1] - w[0]))
    }

    #[inline]
    fn finish(&self, sum: f64) -> f64 {
        let inner = sum * self.time_factor;
        let e = if self.gamma == 1.0 {
            self.prefactor * inner
        } else {
            self.prefactor * inner.powf(self.gamma)
        };
        if e.is_nan() || e > EXPONENT_CAP {
            EXPONENT_CAP
        } else {
            e
        }
    }
}

#[cfg(test)]
mod tests {
    use approx::assert_relative_eq;

    use super::*;

    fn params(gamma: f64, p: f64, sigma: f64, slices: usize) -> ModelParams {
        ModelParams::new(gamma, p, sigma, 0.0, 1.0, slices).unwrap()
    }

    #[test]
    fn scaling_exponent_examples() {
        assert_eq!(scaling_exponent(2.0, 1.0).unwrap(), 1.0);
        assert_eq!(scaling_exponent(1.5, 1.0).unwrap(), 0.75);
        // 40-digit evaluation: -0.76760041095280858996...
        assert_relative_eq!(
            scaling_exponent(1.4, 0.4).unwrap(),
            -0.767_600_410_952_808_6,
            max_relative = 1e-12
        );
        assert!(scaling_exponent(1.5, 0.0).is_err());
        assert!(scaling_exponent(1.5, -0.2).is_err());
    }

    #[test]
    fn rejects_out_of_domain_parameters() {
        assert!(ModelParams::new(0.0, 1.5, 0.1, 0.0, 1.0, 4).is_err());
        assert!(ModelParams::new(1.2, 1.5, 0.1, 0.0, 1.0, 4).is_err());
        assert!(ModelParams::new(0.5, 0.9, 0.1, 0.0, 1.0, 4).is_err());
        assert!(ModelParams::new(0.5, 2.1, 0.1, 0.0, 1.0, 4).is_err());
        assert!(ModelParams::new(0.5, 1.5, 0.0, 0.0, 1.0, 4).is_err());
        assert!(ModelParams::new(0.5, 1.5, 0.1, 0.0, 0.0, 4).is_err());
        assert!(ModelParams::new(0.5, 1.5, 0.1, 0.0, 1.0, 0).is_err());
        assert!(ModelParams::new(0.5, 1.5, 1e-300, 0.0, 1.0, 4).is_err());
    }

    #[test]
    fn beta_round_trips_through_sigma() {
        let a = ModelParams::new(0.5, 1.5, 0.02, 0.0, 1.0, 4).unwrap();
        let b = ModelParams::from_beta(0.5, 1.5, a.beta(), 0.0, 1.0, 4).unwrap();
        assert_relative_eq!(a.sigma(), b.sigma(), max_relative = 1e-14);
    }

    #[test]
    fn risk_free_path_has_zero_exponent_and_unit_weight() {
        // dyadic values keep every step exactly r dt
        let prm = ModelParams::new(0.3, 1.3, 0.05, 0.25, 2.0, 8).unwrap();
        let path = DiscretePath::risk_free(4.5, &prm);
        assert_eq!(discrete_exponent(&path, &prm).unwrap(), 0.0);
        assert_eq!(path_weight(&path, &prm).unwrap(), 1.0);

        let zero_rate = params(0.3, 1.3, 0.05, 7);
        let flat = DiscretePath::risk_free(4.6, &zero_rate);
        assert_eq!(discrete_exponent(&flat, &zero_rate).unwrap(), 0.0);
        assert_eq!(path_weight(&flat, &zero_rate).unwrap(), 1.0);
    }

    #[test]
    fn single_step_gaussian_exponent() {
        let prm = params(1.0, 2.0, 0.1, 1);
        let path = DiscretePath::new(vec![0.0, 0.1], 1.0).unwrap();
        let e = discrete_exponent(&path, &prm).unwrap();
        assert_relative_eq!(e, 0.5, max_relative = 1e-14);
        assert_relative_eq!(
            path_weight(&path, &prm).unwrap(),
            0.606_530_659_712_633_4,
            max_relative = 1e-14
        );
    }

    #[test]
    fn two_step_non_gaussian_exponent() {
        let prm = params(0.5, 1.5, 0.1, 2);
        let path = DiscretePath::new(vec![0.0, 0.05, 0.1], 0.5).unwrap();
        // 40-digit evaluation: 4.30935357803180524976...
        assert_relative_eq!(
            discrete_exponent(&path, &prm).unwrap(),
            4.309_353_578_031_805,
            max_relative = 1e-12
        );
    }

    #[test]
    fn perturbing_a_step_lowers_the_weight() {
        let prm = params(0.4, 1.4, 0.02, 5);
        let base = DiscretePath::risk_free(0.0, &prm);
        let mut x = base.log_prices().to_vec();
        x[2] += 1e-3;
        let bumped = DiscretePath::new(x, prm.dt()).unwrap();
        assert!(path_weight(&bumped, &prm).unwrap() < path_weight(&base, &prm).unwrap());
    }

    #[test]
    fn path_length_must_match_slices() {
        let prm = params(1.0, 2.0, 0.1, 3);
        let path = DiscretePath::new(vec![0.0, 0.1], 1.0 / 3.0).unwrap();
        assert!(matches!(
            discrete_exponent(&path, &prm),
            Err(Error::DimensionMismatch { .. })
        ));
        let wrong_dt = DiscretePath::new(vec![0.0, 0.1, 0.2, 0.3], 0.5).unwrap();
        assert!(discrete_exponent(&wrong_dt, &prm).is_err());
    }

    #[test]
    fn deep_tail_saturates_instead_of_nan() {
        let prm = params(1.0, 2.0, 1e-100, 1);
        let path = DiscretePath::new(vec![0.0, 1e100], 1.0).unwrap();
        let e = discrete_exponent(&path, &prm).unwrap();
        assert_eq!(e, EXPONENT_CAP);
        assert_eq!(path_weight(&path, &prm).unwrap(), 0.0);
    }

    #[test]
    fn continuum_action_examples() {
        let path = DiscretePath::new(vec![0.0, 0.1], 1.0).unwrap();
        assert_relative_eq!(
            continuum_action(&path, 1.0, 0.0, 1.0).unwrap(),
            0.1,
            max_relative = 1e-15
        );
        let prm = params(1.0, 1.0, 0.1, 6);
        let flat = DiscretePath::risk_free(1.0, &prm);
        for p in [1.0, 1.3, 2.0] {
            assert_eq!(continuum_action(&flat, p, 0.0, 3.0).unwrap(), 0.0);
        }
        assert!(continuum_action(&flat, 2.5, 0.0, 1.0).is_err());
    }

    #[test]
    fn maximal_earnings_dominates_arbitrage_for_small_steps() {
        // |Omega_i dt| < 1 on every step, equal betas
        let path = DiscretePath::new(vec![0.0, 0.002, -0.001, 0.004, 0.003], 0.25).unwrap();
        let me = continuum_action(&path, 1.0, 0.0, 2.0).unwrap();
        let arb = continuum_action(&path, 2.0, 0.0, 2.0).unwrap();
        assert!(me > arb, "{me} <= {arb}");
    }
}
