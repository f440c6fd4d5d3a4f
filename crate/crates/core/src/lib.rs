//! Transition densities of log-returns under a family of non-Gaussian path
//! weights, evaluated by randomized quasi-Monte Carlo, plus the tooling to set
//! them against market data.

pub mod analysis;
pub mod cli;
pub mod error;
pub mod integrator;
pub mod io;
pub mod market;
pub mod model;
pub mod presets;
pub mod sampling;

pub use error::{Error, ErrorKind, Result};
pub use integrator::{pdf_curve, PdfCurve, SamplingConfig, Scheme};
pub use market::{EmpiricalHistogram, PriceSeries};
pub use model::{DiscretePath, ModelParams};
