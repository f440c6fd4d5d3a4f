//! Convergence in the slice count, the two-step composition check, and
//! model-to-data comparison.

mod ck;
mod convergence;
mod fit;
mod metric;

pub use ck::{ck_residual, CkReport, DEFAULT_CK_MESH};
pub use convergence::{convergence_study, ConvergenceReport};
pub use fit::{compare_model_to_data, parameter_sweep, FitMetrics, SweepRow, DEFAULT_ERRBAR_MULTIPLE};
pub use metric::{extreme_price_metric, ExtremeMetric};

pub(crate) use fit::compare_densities;
