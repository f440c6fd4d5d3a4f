//! Point sets in the unit hypercube: Sobol sequences with random shifts for
//! error estimation, a crude Monte Carlo sampler, and the affine map onto an
//! integration box.

mod directions;
mod sobol;

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

pub use sobol::{sobol_points, Sobol, MAX_DIM};

use crate::error::{Error, Result};

/// Default number of shifted replicas.
pub const DEFAULT_REPLICAS: usize = 10;

/// `n` points in `[0, 1)^dim`, stored row-major.
#[derive(Debug, Clone, PartialEq)]
pub struct PointSet {
    dim: usize,
    coords: Vec<f64>,
}

impl PointSet {
    pub(crate) fn from_flat(dim: usize, coords: Vec<f64>) -> Self {
        debug_assert!(dim > 0 && coords.len().is_multiple_of(dim));
        Self { dim, coords }
    }

    pub fn new(dim: usize, coords: Vec<f64>) -> Result<Self> {
        if dim == 0 || !coords.len().is_multiple_of(dim) {
            return Err(Error::InvalidParameter(format!(
                "{} coordinates do not form points of dimension {dim}",
                coords.len()
            )));
        }
        if coords.iter().any(|c| !(0.0..1.0).contains(c)) {
            return Err(Error::InvalidParameter("coordinates must lie in [0, 1)".into()));
        }
        Ok(Self { dim, coords })
    }

    pub fn dim(&self) -> usize {
        self.dim
    }

    pub fn len(&self) -> usize {
        self.coords.len() / self.dim
    }

    pub fn is_empty(&self) -> bool {
        self.coords.is_empty()
    }

    pub fn point(&self, i: usize) -> &[f64] {
        &self.coords[i * self.dim..(i + 1) * self.dim]
    }

    pub fn iter(&self) -> impl ExactSizeIterator<Item = &[f64]> + '_ {
        self.coords.chunks_exact(self.dim)
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum GeneratorKind {
    SobolShifted,
    CrudeMc,
}

impl GeneratorKind {
    pub fn name(&self) -> &'static str {
        match self {
            GeneratorKind::SobolShifted => "sobol",
            GeneratorKind::CrudeMc => "cmc",
        }
    }
}

/// A base point set and the replicas derived from it.
///
/// Shifted Sobol batches hold one base set and `R` shift vectors; replica `r`
/// is the base set translated by `shifts[r]` modulo 1. Crude Monte Carlo
/// batches are a single unshifted replica of i.i.d. points.
#[derive(Debug, Clone, PartialEq)]
pub struct SampleBatch {
    kind: GeneratorKind,
    base: PointSet,
    shifts: Vec<Vec<f64>>,
}

impl SampleBatch {
    /// Replicas from explicit shift vectors.
    pub fn with_shifts(base: PointSet, shifts: Vec<Vec<f64>>) -> Result<Self> {
        if shifts.is_empty() {
            return Err(Error::InvalidParameter("at least one shift is required".into()));
        }
        for s in &shifts {
            if s.len() != base.dim() {
                return Err(Error::DimensionMismatch {
                    expected: base.dim(),
                    actual: s.len(),
                });
            }
            if s.iter().any(|c| !(0.0..1.0).contains(c)) {
                return Err(Error::InvalidParameter("shift coordinates must lie in [0, 1)".into()));
            }
        }
        Ok(Self {
            kind: GeneratorKind::SobolShifted,
            base,
            shifts,
        })
    }

    pub fn kind(&self) -> GeneratorKind {
        self.kind
    }

    pub fn dim(&self) -> usize {
        self.base.dim()
    }

    pub fn points_per_replica(&self) -> usize {
        self.base.len()
    }

    pub fn replicas(&self) -> usize {
        self.shifts.len()
    }

    pub fn base(&self) -> &PointSet {
        &self.base
    }

    pub fn shift(&self, replica: usize) -> &[f64] {
        &self.shifts[replica]
    }

    /// Writes point `i` of replica `r` into `out`.
    #[inline]
    pub fn point_into(&self, r: usize, i: usize, out: &mut [f64]) {
        let shift = &self.shifts[r];
        for ((o, &x), &s) in out.iter_mut().zip(self.base.point(i)).zip(shift) {
            let y = x + s;
            *o = if y >= 1.0 { y - 1.0 } else { y };
        }
    }

    /// Materializes replica `r`.
    pub fn replica(&self, r: usize) -> PointSet {
        let dim = self.dim();
        let mut coords = vec![0.0; self.base.coords.len()];
        for (i, row) in coords.chunks_exact_mut(dim).enumerate() {
            self.point_into(r, i, row);
        }
        PointSet::from_flat(dim, coords)
    }
}

/// `R` copies of `base`, each shifted modulo 1 by an independent uniform
/// vector.
///
/// Shift `r` is drawn from stream `r` of a ChaCha generator keyed by `seed`,
/// so it does not depend on `R` or on evaluation order.
pub fn shifted_replicas(base: PointSet, replicas: usize, seed: u64) -> Result<SampleBatch> {
    if replicas < 2 {
        return Err(Error::InvalidParameter(format!(
            "at least two replicas are needed for an error estimate, got {replicas}"
        )));
    }
    let shifts = (0..replicas)
        .map(|r| {
            let mut rng = ChaCha8Rng::seed_from_u64(seed);
            rng.set_stream(r as u64);
            (0..base.dim()).map(|_| rng.random::<f64>()).collect()
        })
        .collect();
    SampleBatch::with_shifts(base, shifts)
}

/// Sobol base set plus shifted replicas in one call.
pub fn sobol_batch(dim: usize, n: usize, replicas: usize, seed: u64) -> Result<SampleBatch> {
    shifted_replicas(sobol_points(dim, n)?, replicas, seed)
}

/// One replica of `n` i.i.d. uniform points.
pub fn cmc_points(dim: usize, n: usize, seed: u64) -> Result<SampleBatch> {
    if dim == 0 || n == 0 {
        return Err(Error::InvalidParameter(format!(
            "crude Monte Carlo needs dim >= 1 and n >= 1, got dim = {dim}, n = {n}"
        )));
    }
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    // stream 0.. are taken by shifts; keep the i.i.d. stream disjoint
    rng.set_stream(u64::MAX);
    let coords = (0..n * dim).map(|_| rng.random::<f64>()).collect();
    Ok(SampleBatch {
        kind: GeneratorKind::CrudeMc,
        base: PointSet::from_flat(dim, coords),
        shifts: vec![vec![0.0; dim]],
    })
}

/// Axis-aligned box of intermediate log-prices.
#[derive(Debug, Clone, PartialEq)]
pub struct IntegrationBox {
    centers: Vec<f64>,
    half_widths: Vec<f64>,
}

impl IntegrationBox {
    pub fn new(centers: Vec<f64>, half_widths: Vec<f64>) -> Result<Self> {
        if centers.len() != half_widths.len() {
            return Err(Error::DimensionMismatch {
                expected: centers.len(),
                actual: half_widths.len(),
            });
        }
        if let Some((coord, &w)) = half_widths
            .iter()
            .enumerate()
            .find(|(_, w)| !(**w > 0.0 && w.is_finite()))
        {
            return Err(Error::DegenerateBox { coord, half_width: w });
        }
        Ok(Self { centers, half_widths })
    }

    pub fn dim(&self) -> usize {
        self.centers.len()
    }

    pub fn centers(&self) -> &[f64] {
        &self.centers
    }

    pub fn half_widths(&self) -> &[f64] {
        &self.half_widths
    }

    /// Volume `prod_k 2 w_k`.
    pub fn jacobian(&self) -> f64 {
        self.half_widths.iter().map(|w| 2.0 * w).product()
    }

    /// Same box translated by `offset` in every coordinate.
    pub fn translated(&self, offset: f64) -> Self {
        Self {
            centers: self.centers.iter().map(|c| c + offset).collect(),
            half_widths: self.half_widths.clone(),
        }
    }

    #[inline]
    pub(crate) fn map_into(&self, point: &[f64], out: &mut [f64]) {
        for (((o, &u), &c), &w) in out.iter_mut().zip(point).zip(&self.centers).zip(&self.half_widths) {
            *o = c + (2.0 * u - 1.0) * w;
        }
    }
}

/// Affine map `u -> center + (2u - 1) w`, returned together with the box
/// Jacobian.
pub fn map_to_box(point: &[f64], bx: &IntegrationBox) -> Result<(Vec<f64>, f64)> {
    if point.len() != bx.dim() {
        return Err(Error::DimensionMismatch {
            expected: bx.dim(),
            actual: point.len(),
        });
    }
    let mut out = vec![0.0; bx.dim()];
    bx.map_into(point, &mut out);
    Ok((out, bx.jacobian()))
}
