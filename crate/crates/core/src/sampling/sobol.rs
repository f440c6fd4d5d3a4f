use super::directions::DIRECTIONS;
use super::PointSet;
use crate::error::{Error, Result};

const BITS: usize = 32;
const SCALE: f64 = 1.0 / 4_294_967_296.0;

/// Highest supported dimension.
pub const MAX_DIM: usize = DIRECTIONS.len();

/// Gray-code Sobol generator.
///
/// The origin is skipped: the first point returned is `(0.5, .., 0.5)`.
#[derive(Debug, Clone)]
pub struct Sobol {
    directions: Vec<[u32; BITS]>,
    state: Vec<u32>,
    index: u64,
}

impl Sobol {
    pub fn new(dim: usize) -> Result<Self> {
        if dim == 0 || dim > MAX_DIM {
            return Err(Error::UnsupportedDimension { dim, max: MAX_DIM });
        }
        let directions = DIRECTIONS[..dim]
            .iter()
            .map(|&(s, a, m)| direction_numbers(s, a, m))
            .collect();
        Ok(Self {
            directions,
            state: vec![0; dim],
            index: 0,
        })
    }

    pub fn dim(&self) -> usize {
        self.state.len()
    }

    /// Writes the next point into `out`.
    ///
    /// Panics if `out` has the wrong length or the 2^32 - 1 available points
    /// are exhausted.
    pub fn next_into(&mut self, out: &mut [f64]) {
        assert_eq!(out.len(), self.dim());
        assert!(self.index < u32::MAX as u64, "Sobol sequence exhausted");
        let bit = (self.index as u32).trailing_ones() as usize;
        self.index += 1;
        for ((x, v), o) in self.state.iter_mut().zip(&self.directions).zip(out.iter_mut()) {
            *x ^= v[bit];
            *o = *x as f64 * SCALE;
        }
    }
}

fn direction_numbers(degree: u32, coeffs: u32, m: &[u32]) -> [u32; BITS] {
    let mut v = [0u32; BITS];
    if degree == 0 {
        for (k, vk) in v.iter_mut().enumerate() {
            *vk = 1 << (BITS - 1 - k);
        }
        return v;
    }
    let s = degree as usize;
    for k in 0..s.min(BITS) {
        v[k] = m[k] << (BITS - 1 - k);
    }
    for k in s..BITS {
        let mut x = v[k - s] ^ (v[k - s] >> s);
        for j in 1..s {
            if (coeffs >> (s - 1 - j)) & 1 == 1 {
                x ^= v[k - j];
            }
        }
        v[k] = x;
    }
    v
}

/// First `n` points of the `dim`-dimensional Sobol sequence, origin skipped.
pub fn sobol_points(dim: usize, n: usize) -> Result<PointSet> {
    if n == 0 {
        return Err(Error::InvalidParameter("at least one point is required".into()));
    }
    if n as u64 >= u32::MAX as u64 {
        return Err(Error::InvalidParameter(format!(
            "at most {} Sobol points",
            u32::MAX - 1
        )));
    }
    let mut gen = Sobol::new(dim)?;
    let mut coords = vec![0.0; n * dim];
    for row in coords.chunks_exact_mut(dim) {
        gen.next_into(row);
    }
    Ok(PointSet::from_flat(dim, coords))
}
