//! Square raster storage shared by illumination profiles, masks and images.

use crate::error::{Error, Result};

/// Square grid of `f64` values stored row-major with pixel index `p = y*side + x`,
/// origin at the top-left pixel.
#[derive(Debug, Clone, PartialEq)]
pub struct Grid {
    side: usize,
    values: Vec<f64>,
}

impl Grid {
    pub fn zeros(side: usize) -> Self {
        Grid {
            side,
            values: vec![0.0; side * side],
        }
    }

    /// Wraps a row-major value buffer; `values.len()` must equal `side²`.
    pub fn from_values(side: usize, values: Vec<f64>) -> Result<Self> {
        if values.len() != side * side {
            return Err(Error::dimension_mismatch(format!(
                "expected {} values for a {side}x{side} grid, got {}",
                side * side,
                values.len()
            )));
        }
        Ok(Grid { side, values })
    }

    /// Builds a grid by evaluating `f(x, y)` at every pixel.
    pub fn from_fn(side: usize, mut f: impl FnMut(usize, usize) -> f64) -> Self {
        let mut values = Vec::with_capacity(side * side);
        for y in 0..side {
            for x in 0..side {
                values.push(f(x, y));
            }
        }
        Grid { side, values }
    }

    pub fn side(&self) -> usize {
        self.side
    }

    pub fn len(&self) -> usize {
        self.values.len()
    }

    pub fn is_empty(&self) -> bool {
        self.values.is_empty()
    }

    #[inline]
    pub fn index(&self, x: usize, y: usize) -> usize {
        debug_assert!(x < self.side && y < self.side);
        y * self.side + x
    }

    #[inline]
    pub fn get(&self, x: usize, y: usize) -> f64 {
        self.values[self.index(x, y)]
    }

    #[inline]
    pub fn set(&mut self, x: usize, y: usize, v: f64) {
        let i = self.index(x, y);
        self.values[i] = v;
    }

    pub fn values(&self) -> &[f64] {
        &self.values
    }

    pub fn values_mut(&mut self) -> &mut [f64] {
        &mut self.values
    }

    pub fn into_values(self) -> Vec<f64> {
        self.values
    }

    pub fn min_max(&self) -> (f64, f64) {
        let mut lo = f64::INFINITY;
        let mut hi = f64::NEG_INFINITY;
        for &v in &self.values {
            lo = lo.min(v);
            hi = hi.max(v);
        }
        (lo, hi)
    }

    pub fn norm_l2(&self) -> f64 {
        self.values.iter().map(|v| v * v).sum::<f64>().sqrt()
    }
}

/// Converts a flat pixel index to `(x, y)` coordinates.
pub fn pixel_coords(p: usize, side: usize) -> (usize, usize) {
    (p % side, p / side)
}

/// Converts `(x, y)` coordinates to the flat pixel index `y*side + x`.
pub fn pixel_index(x: usize, y: usize, side: usize) -> usize {
    y * side + x
}
