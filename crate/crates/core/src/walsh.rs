//! Walsh functions, 2D Walsh-Hadamard masks, superposition masks and the fast
//! transform backing every analysis/synthesis step.
//!
//! Conventions used throughout the crate:
//!
//! * Pixels are indexed row-major, `p = y*m + x`, origin at the top-left pixel.
//! * A mask index `j` in `[0, M)` with `M = m²` splits as `j = u*m + v` where
//!   `u` is the row (y-axis) function index and `v` the column (x-axis) one,
//!   mirroring the pixel convention. A flattened mask is then exactly row `j`
//!   of the natural-order `M×M` Hadamard matrix, so [`fwht`] performs both
//!   mask synthesis and spectrum analysis with no index shuffling.
//! * Masks come in two normalizations: the *mask view* with `±1` entries
//!   (rendering, image synthesis) and the *state view* with `±1/√M` entries
//!   (inner products, probabilities). Functions document which view they use.

use crate::error::{Error, Result};

pub(crate) fn require_power_of_two(n: usize, what: &str) -> Result<()> {
    if n.is_power_of_two() {
        Ok(())
    } else {
        Err(Error::invalid_argument(format!(
            "{what} must be a power of two, got {n}"
        )))
    }
}

/// Index ordering of the Walsh basis.
///
/// Natural (Hadamard) ordering lists functions as rows of the Sylvester
/// construction; sequency ordering sorts them by number of sign changes.
/// Both orderings enumerate the same `M` functions.
#[derive(Debug, Clone, Copy, PartialEq, Eq, serde::Serialize, serde::Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum WalshOrdering {
    Natural,
    Sequency,
}

impl WalshOrdering {
    /// Maps a per-axis function index under this ordering to the natural index.
    fn axis_to_natural(self, u: usize, m: usize) -> usize {
        match self {
            WalshOrdering::Natural => u,
            WalshOrdering::Sequency => sequency_to_natural(u, m),
        }
    }
}

impl std::str::FromStr for WalshOrdering {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s {
            "natural" => Ok(WalshOrdering::Natural),
            "sequency" => Ok(WalshOrdering::Sequency),
            other => Err(Error::invalid_argument(format!(
                "unknown ordering '{other}' (expected 'natural' or 'sequency')"
            ))),
        }
    }
}

impl std::fmt::Display for WalshOrdering {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        match self {
            WalshOrdering::Natural => write!(f, "natural"),
            WalshOrdering::Sequency => write!(f, "sequency"),
        }
    }
}

/// Natural index of the sequency-ordered Walsh function `s` on `m` points:
/// bit-reversed Gray code of `s`. The resulting function has exactly `s`
/// sign changes.
pub fn sequency_to_natural(s: usize, m: usize) -> usize {
    debug_assert!(m.is_power_of_two() && s < m);
    let bits = m.trailing_zeros();
    let gray = s ^ (s >> 1);
    let mut rev = 0usize;
    for b in 0..bits {
        if gray & (1 << b) != 0 {
            rev |= 1 << (bits - 1 - b);
        }
    }
    rev
}

/// The permutation `sequency index -> natural index` for side `m`.
pub fn sequency_permutation(m: usize) -> Result<Vec<usize>> {
    require_power_of_two(m, "m")?;
    Ok((0..m).map(|s| sequency_to_natural(s, m)).collect())
}

/// The `u`-th Walsh function sampled on `m` points, entries in `{+1, -1}`.
///
/// Natural ordering returns row `u` of the Sylvester Hadamard matrix,
/// `W_u(x) = (-1)^popcount(u & x)`.
pub fn walsh_1d(u: usize, m: usize, ordering: WalshOrdering) -> Result<Vec<i8>> {
    require_power_of_two(m, "m")?;
    if u >= m {
        return Err(Error::invalid_argument(format!(
            "function index {u} out of range for m = {m}"
        )));
    }
    let n = ordering.axis_to_natural(u, m);
    Ok((0..m)
        .map(|x| {
            if (n & x).count_ones().is_multiple_of(2) {
                1
            } else {
                -1
            }
        })
        .collect())
}

/// A 2D Walsh-Hadamard mask in the mask view (`±1` entries), stored row-major.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct WalshMask {
    side: usize,
    index: usize,
    ordering: WalshOrdering,
    values: Vec<i8>,
}

impl WalshMask {
    pub fn side(&self) -> usize {
        self.side
    }

    pub fn index(&self) -> usize {
        self.index
    }

    pub fn ordering(&self) -> WalshOrdering {
        self.ordering
    }

    #[inline]
    pub fn value(&self, x: usize, y: usize) -> i8 {
        self.values[y * self.side + x]
    }

    /// Row-major `±1` entries.
    pub fn values(&self) -> &[i8] {
        &self.values
    }

    /// Row-major mask-view entries as `f64` (`±1`).
    pub fn mask_view(&self) -> Vec<f64> {
        self.values.iter().map(|&v| f64::from(v)).collect()
    }

    /// Row-major state-view entries (`±1/√M`), the components of `|h_j⟩`.
    pub fn state_view(&self) -> Vec<f64> {
        let norm = 1.0 / (self.values.len() as f64).sqrt();
        self.values.iter().map(|&v| f64::from(v) * norm).collect()
    }
}

/// Builds mask `j` of side `m` as the outer product of two 1D Walsh functions,
/// `mask(x, y) = W_u(y) · W_v(x)` with `j = u*m + v`.
pub fn mask_2d(j: usize, m: usize, ordering: WalshOrdering) -> Result<WalshMask> {
    require_power_of_two(m, "m")?;
    let dim = m * m;
    if j >= dim {
        return Err(Error::invalid_argument(format!(
            "mask index {j} out of range for m = {m} (M = {dim})"
        )));
    }
    let row = walsh_1d(j / m, m, ordering)?;
    let col = walsh_1d(j % m, m, ordering)?;
    let mut values = Vec::with_capacity(dim);
    for &ry in &row {
        for &cx in &col {
            values.push(ry * cx);
        }
    }
    Ok(WalshMask {
        side: m,
        index: j,
        ordering,
        values,
    })
}

/// A superposition projector mask `(h_0 - h_j)/√2`, entries in `{0, √2}`.
#[derive(Debug, Clone, PartialEq)]
pub struct SuperpositionMask {
    side: usize,
    index: usize,
    ordering: WalshOrdering,
    values: Vec<f64>,
}

impl SuperpositionMask {
    pub fn side(&self) -> usize {
        self.side
    }

    pub fn index(&self) -> usize {
        self.index
    }

    pub fn ordering(&self) -> WalshOrdering {
        self.ordering
    }

    #[inline]
    pub fn value(&self, x: usize, y: usize) -> f64 {
        self.values[y * self.side + x]
    }

    /// Row-major entries, each exactly `0` or `√2`.
    pub fn values(&self) -> &[f64] {
        &self.values
    }
}

/// Builds the superposition mask `q_j = (h_0 - h_j)/√2` entrywise from the
/// mask-view Walsh masks. `q_0` is identically zero. Since `h_0` is all `+1`,
/// every entry is exactly `0` or `√2`.
pub fn superposition_mask(
    j: usize,
    m: usize,
    ordering: WalshOrdering,
) -> Result<SuperpositionMask> {
    let base = mask_2d(0, m, ordering)?;
    let other = mask_2d(j, m, ordering)?;
    let values = base
        .values()
        .iter()
        .zip(other.values())
        .map(|(&a, &b)| {
            if a == b {
                0.0
            } else {
                std::f64::consts::SQRT_2
            }
        })
        .collect();
    Ok(SuperpositionMask {
        side: m,
        index: j,
        ordering,
        values,
    })
}

/// In-place fast Walsh-Hadamard transform (natural order, unnormalized):
/// replaces `v` with `H·v` where `H` has `±1` entries. Applying it twice
/// multiplies the input by `len`. The length must be a power of two.
pub fn fwht_in_place(v: &mut [f64]) -> Result<()> {
    require_power_of_two(v.len(), "transform length")?;
    let n = v.len();
    let mut h = 1;
    while h < n {
        let mut i = 0;
        while i < n {
            for j in i..i + h {
                let a = v[j];
                let b = v[j + h];
                v[j] = a + b;
                v[j + h] = a - b;
            }
            i += h * 2;
        }
        h *= 2;
    }
    Ok(())
}

/// Out-of-place [`fwht_in_place`].
pub fn fwht(v: &[f64]) -> Result<Vec<f64>> {
    let mut out = v.to_vec();
    fwht_in_place(&mut out)?;
    Ok(out)
}

/// Replicates each logical pixel of an `side×side` raster into a
/// `(screen/side)²` block. `screen` must be divisible by `side`;
/// block-downsampling the output recovers the input exactly.
pub fn render_superpixel<T: Copy>(values: &[T], side: usize, screen: usize) -> Result<Vec<T>> {
    if values.len() != side * side {
        return Err(Error::dimension_mismatch(format!(
            "expected {} values for side {side}, got {}",
            side * side,
            values.len()
        )));
    }
    if side == 0 || !screen.is_multiple_of(side) {
        return Err(Error::invalid_argument(format!(
            "screen size {screen} is not divisible by mask side {side}"
        )));
    }
    let k = screen / side;
    let mut out = Vec::with_capacity(screen * screen);
    for sy in 0..screen {
        let y = sy / k;
        for sx in 0..screen {
            out.push(values[y * side + sx / k]);
        }
    }
    Ok(out)
}
