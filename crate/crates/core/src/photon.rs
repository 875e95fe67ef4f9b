//! Bi-photon source model: Schmidt-coefficient illumination profiles, oracle
//! objects marking database elements, and the heralded idler state.
//!
//! Schmidt coefficients are real and nonnegative; the oracle contributes the
//! only signs. Every `SchmidtState` satisfies `Σ λ_j² = 1` by construction.

use std::path::Path;

use crate::error::{Error, Result};
use crate::grid::Grid;
use crate::pgm;
use crate::walsh::require_power_of_two;

/// Placement of the uniform database block inside the full pixel grid.
#[derive(Debug, Clone, Copy, PartialEq, Eq, serde::Serialize, serde::Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Placement {
    /// Block anchored at the top-left pixel.
    Origin,
    /// Block centered on the grid; requires `(m - n)` even.
    Centered,
}

impl std::str::FromStr for Placement {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s {
            "origin" => Ok(Placement::Origin),
            "centered" => Ok(Placement::Centered),
            other => Err(Error::invalid_argument(format!(
                "unknown placement '{other}' (expected 'origin' or 'centered')"
            ))),
        }
    }
}

/// Record of how a Schmidt amplitude grid was built.
#[derive(Debug, Clone, PartialEq, serde::Serialize)]
#[serde(tag = "kind", rename_all = "lowercase")]
pub enum ProfileMeta {
    Uniform { n: usize, placement: Placement },
    Gaussian { waist: f64, center: (f64, f64) },
    Custom,
}

/// Nonnegative amplitude grid `λ` over `m×m` pixels — the database
/// illumination, normalized to `Σ λ_j² = 1`.
#[derive(Debug, Clone, PartialEq)]
pub struct SchmidtState {
    side: usize,
    lambda: Grid,
    profile: ProfileMeta,
}

impl SchmidtState {
    /// Flat illumination over an `n×n` block: `λ = 1/n` inside, `0` outside,
    /// so the database holds `N = n²` equally weighted elements.
    pub fn uniform_block(m: usize, n: usize, placement: Placement) -> Result<Self> {
        require_power_of_two(m, "m")?;
        if n == 0 || n > m {
            return Err(Error::invalid_argument(format!(
                "block side n = {n} must satisfy 1 <= n <= m = {m}"
            )));
        }
        let offset = match placement {
            Placement::Origin => 0,
            Placement::Centered => {
                if !(m - n).is_multiple_of(2) {
                    return Err(Error::invalid_argument(format!(
                        "centered placement requires (m - n) even, got m = {m}, n = {n}"
                    )));
                }
                (m - n) / 2
            }
        };
        let amp = 1.0 / n as f64;
        let lambda = Grid::from_fn(m, |x, y| {
            let inside = x >= offset && x < offset + n && y >= offset && y < offset + n;
            if inside {
                amp
            } else {
                0.0
            }
        });
        Ok(SchmidtState {
            side: m,
            lambda,
            profile: ProfileMeta::Uniform { n, placement },
        })
    }

    /// Gaussian illumination `λ(x, y) ∝ exp(-((x-x₀)² + (y-y₀)²)/w²)`,
    /// normalized to `Σ λ² = 1`. `w` is the 1/e² intensity radius in pixel
    /// units (`λ²  ∝ exp(-2 r²/w²)`). `center` defaults to the grid center
    /// `((m-1)/2, (m-1)/2)`.
    pub fn gaussian(m: usize, waist: f64, center: Option<(f64, f64)>) -> Result<Self> {
        require_power_of_two(m, "m")?;
        if !waist.is_finite() || waist <= 0.0 {
            return Err(Error::invalid_argument(format!(
                "waist must be positive, got {waist}"
            )));
        }
        let c = center.unwrap_or(((m as f64 - 1.0) / 2.0, (m as f64 - 1.0) / 2.0));
        let mut lambda = Grid::from_fn(m, |x, y| {
            let dx = x as f64 - c.0;
            let dy = y as f64 - c.1;
            (-(dx * dx + dy * dy) / (waist * waist)).exp()
        });
        normalize(&mut lambda)?;
        Ok(SchmidtState {
            side: m,
            lambda,
            profile: ProfileMeta::Gaussian { waist, center: c },
        })
    }

    /// Wraps an arbitrary nonnegative amplitude grid, rescaling to `Σ λ² = 1`.
    pub fn from_lambda(mut lambda: Grid) -> Result<Self> {
        require_power_of_two(lambda.side(), "m")?;
        if lambda.values().iter().any(|&v| v < 0.0 || !v.is_finite()) {
            return Err(Error::InvalidState(
                "Schmidt amplitudes must be finite and nonnegative".into(),
            ));
        }
        normalize(&mut lambda)?;
        Ok(SchmidtState {
            side: lambda.side(),
            lambda,
            profile: ProfileMeta::Custom,
        })
    }

    pub fn side(&self) -> usize {
        self.side
    }

    /// Total pixel count `M = m²`.
    pub fn dim(&self) -> usize {
        self.side * self.side
    }

    pub fn lambda(&self) -> &Grid {
        &self.lambda
    }

    pub fn profile(&self) -> &ProfileMeta {
        &self.profile
    }

    pub fn norm_squared(&self) -> f64 {
        self.lambda.values().iter().map(|v| v * v).sum()
    }

    /// Schmidt number `K = 1/Σ λ⁴`, the participation ratio of the Schmidt
    /// spectrum. Uniform illumination over `N` pixels gives exactly `K = N`.
    pub fn schmidt_number(&self) -> f64 {
        let quartic: f64 = self.lambda.values().iter().map(|v| v.powi(4)).sum();
        1.0 / quartic
    }

    /// Effective database side `n_eff = 2·√ω`, with `ω` the per-axis average
    /// second moment of the intensity `λ²` about its centroid. A Gaussian of
    /// waist `w` gives `n_eff = w`; a uniform `n×n` block gives
    /// `2·√((n²-1)/12)`.
    pub fn effective_block_side(&self) -> f64 {
        let m = self.side;
        let mut cx = 0.0;
        let mut cy = 0.0;
        for y in 0..m {
            for x in 0..m {
                let w = self.lambda.get(x, y).powi(2);
                cx += w * x as f64;
                cy += w * y as f64;
            }
        }
        let mut wx = 0.0;
        let mut wy = 0.0;
        for y in 0..m {
            for x in 0..m {
                let w = self.lambda.get(x, y).powi(2);
                wx += w * (x as f64 - cx).powi(2);
                wy += w * (y as f64 - cy).powi(2);
            }
        }
        2.0 * ((wx + wy) / 2.0).sqrt()
    }

    /// The pixel used as "database center" when placing default marks:
    /// `offset + n/2` per axis for blocks, the rounded profile center for
    /// Gaussians. For centered placements this is `(m/2, m/2)`.
    pub fn database_center(&self) -> (usize, usize) {
        match self.profile {
            ProfileMeta::Uniform {
                n,
                placement: Placement::Origin,
            } => (n / 2, n / 2),
            ProfileMeta::Uniform {
                n,
                placement: Placement::Centered,
            } => {
                let c = (self.side - n) / 2 + n / 2;
                (c, c)
            }
            ProfileMeta::Gaussian { center, .. } => (
                (center.0.round() as usize).min(self.side - 1),
                (center.1.round() as usize).min(self.side - 1),
            ),
            ProfileMeta::Custom => (self.side / 2, self.side / 2),
        }
    }
}

fn normalize(lambda: &mut Grid) -> Result<()> {
    let norm: f64 = lambda.values().iter().map(|v| v * v).sum::<f64>().sqrt();
    if norm == 0.0 || !norm.is_finite() {
        return Err(Error::InvalidState(
            "cannot normalize an all-zero amplitude grid".into(),
        ));
    }
    for v in lambda.values_mut() {
        *v /= norm;
    }
    Ok(())
}

/// Finds the Gaussian waist whose Schmidt number matches `target` on an
/// `m×m` grid (bisection; `K` is monotone in the waist while the profile
/// fits the grid).
pub fn waist_for_schmidt_number(m: usize, target: f64) -> Result<f64> {
    require_power_of_two(m, "m")?;
    if !target.is_finite() || target < 1.0 {
        return Err(Error::invalid_argument(format!(
            "target Schmidt number must be >= 1, got {target}"
        )));
    }
    let k_of = |w: f64| -> Result<f64> { Ok(SchmidtState::gaussian(m, w, None)?.schmidt_number()) };
    let mut lo = 1e-3;
    let mut hi = m as f64;
    if k_of(hi)? < target {
        return Err(Error::invalid_argument(format!(
            "target Schmidt number {target} is unreachable on an {m}x{m} grid"
        )));
    }
    for _ in 0..200 {
        let mid = 0.5 * (lo + hi);
        if k_of(mid)? < target {
            lo = mid;
        } else {
            hi = mid;
        }
    }
    Ok(0.5 * (lo + hi))
}

/// Binary mark grid `f(j) ∈ {0, 1}` defining which pixel states receive a
/// π phase. An empty object is the identity oracle.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct OracleObject {
    side: usize,
    marks: Vec<u8>,
}

impl OracleObject {
    /// Wraps a row-major mark buffer; entries must be 0 or 1.
    pub fn new(side: usize, marks: Vec<u8>) -> Result<Self> {
        if marks.len() != side * side {
            return Err(Error::dimension_mismatch(format!(
                "expected {} marks for side {side}, got {}",
                side * side,
                marks.len()
            )));
        }
        if marks.iter().any(|&v| v > 1) {
            return Err(Error::InvalidState("marks must be 0 or 1".into()));
        }
        Ok(OracleObject { side, marks })
    }

    pub fn empty(side: usize) -> Self {
        OracleObject {
            side,
            marks: vec![0; side * side],
        }
    }

    /// Single marked pixel at `(x, y)`.
    pub fn single_mark(side: usize, x: usize, y: usize) -> Result<Self> {
        if x >= side || y >= side {
            return Err(Error::invalid_argument(format!(
                "mark ({x}, {y}) outside an {side}x{side} grid"
            )));
        }
        let mut obj = OracleObject::empty(side);
        obj.marks[y * side + x] = 1;
        Ok(obj)
    }

    pub fn side(&self) -> usize {
        self.side
    }

    pub fn dim(&self) -> usize {
        self.side * self.side
    }

    pub fn marks(&self) -> &[u8] {
        &self.marks
    }

    #[inline]
    pub fn is_marked(&self, x: usize, y: usize) -> bool {
        self.marks[y * self.side + x] == 1
    }

    pub fn marked_count(&self) -> usize {
        self.marks.iter().filter(|&&v| v == 1).count()
    }

    /// Flat indices of the marked pixels.
    pub fn marked_indices(&self) -> Vec<usize> {
        self.marks
            .iter()
            .enumerate()
            .filter_map(|(i, &v)| (v == 1).then_some(i))
            .collect()
    }
}

/// Objects shipped with the library.
#[derive(Debug, Clone, Copy, PartialEq, Eq, serde::Serialize, serde::Deserialize)]
pub enum BuiltinObject {
    /// Letter-G raster; available at m ∈ {32, 64, 128}.
    LetterG,
    /// Centered filled square of side `max(2, m/8)`, sized to sit inside a
    /// typical illumination profile.
    Block,
    /// Two marked pixels at `(m/4, m/2)` and `(3m/4, m/2)`.
    TwoPoints,
    /// No marks (identity oracle).
    Empty,
}

impl std::str::FromStr for BuiltinObject {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s {
            "letter-G" | "letter-g" => Ok(BuiltinObject::LetterG),
            "block" => Ok(BuiltinObject::Block),
            "two-points" => Ok(BuiltinObject::TwoPoints),
            "empty" => Ok(BuiltinObject::Empty),
            other => Err(Error::invalid_argument(format!(
                "unknown builtin object '{other}' (expected letter-G, block, two-points or empty)"
            ))),
        }
    }
}

/// Base glyph for the letter-G raster; shipped sizes upscale it by an
/// integer factor, keeping the mark pattern fixed across resolutions.
const LETTER_G_8X8: [&str; 8] = [
    "01111100", "11000110", "11000000", "11000000", "11001110", "11000110", "11000110", "01111100",
];

/// Builds one of the shipped objects at side `m`.
pub fn builtin_object(which: BuiltinObject, m: usize) -> Result<OracleObject> {
    require_power_of_two(m, "m")?;
    match which {
        BuiltinObject::Empty => Ok(OracleObject::empty(m)),
        BuiltinObject::TwoPoints => {
            let mut obj = OracleObject::empty(m);
            let y = m / 2;
            obj.marks[y * m + m / 4] = 1;
            obj.marks[y * m + 3 * m / 4] = 1;
            Ok(obj)
        }
        BuiltinObject::Block => {
            let n = (m / 8).max(2).min(m);
            let offset = (m - n) / 2;
            let mut obj = OracleObject::empty(m);
            for y in offset..offset + n {
                for x in offset..offset + n {
                    obj.marks[y * m + x] = 1;
                }
            }
            Ok(obj)
        }
        BuiltinObject::LetterG => {
            if !matches!(m, 32 | 64 | 128) {
                return Err(Error::invalid_argument(format!(
                    "the letter-G raster ships at m = 32, 64 or 128, got {m}"
                )));
            }
            // Glyph box of side m/4, centered, so the marks sit well inside
            // a source waist of ~m/10.
            let box_side = m / 4;
            let scale = box_side / 8;
            let offset = (m - box_side) / 2;
            let mut obj = OracleObject::empty(m);
            for (gy, row) in LETTER_G_8X8.iter().enumerate() {
                for (gx, ch) in row.bytes().enumerate() {
                    if ch == b'1' {
                        for dy in 0..scale {
                            for dx in 0..scale {
                                let x = offset + gx * scale + dx;
                                let y = offset + gy * scale + dy;
                                obj.marks[y * m + x] = 1;
                            }
                        }
                    }
                }
            }
            Ok(obj)
        }
    }
}

/// Loads an object raster from a file. ASCII grids consist of optional
/// leading `#` comment lines followed by `m` rows of `m` characters from
/// `{0, 1}`; PGM files (P2 or P5) map any nonzero sample to a mark.
pub fn load_object(path: impl AsRef<Path>) -> Result<OracleObject> {
    let bytes = std::fs::read(path.as_ref())?;
    if bytes.starts_with(b"P2") || bytes.starts_with(b"P5") {
        let image = pgm::parse(&bytes)?;
        if image.width != image.height {
            return Err(Error::dimension_mismatch(format!(
                "object rasters must be square, got {}x{}",
                image.width, image.height
            )));
        }
        let marks = image.pixels.iter().map(|&v| u8::from(v != 0)).collect();
        return OracleObject::new(image.width, marks);
    }
    parse_ascii_object(&bytes)
}

fn parse_ascii_object(bytes: &[u8]) -> Result<OracleObject> {
    let text = std::str::from_utf8(bytes).map_err(|_| Error::Parse {
        line: 1,
        column: 1,
        message: "object file is not valid UTF-8".into(),
    })?;
    let mut rows: Vec<Vec<u8>> = Vec::new();
    let mut width = None;
    let mut in_header = true;
    for (idx, raw) in text.lines().enumerate() {
        let line = raw.trim_end_matches('\r');
        if in_header && (line.is_empty() || line.starts_with('#')) {
            continue;
        }
        in_header = false;
        if line.is_empty() {
            continue;
        }
        let mut row = Vec::with_capacity(line.len());
        for (cidx, ch) in line.chars().enumerate() {
            match ch {
                '0' => row.push(0),
                '1' => row.push(1),
                other => {
                    return Err(Error::Parse {
                        line: idx + 1,
                        column: cidx + 1,
                        message: format!("expected '0' or '1', found {other:?}"),
                    })
                }
            }
        }
        if let Some(w) = width {
            if row.len() != w {
                return Err(Error::Parse {
                    line: idx + 1,
                    column: row.len() + 1,
                    message: format!("row has {} columns, expected {w}", row.len()),
                });
            }
        } else {
            width = Some(row.len());
        }
        rows.push(row);
    }
    let width = width.ok_or_else(|| Error::Parse {
        line: 1,
        column: 1,
        message: "object file contains no grid rows".into(),
    })?;
    if rows.len() != width {
        return Err(Error::dimension_mismatch(format!(
            "object rasters must be square, got {} rows of {width} columns",
            rows.len()
        )));
    }
    OracleObject::new(width, rows.concat())
}

/// Signed amplitude grid `o'_j = λ_j · (-1)^{f(j)}` after the signal photon
/// is heralded through the bucket detector.
#[derive(Debug, Clone, PartialEq)]
pub struct IdlerState {
    side: usize,
    amplitudes: Grid,
}

impl IdlerState {
    pub fn side(&self) -> usize {
        self.side
    }

    pub fn dim(&self) -> usize {
        self.side * self.side
    }

    pub fn amplitudes(&self) -> &Grid {
        &self.amplitudes
    }
}

/// Applies the oracle to the Schmidt state, flipping the sign of every marked
/// amplitude. Norm is preserved (`Σ o'² = 1`).
pub fn apply_oracle(state: &SchmidtState, object: &OracleObject) -> Result<IdlerState> {
    if state.side() != object.side() {
        return Err(Error::dimension_mismatch(format!(
            "state side {} does not match object side {}",
            state.side(),
            object.side()
        )));
    }
    let m = state.side();
    let amplitudes = Grid::from_fn(m, |x, y| {
        let lambda = state.lambda().get(x, y);
        if object.is_marked(x, y) {
            -lambda
        } else {
            lambda
        }
    });
    Ok(IdlerState {
        side: m,
        amplitudes,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use proptest::prelude::*;

    #[test]
    fn uniform_block_examples() {
        let s = SchmidtState::uniform_block(2, 2, Placement::Origin).unwrap();
        assert!(s.lambda().values().iter().all(|&v| v == 0.5));

        let s = SchmidtState::uniform_block(8, 4, Placement::Origin).unwrap();
        let at_quarter = s.lambda().values().iter().filter(|&&v| v == 0.25).count();
        let at_zero = s.lambda().values().iter().filter(|&&v| v == 0.0).count();
        assert_eq!((at_quarter, at_zero), (16, 48));
        assert!((s.norm_squared() - 1.0).abs() < 1e-12);
    }

    #[test]
    fn centered_parity_rule() {
        assert!(SchmidtState::uniform_block(8, 6, Placement::Centered).is_ok());
        assert!(SchmidtState::uniform_block(8, 5, Placement::Centered).is_err());
        assert!(SchmidtState::uniform_block(8, 9, Placement::Origin).is_err());
        assert!(SchmidtState::uniform_block(8, 0, Placement::Origin).is_err());
    }

    #[test]
    fn gaussian_flat_limit_approaches_uniform() {
        let g = SchmidtState::gaussian(8, 1e6, None).unwrap();
        let u = SchmidtState::uniform_block(8, 8, Placement::Origin).unwrap();
        for (a, b) in g.lambda().values().iter().zip(u.lambda().values()) {
            assert!((a - b).abs() < 1e-3);
        }
    }

    #[test]
    fn gaussian_four_fold_symmetry() {
        let m = 8;
        let g = SchmidtState::gaussian(m, 2.0, Some((3.5, 3.5))).unwrap();
        for y in 0..m {
            for x in 0..m {
                let v = g.lambda().get(x, y);
                assert!((v - g.lambda().get(m - 1 - x, y)).abs() < 1e-12);
                assert!((v - g.lambda().get(x, m - 1 - y)).abs() < 1e-12);
                assert!((v - g.lambda().get(y, x)).abs() < 1e-12);
            }
        }
    }

    #[test]
    fn gaussian_rejects_nonpositive_waist() {
        assert!(SchmidtState::gaussian(8, 0.0, None).is_err());
        assert!(SchmidtState::gaussian(8, -1.0, None).is_err());
    }

    #[test]
    fn schmidt_number_uniform_and_single_pixel() {
        for n in [1usize, 2, 4, 8] {
            let s = SchmidtState::uniform_block(8, n, Placement::Origin).unwrap();
            assert!((s.schmidt_number() - (n * n) as f64).abs() < 1e-9);
        }
        let s = SchmidtState::uniform_block(8, 1, Placement::Origin).unwrap();
        assert!((s.schmidt_number() - 1.0).abs() < 1e-12);
    }

    #[test]
    fn schmidt_number_monotone_in_waist() {
        let mut prev = 0.0;
        for w in [2.0, 4.0, 8.0, 16.0] {
            let k = SchmidtState::gaussian(64, w, None)
                .unwrap()
                .schmidt_number();
            assert!(k > 1.0 && k < 4096.0);
            assert!(k > prev, "K should grow with the waist");
            prev = k;
        }
    }

    #[test]
    fn waist_calibration_hits_target_dimensionality() {
        // Continuum estimate K ≈ π w² puts the 549-dimension source near
        // w = 13.22 px; the discrete grid agrees to ~1e-3.
        let w = waist_for_schmidt_number(64, 549.0).unwrap();
        assert!((w - 13.2194).abs() < 0.01, "w = {w}");
        let k = SchmidtState::gaussian(64, w, None)
            .unwrap()
            .schmidt_number();
        assert!((k - 549.0).abs() < 0.5, "K = {k}");
    }

    #[test]
    fn effective_block_side_closed_form() {
        // Discrete uniform block: per-axis variance (n² - 1)/12 exactly.
        for n in [2usize, 4, 8, 16, 32] {
            let s = SchmidtState::uniform_block(64, n, Placement::Origin).unwrap();
            let expected = 2.0 * (((n * n - 1) as f64) / 12.0).sqrt();
            assert!(
                (s.effective_block_side() - expected).abs() < 1e-9,
                "n = {n}"
            );
        }
        let single = SchmidtState::uniform_block(8, 1, Placement::Origin).unwrap();
        assert!(single.effective_block_side().abs() < 1e-12);
    }

    #[test]
    fn effective_block_side_gaussian_scales_linearly() {
        let a = SchmidtState::gaussian(64, 4.0, None)
            .unwrap()
            .effective_block_side();
        let b = SchmidtState::gaussian(64, 8.0, None)
            .unwrap()
            .effective_block_side();
        assert!((a - 4.0).abs() < 1e-6, "n_eff(w=4) = {a}");
        assert!((b - 2.0 * a).abs() < 1e-6);
    }

    #[test]
    fn gaussian_centroid_matches_requested_center() {
        // Waist small enough that grid truncation is negligible at the
        // off-center position.
        let m = 16;
        let g = SchmidtState::gaussian(m, 1.5, Some((7.5, 6.5))).unwrap();
        let mut cx = 0.0;
        let mut cy = 0.0;
        for y in 0..m {
            for x in 0..m {
                let w = g.lambda().get(x, y).powi(2);
                cx += w * x as f64;
                cy += w * y as f64;
            }
        }
        assert!((cx - 7.5).abs() < 1e-9);
        assert!((cy - 6.5).abs() < 1e-9);
    }

    #[test]
    fn builtin_objects() {
        assert_eq!(
            builtin_object(BuiltinObject::Empty, 8)
                .unwrap()
                .marked_count(),
            0
        );
        assert_eq!(
            builtin_object(BuiltinObject::TwoPoints, 8)
                .unwrap()
                .marked_count(),
            2
        );
        let g32 = builtin_object(BuiltinObject::LetterG, 32).unwrap();
        let g64 = builtin_object(BuiltinObject::LetterG, 64).unwrap();
        let g128 = builtin_object(BuiltinObject::LetterG, 128).unwrap();
        assert_eq!(g32.marked_count(), 31);
        assert_eq!(g64.marked_count(), 31 * 4);
        assert_eq!(g128.marked_count(), 31 * 16);
        assert!(builtin_object(BuiltinObject::LetterG, 8).is_err());
    }

    #[test]
    fn ascii_object_round_trip_and_errors() {
        let obj = parse_ascii_object(b"# two by two\n01\n10\n").unwrap();
        assert_eq!(obj.side(), 2);
        assert_eq!(obj.marks(), &[0, 1, 1, 0]);

        match parse_ascii_object(b"01\n1x\n") {
            Err(Error::Parse { line, column, .. }) => {
                assert_eq!((line, column), (2, 2));
            }
            other => panic!("expected parse error, got {other:?}"),
        }
        assert!(parse_ascii_object(b"01\n1\n").is_err());
        assert!(parse_ascii_object(b"011\n110\n").is_err());
        assert!(parse_ascii_object(b"# only comments\n").is_err());
    }

    #[test]
    fn pgm_objects_load_with_nonzero_as_marked() {
        let dir = std::env::temp_dir().join(format!("ggcore-obj-{}", std::process::id()));
        std::fs::create_dir_all(&dir).unwrap();
        let path = dir.join("obj.pgm");
        std::fs::write(&path, crate::pgm::encode_p5(2, 2, &[0, 9, 255, 0]).unwrap()).unwrap();
        let obj = load_object(&path).unwrap();
        assert_eq!(obj.marks(), &[0, 1, 1, 0]);

        let rect = dir.join("rect.pgm");
        std::fs::write(&rect, crate::pgm::encode_p5(3, 2, &[0; 6]).unwrap()).unwrap();
        assert!(load_object(&rect).is_err());
        std::fs::remove_dir_all(&dir).unwrap();
    }

    #[test]
    fn apply_oracle_examples() {
        let s = SchmidtState::uniform_block(2, 2, Placement::Origin).unwrap();
        let empty = OracleObject::empty(2);
        let idler = apply_oracle(&s, &empty).unwrap();
        assert_eq!(idler.amplitudes().values(), s.lambda().values());

        let marked = OracleObject::single_mark(2, 1, 1).unwrap();
        let idler = apply_oracle(&s, &marked).unwrap();
        assert_eq!(idler.amplitudes().values(), &[0.5, 0.5, 0.5, -0.5]);

        let all = OracleObject::new(2, vec![1; 4]).unwrap();
        let idler = apply_oracle(&s, &all).unwrap();
        assert_eq!(idler.amplitudes().values(), &[-0.5, -0.5, -0.5, -0.5]);

        let wrong = OracleObject::empty(4);
        assert!(apply_oracle(&s, &wrong).is_err());
    }

    proptest! {
        #[test]
        fn oracle_is_an_involution_and_preserves_norm(seed in any::<u64>()) {
            use rand::prelude::*;
            let mut rng = rand_chacha::ChaCha8Rng::seed_from_u64(seed);
            let m = 8;
            let lambda = Grid::from_fn(m, |_, _| rng.random_range(0.0..1.0));
            let state = SchmidtState::from_lambda(lambda).unwrap();
            let marks: Vec<u8> = (0..m * m).map(|_| u8::from(rng.random_bool(0.3))).collect();
            let object = OracleObject::new(m, marks).unwrap();

            let once = apply_oracle(&state, &object).unwrap();
            let norm: f64 = once.amplitudes().values().iter().map(|v| v * v).sum();
            prop_assert!((norm - 1.0).abs() < 1e-12);

            // Flipping the same signs twice restores the original amplitudes.
            for (a, l) in once.amplitudes().values().iter().zip(state.lambda().values()) {
                prop_assert!((a.abs() - l).abs() < 1e-15);
            }
            let twice = Grid::from_fn(m, |x, y| {
                let v = once.amplitudes().get(x, y);
                if object.is_marked(x, y) { -v } else { v }
            });
            for (a, l) in twice.values().iter().zip(state.lambda().values()) {
                prop_assert!((a - l).abs() < 1e-15);
            }

            // K depends only on |o'| = λ.
            let from_idler: f64 = 1.0
                / once
                    .amplitudes()
                    .values()
                    .iter()
                    .map(|v| v.powi(4))
                    .sum::<f64>();
            prop_assert!((from_idler - state.schmidt_number()).abs() < 1e-9);
        }
    }
}
