//! Ghost-imaging measurement in the Hadamard superposition basis, image
//! synthesis, the three-part image decomposition and the solution /
//! non-solution overlap analysis.
//!
//! Two probability conventions are first-class. `Paper` measures the
//! fluctuation about the mean amplitude, `p_j = (⟨o'⟩ - õ_j)²` with
//! `⟨o'⟩ = Σ o'/M`; `Physical` is the literal projector probability
//! `p_j = |⟨q_j|Ψ_i⟩|² = (õ_0 - õ_j)²/2`, which makes `p_0 = 0` because
//! `q_0` is the null functional. Image synthesis always uses mask-view
//! (±1) masks; the overlap metric is scale-free and identical under both
//! conventions.

use rayon::prelude::*;

use crate::error::{Error, Result};
use crate::grid::Grid;
use crate::grover::ProbabilityVector;
use crate::photon::{apply_oracle, IdlerState, OracleObject, Placement, SchmidtState};
use crate::walsh::{fwht, fwht_in_place, sequency_permutation, WalshOrdering};
use crate::Convention;

/// Hadamard-domain spectrum `õ_j = Σ_k o'_k ⟨h_j|k⟩` of a heralded idler
/// state (state-view masks, so `Σ õ² = Σ o'²`), plus the convention's
/// reference level.
#[derive(Debug, Clone, PartialEq)]
pub struct GhostSpectrum {
    side: usize,
    o_tilde: Vec<f64>,
    mean_term: f64,
    convention: Convention,
}

impl GhostSpectrum {
    pub fn side(&self) -> usize {
        self.side
    }

    /// Spectrum coefficients in natural mask order.
    pub fn o_tilde(&self) -> &[f64] {
        &self.o_tilde
    }

    /// The reference level subtracted from each coefficient: `Σ o'/M` under
    /// the paper convention, `õ_0` under the physical one.
    pub fn mean_term(&self) -> f64 {
        self.mean_term
    }

    pub fn convention(&self) -> Convention {
        self.convention
    }
}

/// Analyzes the idler amplitudes into the Hadamard basis. Division by `√M`
/// is exact for power-of-two sides, so Parseval holds to machine precision.
pub fn ghost_spectrum(idler: &IdlerState, convention: Convention) -> GhostSpectrum {
    let amps = idler.amplitudes().values();
    let dim = amps.len();
    let root = (dim as f64).sqrt();
    let mut o_tilde = amps.to_vec();
    fwht_in_place(&mut o_tilde).expect("idler dimension is a power of two");
    for v in o_tilde.iter_mut() {
        *v /= root;
    }
    let mean_term = match convention {
        Convention::Paper => amps.iter().sum::<f64>() / dim as f64,
        Convention::Physical => o_tilde[0],
    };
    GhostSpectrum {
        side: idler.side(),
        o_tilde,
        mean_term,
        convention,
    }
}

/// Detection probabilities in the superposition basis, natural mask order.
///
/// `Paper`: `p_j = (⟨o'⟩ - õ_j)²`. `Physical`: `p_j = (õ_0 - õ_j)²/2`,
/// the exact `|⟨q_j|Ψ_i⟩|²` (so `p_0 = 0` always).
pub fn ghost_probabilities(idler: &IdlerState, convention: Convention) -> ProbabilityVector {
    let spectrum = ghost_spectrum(idler, convention);
    let c = spectrum.mean_term;
    let p: Vec<f64> = match convention {
        Convention::Paper => spectrum.o_tilde.iter().map(|&t| (c - t).powi(2)).collect(),
        Convention::Physical => spectrum
            .o_tilde
            .iter()
            .map(|&t| (c - t).powi(2) / 2.0)
            .collect(),
    };
    ProbabilityVector::new(p, convention).expect("squares are nonnegative")
}

/// Synthesizes an image from per-mask weights: `image = Σ_j p_j · mask_j`
/// with mask-view (±1) masks, evaluated as a single fast transform instead
/// of `M` mask accumulations. `weights` are indexed in the given ordering.
pub fn reconstruct(
    weights: &ProbabilityVector,
    side: usize,
    ordering: WalshOrdering,
) -> Result<Grid> {
    synthesize(weights.values(), side, ordering)
}

/// [`reconstruct`] for arbitrary signed weights.
pub fn synthesize(weights: &[f64], side: usize, ordering: WalshOrdering) -> Result<Grid> {
    if weights.len() != side * side {
        return Err(Error::dimension_mismatch(format!(
            "expected {} weights for side {side}, got {}",
            side * side,
            weights.len()
        )));
    }
    let natural = match ordering {
        WalshOrdering::Natural => weights.to_vec(),
        WalshOrdering::Sequency => {
            let axis = sequency_permutation(side)?;
            let mut out = vec![0.0; weights.len()];
            for (j, &w) in weights.iter().enumerate() {
                let (u, v) = (j / side, j % side);
                out[axis[u] * side + axis[v]] += w;
            }
            out
        }
    };
    let image = fwht(&natural)?;
    Grid::from_values(side, image)
}

/// A reconstructed ghost image together with its three-part split: the
/// origin δ spike, the Hadamard power-spectrum term `S^GI`, and the
/// amplitude-inverted object term.
#[derive(Debug, Clone, PartialEq)]
pub struct ReconstructedImage {
    side: usize,
    convention: Convention,
    total: Grid,
    delta_part: Grid,
    s_part: Grid,
    object_part: Grid,
}

impl ReconstructedImage {
    pub fn side(&self) -> usize {
        self.side
    }

    pub fn convention(&self) -> Convention {
        self.convention
    }

    pub fn total(&self) -> &Grid {
        &self.total
    }

    pub fn delta_part(&self) -> &Grid {
        &self.delta_part
    }

    pub fn s_part(&self) -> &Grid {
        &self.s_part
    }

    pub fn object_part(&self) -> &Grid {
        &self.object_part
    }
}

/// Expands `p_j = scale·(c - õ_j)²` and synthesizes the three terms
/// separately:
///
/// * `delta_part = scale·c²·Σ_j mask_j` — nonzero only at the origin pixel,
///   where it equals `scale·c²·M`;
/// * `s_part = scale·Σ_j õ_j²·mask_j` — the transform of the power spectrum;
/// * `object_part = -2·scale·c·Σ_j õ_j·mask_j = -2·scale·c·√M·o'` — the
///   inverted λ-weighted object image.
///
/// `scale` is 1 for the paper convention and ½ for the physical one. The
/// exact quadratic expansion is used, so `total`, synthesized independently
/// from [`ghost_probabilities`], equals the part sum to machine precision.
pub fn decompose(idler: &IdlerState, convention: Convention) -> ReconstructedImage {
    let side = idler.side();
    let dim = side * side;
    let spectrum = ghost_spectrum(idler, convention);
    let c = spectrum.mean_term;
    let scale = match convention {
        Convention::Paper => 1.0,
        Convention::Physical => 0.5,
    };

    let total = synthesize(
        ghost_probabilities(idler, convention).values(),
        side,
        WalshOrdering::Natural,
    )
    .expect("probability vector has M entries");

    let mut delta_part = Grid::zeros(side);
    delta_part.set(0, 0, scale * c * c * dim as f64);

    let power: Vec<f64> = spectrum.o_tilde.iter().map(|t| scale * t * t).collect();
    let s_part = synthesize(&power, side, WalshOrdering::Natural).expect("M entries");

    let weighted: Vec<f64> = spectrum
        .o_tilde
        .iter()
        .map(|t| -2.0 * scale * c * t)
        .collect();
    let object_part = synthesize(&weighted, side, WalshOrdering::Natural).expect("M entries");

    ReconstructedImage {
        side,
        convention,
        total,
        delta_part,
        s_part,
        object_part,
    }
}

/// Normalized overlap between the object term and `S^GI`:
/// `|⟨O, S⟩| / (‖O‖·‖S‖)`, in `[0, 1]`, defined as 0 when either norm
/// vanishes. Scale-free, hence identical under both conventions.
pub fn solution_overlap(image: &ReconstructedImage) -> f64 {
    let o = image.object_part.values();
    let s = image.s_part.values();
    let norm_o = image.object_part.norm_l2();
    let norm_s = image.s_part.norm_l2();
    // Treat numerically-dead parts (e.g. balanced marking, c = 0) as zero.
    let floor = 1e-12 * o.len() as f64;
    if norm_o <= floor || norm_s <= floor {
        return 0.0;
    }
    let dot: f64 = o.iter().zip(s).map(|(a, b)| a * b).sum();
    (dot / (norm_o * norm_s)).abs()
}

/// One cell of an overlap sweep.
#[derive(Debug, Clone, serde::Serialize)]
pub struct OverlapReport {
    pub m: usize,
    /// Database parameter: block side for uniform profiles, waist for
    /// Gaussian ones.
    pub param: f64,
    pub profile: String,
    pub placement: Placement,
    pub overlap: f64,
}

/// Database axis of an overlap sweep.
#[derive(Debug, Clone, PartialEq)]
pub enum SweepParams {
    /// Uniform blocks of the given sides.
    BlockSides(Vec<usize>),
    /// Gaussian profiles of the given waists.
    Waists(Vec<f64>),
}

/// Overlap sweep over grid sizes and database sizes.
#[derive(Debug, Clone)]
pub struct SweepConfig {
    pub m_list: Vec<usize>,
    pub params: SweepParams,
    pub placement: Placement,
    /// Mark offset relative to the database center pixel. The default (0, 0)
    /// marks the center itself; the marked pixel must stay inside the grid.
    pub mark_offset: (i64, i64),
    pub convention: Convention,
}

impl SweepConfig {
    pub fn new(m_list: Vec<usize>, params: SweepParams) -> Self {
        SweepConfig {
            m_list,
            params,
            placement: Placement::Centered,
            mark_offset: (0, 0),
            convention: Convention::Paper,
        }
    }
}

/// Largest grid side accepted by [`sweep_overlap`].
pub const SWEEP_SIDE_CAP: usize = 256;

/// Computes the overlap for every `(m, param)` cell. Block sides larger than
/// `m` are skipped; cells are evaluated independently (in parallel) and
/// returned in deterministic row-major order.
pub fn sweep_overlap(config: &SweepConfig) -> Result<Vec<OverlapReport>> {
    for &m in &config.m_list {
        if m > SWEEP_SIDE_CAP {
            return Err(Error::ResourceLimit(format!(
                "sweep grid side {m} exceeds the cap of {SWEEP_SIDE_CAP}"
            )));
        }
    }
    let mut cells: Vec<(usize, f64)> = Vec::new();
    for &m in &config.m_list {
        match &config.params {
            SweepParams::BlockSides(ns) => {
                for &n in ns {
                    if n <= m {
                        cells.push((m, n as f64));
                    }
                }
            }
            SweepParams::Waists(ws) => {
                for &w in ws {
                    cells.push((m, w));
                }
            }
        }
    }
    cells
        .par_iter()
        .map(|&(m, param)| {
            let state = match &config.params {
                SweepParams::BlockSides(_) => {
                    SchmidtState::uniform_block(m, param as usize, config.placement)?
                }
                SweepParams::Waists(_) => SchmidtState::gaussian(m, param, None)?,
            };
            let (cx, cy) = state.database_center();
            let x = cx as i64 + config.mark_offset.0;
            let y = cy as i64 + config.mark_offset.1;
            if x < 0 || y < 0 || x >= m as i64 || y >= m as i64 {
                return Err(Error::invalid_argument(format!(
                    "mark offset {:?} leaves the {m}x{m} grid",
                    config.mark_offset
                )));
            }
            let object = OracleObject::single_mark(m, x as usize, y as usize)?;
            let idler = apply_oracle(&state, &object)?;
            let image = decompose(&idler, config.convention);
            Ok(OverlapReport {
                m,
                param,
                profile: match &config.params {
                    SweepParams::BlockSides(_) => "uniform".to_string(),
                    SweepParams::Waists(_) => "gaussian".to_string(),
                },
                placement: config.placement,
                overlap: solution_overlap(&image),
            })
        })
        .collect()
}

/// Contrast verdict for a reconstructed image against the marking object.
#[derive(Debug, Clone, serde::Serialize)]
pub struct MarkReport {
    /// Smallest total-image amplitude over marked pixels (origin excluded).
    pub min_marked: Option<f64>,
    /// Largest total-image amplitude over unmarked pixels inside the
    /// illumination support (origin excluded).
    pub max_unmarked: Option<f64>,
    /// `min_marked > 0 > max_unmarked`; vacuously false without marks.
    pub verdict: bool,
    /// Set when the object has no marks, making the verdict vacuous.
    pub no_marks: bool,
    /// Fraction of the peak λ above which a pixel counts as supported.
    pub support_threshold: f64,
    pub marked_pixels: usize,
    pub supported_unmarked_pixels: usize,
}

/// Default support threshold: pixels with `λ ≥ 0.1·max λ` count as inside
/// the illumination.
pub const DEFAULT_SUPPORT_THRESHOLD: f64 = 0.1;

/// Checks the amplitude-inversion contrast of a total image (ideal or noisy):
/// marked pixels positive, supported unmarked pixels negative, always
/// excluding the origin (δ) pixel.
pub fn mark_detection_report(
    total: &Grid,
    object: &OracleObject,
    support: &SchmidtState,
    support_threshold: f64,
) -> Result<MarkReport> {
    let side = total.side();
    if object.side() != side || support.side() != side {
        return Err(Error::dimension_mismatch(format!(
            "image side {side}, object side {}, support side {} must agree",
            object.side(),
            support.side()
        )));
    }
    let peak = support
        .lambda()
        .values()
        .iter()
        .cloned()
        .fold(0.0, f64::max);
    let cutoff = support_threshold * peak;

    let mut min_marked: Option<f64> = None;
    let mut max_unmarked: Option<f64> = None;
    let mut marked_pixels = 0;
    let mut supported_unmarked = 0;
    for y in 0..side {
        for x in 0..side {
            if x == 0 && y == 0 {
                continue; // δ pixel
            }
            let v = total.get(x, y);
            if object.is_marked(x, y) {
                marked_pixels += 1;
                min_marked = Some(min_marked.map_or(v, |m| m.min(v)));
            } else if support.lambda().get(x, y) >= cutoff && support.lambda().get(x, y) > 0.0 {
                supported_unmarked += 1;
                max_unmarked = Some(max_unmarked.map_or(v, |m| m.max(v)));
            }
        }
    }
    let no_marks = marked_pixels == 0;
    let verdict = match (min_marked, max_unmarked) {
        (Some(lo), Some(hi)) => lo > 0.0 && hi < 0.0,
        _ => false,
    };
    Ok(MarkReport {
        min_marked,
        max_unmarked,
        verdict,
        no_marks,
        support_threshold,
        marked_pixels,
        supported_unmarked_pixels: supported_unmarked,
    })
}
