//! Simulated measurement chain: per-mask coincidence and singles counting
//! with Poisson statistics, accidental estimation and subtraction.
//!
//! Probabilities are treated as relative projection efficiencies: the
//! configured pair rate corresponds to the maximum-probability mask, and the
//! signal mean for mask `j` is `pair_rate·integration·p_j/max(p)`. Each
//! mask's draws come from an independent RNG stream derived from
//! `(seed, j)`, so parallel and serial execution produce identical counts.

use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use rand_distr::{Distribution, Poisson};

use crate::error::{Error, Result};
use crate::ghost::{decompose, ghost_probabilities, reconstruct, ReconstructedImage};
use crate::grid::Grid;
use crate::grover::ProbabilityVector;
use crate::photon::IdlerState;
use crate::walsh::WalshOrdering;
use crate::Convention;

/// Rates, timing and seeding of the simulated coincidence measurement.
#[derive(Debug, Clone, Copy, PartialEq, serde::Serialize, serde::Deserialize)]
pub struct NoiseParams {
    /// True coincidence rate at unit projection, counts/s.
    pub pair_rate: f64,
    /// Detector A singles rate, counts/s.
    pub singles_rate_a: f64,
    /// Detector B singles rate, counts/s.
    pub singles_rate_b: f64,
    /// Coincidence window, seconds.
    pub gate: f64,
    /// Dwell time per mask, seconds.
    pub integration: f64,
    pub seed: u64,
}

impl Default for NoiseParams {
    fn default() -> Self {
        NoiseParams {
            pair_rate: 1000.0,
            singles_rate_a: 0.0,
            singles_rate_b: 0.0,
            gate: 3e-9,
            integration: 2.0,
            seed: 0,
        }
    }
}

impl NoiseParams {
    pub fn validate(&self) -> Result<()> {
        if self.pair_rate < 0.0 || self.singles_rate_a < 0.0 || self.singles_rate_b < 0.0 {
            return Err(Error::invalid_argument("rates must be nonnegative"));
        }
        let positive = |v: f64| v.is_finite() && v > 0.0;
        if !positive(self.gate) || !positive(self.integration) {
            return Err(Error::invalid_argument(
                "gate and integration times must be positive",
            ));
        }
        Ok(())
    }
}

/// Tallies for a single projective mask.
#[derive(Debug, Clone, PartialEq, serde::Serialize)]
pub struct MaskCounts {
    pub mask: usize,
    pub coincidences: u64,
    pub singles_a: u64,
    pub singles_b: u64,
    /// `singles_a·singles_b·gate/integration`.
    pub accidentals_est: f64,
    /// `coincidences - accidentals_est`; may be negative.
    pub corrected: f64,
    /// Whether probability estimation will clamp this mask to zero.
    pub clamped: bool,
}

/// Per-mask coincidence records plus the normalization they were drawn under.
#[derive(Debug, Clone, PartialEq)]
pub struct CoincidenceCounts {
    records: Vec<MaskCounts>,
    convention: Convention,
    /// The maximum input probability, mapped to `pair_rate`.
    peak_probability: f64,
    params: NoiseParams,
}

impl CoincidenceCounts {
    pub fn records(&self) -> &[MaskCounts] {
        &self.records
    }

    pub fn convention(&self) -> Convention {
        self.convention
    }

    pub fn peak_probability(&self) -> f64 {
        self.peak_probability
    }

    pub fn params(&self) -> &NoiseParams {
        &self.params
    }

    pub fn len(&self) -> usize {
        self.records.len()
    }

    pub fn is_empty(&self) -> bool {
        self.records.is_empty()
    }
}

fn poisson_draw(rng: &mut ChaCha8Rng, mean: f64) -> u64 {
    if mean <= 0.0 {
        return 0;
    }
    let dist = Poisson::new(mean).expect("positive finite mean");
    dist.sample(rng) as u64
}

/// Draws coincidence and singles counts for every mask. Deterministic for a
/// given `(p, params)`: mask `j` consumes stream `j` of a ChaCha generator
/// seeded with `params.seed`.
pub fn simulate_counts(p: &ProbabilityVector, params: &NoiseParams) -> Result<CoincidenceCounts> {
    params.validate()?;
    if p.dim() == 0 {
        return Err(Error::invalid_argument("empty probability vector"));
    }
    let peak = p.values().iter().cloned().fold(0.0, f64::max);
    let accidental_mean =
        params.singles_rate_a * params.singles_rate_b * params.gate * params.integration;
    let singles_mean_a = params.singles_rate_a * params.integration;
    let singles_mean_b = params.singles_rate_b * params.integration;

    let records = p
        .values()
        .iter()
        .enumerate()
        .map(|(j, &pj)| {
            let mut rng = ChaCha8Rng::seed_from_u64(params.seed);
            rng.set_stream(j as u64);
            let signal_mean = if peak > 0.0 {
                params.pair_rate * params.integration * pj / peak
            } else {
                0.0
            };
            let coincidences = poisson_draw(&mut rng, signal_mean + accidental_mean);
            let singles_a = poisson_draw(&mut rng, singles_mean_a);
            let singles_b = poisson_draw(&mut rng, singles_mean_b);
            let accidentals_est =
                singles_a as f64 * singles_b as f64 * params.gate / params.integration;
            let corrected = coincidences as f64 - accidentals_est;
            MaskCounts {
                mask: j,
                coincidences,
                singles_a,
                singles_b,
                accidentals_est,
                corrected,
                clamped: corrected < 0.0,
            }
        })
        .collect();
    Ok(CoincidenceCounts {
        records,
        convention: p.convention(),
        peak_probability: peak,
        params: *params,
    })
}

/// Normalized probability estimate `p̂_j = max(corrected_j, 0)/Σ max(corrected, 0)`.
/// Masks with negative corrected counts are clamped (and flagged in the
/// records). Errors when every corrected count is nonpositive.
pub fn estimate_probabilities(counts: &CoincidenceCounts) -> Result<ProbabilityVector> {
    let clamped: Vec<f64> = counts
        .records
        .iter()
        .map(|r| r.corrected.max(0.0))
        .collect();
    let total: f64 = clamped.iter().sum();
    if total <= 0.0 {
        return Err(Error::InvalidState(
            "all corrected coincidence counts are zero or negative".into(),
        ));
    }
    ProbabilityVector::new(
        clamped.into_iter().map(|v| v / total).collect(),
        counts.convention,
    )
}

/// End-to-end noisy reconstruction and its fidelity against the ideal image.
#[derive(Debug, Clone)]
pub struct NoisyReconstruction {
    pub noisy_total: Grid,
    pub ideal: ReconstructedImage,
    pub counts: CoincidenceCounts,
    /// Pearson correlation between noisy and ideal total images.
    pub correlation: f64,
}

/// Chains measurement → counting → estimation → synthesis and reports the
/// Pearson correlation between the noisy and ideal total images.
pub fn noisy_reconstruct(
    idler: &IdlerState,
    convention: Convention,
    params: &NoiseParams,
) -> Result<NoisyReconstruction> {
    let p = ghost_probabilities(idler, convention);
    let counts = simulate_counts(&p, params)?;
    let estimated = estimate_probabilities(&counts)?;
    let noisy_total = reconstruct(&estimated, idler.side(), WalshOrdering::Natural)?;
    let ideal = decompose(idler, convention);
    let correlation = pearson(&noisy_total, ideal.total());
    Ok(NoisyReconstruction {
        noisy_total,
        ideal,
        counts,
        correlation,
    })
}

/// Pearson correlation coefficient between two equally-sized grids; 0 when
/// either image has no variance.
pub fn pearson(a: &Grid, b: &Grid) -> f64 {
    let n = a.len().min(b.len()) as f64;
    if n == 0.0 {
        return 0.0;
    }
    let mean_a = a.values().iter().sum::<f64>() / n;
    let mean_b = b.values().iter().sum::<f64>() / n;
    let mut cov = 0.0;
    let mut var_a = 0.0;
    let mut var_b = 0.0;
    for (&x, &y) in a.values().iter().zip(b.values()) {
        let dx = x - mean_a;
        let dy = y - mean_b;
        cov += dx * dy;
        var_a += dx * dx;
        var_b += dy * dy;
    }
    if var_a == 0.0 || var_b == 0.0 {
        return 0.0;
    }
    cov / (var_a * var_b).sqrt()
}
