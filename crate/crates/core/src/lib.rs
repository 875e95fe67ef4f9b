//! Pixel-basis bi-photon imaging simulated as an unstructured database
//! search.
//!
//! The pipeline mirrors the optical protocol end to end: a Schmidt-coefficient
//! illumination profile defines the database ([`photon`]), an oracle object
//! phase-marks elements and heralds the idler state, and the marked elements
//! are recovered either by inversion about the mean in the pixel basis
//! ([`grover`]) or by projecting onto Hadamard superposition masks and
//! resynthesizing the image ([`ghost`], [`walsh`]). A measurement-chain
//! simulator adds Poisson coincidence statistics with accidental subtraction
//! ([`coincidence`]).
//!
//! All values are immutable after construction and safe to share across
//! threads; operations are pure functions of their inputs.

pub mod coincidence;
pub mod error;
pub mod ghost;
pub mod grid;
pub mod grover;
pub mod pgm;
pub mod photon;
pub mod walsh;

pub use error::{Error, Result};
pub use grid::Grid;

/// Probability normalization convention.
///
/// `Paper` reports squared fluctuations about the mean amplitude with the
/// `Σ/M` reference level; `Physical` reports literal projector probabilities
/// (`|⟨q_j|Ψ⟩|²`), which sum to 1 only for complete orthonormal measurement
/// sets. Every output labels the convention it was computed under.
#[derive(Debug, Clone, Copy, PartialEq, Eq, serde::Serialize, serde::Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Convention {
    Paper,
    Physical,
}

impl std::str::FromStr for Convention {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s {
            "paper" => Ok(Convention::Paper),
            "physical" => Ok(Convention::Physical),
            other => Err(Error::InvalidArgument(format!(
                "unknown convention '{other}' (expected 'paper' or 'physical')"
            ))),
        }
    }
}

impl std::fmt::Display for Convention {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        match self {
            Convention::Paper => write!(f, "paper"),
            Convention::Physical => write!(f, "physical"),
        }
    }
}
