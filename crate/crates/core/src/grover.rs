//! Diffusion operator, single-shot detection probabilities, iterated
//! amplitude amplification and the tensor-vs-sequential equivalence check.
//!
//! The engine works directly on M-dimensional real vectors; there is no
//! qubit-level circuit decomposition.

use crate::error::{Error, Result};
use crate::photon::{IdlerState, OracleObject, SchmidtState};
use crate::Convention;

/// Real amplitude vector over the `M` pixel states, row-major.
#[derive(Debug, Clone, PartialEq)]
pub struct StateVector {
    amplitudes: Vec<f64>,
}

impl StateVector {
    pub fn new(amplitudes: Vec<f64>) -> Self {
        StateVector { amplitudes }
    }

    /// Uniform superposition `h₀` of dimension `dim`.
    pub fn uniform(dim: usize) -> Self {
        StateVector {
            amplitudes: vec![1.0 / (dim as f64).sqrt(); dim],
        }
    }

    pub fn dim(&self) -> usize {
        self.amplitudes.len()
    }

    pub fn amplitudes(&self) -> &[f64] {
        &self.amplitudes
    }

    pub fn norm(&self) -> f64 {
        self.amplitudes.iter().map(|a| a * a).sum::<f64>().sqrt()
    }

    /// Measurement probabilities `|a_j|²` in the pixel basis.
    pub fn probabilities(&self) -> ProbabilityVector {
        ProbabilityVector {
            p: self.amplitudes.iter().map(|a| a * a).collect(),
            convention: Convention::Physical,
        }
    }
}

impl From<&IdlerState> for StateVector {
    fn from(idler: &IdlerState) -> Self {
        StateVector {
            amplitudes: idler.amplitudes().values().to_vec(),
        }
    }
}

/// Per-state detection probabilities with the normalization convention they
/// were computed under. Under [`Convention::Physical`] with a complete
/// measurement set the entries sum to 1.
#[derive(Debug, Clone, PartialEq)]
pub struct ProbabilityVector {
    p: Vec<f64>,
    convention: Convention,
}

impl ProbabilityVector {
    pub fn new(p: Vec<f64>, convention: Convention) -> Result<Self> {
        if p.iter().any(|&v| v < 0.0 || !v.is_finite()) {
            return Err(Error::InvalidState(
                "probabilities must be finite and nonnegative".into(),
            ));
        }
        Ok(ProbabilityVector { p, convention })
    }

    pub fn dim(&self) -> usize {
        self.p.len()
    }

    pub fn values(&self) -> &[f64] {
        &self.p
    }

    pub fn convention(&self) -> Convention {
        self.convention
    }

    pub fn sum(&self) -> f64 {
        self.p.iter().sum()
    }

    /// Total probability carried by the object's marked pixels.
    pub fn marked_mass(&self, object: &OracleObject) -> Result<f64> {
        if object.dim() != self.p.len() {
            return Err(Error::dimension_mismatch(format!(
                "object dimension {} does not match probability vector length {}",
                object.dim(),
                self.p.len()
            )));
        }
        Ok(object.marked_indices().iter().map(|&j| self.p[j]).sum())
    }
}

/// Applies the diffusion operator `D = 2|h₀⟩⟨h₀| - I`: every amplitude is
/// reflected about the mean, `a_j ↦ 2·mean(a) - a_j`. `D` is unitary and an
/// involution.
pub fn diffusion_apply(state: &StateVector) -> StateVector {
    let mut out = state.amplitudes.clone();
    diffusion_in_place(&mut out);
    StateVector { amplitudes: out }
}

fn diffusion_in_place(amplitudes: &mut [f64]) {
    let mean = amplitudes.iter().sum::<f64>() / amplitudes.len() as f64;
    for a in amplitudes.iter_mut() {
        *a = 2.0 * mean - *a;
    }
}

/// Closed-form single-iteration detection probabilities
/// `p_j = |2⟨o'⟩ - o'_j|²` with `⟨o'⟩ = Σ_k o'_k / M` — the squared
/// amplitudes of `D` applied to the heralded idler state.
pub fn grover_probabilities(idler: &IdlerState) -> ProbabilityVector {
    let amps = idler.amplitudes().values();
    let mean = amps.iter().sum::<f64>() / amps.len() as f64;
    let p = amps.iter().map(|&a| (2.0 * mean - a).powi(2)).collect();
    ProbabilityVector {
        p,
        convention: Convention::Physical,
    }
}

/// Measurement-side view of the same quantity: the diffusion operator is
/// absorbed into the detection basis, and each probability is computed as the
/// explicit inner product `|⟨j|D|Ψ_i⟩|²` against the projector vector
/// `D|j⟩ = (2/√M)|h₀⟩ - |j⟩`, materialized per index. O(M²); agrees with
/// [`grover_probabilities`] because `D` is self-adjoint.
pub fn absorbed_basis_probabilities(idler: &IdlerState) -> ProbabilityVector {
    let amps = idler.amplitudes().values();
    let dim = amps.len();
    let mut projector = vec![0.0; dim];
    let mut p = Vec::with_capacity(dim);
    for j in 0..dim {
        for (k, slot) in projector.iter_mut().enumerate() {
            *slot = 2.0 / dim as f64 - f64::from(u8::from(k == j));
        }
        let amplitude: f64 = projector.iter().zip(amps).map(|(d, a)| d * a).sum();
        p.push(amplitude * amplitude);
    }
    ProbabilityVector {
        p,
        convention: Convention::Physical,
    }
}

/// Runs `k` full search iterations `(D·O)^k` from the uniform start `h₀`.
/// For uniform illumination with `t` marked elements the marked mass after
/// `k` iterations is `sin²((2k+1)θ)` with `sin²θ = t/M`.
pub fn grover_iterate(
    state: &SchmidtState,
    object: &OracleObject,
    iterations: usize,
) -> Result<StateVector> {
    if state.side() != object.side() {
        return Err(Error::dimension_mismatch(format!(
            "state side {} does not match object side {}",
            state.side(),
            object.side()
        )));
    }
    let dim = state.dim();
    let marked = object.marked_indices();
    let mut amplitudes = vec![1.0 / (dim as f64).sqrt(); dim];
    for _ in 0..iterations {
        for &j in &marked {
            amplitudes[j] = -amplitudes[j];
        }
        diffusion_in_place(&mut amplitudes);
    }
    Ok(StateVector { amplitudes })
}

/// Iteration count maximizing the success probability:
/// `round(π/(4·asin(√(t/M))) - 1/2)`, clamped to ≥ 0.
pub fn optimal_iterations(dim: usize, marked: usize) -> Result<usize> {
    if marked < 1 || marked >= dim {
        return Err(Error::invalid_argument(format!(
            "marked count must satisfy 1 <= t < M, got t = {marked}, M = {dim}"
        )));
    }
    let theta = (marked as f64 / dim as f64).sqrt().asin();
    let k = (std::f64::consts::PI / (4.0 * theta) - 0.5).round();
    Ok(if k < 0.0 { 0 } else { k as usize })
}

/// Comparison of the joint two-photon measurement with the sequential
/// single-system search it is isomorphic to.
#[derive(Debug, Clone, serde::Serialize)]
pub struct CjReport {
    /// Per-subsystem dimension M (the tensor state has M² entries).
    pub dim: usize,
    /// Proportionality constant with the λ-weighted sequential start.
    pub weighted_scale: f64,
    /// `max_j |q_j - c·s_j| / max_j q_j` for the λ-weighted start.
    pub weighted_rel_deviation: f64,
    /// Proportionality constant against the textbook `h₀` start.
    pub textbook_scale: f64,
    /// Same deviation measure for the `h₀` start; nonzero when the source
    /// is not maximally entangled.
    pub textbook_rel_deviation: f64,
}

/// Default cap on tensor-state entries (`M² ≤ 65536`, i.e. m ≤ 16).
pub const CJ_DEFAULT_CAP: usize = 1 << 16;

/// Computes joint probabilities `q_j = |⟨h₀|⟨j| (O⊗D) |Ψ_si⟩|²` by explicit
/// M²-dimensional tensor arithmetic and compares them against the sequential
/// probabilities `s_j = |⟨j| D·O |start⟩|²` for two choices of start state:
/// the λ-weighted vector and the textbook uniform `h₀`.
///
/// The tensor path is desk-scale only; `cap` (entries, default
/// [`CJ_DEFAULT_CAP`]) bounds the M² allocation.
pub fn cj_equivalence_check(
    state: &SchmidtState,
    object: &OracleObject,
    cap: Option<usize>,
) -> Result<CjReport> {
    if state.side() != object.side() {
        return Err(Error::dimension_mismatch(format!(
            "state side {} does not match object side {}",
            state.side(),
            object.side()
        )));
    }
    let dim = state.dim();
    let entries = dim * dim;
    let cap = cap.unwrap_or(CJ_DEFAULT_CAP);
    if entries > cap {
        return Err(Error::ResourceLimit(format!(
            "tensor check needs {entries} entries (M = {dim}), cap is {cap}"
        )));
    }

    // |Ψ_si⟩ = Σ_j λ_j |j⟩_s |j⟩_i laid out as psi[s*M + i].
    let lambda = state.lambda().values();
    let mut psi = vec![0.0; entries];
    for j in 0..dim {
        psi[j * dim + j] = lambda[j];
    }
    // O acts on the signal index, D on the idler index.
    let marks = object.marks();
    for s in 0..dim {
        let row = &mut psi[s * dim..(s + 1) * dim];
        if marks[s] == 1 {
            for v in row.iter_mut() {
                *v = -*v;
            }
        }
        diffusion_in_place(row);
    }
    // Project the signal onto ⟨h₀| and the idler onto ⟨x|.
    let root = (dim as f64).sqrt();
    let mut joint = vec![0.0; dim];
    for (x, slot) in joint.iter_mut().enumerate() {
        let mut acc = 0.0;
        for s in 0..dim {
            acc += psi[s * dim + x];
        }
        let amp = acc / root;
        *slot = amp * amp;
    }

    // Sequential references.
    let mut weighted: Vec<f64> = lambda.to_vec();
    let mut textbook = vec![1.0 / root; dim];
    for (j, &mark) in marks.iter().enumerate() {
        if mark == 1 {
            weighted[j] = -weighted[j];
            textbook[j] = -textbook[j];
        }
    }
    diffusion_in_place(&mut weighted);
    diffusion_in_place(&mut textbook);
    let weighted: Vec<f64> = weighted.iter().map(|a| a * a).collect();
    let textbook: Vec<f64> = textbook.iter().map(|a| a * a).collect();

    let (weighted_scale, weighted_rel_deviation) = proportionality(&joint, &weighted);
    let (textbook_scale, textbook_rel_deviation) = proportionality(&joint, &textbook);
    Ok(CjReport {
        dim,
        weighted_scale,
        weighted_rel_deviation,
        textbook_scale,
        textbook_rel_deviation,
    })
}

fn proportionality(q: &[f64], s: &[f64]) -> (f64, f64) {
    let sum_q: f64 = q.iter().sum();
    let sum_s: f64 = s.iter().sum();
    let scale = if sum_s > 0.0 { sum_q / sum_s } else { 0.0 };
    let peak = q.iter().cloned().fold(0.0, f64::max);
    if peak == 0.0 {
        return (scale, 0.0);
    }
    let max_dev = q
        .iter()
        .zip(s)
        .map(|(&qj, &sj)| (qj - scale * sj).abs())
        .fold(0.0, f64::max);
    (scale, max_dev / peak)
}
