//! Command-line surface. Every leaf command's parameter struct doubles as its
//! JSON config schema: all fields are optional on the command line, a
//! `--config` file supplies defaults, and explicit flags override the file.

use std::path::PathBuf;

use clap::{Args, Parser, Subcommand};
use serde::{Deserialize, Serialize};

#[derive(Debug, Parser)]
#[command(
    name = "ghostgrover",
    version,
    about = "Ghost-imaging search simulator: masks, state reports, search runs, reconstructions, sweeps, coincidence statistics and figure presets"
)]
pub struct Cli {
    #[command(subcommand)]
    pub command: Command,

    /// JSON file supplying defaults for the subcommand's parameters.
    #[arg(long, global = true)]
    pub config: Option<PathBuf>,

    /// Output root; defaults to $GHOSTGROVER_OUT_DIR, then the current directory.
    #[arg(long, global = true)]
    pub out_dir: Option<PathBuf>,

    /// Default RNG seed for commands that sample.
    #[arg(long, global = true)]
    pub seed: Option<u64>,

    /// Worker threads for parallel sweeps (defaults to the library's choice).
    #[arg(long, global = true)]
    pub threads: Option<usize>,

    /// Suppress progress notes on stderr.
    #[arg(long, global = true)]
    pub quiet: bool,
}

#[derive(Debug, Subcommand)]
pub enum Command {
    /// Walsh-Hadamard and superposition mask tools.
    Masks {
        #[command(subcommand)]
        action: MasksAction,
    },
    /// Source-state reports.
    State {
        #[command(subcommand)]
        action: StateAction,
    },
    /// Pixel-basis search runs.
    Grover {
        #[command(subcommand)]
        action: GroverAction,
    },
    /// Ghost reconstruction with the three-part image decomposition.
    Reconstruct(ReconstructParams),
    /// Solution/non-solution overlap across grid and database sizes.
    SweepOverlap(SweepParams),
    /// Poisson coincidence simulation over a measured probability file.
    SimulateCounts(CountsParams),
    /// Pinned parameter presets reproducing the simulated figures.
    Figures(FiguresParams),
}

#[derive(Debug, Subcommand)]
pub enum MasksAction {
    /// Write one PGM per mask plus an index manifest.
    Export(MasksParams),
}

#[derive(Debug, Subcommand)]
pub enum StateAction {
    /// Print Schmidt number, effective database side and norm as JSON.
    Info(StateParams),
}

#[derive(Debug, Subcommand)]
pub enum GroverAction {
    /// Iterate oracle + diffusion from the uniform state and export probabilities.
    Run(GroverParams),
}

fn is_none<T>(v: &Option<T>) -> bool {
    v.is_none()
}

#[derive(Debug, Clone, Default, Args, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct MasksParams {
    #[arg(skip)]
    #[serde(default, skip_serializing_if = "is_none")]
    pub schema_version: Option<String>,

    /// Mask side length (power of two).
    #[arg(long)]
    #[serde(default, skip_serializing_if = "is_none")]
    pub m: Option<usize>,

    /// Basis ordering: natural | sequency.
    #[arg(long)]
    #[serde(default, skip_serializing_if = "is_none")]
    pub ordering: Option<String>,

    /// Mask kind: h (Walsh-Hadamard) | q (superposition).
    #[arg(long)]
    #[serde(default, skip_serializing_if = "is_none")]
    pub kind: Option<String>,

    /// Screen side in pixels; must be divisible by m. Defaults to m.
    #[arg(long)]
    #[serde(default, skip_serializing_if = "is_none")]
    pub screen: Option<usize>,

    /// Directory (under the output root) receiving the PGM files.
    #[arg(long)]
    #[serde(default, skip_serializing_if = "is_none")]
    pub out: Option<String>,
}

#[derive(Debug, Clone, Default, Args, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct StateParams {
    #[arg(skip)]
    #[serde(default, skip_serializing_if = "is_none")]
    pub schema_version: Option<String>,

    /// Illumination profile: uniform | gaussian.
    #[arg(long)]
    #[serde(default, skip_serializing_if = "is_none")]
    pub profile: Option<String>,

    /// Grid side length (power of two).
    #[arg(long)]
    #[serde(default, skip_serializing_if = "is_none")]
    pub m: Option<usize>,

    /// Database block side (uniform profile).
    #[arg(long)]
    #[serde(default, skip_serializing_if = "is_none")]
    pub n: Option<usize>,

    /// 1/e² intensity radius in pixels (gaussian profile).
    #[arg(long)]
    #[serde(default, skip_serializing_if = "is_none")]
    pub waist: Option<f64>,

    /// Block placement: centered | origin.
    #[arg(long)]
    #[serde(default, skip_serializing_if = "is_none")]
    pub placement: Option<String>,
}

#[derive(Debug, Clone, Default, Args, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct GroverParams {
    #[arg(skip)]
    #[serde(default, skip_serializing_if = "is_none")]
    pub schema_version: Option<String>,

    /// Grid side length (power of two).
    #[arg(long)]
    #[serde(default, skip_serializing_if = "is_none")]
    pub m: Option<usize>,

    /// Illumination profile: uniform | gaussian.
    #[arg(long)]
    #[serde(default, skip_serializing_if = "is_none")]
    pub profile: Option<String>,

    /// Database block side (uniform profile).
    #[arg(long)]
    #[serde(default, skip_serializing_if = "is_none")]
    pub n: Option<usize>,

    /// 1/e² intensity radius in pixels (gaussian profile).
    #[arg(long)]
    #[serde(default, skip_serializing_if = "is_none")]
    pub waist: Option<f64>,

    /// Block placement: centered | origin.
    #[arg(long)]
    #[serde(default, skip_serializing_if = "is_none")]
    pub placement: Option<String>,

    /// Object: builtin:<letter-G|block|two-points|empty> or a raster file path.
    #[arg(long)]
    #[serde(default, skip_serializing_if = "is_none")]
    pub object: Option<String>,

    /// Iteration count, or "auto" for the optimal count.
    #[arg(long)]
    #[serde(default, skip_serializing_if = "is_none")]
    pub iterations: Option<String>,

    /// Probability CSV filename (under the output root).
    #[arg(long)]
    #[serde(default, skip_serializing_if = "is_none")]
    pub out: Option<String>,
}

#[derive(Debug, Clone, Default, Args, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct ReconstructParams {
    #[arg(skip)]
    #[serde(default, skip_serializing_if = "is_none")]
    pub schema_version: Option<String>,

    /// Grid side length (power of two).
    #[arg(long)]
    #[serde(default, skip_serializing_if = "is_none")]
    pub m: Option<usize>,

    /// Illumination profile: uniform | gaussian.
    #[arg(long)]
    #[serde(default, skip_serializing_if = "is_none")]
    pub profile: Option<String>,

    /// Database block side (uniform profile).
    #[arg(long)]
    #[serde(default, skip_serializing_if = "is_none")]
    pub n: Option<usize>,

    /// 1/e² intensity radius in pixels (gaussian profile).
    #[arg(long)]
    #[serde(default, skip_serializing_if = "is_none")]
    pub waist: Option<f64>,

    /// Block placement: centered | origin.
    #[arg(long)]
    #[serde(default, skip_serializing_if = "is_none")]
    pub placement: Option<String>,

    /// Object: builtin:<letter-G|block|two-points|empty> or a raster file path.
    #[arg(long)]
    #[serde(default, skip_serializing_if = "is_none")]
    pub object: Option<String>,

    /// Probability convention: paper | physical.
    #[arg(long)]
    #[serde(default, skip_serializing_if = "is_none")]
    pub convention: Option<String>,

    /// Support threshold fraction for the contrast verdict.
    #[arg(long)]
    #[serde(default, skip_serializing_if = "is_none")]
    pub support_threshold: Option<f64>,

    /// Prefix for the output files (under the output root).
    #[arg(long)]
    #[serde(default, skip_serializing_if = "is_none")]
    pub out_prefix: Option<String>,
}

#[derive(Debug, Clone, Default, Args, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct SweepParams {
    #[arg(skip)]
    #[serde(default, skip_serializing_if = "is_none")]
    pub schema_version: Option<String>,

    /// Grid sides, comma separated.
    #[arg(long, value_delimiter = ',')]
    #[serde(default, skip_serializing_if = "is_none")]
    pub m_list: Option<Vec<usize>>,

    /// Uniform database sides, comma separated.
    #[arg(long, value_delimiter = ',')]
    #[serde(default, skip_serializing_if = "is_none")]
    pub n_list: Option<Vec<usize>>,

    /// Gaussian waists, comma separated.
    #[arg(long, value_delimiter = ',')]
    #[serde(default, skip_serializing_if = "is_none")]
    pub waist_list: Option<Vec<f64>>,

    /// Illumination profile: uniform | gaussian.
    #[arg(long)]
    #[serde(default, skip_serializing_if = "is_none")]
    pub profile: Option<String>,

    /// Block placement: centered | origin.
    #[arg(long)]
    #[serde(default, skip_serializing_if = "is_none")]
    pub placement: Option<String>,

    /// Heatmap CSV filename (under the output root).
    #[arg(long)]
    #[serde(default, skip_serializing_if = "is_none")]
    pub out: Option<String>,
}

#[derive(Debug, Clone, Default, Args, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct CountsParams {
    #[arg(skip)]
    #[serde(default, skip_serializing_if = "is_none")]
    pub schema_version: Option<String>,

    /// Probability CSV produced by `grover run` or `reconstruct`.
    #[arg(long)]
    #[serde(default, skip_serializing_if = "is_none")]
    pub probs: Option<String>,

    /// True coincidence rate at the peak-probability mask, counts/s.
    #[arg(long)]
    #[serde(default, skip_serializing_if = "is_none")]
    pub pair_rate: Option<f64>,

    /// Detector A singles rate, counts/s.
    #[arg(long)]
    #[serde(default, skip_serializing_if = "is_none")]
    pub singles_a: Option<f64>,

    /// Detector B singles rate, counts/s.
    #[arg(long)]
    #[serde(default, skip_serializing_if = "is_none")]
    pub singles_b: Option<f64>,

    /// Coincidence window, seconds.
    #[arg(long)]
    #[serde(default, skip_serializing_if = "is_none")]
    pub gate: Option<f64>,

    /// Dwell time per mask, seconds.
    #[arg(long)]
    #[serde(default, skip_serializing_if = "is_none")]
    pub integration: Option<f64>,

    /// RNG seed (overrides the global --seed).
    #[arg(long)]
    #[serde(default, skip_serializing_if = "is_none")]
    pub seed: Option<u64>,

    /// Convention label recorded with the counts: paper | physical.
    #[arg(long)]
    #[serde(default, skip_serializing_if = "is_none")]
    pub convention: Option<String>,

    /// Counts CSV filename (under the output root).
    #[arg(long)]
    #[serde(default, skip_serializing_if = "is_none")]
    pub out: Option<String>,
}

#[derive(Debug, Clone, Default, Args, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct FiguresParams {
    #[arg(skip)]
    #[serde(default, skip_serializing_if = "is_none")]
    pub schema_version: Option<String>,

    /// Preset name: fig1f | fig1g | fig2c-f | fig2g | fig2h | fig4-sim | fig5-sim.
    #[serde(default, skip_serializing_if = "is_none")]
    pub preset: Option<String>,
}
