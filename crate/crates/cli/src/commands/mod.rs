//! Subcommand implementations and the shared plumbing: error-to-exit-code
//! mapping, config merging and input construction.

mod counts;
mod figures;
mod grover_run;
mod masks;
mod reconstruct;
mod state;
mod sweep;

use std::fmt;
use std::path::PathBuf;
use std::str::FromStr;

use ghostgrover_core::photon::{
    builtin_object, load_object, OracleObject, Placement, SchmidtState,
};
use ghostgrover_core::Error as CoreError;
use serde::de::DeserializeOwned;

use crate::args::{Cli, Command, GroverAction, MasksAction, StateAction};
use crate::manifest::OutputWriter;

pub const SCHEMA_VERSION: &str = "1";

#[derive(Debug)]
pub enum CliError {
    /// Bad flags, config or input values → exit 2.
    Usage(String),
    /// Filesystem failure → exit 3.
    Io(std::io::Error),
    /// JSON (de)serialization failure → exit 2.
    Json(serde_json::Error),
    /// Core library error; exit code depends on the kind.
    Core(CoreError),
}

impl CliError {
    pub fn usage(msg: impl Into<String>) -> Self {
        CliError::Usage(msg.into())
    }

    pub fn exit_code(&self) -> u8 {
        match self {
            CliError::Usage(_) | CliError::Json(_) => 2,
            CliError::Io(_) => 3,
            CliError::Core(CoreError::Io(_)) => 3,
            CliError::Core(CoreError::ResourceLimit(_)) => 4,
            CliError::Core(_) => 2,
        }
    }
}

impl fmt::Display for CliError {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            CliError::Usage(msg) => write!(f, "{msg}"),
            CliError::Io(err) => write!(f, "{err}"),
            CliError::Json(err) => write!(f, "{err}"),
            CliError::Core(err) => write!(f, "{err}"),
        }
    }
}

impl From<CoreError> for CliError {
    fn from(err: CoreError) -> Self {
        CliError::Core(err)
    }
}

/// Global options resolved once per invocation.
pub struct Context {
    pub out_dir: PathBuf,
    pub seed: Option<u64>,
    pub quiet: bool,
    pub config: Option<serde_json::Value>,
}

impl Context {
    pub fn writer(&self) -> Result<OutputWriter, CliError> {
        OutputWriter::new(self.out_dir.clone(), self.quiet)
    }

    /// Typed view of the `--config` file for one subcommand; unknown keys
    /// are rejected.
    pub fn typed_config<T: DeserializeOwned>(&self) -> Result<Option<T>, CliError> {
        match &self.config {
            None => Ok(None),
            Some(value) => serde_json::from_value(value.clone())
                .map(Some)
                .map_err(|e| CliError::usage(format!("invalid config file: {e}"))),
        }
    }
}

pub fn run(cli: Cli) -> Result<(), CliError> {
    if let Some(threads) = cli.threads {
        if threads == 0 {
            return Err(CliError::usage("--threads must be at least 1"));
        }
        // Ignore the error if a pool already exists (tests may reuse a process).
        let _ = rayon::ThreadPoolBuilder::new()
            .num_threads(threads)
            .build_global();
    }
    let out_dir = cli
        .out_dir
        .or_else(|| std::env::var_os("GHOSTGROVER_OUT_DIR").map(PathBuf::from))
        .unwrap_or_else(|| PathBuf::from("."));
    let config = match &cli.config {
        None => None,
        Some(path) => {
            let text = std::fs::read_to_string(path).map_err(CliError::Io)?;
            let value: serde_json::Value = serde_json::from_str(&text).map_err(|e| {
                CliError::usage(format!("invalid config file {}: {e}", path.display()))
            })?;
            if let Some(version) = value.get("schema_version").and_then(|v| v.as_str()) {
                if version != SCHEMA_VERSION {
                    return Err(CliError::usage(format!(
                        "unsupported config schema_version '{version}' (expected '{SCHEMA_VERSION}')"
                    )));
                }
            }
            Some(value)
        }
    };
    let ctx = Context {
        out_dir,
        seed: cli.seed,
        quiet: cli.quiet,
        config,
    };
    match cli.command {
        Command::Masks {
            action: MasksAction::Export(params),
        } => masks::export(&ctx, params),
        Command::State {
            action: StateAction::Info(params),
        } => state::info(&ctx, params),
        Command::Grover {
            action: GroverAction::Run(params),
        } => grover_run::run(&ctx, params),
        Command::Reconstruct(params) => reconstruct::run(&ctx, params),
        Command::SweepOverlap(params) => sweep::run(&ctx, params),
        Command::SimulateCounts(params) => counts::run(&ctx, params),
        Command::Figures(params) => figures::run(&ctx, params),
    }
}

/// Picks the explicit flag when present, otherwise the config value.
pub fn merge<T>(flag: Option<T>, config: Option<T>) -> Option<T> {
    flag.or(config)
}

pub fn require<T>(value: Option<T>, what: &str) -> Result<T, CliError> {
    value.ok_or_else(|| CliError::usage(format!("missing required parameter: {what}")))
}

pub fn parse_from_str<T>(value: &str, what: &str) -> Result<T, CliError>
where
    T: FromStr,
    T::Err: fmt::Display,
{
    value
        .parse()
        .map_err(|e| CliError::usage(format!("invalid {what}: {e}")))
}

/// Profile selector shared by the state-building subcommands.
pub struct ProfileSpec {
    pub profile: String,
    pub n: Option<usize>,
    pub waist: Option<f64>,
    pub placement: Placement,
}

impl ProfileSpec {
    pub fn resolve(
        profile: Option<String>,
        n: Option<usize>,
        waist: Option<f64>,
        placement: Option<String>,
    ) -> Result<Self, CliError> {
        let profile = profile.unwrap_or_else(|| "uniform".to_string());
        let placement = match placement {
            None => Placement::Centered,
            Some(p) => parse_from_str(&p, "placement")?,
        };
        Ok(ProfileSpec {
            profile,
            n,
            waist,
            placement,
        })
    }

    pub fn build(&self, m: usize) -> Result<SchmidtState, CliError> {
        match self.profile.as_str() {
            "uniform" => {
                let n = self.n.unwrap_or(m);
                Ok(SchmidtState::uniform_block(m, n, self.placement)?)
            }
            "gaussian" => {
                let waist = require(self.waist, "--waist (gaussian profile)")?;
                Ok(SchmidtState::gaussian(m, waist, None)?)
            }
            other => Err(CliError::usage(format!(
                "unknown profile '{other}' (expected 'uniform' or 'gaussian')"
            ))),
        }
    }
}

/// Parses `builtin:<name>` or loads a raster file.
pub fn resolve_object(spec: &str, m: usize) -> Result<OracleObject, CliError> {
    if let Some(name) = spec.strip_prefix("builtin:") {
        let which = parse_from_str(name, "builtin object")?;
        return Ok(builtin_object(which, m)?);
    }
    let object = load_object(spec)?;
    if object.side() != m {
        return Err(CliError::usage(format!(
            "object raster side {} does not match --m {m}",
            object.side()
        )));
    }
    Ok(object)
}
