//! `simulate-counts`: Poisson coincidence/singles sampling over a probability
//! CSV, with accidental estimation and subtraction.

use ghostgrover_core::coincidence::{simulate_counts, NoiseParams};
use ghostgrover_core::grover::ProbabilityVector;
use ghostgrover_core::Convention;

use crate::args::CountsParams;
use crate::commands::{merge, require, CliError, Context, SCHEMA_VERSION};

/// Accepts the `j,p` and `j,x,y,p` layouts written by the other subcommands;
/// a non-numeric first row is treated as a header.
fn parse_probabilities(text: &str) -> Result<Vec<f64>, CliError> {
    let mut out = Vec::new();
    for (idx, line) in text.lines().enumerate() {
        let line = line.trim();
        if line.is_empty() {
            continue;
        }
        let fields: Vec<&str> = line.split(',').collect();
        if !matches!(fields.len(), 2 | 4) {
            return Err(CliError::usage(format!(
                "probability CSV line {} has {} fields (expected 2 or 4)",
                idx + 1,
                fields.len()
            )));
        }
        let last = fields[fields.len() - 1];
        match last.parse::<f64>() {
            Ok(v) => out.push(v),
            Err(_) if idx == 0 => continue, // header row
            Err(e) => {
                return Err(CliError::usage(format!(
                    "probability CSV line {}: {e}",
                    idx + 1
                )))
            }
        }
    }
    if out.is_empty() {
        return Err(CliError::usage("probability CSV contains no rows"));
    }
    Ok(out)
}

pub fn run(ctx: &Context, params: CountsParams) -> Result<(), CliError> {
    let config: Option<CountsParams> = ctx.typed_config()?;
    let config = config.unwrap_or_default();
    let merged = CountsParams {
        schema_version: Some(SCHEMA_VERSION.to_string()),
        probs: merge(params.probs, config.probs),
        pair_rate: merge(params.pair_rate, config.pair_rate),
        singles_a: merge(params.singles_a, config.singles_a),
        singles_b: merge(params.singles_b, config.singles_b),
        gate: merge(params.gate, config.gate),
        integration: merge(params.integration, config.integration),
        seed: merge(params.seed, config.seed).or(ctx.seed),
        convention: merge(params.convention, config.convention),
        out: merge(params.out, config.out),
    };

    let probs_path = require(merged.probs.clone(), "--probs")?;
    let text = std::fs::read_to_string(&probs_path).map_err(CliError::Io)?;
    let values = parse_probabilities(&text)?;
    let convention: Convention = match merged.convention.as_deref() {
        None => Convention::Paper,
        Some(s) => super::parse_from_str(s, "convention")?,
    };
    let p = ProbabilityVector::new(values, convention)?;

    let noise = NoiseParams {
        pair_rate: require(merged.pair_rate, "--pair-rate")?,
        singles_rate_a: merged.singles_a.unwrap_or(0.0),
        singles_rate_b: merged.singles_b.unwrap_or(0.0),
        gate: merged.gate.unwrap_or(3e-9),
        integration: merged.integration.unwrap_or(2.0),
        seed: merged.seed.unwrap_or(0),
    };
    let counts = simulate_counts(&p, &noise)?;

    let mut csv =
        String::from("j,coincidences,singles_a,singles_b,accidentals_est,corrected,clamped\n");
    for r in counts.records() {
        csv.push_str(&format!(
            "{},{},{},{},{},{},{}\n",
            r.mask,
            r.coincidences,
            r.singles_a,
            r.singles_b,
            r.accidentals_est,
            r.corrected,
            r.clamped
        ));
    }
    let out_name = merged
        .out
        .clone()
        .unwrap_or_else(|| "counts.csv".to_string());
    let mut writer = ctx.writer()?;
    writer.write_bytes(&out_name, csv.as_bytes())?;
    let echo = serde_json::to_value(&merged).map_err(CliError::Json)?;
    writer.finish("simulate-counts", echo, merged.seed)
}
