//! `grover run`: iterated oracle + diffusion from the uniform start, with a
//! probability CSV and a JSON summary. The summary also reports the
//! single-shot success of the heralded (λ-weighted) state so non-uniform
//! profiles are meaningful.

use ghostgrover_core::grover::{grover_iterate, grover_probabilities, optimal_iterations};
use ghostgrover_core::photon::apply_oracle;

use crate::args::GroverParams;
use crate::commands::{
    merge, require, resolve_object, CliError, Context, ProfileSpec, SCHEMA_VERSION,
};
use crate::output::probabilities_with_coords_csv;

#[derive(serde::Serialize)]
struct GroverSummary {
    schema_version: &'static str,
    m: usize,
    dim: usize,
    marked: usize,
    iterations: usize,
    /// Rotation angle θ with sin²θ = t/M (absent without marks).
    #[serde(skip_serializing_if = "Option::is_none")]
    theta: Option<f64>,
    /// Marked-set mass of the iterated search state.
    iterated_success_mass: f64,
    /// Marked-set mass of the single-shot measurement on the heralded state.
    heralded_success_mass: f64,
    convention: &'static str,
}

pub fn run(ctx: &Context, params: GroverParams) -> Result<(), CliError> {
    let config: Option<GroverParams> = ctx.typed_config()?;
    let config = config.unwrap_or_default();
    let merged = GroverParams {
        schema_version: Some(SCHEMA_VERSION.to_string()),
        m: merge(params.m, config.m),
        profile: merge(params.profile, config.profile),
        n: merge(params.n, config.n),
        waist: merge(params.waist, config.waist),
        placement: merge(params.placement, config.placement),
        object: merge(params.object, config.object),
        iterations: merge(params.iterations, config.iterations),
        out: merge(params.out, config.out),
    };

    let m = require(merged.m, "--m")?;
    let spec = ProfileSpec::resolve(
        merged.profile.clone(),
        merged.n,
        merged.waist,
        merged.placement.clone(),
    )?;
    let state = spec.build(m)?;
    let object_spec = require(merged.object.clone(), "--object")?;
    let object = resolve_object(&object_spec, m)?;

    let dim = m * m;
    let marked = object.marked_count();
    let iterations = match merged.iterations.as_deref() {
        None | Some("auto") => {
            if marked >= 1 && marked < dim {
                optimal_iterations(dim, marked)?
            } else {
                0
            }
        }
        Some(text) => text.parse::<usize>().map_err(|_| {
            CliError::usage(format!(
                "invalid --iterations '{text}' (expected a nonnegative integer or 'auto')"
            ))
        })?,
    };

    let iterated = grover_iterate(&state, &object, iterations)?;
    let p = iterated.probabilities();
    let idler = apply_oracle(&state, &object)?;
    let heralded = grover_probabilities(&idler);

    let summary = GroverSummary {
        schema_version: SCHEMA_VERSION,
        m,
        dim,
        marked,
        iterations,
        theta: (marked >= 1 && marked < dim).then(|| (marked as f64 / dim as f64).sqrt().asin()),
        iterated_success_mass: p.marked_mass(&object)?,
        heralded_success_mass: heralded.marked_mass(&object)?,
        convention: "physical",
    };

    let out_name = merged
        .out
        .clone()
        .unwrap_or_else(|| "probs.csv".to_string());
    let summary_name = format!(
        "{}_summary.json",
        out_name.strip_suffix(".csv").unwrap_or(&out_name)
    );
    let mut writer = ctx.writer()?;
    writer.write_bytes(
        &out_name,
        probabilities_with_coords_csv(p.values(), m).as_bytes(),
    )?;
    writer.write_json(&summary_name, &summary)?;
    let echo = serde_json::to_value(&merged).map_err(CliError::Json)?;
    writer.finish("grover run", echo, ctx.seed)
}
