//! `state info`: Schmidt number, effective database side and norm as JSON.

use crate::args::StateParams;
use crate::commands::{merge, CliError, Context, ProfileSpec, SCHEMA_VERSION};

#[derive(serde::Serialize)]
struct StateInfo<'a> {
    schema_version: &'static str,
    m: usize,
    profile: &'a ghostgrover_core::photon::ProfileMeta,
    schmidt_number: f64,
    effective_block_side: f64,
    norm: f64,
}

pub fn info(ctx: &Context, params: StateParams) -> Result<(), CliError> {
    let config: Option<StateParams> = ctx.typed_config()?;
    let config = config.unwrap_or_default();
    let merged = StateParams {
        schema_version: Some(SCHEMA_VERSION.to_string()),
        profile: merge(params.profile, config.profile),
        m: merge(params.m, config.m),
        n: merge(params.n, config.n),
        waist: merge(params.waist, config.waist),
        placement: merge(params.placement, config.placement),
    };

    let m = super::require(merged.m, "--m")?;
    let spec = ProfileSpec::resolve(
        merged.profile.clone(),
        merged.n,
        merged.waist,
        merged.placement.clone(),
    )?;
    let state = spec.build(m)?;
    let info = StateInfo {
        schema_version: SCHEMA_VERSION,
        m,
        profile: state.profile(),
        schmidt_number: state.schmidt_number(),
        effective_block_side: state.effective_block_side(),
        norm: state.norm_squared(),
    };
    println!(
        "{}",
        serde_json::to_string_pretty(&info).map_err(CliError::Json)?
    );

    let writer = ctx.writer()?;
    let echo = serde_json::to_value(&merged).map_err(CliError::Json)?;
    writer.finish("state info", echo, ctx.seed)
}
