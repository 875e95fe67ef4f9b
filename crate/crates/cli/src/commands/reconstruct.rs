//! `reconstruct`: ghost measurement, synthesis and three-part decomposition,
//! exported as scaled PGMs (scale recorded in the metadata), a probability
//! CSV and a JSON report. The file-writing core is shared with the figure
//! presets.

use ghostgrover_core::ghost::{
    decompose, ghost_probabilities, mark_detection_report, solution_overlap,
    DEFAULT_SUPPORT_THRESHOLD,
};
use ghostgrover_core::photon::{apply_oracle, OracleObject, SchmidtState};
use ghostgrover_core::Convention;

use crate::args::ReconstructParams;
use crate::commands::{
    merge, require, resolve_object, CliError, Context, ProfileSpec, SCHEMA_VERSION,
};
use crate::manifest::OutputWriter;
use crate::output::{probabilities_csv, quantize_grid, quantize_grid_excluding_origin, ImageScale};

#[derive(serde::Serialize)]
struct ReconstructMeta {
    schema_version: &'static str,
    m: usize,
    convention: Convention,
    ordering: &'static str,
    /// Affine scale (min/max) of each quantized image. For total, s and
    /// object the scale domain excludes the origin (δ) pixel, whose sample
    /// is clamped; the delta image uses the full range.
    total: ImageScale,
    delta: ImageScale,
    s: ImageScale,
    object: ImageScale,
    scale_domain: &'static str,
}

#[derive(serde::Serialize)]
struct ReconstructReport<'a> {
    schema_version: &'static str,
    m: usize,
    convention: Convention,
    profile: &'a ghostgrover_core::photon::ProfileMeta,
    schmidt_number: f64,
    effective_block_side: f64,
    marked_count: usize,
    overlap: f64,
    contrast: ghostgrover_core::ghost::MarkReport,
}

pub(crate) struct ReconstructionSummary {
    pub overlap: f64,
    pub verdict: bool,
}

/// Writes `{prefix}_{total,delta,s,object}.pgm`, `{prefix}_meta.json`,
/// `{prefix}_probs.csv` and `{prefix}_report.json`.
pub(crate) fn write_reconstruction_set(
    writer: &mut OutputWriter,
    prefix: &str,
    state: &SchmidtState,
    object: &OracleObject,
    convention: Convention,
    threshold: f64,
) -> Result<ReconstructionSummary, CliError> {
    let m = state.side();
    let idler = apply_oracle(state, object)?;
    let p = ghost_probabilities(&idler, convention);
    let image = decompose(&idler, convention);
    let overlap = solution_overlap(&image);
    let contrast = mark_detection_report(image.total(), object, state, threshold)?;
    let verdict = contrast.verdict;

    let (total_px, total_scale) = quantize_grid_excluding_origin(image.total());
    let (delta_px, delta_scale) = quantize_grid(image.delta_part());
    let (s_px, s_scale) = quantize_grid_excluding_origin(image.s_part());
    let (object_px, object_scale) = quantize_grid_excluding_origin(image.object_part());
    for (suffix, samples) in [
        ("total", &total_px),
        ("delta", &delta_px),
        ("s", &s_px),
        ("object", &object_px),
    ] {
        let bytes = ghostgrover_core::pgm::encode_p5(m, m, samples)?;
        writer.write_bytes(&format!("{prefix}_{suffix}.pgm"), &bytes)?;
    }
    writer.write_json(
        &format!("{prefix}_meta.json"),
        &ReconstructMeta {
            schema_version: SCHEMA_VERSION,
            m,
            convention,
            ordering: "natural",
            total: total_scale,
            delta: delta_scale,
            s: s_scale,
            object: object_scale,
            scale_domain: "origin pixel excluded for total/s/object, clamped in the samples",
        },
    )?;
    writer.write_bytes(
        &format!("{prefix}_probs.csv"),
        probabilities_csv(p.values()).as_bytes(),
    )?;
    writer.write_json(
        &format!("{prefix}_report.json"),
        &ReconstructReport {
            schema_version: SCHEMA_VERSION,
            m,
            convention,
            profile: state.profile(),
            schmidt_number: state.schmidt_number(),
            effective_block_side: state.effective_block_side(),
            marked_count: object.marked_count(),
            overlap,
            contrast,
        },
    )?;
    Ok(ReconstructionSummary { overlap, verdict })
}

pub fn run(ctx: &Context, params: ReconstructParams) -> Result<(), CliError> {
    let config: Option<ReconstructParams> = ctx.typed_config()?;
    let config = config.unwrap_or_default();
    let merged = ReconstructParams {
        schema_version: Some(SCHEMA_VERSION.to_string()),
        m: merge(params.m, config.m),
        profile: merge(params.profile, config.profile),
        n: merge(params.n, config.n),
        waist: merge(params.waist, config.waist),
        placement: merge(params.placement, config.placement),
        object: merge(params.object, config.object),
        convention: merge(params.convention, config.convention),
        support_threshold: merge(params.support_threshold, config.support_threshold),
        out_prefix: merge(params.out_prefix, config.out_prefix),
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
    let convention: Convention = match merged.convention.as_deref() {
        None => Convention::Paper,
        Some(s) => super::parse_from_str(s, "convention")?,
    };
    let threshold = merged
        .support_threshold
        .unwrap_or(DEFAULT_SUPPORT_THRESHOLD);
    let prefix = merged
        .out_prefix
        .clone()
        .unwrap_or_else(|| "recon".to_string());

    let mut writer = ctx.writer()?;
    write_reconstruction_set(&mut writer, &prefix, &state, &object, convention, threshold)?;
    let echo = serde_json::to_value(&merged).map_err(CliError::Json)?;
    writer.finish("reconstruct", echo, ctx.seed)
}
