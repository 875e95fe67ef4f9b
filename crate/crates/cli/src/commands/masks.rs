//! `masks export`: one PGM per mask plus an `index.json` manifest.

use ghostgrover_core::walsh::{mask_2d, render_superpixel, superposition_mask, WalshOrdering};

use crate::args::MasksParams;
use crate::commands::{merge, parse_from_str, CliError, Context, SCHEMA_VERSION};
use crate::output::{quantize_superposition_mask, quantize_walsh_mask};

/// Exporting every mask writes M = m² files; keep that to desk scale.
const EXPORT_SIDE_CAP: usize = 128;

#[derive(serde::Serialize)]
struct IndexEntry {
    j: usize,
    file: String,
}

#[derive(serde::Serialize)]
struct MaskIndex {
    schema_version: &'static str,
    m: usize,
    ordering: String,
    kind: String,
    screen: usize,
    superpixel: usize,
    /// Pixel value mapping applied when quantizing mask entries.
    value_mapping: String,
    /// Masks are emitted in the mask view; divide by √M for state-view use.
    normalization_view: &'static str,
    masks: Vec<IndexEntry>,
}

pub fn export(ctx: &Context, params: MasksParams) -> Result<(), CliError> {
    let config: Option<MasksParams> = ctx.typed_config()?;
    let config = config.unwrap_or_default();
    let merged = MasksParams {
        schema_version: Some(SCHEMA_VERSION.to_string()),
        m: merge(params.m, config.m),
        ordering: merge(params.ordering, config.ordering),
        kind: merge(params.kind, config.kind),
        screen: merge(params.screen, config.screen),
        out: merge(params.out, config.out),
    };

    let m = super::require(merged.m, "--m")?;
    let ordering: WalshOrdering = match merged.ordering.as_deref() {
        None => WalshOrdering::Natural,
        Some(s) => parse_from_str(s, "ordering")?,
    };
    let kind = merged.kind.clone().unwrap_or_else(|| "h".to_string());
    if kind != "h" && kind != "q" {
        return Err(CliError::usage(format!(
            "unknown mask kind '{kind}' (expected 'h' or 'q')"
        )));
    }
    let screen = merged.screen.unwrap_or(m);
    let out_name = merged.out.clone().unwrap_or_else(|| "masks".to_string());

    if m > EXPORT_SIDE_CAP {
        return Err(CliError::Core(ghostgrover_core::Error::ResourceLimit(
            format!("mask export writes m² files; side {m} exceeds the cap of {EXPORT_SIDE_CAP}"),
        )));
    }
    // Probe the parameters before writing anything.
    mask_2d(0, m, ordering)?;
    render_superpixel(&vec![0.0f64; m * m], m, screen)?;

    let dim = m * m;
    let mut writer = ctx.writer()?;
    let mut entries = Vec::with_capacity(dim);
    for j in 0..dim {
        let samples = match kind.as_str() {
            "h" => quantize_walsh_mask(&mask_2d(j, m, ordering)?),
            _ => quantize_superposition_mask(&superposition_mask(j, m, ordering)?),
        };
        let scaled = render_superpixel(&samples, m, screen)?;
        let file = format!("{kind}_{j:05}.pgm");
        let bytes = ghostgrover_core::pgm::encode_p5(screen, screen, &scaled)?;
        writer.write_bytes(&format!("{out_name}/{file}"), &bytes)?;
        entries.push(IndexEntry { j, file });
    }
    let index = MaskIndex {
        schema_version: SCHEMA_VERSION,
        m,
        ordering: ordering.to_string(),
        kind: kind.clone(),
        screen,
        superpixel: screen / m,
        value_mapping: if kind == "h" {
            "-1 -> 0, 0 -> 128, +1 -> 255".to_string()
        } else {
            "0 -> 0, sqrt(2) -> 255".to_string()
        },
        normalization_view: "mask (±1); divide by sqrt(M) for the state view",
        masks: entries,
    };
    writer.write_json(&format!("{out_name}/index.json"), &index)?;
    let echo = serde_json::to_value(&merged).map_err(CliError::Json)?;
    writer.finish("masks export", echo, ctx.seed)
}
