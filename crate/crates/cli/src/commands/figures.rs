//! `figures`: pinned parameter presets reproducing each simulated figure.
//! The parameters live in versioned JSON files shipped with the binary.

use ghostgrover_core::ghost::{sweep_overlap, SweepConfig, SweepParams as CoreSweepParams};
use ghostgrover_core::grover::absorbed_basis_probabilities;
use ghostgrover_core::photon::{apply_oracle, OracleObject, SchmidtState};
use ghostgrover_core::{Convention, Grid};
use serde::{Deserialize, Serialize};

use crate::args::FiguresParams;
use crate::commands::reconstruct::write_reconstruction_set;
use crate::commands::{merge, require, resolve_object, CliError, Context};
use crate::manifest::OutputWriter;
use crate::output::{probabilities_with_coords_csv, quantize_grid};

#[derive(Debug, Clone, Serialize, Deserialize)]
struct PresetFile {
    schema_version: String,
    preset: String,
    spec: PresetSpec,
}

#[derive(Debug, Clone, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "kebab-case", deny_unknown_fields)]
enum PresetSpec {
    /// Pixel-basis probabilities with the diffusion operator absorbed into
    /// the measurement basis, rendered as an image.
    AbsorbedImage {
        m: usize,
        waist: f64,
        object: String,
    },
    /// Superposition-basis reconstruction with the full decomposition.
    GhostDecomposition {
        m: usize,
        waist: f64,
        object: String,
        convention: Convention,
    },
    /// One reconstruction per database side, single centered mark.
    DecompositionPanels {
        m: usize,
        n_values: Vec<usize>,
        labels: Vec<String>,
        convention: Convention,
    },
    /// Uniform-database overlap heatmap.
    SweepUniform {
        m_list: Vec<usize>,
        n_list: Vec<usize>,
    },
    /// Gaussian-database overlap heatmap.
    SweepGaussian {
        m_list: Vec<usize>,
        waist_list: Vec<f64>,
    },
    /// Reconstruction gallery across objects and resolutions.
    ObjectGallery { entries: Vec<GalleryEntry> },
}

#[derive(Debug, Clone, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
struct GalleryEntry {
    label: String,
    m: usize,
    waist: f64,
    object: String,
}

fn preset_source(name: &str) -> Result<&'static str, CliError> {
    Ok(match name {
        "fig1f" => include_str!("../../presets/fig1f.json"),
        "fig1g" => include_str!("../../presets/fig1g.json"),
        "fig2c-f" => include_str!("../../presets/fig2c-f.json"),
        "fig2g" => include_str!("../../presets/fig2g.json"),
        "fig2h" => include_str!("../../presets/fig2h.json"),
        "fig4-sim" => include_str!("../../presets/fig4-sim.json"),
        "fig5-sim" => include_str!("../../presets/fig5-sim.json"),
        other => {
            return Err(CliError::usage(format!(
                "unknown preset '{other}' (expected fig1f, fig1g, fig2c-f, fig2g, fig2h, fig4-sim or fig5-sim)"
            )))
        }
    })
}

#[derive(Serialize)]
struct PanelSummary {
    label: String,
    param: f64,
    overlap: f64,
    contrast_verdict: bool,
}

#[derive(Serialize)]
struct AbsorbedReport {
    m: usize,
    marked_count: usize,
    /// Peak probability over marked pixels.
    max_marked: f64,
    /// Peak probability over unmarked pixels inside the illumination support.
    max_unmarked_supported: f64,
    marked_pixels_carry_peak: bool,
}

fn run_absorbed_image(
    writer: &mut OutputWriter,
    dir: &str,
    m: usize,
    waist: f64,
    object_spec: &str,
) -> Result<(), CliError> {
    let state = SchmidtState::gaussian(m, waist, None)?;
    let object = resolve_object(object_spec, m)?;
    let idler = apply_oracle(&state, &object)?;
    let p = absorbed_basis_probabilities(&idler);
    let image = Grid::from_values(m, p.values().to_vec())?;
    let (samples, _) = quantize_grid(&image);
    writer.write_bytes(
        &format!("{dir}/probabilities.pgm"),
        &ghostgrover_core::pgm::encode_p5(m, m, &samples)?,
    )?;
    writer.write_bytes(
        &format!("{dir}/probabilities.csv"),
        probabilities_with_coords_csv(p.values(), m).as_bytes(),
    )?;

    let peak = state.lambda().values().iter().cloned().fold(0.0, f64::max);
    let mut max_marked = 0.0f64;
    let mut max_unmarked = 0.0f64;
    for y in 0..m {
        for x in 0..m {
            let v = image.get(x, y);
            if object.is_marked(x, y) {
                max_marked = max_marked.max(v);
            } else if state.lambda().get(x, y) >= 0.1 * peak {
                max_unmarked = max_unmarked.max(v);
            }
        }
    }
    writer.write_json(
        &format!("{dir}/report.json"),
        &AbsorbedReport {
            m,
            marked_count: object.marked_count(),
            max_marked,
            max_unmarked_supported: max_unmarked,
            marked_pixels_carry_peak: max_marked > max_unmarked,
        },
    )?;
    Ok(())
}

fn center_mark(state: &SchmidtState) -> Result<OracleObject, CliError> {
    let (cx, cy) = state.database_center();
    Ok(OracleObject::single_mark(state.side(), cx, cy)?)
}

fn write_heatmap(
    writer: &mut OutputWriter,
    dir: &str,
    config: &SweepConfig,
    param_name: &str,
) -> Result<(), CliError> {
    let rows = sweep_overlap(config)?;
    let mut csv = format!("m,{param_name},overlap\n");
    for row in &rows {
        if param_name == "n" {
            csv.push_str(&format!(
                "{},{},{}\n",
                row.m, row.param as usize, row.overlap
            ));
        } else {
            csv.push_str(&format!("{},{},{}\n", row.m, row.param, row.overlap));
        }
    }
    writer.write_bytes(&format!("{dir}/heatmap.csv"), csv.as_bytes())
}

pub fn run(ctx: &Context, params: FiguresParams) -> Result<(), CliError> {
    let config: Option<FiguresParams> = ctx.typed_config()?;
    let config = config.unwrap_or_default();
    let preset_name = require(merge(params.preset, config.preset), "preset name")?;
    let file: PresetFile = serde_json::from_str(preset_source(&preset_name)?)
        .map_err(|e| CliError::usage(format!("corrupt preset '{preset_name}': {e}")))?;

    let mut writer = ctx.writer()?;
    let dir = preset_name.clone();
    match &file.spec {
        PresetSpec::AbsorbedImage { m, waist, object } => {
            run_absorbed_image(&mut writer, &dir, *m, *waist, object)?;
        }
        PresetSpec::GhostDecomposition {
            m,
            waist,
            object,
            convention,
        } => {
            let state = SchmidtState::gaussian(*m, *waist, None)?;
            let obj = resolve_object(object, *m)?;
            write_reconstruction_set(
                &mut writer,
                &format!("{dir}/image"),
                &state,
                &obj,
                *convention,
                ghostgrover_core::ghost::DEFAULT_SUPPORT_THRESHOLD,
            )?;
        }
        PresetSpec::DecompositionPanels {
            m,
            n_values,
            labels,
            convention,
        } => {
            let mut panels = Vec::new();
            for (n, label) in n_values.iter().zip(labels) {
                let state = SchmidtState::uniform_block(
                    *m,
                    *n,
                    ghostgrover_core::photon::Placement::Centered,
                )?;
                let object = center_mark(&state)?;
                let summary = write_reconstruction_set(
                    &mut writer,
                    &format!("{dir}/{label}"),
                    &state,
                    &object,
                    *convention,
                    ghostgrover_core::ghost::DEFAULT_SUPPORT_THRESHOLD,
                )?;
                panels.push(PanelSummary {
                    label: label.clone(),
                    param: *n as f64,
                    overlap: summary.overlap,
                    contrast_verdict: summary.verdict,
                });
            }
            writer.write_json(&format!("{dir}/summary.json"), &panels)?;
        }
        PresetSpec::SweepUniform { m_list, n_list } => {
            let config =
                SweepConfig::new(m_list.clone(), CoreSweepParams::BlockSides(n_list.clone()));
            write_heatmap(&mut writer, &dir, &config, "n")?;
        }
        PresetSpec::SweepGaussian { m_list, waist_list } => {
            let config =
                SweepConfig::new(m_list.clone(), CoreSweepParams::Waists(waist_list.clone()));
            write_heatmap(&mut writer, &dir, &config, "waist")?;
        }
        PresetSpec::ObjectGallery { entries } => {
            let mut panels = Vec::new();
            for entry in entries {
                let state = SchmidtState::gaussian(entry.m, entry.waist, None)?;
                let object = resolve_object(&entry.object, entry.m)?;
                let summary = write_reconstruction_set(
                    &mut writer,
                    &format!("{dir}/{}", entry.label),
                    &state,
                    &object,
                    Convention::Paper,
                    ghostgrover_core::ghost::DEFAULT_SUPPORT_THRESHOLD,
                )?;
                panels.push(PanelSummary {
                    label: entry.label.clone(),
                    param: entry.m as f64,
                    overlap: summary.overlap,
                    contrast_verdict: summary.verdict,
                });
            }
            writer.write_json(&format!("{dir}/summary.json"), &panels)?;
        }
    }
    let echo = serde_json::to_value(&file).map_err(CliError::Json)?;
    writer.finish("figures", echo, ctx.seed)
}
