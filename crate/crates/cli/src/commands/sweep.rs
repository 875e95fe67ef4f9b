//! `sweep-overlap`: overlap heatmap over grid sides and database sizes.

use ghostgrover_core::ghost::{sweep_overlap, SweepConfig, SweepParams as CoreSweepParams};

use crate::args::SweepParams;
use crate::commands::{merge, require, CliError, Context, SCHEMA_VERSION};

pub fn run(ctx: &Context, params: SweepParams) -> Result<(), CliError> {
    let config: Option<SweepParams> = ctx.typed_config()?;
    let config = config.unwrap_or_default();
    let merged = SweepParams {
        schema_version: Some(SCHEMA_VERSION.to_string()),
        m_list: merge(params.m_list, config.m_list),
        n_list: merge(params.n_list, config.n_list),
        waist_list: merge(params.waist_list, config.waist_list),
        profile: merge(params.profile, config.profile),
        placement: merge(params.placement, config.placement),
        out: merge(params.out, config.out),
    };

    let m_list = require(merged.m_list.clone(), "--m-list")?;
    let profile = merged.profile.clone().unwrap_or_else(|| {
        if merged.waist_list.is_some() {
            "gaussian".to_string()
        } else {
            "uniform".to_string()
        }
    });
    let core_params = match profile.as_str() {
        "uniform" => CoreSweepParams::BlockSides(require(merged.n_list.clone(), "--n-list")?),
        "gaussian" => CoreSweepParams::Waists(require(merged.waist_list.clone(), "--waist-list")?),
        other => {
            return Err(CliError::usage(format!(
                "unknown profile '{other}' (expected 'uniform' or 'gaussian')"
            )))
        }
    };
    let mut sweep_config = SweepConfig::new(m_list, core_params);
    if let Some(p) = merged.placement.as_deref() {
        sweep_config.placement = super::parse_from_str(p, "placement")?;
    }
    let rows = sweep_overlap(&sweep_config)?;

    let param_name = if profile == "uniform" { "n" } else { "waist" };
    let mut csv = format!("m,{param_name},overlap\n");
    for row in &rows {
        if profile == "uniform" {
            csv.push_str(&format!(
                "{},{},{}\n",
                row.m, row.param as usize, row.overlap
            ));
        } else {
            csv.push_str(&format!("{},{},{}\n", row.m, row.param, row.overlap));
        }
    }
    let out_name = merged
        .out
        .clone()
        .unwrap_or_else(|| "heatmap.csv".to_string());
    let mut writer = ctx.writer()?;
    writer.write_bytes(&out_name, csv.as_bytes())?;
    let echo = serde_json::to_value(&merged).map_err(CliError::Json)?;
    writer.finish("sweep-overlap", echo, ctx.seed)
}
