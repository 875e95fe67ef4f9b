//! Raster and CSV encoding helpers shared by the subcommands.

use ghostgrover_core::grid::pixel_coords;
use ghostgrover_core::walsh::{SuperpositionMask, WalshMask};
use ghostgrover_core::Grid;

/// Affine scale applied when quantizing a signed image to 8 bits; recording
/// it keeps the PGM invertible up to quantization.
#[derive(Debug, Clone, Copy, serde::Serialize)]
pub struct ImageScale {
    pub min: f64,
    pub max: f64,
}

/// Min-max scales a grid to 8-bit samples. A constant image maps to 128.
pub fn quantize_grid(grid: &Grid) -> (Vec<u8>, ImageScale) {
    quantize(grid, grid.values())
}

/// Like [`quantize_grid`], but the origin pixel (which carries the δ spike
/// and would otherwise crush the dynamic range) is excluded when determining
/// the scale; its sample is clamped.
pub fn quantize_grid_excluding_origin(grid: &Grid) -> (Vec<u8>, ImageScale) {
    quantize(grid, &grid.values()[1..])
}

fn quantize(grid: &Grid, domain: &[f64]) -> (Vec<u8>, ImageScale) {
    let mut min = f64::INFINITY;
    let mut max = f64::NEG_INFINITY;
    for &v in domain {
        min = min.min(v);
        max = max.max(v);
    }
    let samples = if max > min {
        let span = max - min;
        grid.values()
            .iter()
            .map(|&v| (((v - min) / span).clamp(0.0, 1.0) * 255.0).round() as u8)
            .collect()
    } else {
        vec![128u8; grid.len()]
    };
    (samples, ImageScale { min, max })
}

/// Mask-view samples: -1 → 0, 0 → 128, +1 → 255.
pub fn quantize_walsh_mask(mask: &WalshMask) -> Vec<u8> {
    mask.values()
        .iter()
        .map(|&v| match v {
            -1 => 0u8,
            0 => 128,
            _ => 255,
        })
        .collect()
}

/// Superposition samples: 0 → 0, √2 → 255.
pub fn quantize_superposition_mask(mask: &SuperpositionMask) -> Vec<u8> {
    let scale = 255.0 / std::f64::consts::SQRT_2;
    mask.values()
        .iter()
        .map(|&v| (v * scale).round().clamp(0.0, 255.0) as u8)
        .collect()
}

/// `j,p` rows.
pub fn probabilities_csv(p: &[f64]) -> String {
    let mut out = String::from("j,p\n");
    for (j, v) in p.iter().enumerate() {
        out.push_str(&format!("{j},{v}\n"));
    }
    out
}

/// `j,x,y,p` rows with the pixel coordinates of each state index.
pub fn probabilities_with_coords_csv(p: &[f64], side: usize) -> String {
    let mut out = String::from("j,x,y,p\n");
    for (j, v) in p.iter().enumerate() {
        let (x, y) = pixel_coords(j, side);
        out.push_str(&format!("{j},{x},{y},{v}\n"));
    }
    out
}
