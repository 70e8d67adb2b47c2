//! Dense maps of fitness, disparity and transferability over the whole
//! genotype square, with CSV persistence and SVG heatmaps.

mod grid;
mod render;

pub use grid::{
    count_local_maxima, map_grid, map_grid_with, read_grid_csv, write_grid_csv, Grid, GridKind,
    MapOptions, Resolution,
};
pub use render::{render_heatmap, render_heatmap_with_overlay, CELL_PX, LEGEND_PX};

/// High-fitness threshold used for overlays, mm.
pub const HIGH_FITNESS_MM: f64 = 900.0;
