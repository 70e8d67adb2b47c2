use std::fmt::Write;

use super::grid::Grid;

/// Side of one cell, px.
pub const CELL_PX: usize = 10;
/// Height of the color-scale strip under the map, px.
pub const LEGEND_PX: usize = 40;

const LEGEND_STEPS: usize = 32;

/// Heatmap of `grid`, outlining cells whose own value is `>= threshold`.
pub fn render_heatmap(grid: &Grid, threshold: Option<f64>) -> String {
    render_heatmap_with_overlay(grid, threshold.map(|t| (grid, t)))
}

/// Heatmap of `grid`, outlining cells where `overlay.0 >= overlay.1`. The
/// overlay grid must share the resolution of `grid`.
pub fn render_heatmap_with_overlay(grid: &Grid, overlay: Option<(&Grid, f64)>) -> String {
    let (nx, ny) = (grid.nx(), grid.ny());
    let (lo, hi) = (grid.min(), grid.max());
    let width = nx * CELL_PX;
    let map_height = ny * CELL_PX;
    let height = map_height + LEGEND_PX;
    let mask = overlay
        .filter(|(g, _)| g.resolution == grid.resolution)
        .map(|(g, t)| g.mask_at_least(t));

    let mut svg = String::with_capacity(nx * ny * 120);
    let _ = writeln!(
        svg,
        r#"<?xml version="1.0" encoding="UTF-8"?>
<svg xmlns="http://www.w3.org/2000/svg" width="{width}" height="{height}" viewBox="0 0 {width} {height}">
<title>{}</title>
<g id="cells" stroke-width="1">"#,
        grid.kind
    );
    for i in 0..nx {
        for j in 0..ny {
            let v = grid.get(i, j);
            let x = i * CELL_PX;
            // p2 grows upwards.
            let y = (ny - 1 - j) * CELL_PX;
            let outlined = mask.as_ref().is_some_and(|m| m[grid.index(i, j)]);
            let (class, stroke) = if outlined {
                ("cell above", r##" stroke="#ffffff""##)
            } else {
                ("cell", "")
            };
            let _ = writeln!(
                svg,
                r#"<rect class="{class}" x="{x}" y="{y}" width="{CELL_PX}" height="{CELL_PX}" fill="{}"{stroke} data-value="{v}"/>"#,
                color(scale(v, lo, hi))
            );
        }
    }
    svg.push_str("</g>\n<g id=\"legend\">\n");
    let step_w = width as f64 / LEGEND_STEPS as f64;
    for k in 0..LEGEND_STEPS {
        let t = k as f64 / (LEGEND_STEPS - 1) as f64;
        let _ = writeln!(
            svg,
            r#"<rect class="legend" x="{:.3}" y="{}" width="{:.3}" height="12" fill="{}"/>"#,
            k as f64 * step_w,
            map_height + 4,
            step_w + 0.5,
            color(t)
        );
    }
    let _ = writeln!(
        svg,
        r#"<text x="2" y="{ty}" font-family="sans-serif" font-size="10">{lo:.4}</text>
<text x="{width}" y="{ty}" font-family="sans-serif" font-size="10" text-anchor="end">{hi:.4}</text>
</g>
</svg>"#,
        ty = map_height + 30
    );
    svg
}

fn scale(v: f64, lo: f64, hi: f64) -> f64 {
    if hi > lo {
        ((v - lo) / (hi - lo)).clamp(0.0, 1.0)
    } else {
        0.0
    }
}

/// Dark blue -> teal -> yellow.
fn color(t: f64) -> String {
    const STOPS: [[f64; 3]; 3] = [
        [68.0, 1.0, 84.0],
        [33.0, 145.0, 140.0],
        [253.0, 231.0, 37.0],
    ];
    let (a, b, u) = if t < 0.5 {
        (STOPS[0], STOPS[1], t * 2.0)
    } else {
        (STOPS[1], STOPS[2], (t - 0.5) * 2.0)
    };
    let c = |k: usize| (a[k] + (b[k] - a[k]) * u).round() as u8;
    format!("#{:02x}{:02x}{:02x}", c(0), c(1), c(2))
}
