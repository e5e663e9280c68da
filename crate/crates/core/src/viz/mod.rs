//! Pictures of the invariants: diagrams (BID), barcodes (BIB), corpus
//! heatmaps and the perturbation experiment.
//!
//! All drawings are SVG 1.1 text; heatmaps can also be written as PNG.

mod heatmap;
mod perturb;
mod svg;

pub use heatmap::{build_heatmap, render_heatmap_png, render_heatmap_svg, Colormap, Heatmap, Scale, DEFAULT_BINS};
pub use perturb::{
    parse_eps_spec, perturb_experiment, render_curve_svg, write_curve_csv, CurvePoint, PerturbationCurve,
    MAX_DEGENERATE_RETRIES,
};

use std::fmt::Write as _;

use crate::error::{Error, Result};
use crate::formats::{format_g17, BRI_CSV_HEADER};
use crate::invariant::{BriMatrix, Column, BRI_WIDTH};

/// Line colours of the nine diagram curves, in BRI column order.
pub const BID_COLORS: [&str; BRI_WIDTH] =
    ["#1f4e9c", "#4f8fdf", "#9cc3f0", "#1d7a33", "#4fbf60", "#a6e0a0", "#a3161b", "#e0473c", "#f4a48f"];

/// Rows 2..m of a diagram as CSV, in the BRI CSV layout.
pub fn bid_csv(bri: &BriMatrix) -> Result<String> {
    check_len(bri)?;
    let mut out = format!("{BRI_CSV_HEADER}\n");
    for (i, row) in bri.rows().iter().enumerate().skip(1) {
        write!(out, "{}", i + 1).unwrap();
        for v in row {
            out.push(',');
            out.push_str(&format_g17(*v));
        }
        out.push('\n');
    }
    Ok(out)
}

fn check_len(bri: &BriMatrix) -> Result<()> {
    if bri.len() < 2 {
        return Err(Error::TooShort { required: 2, actual: bri.len() });
    }
    Ok(())
}

/// Backbone invariant diagram: one polyline per BRI column through the
/// points `(i, B[i][j])`, `i = 2..m`.
pub fn bid_svg(bri: &BriMatrix, title: &str) -> Result<String> {
    check_len(bri)?;
    let rows = &bri.rows()[1..];
    let (lo, hi) =
        rows.iter().flatten().fold((f64::INFINITY, f64::NEG_INFINITY), |(lo, hi), v| (lo.min(*v), hi.max(*v)));
    let m = bri.len() as f64;
    let mut plot = svg::Plot::new(900.0, 460.0, (2.0, m), (lo, hi));
    for (j, color) in BID_COLORS.iter().enumerate() {
        plot.polyline(rows.iter().enumerate().map(|(k, r)| ((k + 2) as f64, r[j])), color, false);
    }
    plot.axes("residue index i", "coordinate (Å)");
    let labels: Vec<_> = Column::BRI.iter().zip(BID_COLORS).map(|(c, col)| (c.name(), col)).collect();
    plot.legend(&labels);
    Ok(plot.finish(title))
}

/// Diagram as both SVG and CSV.
pub fn emit_bid(bri: &BriMatrix, title: &str) -> Result<(String, String)> {
    Ok((bid_svg(bri, title)?, bid_csv(bri)?))
}

/// Per-column `(min, max)` over rows 2..m.
pub fn column_ranges(bri: &BriMatrix) -> Result<[(f64, f64); BRI_WIDTH]> {
    check_len(bri)?;
    let mut ranges = [(f64::INFINITY, f64::NEG_INFINITY); BRI_WIDTH];
    for row in &bri.rows()[1..] {
        for (r, v) in ranges.iter_mut().zip(row) {
            *r = (r.0.min(*v), r.1.max(*v));
        }
    }
    Ok(ranges)
}

/// Ranges narrower than this (Å) count as degenerate: a near-constant
/// column would otherwise spread rounding noise over the full colour scale.
pub const MIN_RANGE_WIDTH: f64 = 1e-9;

/// Maps `v` into 0..=255 linearly over `[lo, hi]`, clamped, rounding half up.
pub fn channel(v: f64, lo: f64, hi: f64) -> u8 {
    let t = ((v - lo) / (hi - lo)).clamp(0.0, 1.0);
    (t * 255.0 + 0.5).floor() as u8
}

/// Barcode colours: for each residue `i = 2..m`, the RGB colours of the N, A
/// and C bonds, with x → red, y → green, z → blue.
pub fn bib_colors(bri: &BriMatrix, ranges: Option<&[(f64, f64); BRI_WIDTH]>) -> Result<Vec<[[u8; 3]; 3]>> {
    let ranges = match ranges {
        Some(r) => *r,
        None => column_ranges(bri)?,
    };
    check_len(bri)?;
    for (j, (lo, hi)) in ranges.iter().enumerate() {
        if !(hi - lo > MIN_RANGE_WIDTH) || !lo.is_finite() || !hi.is_finite() {
            return Err(Error::DegenerateRange(Column::BRI[j].name().to_string()));
        }
    }
    Ok(bri.rows()[1..]
        .iter()
        .map(|row| {
            let rgb = |atom: usize| {
                let mut c = [0u8; 3];
                for (k, ch) in c.iter_mut().enumerate() {
                    let j = 3 * atom + k;
                    *ch = channel(row[j], ranges[j].0, ranges[j].1);
                }
                c
            };
            [rgb(0), rgb(1), rgb(2)]
        })
        .collect())
}

/// Backbone invariant barcode: three bars (N, A, C) with one cell per
/// residue `i = 2..m`.
pub fn bib_svg(bri: &BriMatrix, ranges: Option<&[(f64, f64); BRI_WIDTH]>, title: &str) -> Result<String> {
    let colors = bib_colors(bri, ranges)?;
    let m = bri.len() as f64;
    let mut plot = svg::Plot::new(900.0, 240.0, (1.5, m + 0.5), (0.0, 3.0));
    for (k, cells) in colors.iter().enumerate() {
        let i = (k + 2) as f64;
        for (bar, rgb) in cells.iter().enumerate() {
            let y = 2.0 - bar as f64;
            let fill = format!("#{:02x}{:02x}{:02x}", rgb[0], rgb[1], rgb[2]);
            plot.rect(i - 0.5, i + 0.5, y + 0.1, y + 0.9, &fill);
        }
    }
    plot.axes("residue index i", "bars: C (bottom), A, N (top)");
    plot.legend(&[("x → red", "#d62728"), ("y → green", "#2ca02c"), ("z → blue", "#1f77b4")]);
    Ok(plot.finish(title))
}
