use std::str::FromStr;

use super::svg;
use crate::error::{Error, Result};
use crate::invariant::{ChainInvariants, Column};

pub const DEFAULT_BINS: usize = 512;

/// How bin counts map to colour intensity.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Default)]
pub enum Scale {
    /// `log₁₀(1 + count)`.
    #[default]
    Log,
    Linear,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Default)]
pub enum Colormap {
    /// Blue through green and yellow to red.
    #[default]
    Rainbow,
    Viridis,
    Gray,
}

impl FromStr for Colormap {
    type Err = String;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        match s.to_ascii_lowercase().as_str() {
            "rainbow" => Ok(Colormap::Rainbow),
            "viridis" => Ok(Colormap::Viridis),
            "gray" | "grey" => Ok(Colormap::Gray),
            _ => Err(format!("unknown colormap `{s}` (rainbow, viridis, gray)")),
        }
    }
}

const VIRIDIS: [[f64; 3]; 6] = [
    [68.0, 1.0, 84.0],
    [65.0, 68.0, 135.0],
    [42.0, 120.0, 142.0],
    [34.0, 168.0, 132.0],
    [122.0, 209.0, 81.0],
    [253.0, 231.0, 37.0],
];

impl Colormap {
    /// Colour at `t ∈ [0, 1]`.
    pub fn color(self, t: f64) -> [u8; 3] {
        let t = t.clamp(0.0, 1.0);
        let byte = |v: f64| (v.clamp(0.0, 255.0) + 0.5).floor() as u8;
        match self {
            Colormap::Rainbow => {
                // Hue from 240° (blue) down to 0° (red) at full saturation.
                let h = (1.0 - t) * 4.0;
                let k = h.floor().min(3.0);
                let f = h - k;
                let (r, g, b) = match k as u8 {
                    0 => (1.0, f, 0.0),
                    1 => (1.0 - f, 1.0, 0.0),
                    2 => (0.0, 1.0, f),
                    _ => (0.0, 1.0 - f, 1.0),
                };
                [byte(r * 255.0), byte(g * 255.0), byte(b * 255.0)]
            }
            Colormap::Viridis => {
                let x = t * (VIRIDIS.len() - 1) as f64;
                let k = (x.floor() as usize).min(VIRIDIS.len() - 2);
                let f = x - k as f64;
                let (a, b) = (VIRIDIS[k], VIRIDIS[k + 1]);
                [0, 1, 2].map(|c| byte(a[c] + (b[c] - a[c]) * f))
            }
            Colormap::Gray => {
                let v = byte(230.0 * (1.0 - t));
                [v, v, v]
            }
        }
    }
}

/// 2D histogram of two invariant columns over the residues of a corpus.
#[derive(Debug, Clone, PartialEq)]
pub struct Heatmap {
    pub x: Column,
    pub y: Column,
    pub nx: usize,
    pub ny: usize,
    pub x_range: (f64, f64),
    pub y_range: (f64, f64),
    /// Row-major, `counts[iy * nx + ix]`.
    counts: Vec<u64>,
    /// Residues whose values fell outside user-set ranges.
    pub outside: u64,
}

impl Heatmap {
    pub fn count(&self, ix: usize, iy: usize) -> u64 {
        self.counts[iy * self.nx + ix]
    }

    pub fn counts(&self) -> &[u64] {
        &self.counts
    }

    /// Number of residues binned.
    pub fn total(&self) -> u64 {
        self.counts.iter().sum()
    }

    pub fn max_count(&self) -> u64 {
        self.counts.iter().copied().max().unwrap_or(0)
    }

    /// Colour intensity in `[0, 1]` of a bin count.
    pub fn intensity(&self, count: u64, scale: Scale) -> f64 {
        let max = self.max_count();
        if max == 0 {
            return 0.0;
        }
        match scale {
            Scale::Log => (1.0 + count as f64).log10() / (1.0 + max as f64).log10(),
            Scale::Linear => count as f64 / max as f64,
        }
    }
}

fn bin(v: f64, (lo, hi): (f64, f64), n: usize) -> Option<usize> {
    if !(v >= lo && v <= hi) {
        return None;
    }
    Some((((v - lo) / (hi - lo) * n as f64) as usize).min(n - 1))
}

fn check_range(column: Column, range: (f64, f64)) -> Result<(f64, f64)> {
    if !(range.1 > range.0) || !range.0.is_finite() || !range.1.is_finite() {
        return Err(Error::DegenerateRange(column.name().to_string()));
    }
    Ok(range)
}

/// Bins every residue where both columns are defined. Trin columns cover
/// all rows; BRI columns skip the first row of each chain. Ranges default
/// to the data extremes.
pub fn build_heatmap(
    invariants: &[ChainInvariants],
    x: Column,
    y: Column,
    (nx, ny): (usize, usize),
    x_range: Option<(f64, f64)>,
    y_range: Option<(f64, f64)>,
) -> Result<Heatmap> {
    if nx == 0 || ny == 0 {
        return Err(Error::InvalidInput("heatmap needs at least one bin per axis".into()));
    }
    let points: Vec<(f64, f64)> = invariants
        .iter()
        .flat_map(|inv| (0..inv.len()).filter_map(move |i| Some((inv.value(x, i)?, inv.value(y, i)?))))
        .collect();
    if points.is_empty() {
        return Err(Error::EmptyData);
    }
    let extent = |f: fn(&(f64, f64)) -> f64| {
        let (lo, hi) = points.iter().map(f).fold((f64::INFINITY, f64::NEG_INFINITY), |(a, b), v| (a.min(v), b.max(v)));
        svg::padded(lo, hi)
    };
    let x_range = match x_range {
        Some(r) => check_range(x, r)?,
        None => extent(|p| p.0),
    };
    let y_range = match y_range {
        Some(r) => check_range(y, r)?,
        None => extent(|p| p.1),
    };
    let mut counts = vec![0u64; nx * ny];
    let mut outside = 0;
    for (vx, vy) in points {
        match (bin(vx, x_range, nx), bin(vy, y_range, ny)) {
            (Some(ix), Some(iy)) => counts[iy * nx + ix] += 1,
            _ => outside += 1,
        }
    }
    Ok(Heatmap { x, y, nx, ny, x_range, y_range, counts, outside })
}

fn hex([r, g, b]: [u8; 3]) -> String {
    format!("#{r:02x}{g:02x}{b:02x}")
}

pub fn render_heatmap_svg(map: &Heatmap, scale: Scale, colormap: Colormap) -> String {
    let mut plot = svg::Plot::new(760.0, 640.0, map.x_range, map.y_range);
    let dx = (map.x_range.1 - map.x_range.0) / map.nx as f64;
    let dy = (map.y_range.1 - map.y_range.0) / map.ny as f64;
    for iy in 0..map.ny {
        for ix in 0..map.nx {
            let c = map.count(ix, iy);
            if c == 0 {
                continue;
            }
            let x0 = map.x_range.0 + ix as f64 * dx;
            let y0 = map.y_range.0 + iy as f64 * dy;
            plot.rect(x0, x0 + dx, y0, y0 + dy, &hex(colormap.color(map.intensity(c, scale))));
        }
    }
    plot.axes(&format!("{} (Å)", map.x), &format!("{} (Å)", map.y));
    let max = map.max_count().to_string();
    let low = hex(colormap.color(0.0));
    let high = hex(colormap.color(1.0));
    let scale_name = match scale {
        Scale::Log => "log10(1+count)",
        Scale::Linear => "count",
    };
    plot.legend(&[("1 residue", low.as_str()), (&format!("{max} residues"), high.as_str()), (scale_name, "#ffffff")]);
    plot.finish(&format!("{} vs {}: {} residues", map.y, map.x, map.total()))
}

/// One pixel per bin, highest y bin at the top; empty bins are white.
pub fn render_heatmap_png(map: &Heatmap, scale: Scale, colormap: Colormap) -> Result<Vec<u8>> {
    let mut data = Vec::with_capacity(map.nx * map.ny * 3);
    for iy in (0..map.ny).rev() {
        for ix in 0..map.nx {
            let c = map.count(ix, iy);
            let rgb = if c == 0 { [255, 255, 255] } else { colormap.color(map.intensity(c, scale)) };
            data.extend_from_slice(&rgb);
        }
    }
    let mut out = Vec::new();
    let to_io = |e: png::EncodingError| Error::Io(std::io::Error::other(e));
    let mut encoder = png::Encoder::new(&mut out, map.nx as u32, map.ny as u32);
    encoder.set_color(png::ColorType::Rgb);
    encoder.set_depth(png::BitDepth::Eight);
    let mut writer = encoder.write_header().map_err(to_io)?;
    writer.write_image_data(&data).map_err(to_io)?;
    writer.finish().map_err(to_io)?;
    Ok(out)
}
