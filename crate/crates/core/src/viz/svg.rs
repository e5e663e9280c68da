//! Minimal SVG 1.1 plotting: a framed plot area with ticks, polylines,
//! rectangles and a legend.

use std::fmt::Write as _;

pub(crate) fn escape(text: &str) -> String {
    text.replace('&', "&amp;").replace('<', "&lt;").replace('>', "&gt;").replace('"', "&quot;")
}

/// Widens an empty or inverted range so it can be drawn.
pub(crate) fn padded(lo: f64, hi: f64) -> (f64, f64) {
    if hi > lo {
        (lo, hi)
    } else {
        let pad = if lo == 0.0 { 0.5 } else { lo.abs() * 0.05 };
        (lo - pad, lo + pad)
    }
}

/// Round tick positions inside `[lo, hi]`, stepping by 1, 2 or 5 × 10ᵏ.
pub(crate) fn ticks(lo: f64, hi: f64, target: usize) -> Vec<f64> {
    let span = hi - lo;
    if !(span > 0.0) || !span.is_finite() {
        return vec![lo];
    }
    let raw = span / target.max(1) as f64;
    let mag = 10f64.powf(raw.log10().floor());
    let step = [1.0, 2.0, 5.0, 10.0].into_iter().map(|k| k * mag).find(|s| *s >= raw).unwrap_or(10.0 * mag);
    let first = (lo / step).ceil() as i64;
    let last = (hi / step).floor() as i64;
    (first..=last).map(|k| k as f64 * step).collect()
}

fn tick_label(v: f64) -> String {
    let s = format!("{v:.4}");
    let s = s.trim_end_matches('0').trim_end_matches('.');
    if s == "-0" {
        "0".into()
    } else {
        s.to_string()
    }
}

pub(crate) struct Plot {
    width: f64,
    height: f64,
    left: f64,
    right: f64,
    top: f64,
    bottom: f64,
    x: (f64, f64),
    y: (f64, f64),
    body: String,
}

impl Plot {
    pub fn new(width: f64, height: f64, x: (f64, f64), y: (f64, f64)) -> Self {
        Self {
            width,
            height,
            left: 64.0,
            right: 120.0,
            top: 36.0,
            bottom: 48.0,
            x: padded(x.0, x.1),
            y: padded(y.0, y.1),
            body: String::new(),
        }
    }

    pub fn sx(&self, x: f64) -> f64 {
        self.left + (x - self.x.0) / (self.x.1 - self.x.0) * (self.width - self.left - self.right)
    }

    pub fn sy(&self, y: f64) -> f64 {
        self.height - self.bottom - (y - self.y.0) / (self.y.1 - self.y.0) * (self.height - self.top - self.bottom)
    }

    pub fn polyline(&mut self, points: impl IntoIterator<Item = (f64, f64)>, color: &str, dashed: bool) {
        let mut pts = String::new();
        for (x, y) in points {
            write!(pts, "{:.2},{:.2} ", self.sx(x), self.sy(y)).unwrap();
        }
        let dash = if dashed { " stroke-dasharray=\"6 4\"" } else { "" };
        writeln!(
            self.body,
            "<polyline points=\"{}\" fill=\"none\" stroke=\"{color}\" stroke-width=\"1.5\"{dash}/>",
            pts.trim_end()
        )
        .unwrap();
    }

    pub fn markers(&mut self, points: impl IntoIterator<Item = (f64, f64)>, color: &str) {
        for (x, y) in points {
            writeln!(
                self.body,
                "<circle cx=\"{:.2}\" cy=\"{:.2}\" r=\"2.5\" fill=\"{color}\"/>",
                self.sx(x),
                self.sy(y)
            )
            .unwrap();
        }
    }

    /// Filled rectangle spanning data coordinates `[x0, x1] × [y0, y1]`.
    pub fn rect(&mut self, x0: f64, x1: f64, y0: f64, y1: f64, fill: &str) {
        let (a, b) = (self.sx(x0), self.sx(x1));
        let (c, d) = (self.sy(y1), self.sy(y0));
        writeln!(
            self.body,
            "<rect x=\"{a:.2}\" y=\"{c:.2}\" width=\"{:.2}\" height=\"{:.2}\" fill=\"{fill}\"/>",
            b - a,
            d - c
        )
        .unwrap();
    }

    pub fn axes(&mut self, x_label: &str, y_label: &str) {
        let (x0, x1) = (self.sx(self.x.0), self.sx(self.x.1));
        let (y0, y1) = (self.sy(self.y.0), self.sy(self.y.1));
        writeln!(
            self.body,
            "<rect x=\"{x0:.2}\" y=\"{y1:.2}\" width=\"{:.2}\" height=\"{:.2}\" fill=\"none\" stroke=\"#333\"/>",
            x1 - x0,
            y0 - y1
        )
        .unwrap();
        for t in ticks(self.x.0, self.x.1, 8) {
            let px = self.sx(t);
            writeln!(
                self.body,
                "<line x1=\"{px:.2}\" y1=\"{y0:.2}\" x2=\"{px:.2}\" y2=\"{:.2}\" stroke=\"#333\"/>\
                 <text x=\"{px:.2}\" y=\"{:.2}\" font-size=\"11\" text-anchor=\"middle\">{}</text>",
                y0 + 5.0,
                y0 + 18.0,
                tick_label(t)
            )
            .unwrap();
        }
        for t in ticks(self.y.0, self.y.1, 6) {
            let py = self.sy(t);
            writeln!(
                self.body,
                "<line x1=\"{:.2}\" y1=\"{py:.2}\" x2=\"{x0:.2}\" y2=\"{py:.2}\" stroke=\"#333\"/>\
                 <text x=\"{:.2}\" y=\"{:.2}\" font-size=\"11\" text-anchor=\"end\">{}</text>",
                x0 - 5.0,
                x0 - 8.0,
                py + 4.0,
                tick_label(t)
            )
            .unwrap();
        }
        writeln!(
            self.body,
            "<text x=\"{:.2}\" y=\"{:.2}\" font-size=\"13\" text-anchor=\"middle\">{}</text>\
             <text transform=\"translate(16 {:.2}) rotate(-90)\" font-size=\"13\" text-anchor=\"middle\">{}</text>",
            (x0 + x1) / 2.0,
            self.height - 10.0,
            escape(x_label),
            (y0 + y1) / 2.0,
            escape(y_label)
        )
        .unwrap();
    }

    pub fn legend(&mut self, entries: &[(&str, &str)]) {
        let x = self.width - self.right + 14.0;
        for (k, (label, color)) in entries.iter().enumerate() {
            let y = self.top + 8.0 + 18.0 * k as f64;
            writeln!(
                self.body,
                "<line x1=\"{x:.2}\" y1=\"{y:.2}\" x2=\"{:.2}\" y2=\"{y:.2}\" stroke=\"{color}\" stroke-width=\"3\"/>\
                 <text x=\"{:.2}\" y=\"{:.2}\" font-size=\"12\">{}</text>",
                x + 22.0,
                x + 28.0,
                y + 4.0,
                escape(label)
            )
            .unwrap();
        }
    }

    pub fn finish(self, title: &str) -> String {
        document(
            self.width,
            self.height,
            &format!(
                "<text x=\"{:.2}\" y=\"22\" font-size=\"15\" text-anchor=\"middle\">{}</text>\n{}",
                self.width / 2.0,
                escape(title),
                self.body
            ),
        )
    }
}

pub(crate) fn document(width: f64, height: f64, body: &str) -> String {
    format!(
        "<?xml version=\"1.0\" encoding=\"UTF-8\"?>\n\
         <svg xmlns=\"http://www.w3.org/2000/svg\" version=\"1.1\" width=\"{width}\" height=\"{height}\" \
         viewBox=\"0 0 {width} {height}\" font-family=\"sans-serif\">\n\
         <rect width=\"100%\" height=\"100%\" fill=\"white\"/>\n{body}</svg>\n"
    )
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn tick_steps() {
        assert_eq!(ticks(0.0, 1.0, 5), vec![0.0, 0.2, 0.4, 0.6000000000000001, 0.8, 1.0]);
        assert_eq!(ticks(2.0, 2.0, 5), vec![2.0]);
        assert_eq!(ticks(-3.0, 7.0, 5), vec![-2.0, 0.0, 2.0, 4.0, 6.0]);
    }

    #[test]
    fn escapes_markup() {
        assert_eq!(escape("a<b & \"c\">"), "a&lt;b &amp; &quot;c&quot;&gt;");
        assert_eq!(tick_label(-0.0), "0");
        assert_eq!(tick_label(2.5), "2.5");
    }

    #[test]
    fn padded_ranges() {
        assert_eq!(padded(0.0, 0.0), (-0.5, 0.5));
        assert_eq!(padded(1.0, 2.0), (1.0, 2.0));
    }
}
