//! Minimal self-contained SVG line plots.

use std::fmt::Write as _;
use std::path::Path;

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Axis {
    Linear,
    Log,
}

#[derive(Clone, Debug, PartialEq)]
pub struct Series {
    pub label: String,
    pub points: Vec<[f64; 2]>,
}

#[derive(Clone, Debug, PartialEq)]
pub struct LinePlot {
    pub title: String,
    pub x_label: String,
    pub y_label: String,
    pub x_axis: Axis,
    pub y_axis: Axis,
    pub series: Vec<Series>,
}

const PALETTE: [&str; 8] = ["#1f77b4", "#d62728", "#2ca02c", "#9467bd", "#ff7f0e", "#17becf", "#8c564b", "#7f7f7f"];
const W: f64 = 640.0;
const H: f64 = 420.0;
const LEFT: f64 = 80.0;
const RIGHT: f64 = 150.0;
const TOP: f64 = 40.0;
const BOTTOM: f64 = 60.0;

fn escape(s: &str) -> String {
    s.replace('&', "&amp;").replace('<', "&lt;").replace('>', "&gt;")
}

impl LinePlot {
    pub fn new(title: &str, x_label: &str, y_label: &str, x_axis: Axis, y_axis: Axis) -> Self {
        Self {
            title: title.into(),
            x_label: x_label.into(),
            y_label: y_label.into(),
            x_axis,
            y_axis,
            series: Vec::new(),
        }
    }

    pub fn add(&mut self, label: impl Into<String>, points: Vec<[f64; 2]>) -> &mut Self {
        self.series.push(Series { label: label.into(), points });
        self
    }

    fn map(axis: Axis, v: f64) -> Option<f64> {
        match axis {
            Axis::Linear => v.is_finite().then_some(v),
            Axis::Log => (v > 0.0 && v.is_finite()).then(|| v.log10()),
        }
    }

    fn range(&self, pick: impl Fn(&[f64; 2]) -> f64, axis: Axis) -> (f64, f64) {
        let vals: Vec<f64> =
            self.series.iter().flat_map(|s| s.points.iter()).filter_map(|p| Self::map(axis, pick(p))).collect();
        let lo = vals.iter().copied().fold(f64::INFINITY, f64::min);
        let hi = vals.iter().copied().fold(f64::NEG_INFINITY, f64::max);
        if !lo.is_finite() {
            return (0.0, 1.0);
        }
        if hi - lo < 1e-300 {
            let pad = if lo == 0.0 { 1.0 } else { 0.05 * lo.abs() };
            return (lo - pad, hi + pad);
        }
        let pad = 0.04 * (hi - lo);
        (lo - pad, hi + pad)
    }

    fn tick_label(axis: Axis, v: f64) -> String {
        match axis {
            Axis::Linear => format!("{v:.3e}"),
            Axis::Log => format!("1e{v:.1}"),
        }
    }

    pub fn render(&self) -> String {
        let (x0, x1) = self.range(|p| p[0], self.x_axis);
        let (y0, y1) = self.range(|p| p[1], self.y_axis);
        let pw = W - LEFT - RIGHT;
        let ph = H - TOP - BOTTOM;
        let sx = |x: f64| LEFT + (x - x0) / (x1 - x0) * pw;
        let sy = |y: f64| TOP + ph - (y - y0) / (y1 - y0) * ph;

        let mut out = String::new();
        let _ = writeln!(
            out,
            r#"<svg xmlns="http://www.w3.org/2000/svg" width="{W}" height="{H}" viewBox="0 0 {W} {H}" font-family="sans-serif" font-size="12">"#
        );
        let _ = writeln!(out, r#"<rect width="{W}" height="{H}" fill="white"/>"#);
        let _ = writeln!(out, r#"<text x="{}" y="22" text-anchor="middle" font-size="14">{}</text>"#, W / 2.0, escape(&self.title));
        let _ = writeln!(
            out,
            r##"<rect x="{LEFT}" y="{TOP}" width="{pw}" height="{ph}" fill="none" stroke="#333"/>"##
        );
        for k in 0..=4 {
            let f = k as f64 / 4.0;
            let xv = x0 + f * (x1 - x0);
            let yv = y0 + f * (y1 - y0);
            let (px, py) = (sx(xv), sy(yv));
            let _ = writeln!(out, r##"<line x1="{px:.2}" y1="{TOP}" x2="{px:.2}" y2="{:.2}" stroke="#ddd"/>"##, TOP + ph);
            let _ = writeln!(out, r##"<line x1="{LEFT}" y1="{py:.2}" x2="{:.2}" y2="{py:.2}" stroke="#ddd"/>"##, LEFT + pw);
            let _ = writeln!(
                out,
                r#"<text x="{px:.2}" y="{:.2}" text-anchor="middle">{}</text>"#,
                TOP + ph + 16.0,
                Self::tick_label(self.x_axis, xv)
            );
            let _ = writeln!(
                out,
                r#"<text x="{:.2}" y="{:.2}" text-anchor="end">{}</text>"#,
                LEFT - 6.0,
                py + 4.0,
                Self::tick_label(self.y_axis, yv)
            );
        }
        let _ = writeln!(
            out,
            r#"<text x="{:.2}" y="{:.2}" text-anchor="middle">{}</text>"#,
            LEFT + pw / 2.0,
            H - 14.0,
            escape(&self.x_label)
        );
        let _ = writeln!(
            out,
            r#"<text x="18" y="{:.2}" text-anchor="middle" transform="rotate(-90 18 {:.2})">{}</text>"#,
            TOP + ph / 2.0,
            TOP + ph / 2.0,
            escape(&self.y_label)
        );
        for (i, s) in self.series.iter().enumerate() {
            let colour = PALETTE[i % PALETTE.len()];
            let pts: Vec<String> = s
                .points
                .iter()
                .filter_map(|p| Some((Self::map(self.x_axis, p[0])?, Self::map(self.y_axis, p[1])?)))
                .map(|(x, y)| format!("{:.2},{:.2}", sx(x), sy(y)))
                .collect();
            if !pts.is_empty() {
                let _ = writeln!(
                    out,
                    r#"<polyline fill="none" stroke="{colour}" stroke-width="1.5" points="{}"/>"#,
                    pts.join(" ")
                );
                for p in &pts {
                    let (x, y) = p.split_once(',').unwrap();
                    let _ = writeln!(out, r#"<circle cx="{x}" cy="{y}" r="2.5" fill="{colour}"/>"#);
                }
            }
            let ly = TOP + 14.0 + 18.0 * i as f64;
            let lx = LEFT + pw + 12.0;
            let _ = writeln!(
                out,
                r#"<line x1="{lx}" y1="{ly}" x2="{}" y2="{ly}" stroke="{colour}" stroke-width="2"/>"#,
                lx + 18.0
            );
            let _ = writeln!(out, r#"<text x="{}" y="{}">{}</text>"#, lx + 24.0, ly + 4.0, escape(&s.label));
        }
        out.push_str("</svg>\n");
        out
    }

    pub fn write(&self, path: &Path) -> std::io::Result<()> {
        std::fs::write(path, self.render())
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn renders_well_formed_markup() {
        let mut p = LinePlot::new("a < b", "N", "increment", Axis::Log, Axis::Log);
        p.add("seed 0", vec![[4.0, 1e-9], [8.0, 4e-10], [16.0, 0.0]]);
        let svg = p.render();
        assert!(svg.starts_with("<svg") && svg.trim_end().ends_with("</svg>"));
        assert!(svg.contains("a &lt; b"));
        // the zero is dropped on a log axis
        assert_eq!(svg.matches("<circle").count(), 2);
        assert_eq!(svg, p.render());
    }

    #[test]
    fn empty_plot_is_valid() {
        let p = LinePlot::new("empty", "x", "y", Axis::Linear, Axis::Linear);
        assert!(p.render().contains("</svg>"));
    }
}
