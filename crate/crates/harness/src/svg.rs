//! Minimal SVG line and area plots.

use std::fmt::Write as _;
use std::path::Path;

use crate::error::{io_err, Result};

const WIDTH: f64 = 760.0;
const HEIGHT: f64 = 500.0;
const LEFT: f64 = 80.0;
const RIGHT: f64 = 20.0;
const TOP: f64 = 40.0;
const BOTTOM: f64 = 55.0;

const PALETTE: [&str; 8] = [
    "#1f77b4", "#d62728", "#2ca02c", "#9467bd", "#ff7f0e", "#8c564b", "#e377c2", "#17becf",
];

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Scale {
    Linear,
    Log,
}

#[derive(Clone, Debug, PartialEq)]
pub struct Series {
    pub name: String,
    pub points: Vec<(f64, f64)>,
    pub dashed: bool,
}

impl Series {
    pub fn new(name: impl Into<String>, points: Vec<(f64, f64)>) -> Self {
        Self {
            name: name.into(),
            points,
            dashed: false,
        }
    }

    pub fn dashed(mut self) -> Self {
        self.dashed = true;
        self
    }
}

/// Filled polygon drawn beneath the line series.
#[derive(Clone, Debug, PartialEq)]
pub struct Area {
    pub name: String,
    pub polygon: Vec<(f64, f64)>,
}

#[derive(Clone, Debug, PartialEq)]
pub struct Plot {
    pub title: String,
    pub x_label: String,
    pub y_label: String,
    pub x_scale: Scale,
    pub y_scale: Scale,
    pub series: Vec<Series>,
}

/// Area plot on linear axes with fixed bounds.
#[derive(Clone, Debug, PartialEq)]
pub struct AreaPlot {
    pub title: String,
    pub x_label: String,
    pub y_label: String,
    pub x_range: (f64, f64),
    pub y_range: (f64, f64),
    pub areas: Vec<Area>,
}

struct Axis {
    scale: Scale,
    lo: f64,
    hi: f64,
    pix_lo: f64,
    pix_hi: f64,
}

impl Axis {
    fn new(scale: Scale, lo: f64, hi: f64, pix_lo: f64, pix_hi: f64) -> Self {
        let (lo, hi) = match scale {
            Scale::Log => (
                lo.log10().floor(),
                hi.log10().ceil().max(lo.log10().floor() + 1.0),
            ),
            Scale::Linear if hi > lo => (lo, hi),
            Scale::Linear => (lo - 0.5, hi + 0.5),
        };
        Self {
            scale,
            lo,
            hi,
            pix_lo,
            pix_hi,
        }
    }

    fn map(&self, v: f64) -> f64 {
        let t = match self.scale {
            Scale::Log => v.log10(),
            Scale::Linear => v,
        };
        self.pix_lo + (t - self.lo) / (self.hi - self.lo) * (self.pix_hi - self.pix_lo)
    }

    fn accepts(&self, v: f64) -> bool {
        v.is_finite() && (self.scale == Scale::Linear || v > 0.0)
    }

    fn ticks(&self) -> Vec<(f64, String)> {
        match self.scale {
            Scale::Log => {
                let (lo, hi) = (self.lo as i32, self.hi as i32);
                let step = ((hi - lo) as f64 / 8.0).ceil().max(1.0) as i32;
                (lo..=hi)
                    .step_by(step as usize)
                    .map(|e| (10f64.powi(e), format!("1e{e}")))
                    .collect()
            }
            Scale::Linear => {
                let raw = (self.hi - self.lo) / 6.0;
                let mag = 10f64.powf(raw.log10().floor());
                let step = [1.0, 2.0, 5.0, 10.0]
                    .iter()
                    .map(|m| m * mag)
                    .find(|s| *s >= raw)
                    .unwrap_or(10.0 * mag);
                let mut v = (self.lo / step).ceil() * step;
                let mut out = Vec::new();
                while v <= self.hi + step * 1e-9 {
                    out.push((v, format!("{}", (v / step).round() * step)));
                    v += step;
                }
                out
            }
        }
    }
}

fn escape(s: &str) -> String {
    s.replace('&', "&amp;")
        .replace('<', "&lt;")
        .replace('>', "&gt;")
        .replace('"', "&quot;")
}

fn header(out: &mut String, title: &str) {
    let _ = writeln!(out, r#"<?xml version="1.0" encoding="UTF-8"?>"#);
    let _ = writeln!(
        out,
        r#"<svg xmlns="http://www.w3.org/2000/svg" width="{WIDTH}" height="{HEIGHT}" viewBox="0 0 {WIDTH} {HEIGHT}" font-family="sans-serif" font-size="12">"#
    );
    let _ = writeln!(
        out,
        r#"<rect width="{WIDTH}" height="{HEIGHT}" fill="white"/>"#
    );
    let _ = writeln!(
        out,
        r#"<text x="{}" y="22" text-anchor="middle" font-size="14">{}</text>"#,
        WIDTH / 2.0,
        escape(title)
    );
}

fn axes(out: &mut String, x: &Axis, y: &Axis, x_label: &str, y_label: &str) {
    let (x0, x1, y0, y1) = (LEFT, WIDTH - RIGHT, HEIGHT - BOTTOM, TOP);
    let _ = writeln!(
        out,
        r#"<rect x="{x0}" y="{y1}" width="{}" height="{}" fill="none" stroke="black"/>"#,
        x1 - x0,
        y0 - y1
    );
    for (v, label) in x.ticks() {
        let px = x.map(v);
        let _ = writeln!(
            out,
            r#"<line x1="{px:.2}" y1="{y0}" x2="{px:.2}" y2="{}" stroke="black"/>"#,
            y0 + 5.0
        );
        let _ = writeln!(
            out,
            r#"<text x="{px:.2}" y="{}" text-anchor="middle">{label}</text>"#,
            y0 + 19.0
        );
    }
    for (v, label) in y.ticks() {
        let py = y.map(v);
        let _ = writeln!(
            out,
            r#"<line x1="{}" y1="{py:.2}" x2="{x0}" y2="{py:.2}" stroke="black"/>"#,
            x0 - 5.0
        );
        let _ = writeln!(
            out,
            r#"<text x="{}" y="{:.2}" text-anchor="end">{label}</text>"#,
            x0 - 8.0,
            py + 4.0
        );
    }
    let _ = writeln!(
        out,
        r#"<text x="{:.2}" y="{}" text-anchor="middle">{}</text>"#,
        (x0 + x1) / 2.0,
        HEIGHT - 12.0,
        escape(x_label)
    );
    let _ = writeln!(
        out,
        r#"<text x="18" y="{:.2}" text-anchor="middle" transform="rotate(-90 18 {:.2})">{}</text>"#,
        (y0 + y1) / 2.0,
        (y0 + y1) / 2.0,
        escape(y_label)
    );
}

fn legend(out: &mut String, entries: &[(String, &str, bool)]) {
    let x = WIDTH - RIGHT - 10.0;
    for (i, (name, color, dashed)) in entries.iter().enumerate() {
        let y = TOP + 16.0 + 16.0 * i as f64;
        let dash = if *dashed {
            r#" stroke-dasharray="6 4""#
        } else {
            ""
        };
        let _ = writeln!(
            out,
            r#"<line x1="{}" y1="{y}" x2="{x}" y2="{y}" stroke="{color}" stroke-width="2"{dash}/>"#,
            x - 24.0
        );
        let _ = writeln!(
            out,
            r#"<text x="{}" y="{}" text-anchor="end">{}</text>"#,
            x - 30.0,
            y + 4.0,
            escape(name)
        );
    }
}

fn points_attr(points: impl Iterator<Item = (f64, f64)>) -> String {
    let mut s = String::new();
    for (px, py) in points {
        if !s.is_empty() {
            s.push(' ');
        }
        let _ = write!(s, "{px:.2},{py:.2}");
    }
    s
}

impl Plot {
    pub fn render(&self) -> String {
        let bounds = |pick: fn(&(f64, f64)) -> f64, scale: Scale| {
            let vals = self
                .series
                .iter()
                .flat_map(|s| s.points.iter().map(pick))
                .filter(|v| v.is_finite() && (scale == Scale::Linear || *v > 0.0));
            vals.fold(None, |acc: Option<(f64, f64)>, v| match acc {
                None => Some((v, v)),
                Some((lo, hi)) => Some((lo.min(v), hi.max(v))),
            })
            .unwrap_or((1.0, 10.0))
        };
        let (xl, xh) = bounds(|p| p.0, self.x_scale);
        let (yl, yh) = bounds(|p| p.1, self.y_scale);
        let x = Axis::new(self.x_scale, xl, xh, LEFT, WIDTH - RIGHT);
        let y = Axis::new(self.y_scale, yl, yh, HEIGHT - BOTTOM, TOP);

        let mut out = String::new();
        header(&mut out, &self.title);
        axes(&mut out, &x, &y, &self.x_label, &self.y_label);
        let mut entries = Vec::new();
        for (i, s) in self.series.iter().enumerate() {
            let color = PALETTE[i % PALETTE.len()];
            let pts = points_attr(
                s.points
                    .iter()
                    .filter(|(a, b)| x.accepts(*a) && y.accepts(*b))
                    .map(|&(a, b)| (x.map(a), y.map(b))),
            );
            let dash = if s.dashed {
                r#" stroke-dasharray="6 4""#
            } else {
                ""
            };
            let _ = writeln!(
                out,
                r#"<polyline fill="none" stroke="{color}" stroke-width="1.5"{dash} points="{pts}"><title>{}</title></polyline>"#,
                escape(&s.name)
            );
            entries.push((s.name.clone(), color, s.dashed));
        }
        legend(&mut out, &entries);
        out.push_str("</svg>\n");
        out
    }

    pub fn write(&self, path: &Path) -> Result<()> {
        std::fs::write(path, self.render()).map_err(io_err(path))
    }
}

impl AreaPlot {
    pub fn render(&self) -> String {
        let x = Axis::new(
            Scale::Linear,
            self.x_range.0,
            self.x_range.1,
            LEFT,
            WIDTH - RIGHT,
        );
        let y = Axis::new(
            Scale::Linear,
            self.y_range.0,
            self.y_range.1,
            HEIGHT - BOTTOM,
            TOP,
        );
        let mut out = String::new();
        header(&mut out, &self.title);
        let mut entries = Vec::new();
        for (i, a) in self.areas.iter().enumerate() {
            let color = PALETTE[i % PALETTE.len()];
            let pts = points_attr(a.polygon.iter().map(|&(u, v)| (x.map(u), y.map(v))));
            let _ = writeln!(
                out,
                r#"<polygon fill="{color}" fill-opacity="0.3" stroke="{color}" stroke-width="1.5" points="{pts}"><title>{}</title></polygon>"#,
                escape(&a.name)
            );
            entries.push((a.name.clone(), color, false));
        }
        axes(&mut out, &x, &y, &self.x_label, &self.y_label);
        legend(&mut out, &entries);
        out.push_str("</svg>\n");
        out
    }

    pub fn write(&self, path: &Path) -> Result<()> {
        std::fs::write(path, self.render()).map_err(io_err(path))
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn one_polyline_per_series_with_legend() {
        let plot = Plot {
            title: "a < b".into(),
            x_label: "k".into(),
            y_label: "gap".into(),
            x_scale: Scale::Log,
            y_scale: Scale::Log,
            series: vec![
                Series::new(
                    "gd",
                    (0..100)
                        .map(|k| (k as f64, 1.0 / (k as f64 + 1.0)))
                        .collect(),
                ),
                Series::new("ref", vec![(1.0, 1.0), (100.0, 0.01)]).dashed(),
            ],
        };
        let svg = plot.render();
        assert!(svg.starts_with("<?xml"));
        assert!(svg.trim_end().ends_with("</svg>"));
        assert_eq!(svg.matches("<polyline").count(), 2);
        assert!(svg.contains(">gd</text>") && svg.contains(">ref</text>"));
        assert!(svg.contains("a &lt; b"));
        assert!(!svg.contains("NaN") && !svg.contains("inf"));
    }

    #[test]
    fn log_axis_skips_non_positive() {
        let axis = Axis::new(Scale::Log, 1e-3, 50.0, 0.0, 100.0);
        assert_eq!((axis.lo, axis.hi), (-3.0, 2.0));
        assert!(!axis.accepts(0.0));
        assert!((axis.map(1e-3) - 0.0).abs() < 1e-12);
        assert!((axis.map(100.0) - 100.0).abs() < 1e-12);
    }

    #[test]
    fn linear_ticks_cover_range() {
        let axis = Axis::new(Scale::Linear, 0.0, 1.0, 0.0, 100.0);
        let ticks = axis.ticks();
        assert_eq!(ticks.first().unwrap().0, 0.0);
        assert!((ticks.last().unwrap().0 - 1.0).abs() < 1e-12);
    }
}
