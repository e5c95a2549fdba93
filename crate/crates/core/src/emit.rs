//! CSV, JSON and SVG output for pipeline data.
//!
//! All writers are deterministic: the same data always yields the same bytes.
//! SVG plots use an 800x600 canvas with 60px margins and an 8-stop viridis
//! ramp for complexity values.

use std::fmt::Write as _;
use std::fs;
use std::path::Path;

use serde::de::DeserializeOwned;
use serde::Serialize;

use crate::complexity::max_radius;
use crate::error::Result;
use crate::experiments::{HeatmapGrid, HistogramData, HypersphereCloud, ScalingSeries};
use crate::fmt::sig12;

pub const WIDTH: f64 = 800.0;
pub const HEIGHT: f64 = 600.0;
pub const MARGIN: f64 = 60.0;

const VIRIDIS: [(u8, u8, u8); 8] = [
    (0x44, 0x01, 0x54),
    (0x46, 0x32, 0x7e),
    (0x36, 0x5c, 0x8d),
    (0x27, 0x7f, 0x8e),
    (0x1f, 0xa1, 0x87),
    (0x4a, 0xc1, 0x6d),
    (0xa0, 0xda, 0x39),
    (0xfd, 0xe7, 0x25),
];

/// Hex colour for `t` in `[0, 1]` (clamped), linear between stops.
pub fn viridis(t: f64) -> String {
    let t = if t.is_nan() { 0.0 } else { t.clamp(0.0, 1.0) };
    let pos = t * (VIRIDIS.len() - 1) as f64;
    let i = (pos.floor() as usize).min(VIRIDIS.len() - 2);
    let f = pos - i as f64;
    let lerp = |a: u8, b: u8| (a as f64 + (b as f64 - a as f64) * f).round() as u8;
    let (a, b) = (VIRIDIS[i], VIRIDIS[i + 1]);
    format!("#{:02x}{:02x}{:02x}", lerp(a.0, b.0), lerp(a.1, b.1), lerp(a.2, b.2))
}

/// Which plot to draw for a data set.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum PlotKind {
    Histogram,
    Heatmap,
    Scaling,
    Cloud,
}

/// Data that can be written as CSV and drawn as SVG.
pub trait Dataset: Serialize + DeserializeOwned {
    const PLOT: PlotKind;
    fn to_csv(&self) -> String;
    fn to_svg(&self) -> String;
}

pub fn to_json<T: Serialize>(data: &T) -> Result<String> {
    let mut s = serde_json::to_string_pretty(data)?;
    s.push('\n');
    Ok(s)
}

pub fn from_json<T: DeserializeOwned>(text: &str) -> Result<T> {
    Ok(serde_json::from_str(text)?)
}

pub fn emit_csv<T: Dataset>(data: &T, path: &Path) -> Result<()> {
    Ok(fs::write(path, data.to_csv())?)
}

pub fn emit_json<T: Serialize>(data: &T, path: &Path) -> Result<()> {
    Ok(fs::write(path, to_json(data)?)?)
}

pub fn emit_svg<T: Dataset>(data: &T, path: &Path) -> Result<()> {
    Ok(fs::write(path, data.to_svg())?)
}

fn opt12(v: Option<f64>) -> String {
    v.map(sig12).unwrap_or_default()
}

fn escape(s: &str) -> String {
    s.replace('&', "&amp;").replace('<', "&lt;").replace('>', "&gt;").replace('"', "&quot;")
}

struct Svg {
    body: String,
}

impl Svg {
    fn new(title: &str, desc: &str) -> Self {
        let mut body = String::new();
        body.push_str("<?xml version=\"1.0\" encoding=\"UTF-8\"?>\n");
        let _ = writeln!(
            body,
            "<svg xmlns=\"http://www.w3.org/2000/svg\" version=\"1.1\" width=\"{WIDTH}\" height=\"{HEIGHT}\" viewBox=\"0 0 {WIDTH} {HEIGHT}\">"
        );
        let _ = writeln!(body, "<title>{}</title>", escape(title));
        let _ = writeln!(body, "<desc>{}</desc>", escape(desc));
        let _ = writeln!(body, "<rect x=\"0\" y=\"0\" width=\"{WIDTH}\" height=\"{HEIGHT}\" fill=\"#ffffff\"/>");
        let _ = writeln!(
            body,
            "<text x=\"{:.2}\" y=\"{:.2}\" font-family=\"sans-serif\" font-size=\"16\" text-anchor=\"middle\">{}</text>",
            WIDTH / 2.0,
            MARGIN / 2.0,
            escape(title)
        );
        Self { body }
    }

    fn line(&mut self, x1: f64, y1: f64, x2: f64, y2: f64, stroke: &str) {
        let _ = writeln!(
            self.body,
            "<line x1=\"{x1:.2}\" y1=\"{y1:.2}\" x2=\"{x2:.2}\" y2=\"{y2:.2}\" stroke=\"{stroke}\" stroke-width=\"1\"/>"
        );
    }

    fn rect(&mut self, x: f64, y: f64, w: f64, h: f64, fill: &str) {
        let _ = writeln!(
            self.body,
            "<rect x=\"{x:.2}\" y=\"{y:.2}\" width=\"{w:.2}\" height=\"{h:.2}\" fill=\"{fill}\"/>"
        );
    }

    fn text(&mut self, x: f64, y: f64, anchor: &str, s: &str) {
        let _ = writeln!(
            self.body,
            "<text x=\"{x:.2}\" y=\"{y:.2}\" font-family=\"sans-serif\" font-size=\"11\" text-anchor=\"{anchor}\">{}</text>",
            escape(s)
        );
    }

    fn circle(&mut self, cx: f64, cy: f64, r: f64, fill: &str, stroke: &str) {
        let _ = writeln!(
            self.body,
            "<circle cx=\"{cx:.2}\" cy=\"{cy:.2}\" r=\"{r:.2}\" fill=\"{fill}\" stroke=\"{stroke}\"/>"
        );
    }

    /// Frame with labelled axes; `xs` and `ys` are `(position, label)` ticks.
    fn axes(&mut self, x_label: &str, y_label: &str, xs: &[(f64, String)], ys: &[(f64, String)]) {
        let bottom = HEIGHT - MARGIN;
        self.line(MARGIN, bottom, WIDTH - MARGIN, bottom, "#000000");
        self.line(MARGIN, MARGIN, MARGIN, bottom, "#000000");
        for (x, label) in xs {
            self.line(*x, bottom, *x, bottom + 5.0, "#000000");
            self.text(*x, bottom + 18.0, "middle", label);
        }
        for (y, label) in ys {
            self.line(MARGIN - 5.0, *y, MARGIN, *y, "#000000");
            self.text(MARGIN - 8.0, y + 4.0, "end", label);
        }
        self.text(WIDTH / 2.0, HEIGHT - 15.0, "middle", x_label);
        let _ = writeln!(
            self.body,
            "<text x=\"15.00\" y=\"{:.2}\" font-family=\"sans-serif\" font-size=\"11\" text-anchor=\"middle\" transform=\"rotate(-90 15.00 {:.2})\">{}</text>",
            HEIGHT / 2.0,
            HEIGHT / 2.0,
            escape(y_label)
        );
    }

    fn finish(mut self) -> String {
        self.body.push_str("</svg>\n");
        self.body
    }
}

const PLOT_W: f64 = WIDTH - 2.0 * MARGIN;
const PLOT_H: f64 = HEIGHT - 2.0 * MARGIN;

fn x_unit(t: f64) -> f64 {
    MARGIN + t * PLOT_W
}

fn y_unit(t: f64) -> f64 {
    HEIGHT - MARGIN - t * PLOT_H
}

fn unit_ticks(to_pos: fn(f64) -> f64) -> Vec<(f64, String)> {
    (0..=5).map(|i| i as f64 / 5.0).map(|t| (to_pos(t), sig12(t))).collect()
}

impl Dataset for HistogramData {
    const PLOT: PlotKind = PlotKind::Histogram;

    fn to_csv(&self) -> String {
        let mut out = String::from("bin_lo,bin_hi,count\n");
        for (i, count) in self.counts.iter().enumerate() {
            let _ = writeln!(out, "{},{},{}", sig12(self.bin_edges[i]), sig12(self.bin_edges[i + 1]), count);
        }
        out
    }

    fn to_svg(&self) -> String {
        let title = format!(
            "Character complexity distribution ({} circuits, n={}, {} gates)",
            self.family, self.n, self.gate_count
        );
        let mut svg = Svg::new(&title, &self.metadata.scale_note);
        let max = self.counts.iter().copied().max().unwrap_or(0);
        let y_ticks: Vec<(f64, String)> = if max == 0 {
            vec![(y_unit(0.0), "0".into())]
        } else {
            (0..=4)
                .map(|i| (y_unit(i as f64 / 4.0), sig12(max as f64 * i as f64 / 4.0)))
                .collect()
        };
        svg.axes("character complexity", "count", &unit_ticks(x_unit), &y_ticks);
        for (i, &count) in self.counts.iter().enumerate() {
            if count == 0 {
                continue;
            }
            let x0 = x_unit(self.bin_edges[i]);
            let x1 = x_unit(self.bin_edges[i + 1]);
            let h = count as f64 / max as f64 * PLOT_H;
            let mid = 0.5 * (self.bin_edges[i] + self.bin_edges[i + 1]);
            svg.rect(x0, HEIGHT - MARGIN - h, x1 - x0, h, &viridis(mid));
        }
        svg.finish()
    }
}

impl Dataset for HeatmapGrid {
    const PLOT: PlotKind = PlotKind::Heatmap;

    fn to_csv(&self) -> String {
        let mut out = String::from("n,gates,mean_complexity,samples\n");
        for (qi, n) in self.qubit_values.iter().enumerate() {
            for (gi, m) in self.gate_values.iter().enumerate() {
                let cell = self.cells[qi][gi];
                let samples = if cell.is_some() { self.samples_per_cell } else { 0 };
                let _ = writeln!(out, "{n},{m},{},{samples}", opt12(cell));
            }
        }
        out
    }

    fn to_svg(&self) -> String {
        let title = format!("Character complexity by qubits and gates ({} circuits)", self.family);
        let mut svg = Svg::new(&title, &self.metadata.scale_note);
        let rows = self.qubit_values.len().max(1);
        let cols = self.gate_values.len().max(1);
        let cw = PLOT_W / cols as f64;
        let ch = PLOT_H / rows as f64;
        let xs: Vec<(f64, String)> = self
            .gate_values
            .iter()
            .enumerate()
            .map(|(i, m)| (MARGIN + (i as f64 + 0.5) * cw, m.to_string()))
            .collect();
        let ys: Vec<(f64, String)> = self
            .qubit_values
            .iter()
            .enumerate()
            .map(|(i, n)| (HEIGHT - MARGIN - (i as f64 + 0.5) * ch, n.to_string()))
            .collect();
        for (qi, row) in self.cells.iter().enumerate() {
            for (gi, cell) in row.iter().enumerate() {
                let fill = cell.map_or_else(|| "#cccccc".to_string(), viridis);
                svg.rect(MARGIN + gi as f64 * cw, HEIGHT - MARGIN - (qi + 1) as f64 * ch, cw, ch, &fill);
            }
        }
        svg.axes("gates", "qubits", &xs, &ys);
        for i in 0..VIRIDIS.len() {
            let t = i as f64 / (VIRIDIS.len() - 1) as f64;
            svg.rect(WIDTH - MARGIN + 10.0, y_unit(t) - 10.0, 15.0, 10.0, &viridis(t));
        }
        svg.finish()
    }
}

impl Dataset for ScalingSeries {
    const PLOT: PlotKind = PlotKind::Scaling;

    fn to_csv(&self) -> String {
        let mut out = String::from("gates,mean,stderr\n");
        for i in 0..self.gate_counts.len() {
            let _ = writeln!(
                out,
                "{},{},{}",
                self.gate_counts[i],
                sig12(self.mean_complexity[i]),
                sig12(self.stderr[i])
            );
        }
        out
    }

    fn to_svg(&self) -> String {
        let title = format!("Character complexity vs gate count ({} circuits, n={})", self.family, self.n);
        let mut svg = Svg::new(&title, &self.metadata.scale_note);
        let lo = self.gate_counts.first().copied().unwrap_or(0) as f64;
        let hi = self.gate_counts.last().copied().unwrap_or(0) as f64;
        let x_of = |m: f64| {
            if hi > lo {
                x_unit((m - lo) / (hi - lo))
            } else {
                x_unit(0.5)
            }
        };
        let xs: Vec<(f64, String)> = self.gate_counts.iter().map(|&m| (x_of(m as f64), m.to_string())).collect();
        svg.axes("gates", "mean character complexity", &xs, &unit_ticks(y_unit));
        let points: Vec<String> = self
            .gate_counts
            .iter()
            .zip(&self.mean_complexity)
            .map(|(&m, &c)| format!("{:.2},{:.2}", x_of(m as f64), y_unit(c)))
            .collect();
        if !points.is_empty() {
            let _ = writeln!(
                svg.body,
                "<polyline points=\"{}\" fill=\"none\" stroke=\"{}\" stroke-width=\"2\"/>",
                points.join(" "),
                viridis(0.25)
            );
        }
        for i in 0..self.gate_counts.len() {
            let x = x_of(self.gate_counts[i] as f64);
            let (c, e) = (self.mean_complexity[i], self.stderr[i]);
            svg.line(x, y_unit(c - e), x, y_unit(c + e), "#000000");
            svg.line(x - 4.0, y_unit(c - e), x + 4.0, y_unit(c - e), "#000000");
            svg.line(x - 4.0, y_unit(c + e), x + 4.0, y_unit(c + e), "#000000");
            svg.circle(x, y_unit(c), 3.0, &viridis(c), "none");
        }
        svg.finish()
    }
}

impl Dataset for HypersphereCloud {
    const PLOT: PlotKind = PlotKind::Cloud;

    fn to_csv(&self) -> String {
        let mut out = String::from("x,y,z,radius,complexity\n");
        for p in &self.points {
            let _ = writeln!(
                out,
                "{},{},{},{},{}",
                sig12(p.x),
                sig12(p.y),
                sig12(p.z),
                sig12(p.radius),
                sig12(p.complexity)
            );
        }
        out
    }

    fn to_svg(&self) -> String {
        let title = format!("Hypersphere projection (n={})", self.n);
        let desc = format!("{} {}", self.metadata.complexity_source, self.metadata.scale_note);
        let mut svg = Svg::new(&title, desc.trim());
        let (cx, cy) = (WIDTH / 2.0, HEIGHT / 2.0);
        let r_max = max_radius(self.n);
        let scale = (PLOT_H / 2.0) / r_max;
        svg.circle(cx, cy, r_max * scale, "none", "#000000");
        svg.line(cx - r_max * scale, cy, cx + r_max * scale, cy, "#bbbbbb");
        svg.line(cx, cy - r_max * scale, cx, cy + r_max * scale, "#bbbbbb");
        svg.text(cx + r_max * scale, cy + 16.0, "middle", &format!("r={}", sig12(r_max)));
        for p in &self.points {
            svg.circle(cx + p.x * scale, cy - p.y * scale, 2.5, &viridis(p.complexity), "none");
        }
        svg.finish()
    }
}

pub fn write_all<T: Dataset>(data: &T, dir: &Path, stem: &str) -> Result<Vec<std::path::PathBuf>> {
    let paths = [
        dir.join(format!("{stem}.csv")),
        dir.join(format!("{stem}.json")),
        dir.join(format!("{stem}.svg")),
    ];
    emit_csv(data, &paths[0])?;
    emit_json(data, &paths[1])?;
    emit_svg(data, &paths[2])?;
    Ok(paths.to_vec())
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn viridis_endpoints() {
        assert_eq!(viridis(0.0), "#440154");
        assert_eq!(viridis(1.0), "#fde725");
        assert_eq!(viridis(3.0 / 7.0), "#277f8e");
        assert_eq!(viridis(-1.0), "#440154");
    }

    #[test]
    fn escapes_markup() {
        assert_eq!(escape("a<b & \"c\">"), "a&lt;b &amp; &quot;c&quot;&gt;");
    }
}
