//! Minimal SVG 1.1 scatter plots.

use std::fmt::Write;

const PALETTE: [&str; 10] =
    ["#1f77b4", "#d62728", "#2ca02c", "#ff7f0e", "#9467bd", "#8c564b", "#e377c2", "#17becf", "#bcbd22", "#7f7f7f"];
const UNCLASSIFIED: &str = "#c8c8c8";

pub struct Dot {
    pub x: f64,
    pub y: f64,
    pub class: Option<usize>,
}

pub struct Polyline {
    pub points: Vec<(f64, f64)>,
    /// Text placed at each segment midpoint.
    pub labels: Vec<String>,
}

pub struct Circle {
    pub x: f64,
    pub y: f64,
    pub r: f64,
}

#[derive(Default)]
pub struct Plot {
    pub dots: Vec<Dot>,
    pub lines: Vec<Polyline>,
    pub circles: Vec<Circle>,
    pub title: String,
}

fn class_color(c: Option<usize>) -> &'static str {
    c.map_or(UNCLASSIFIED, |i| PALETTE[i % PALETTE.len()])
}

impl Plot {
    pub fn render(&self, size: f64) -> String {
        let mut xs: Vec<f64> = self.dots.iter().map(|d| d.x).collect();
        let mut ys: Vec<f64> = self.dots.iter().map(|d| d.y).collect();
        for c in &self.circles {
            xs.extend([c.x - c.r, c.x + c.r]);
            ys.extend([c.y - c.r, c.y + c.r]);
        }
        let (x0, x1) = bounds(&xs);
        let (y0, y1) = bounds(&ys);
        let span = (x1 - x0).max(y1 - y0).max(1e-9);
        let pad = 0.05 * span;
        let scale = size / (span + 2.0 * pad);
        let px = |x: f64| (x - x0 + pad) * scale;
        // SVG y grows downwards.
        let py = |y: f64| (y1 - y + pad) * scale;
        let w = (x1 - x0 + 2.0 * pad) * scale;
        let h = (y1 - y0 + 2.0 * pad) * scale;
        let dot_r = (0.006 * size).max(1.5);

        let mut out = String::new();
        writeln!(out, r#"<?xml version="1.0" encoding="UTF-8"?>"#).unwrap();
        writeln!(
            out,
            r#"<svg xmlns="http://www.w3.org/2000/svg" version="1.1" width="{w:.2}" height="{h:.2}" viewBox="0 0 {w:.2} {h:.2}">"#
        )
        .unwrap();
        writeln!(out, "<title>{}</title>", escape(&self.title)).unwrap();
        writeln!(out, r#"<rect width="100%" height="100%" fill="white"/>"#).unwrap();
        for c in &self.circles {
            writeln!(
                out,
                r##"<circle cx="{:.3}" cy="{:.3}" r="{:.3}" fill="none" stroke="#444" stroke-dasharray="4 3"/>"##,
                px(c.x),
                py(c.y),
                c.r * scale
            )
            .unwrap();
        }
        for d in &self.dots {
            writeln!(
                out,
                r#"<circle cx="{:.3}" cy="{:.3}" r="{dot_r:.2}" fill="{}"/>"#,
                px(d.x),
                py(d.y),
                class_color(d.class)
            )
            .unwrap();
        }
        for l in &self.lines {
            let pts: Vec<String> = l.points.iter().map(|&(x, y)| format!("{:.3},{:.3}", px(x), py(y))).collect();
            writeln!(out, r##"<polyline points="{}" fill="none" stroke="#000" stroke-width="1.5"/>"##, pts.join(" "))
                .unwrap();
            for (seg, label) in l.points.windows(2).zip(&l.labels) {
                let mx = (seg[0].0 + seg[1].0) / 2.0;
                let my = (seg[0].1 + seg[1].1) / 2.0;
                writeln!(
                    out,
                    r#"<text x="{:.3}" y="{:.3}" font-size="10" font-family="sans-serif">{}</text>"#,
                    px(mx) + 3.0,
                    py(my) - 3.0,
                    escape(label)
                )
                .unwrap();
            }
        }
        out.push_str("</svg>\n");
        out
    }
}

fn bounds(v: &[f64]) -> (f64, f64) {
    if v.is_empty() {
        return (0.0, 1.0);
    }
    let lo = v.iter().copied().fold(f64::INFINITY, f64::min);
    let hi = v.iter().copied().fold(f64::NEG_INFINITY, f64::max);
    (lo, hi)
}

fn escape(s: &str) -> String {
    s.replace('&', "&amp;").replace('<', "&lt;").replace('>', "&gt;")
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn renders_deterministically() {
        let plot = Plot {
            dots: vec![Dot { x: 0.0, y: 0.0, class: Some(0) }, Dot { x: 1.0, y: 1.0, class: None }],
            lines: vec![Polyline { points: vec![(0.0, 0.0), (1.0, 1.0)], labels: vec!["1.41".into()] }],
            circles: vec![Circle { x: 0.0, y: 0.0, r: 1.0 }],
            title: "a < b".into(),
        };
        let a = plot.render(400.0);
        assert_eq!(a, plot.render(400.0));
        assert!(a.contains("<polyline"));
        assert!(a.contains("a &lt; b"));
        assert_eq!(a.matches("<circle").count(), 3);
    }
}
