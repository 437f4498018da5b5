//! Minimal SVG plots: data points, fitted broken lines and the average line,
//! plus a log-x summary of a regularization path.

use std::fmt::Write;

use arclen_core::{BrokenLine, PenaltyKind, PointSet};

pub const AVERAGE_COLOR: &str = "blue";
const POINT_COLOR: &str = "black";

const WIDTH: f64 = 640.0;
const HEIGHT: f64 = 420.0;
const MARGIN: f64 = 50.0;

pub fn color(kind: PenaltyKind) -> &'static str {
    match kind {
        PenaltyKind::ArcLength => "orange",
        PenaltyKind::RidgeSlopes => "green",
        PenaltyKind::LassoSlopes => "red",
    }
}

fn label(kind: PenaltyKind) -> &'static str {
    match kind {
        PenaltyKind::ArcLength => "arc length",
        PenaltyKind::RidgeSlopes => "ridge on slopes",
        PenaltyKind::LassoSlopes => "lasso on slopes",
    }
}

pub fn escape(text: &str) -> String {
    let mut out = String::with_capacity(text.len());
    for c in text.chars() {
        match c {
            '&' => out.push_str("&amp;"),
            '<' => out.push_str("&lt;"),
            '>' => out.push_str("&gt;"),
            '"' => out.push_str("&quot;"),
            '\'' => out.push_str("&apos;"),
            c => out.push(c),
        }
    }
    out
}

/// Affine map from data coordinates to the plot area.
struct Frame {
    x0: f64,
    x1: f64,
    y0: f64,
    y1: f64,
}

impl Frame {
    fn new(x0: f64, x1: f64, y0: f64, y1: f64) -> Self {
        let pad = |lo: f64, hi: f64| {
            if hi > lo {
                let p = 0.05 * (hi - lo);
                (lo - p, hi + p)
            } else {
                (lo - 1.0, hi + 1.0)
            }
        };
        let (x0, x1) = pad(x0, x1);
        let (y0, y1) = pad(y0, y1);
        Frame { x0, x1, y0, y1 }
    }

    fn px(&self, x: f64) -> f64 {
        MARGIN + (x - self.x0) / (self.x1 - self.x0) * (WIDTH - 2.0 * MARGIN)
    }

    fn py(&self, y: f64) -> f64 {
        HEIGHT - MARGIN - (y - self.y0) / (self.y1 - self.y0) * (HEIGHT - 2.0 * MARGIN)
    }
}

fn header(out: &mut String, title: &str) {
    let _ = writeln!(
        out,
        r#"<?xml version="1.0" encoding="UTF-8"?>
<svg xmlns="http://www.w3.org/2000/svg" width="{WIDTH}" height="{HEIGHT}" viewBox="0 0 {WIDTH} {HEIGHT}">
<rect x="0" y="0" width="{WIDTH}" height="{HEIGHT}" fill="white"/>
<text x="{}" y="24" font-family="sans-serif" font-size="14" text-anchor="middle">{}</text>"#,
        WIDTH / 2.0,
        escape(title)
    );
}

fn axes(out: &mut String, f: &Frame, x_label: &str, y_label: &str) {
    let (l, r, t, b) = (MARGIN, WIDTH - MARGIN, MARGIN, HEIGHT - MARGIN);
    let _ = writeln!(
        out,
        r##"<rect x="{l}" y="{t}" width="{}" height="{}" fill="none" stroke="#888"/>
<text x="{l}" y="{}" font-family="sans-serif" font-size="11">{}</text>
<text x="{r}" y="{}" font-family="sans-serif" font-size="11" text-anchor="end">{}</text>
<text x="{}" y="{b}" font-family="sans-serif" font-size="11" text-anchor="end">{}</text>
<text x="{}" y="{}" font-family="sans-serif" font-size="11" text-anchor="end">{}</text>
<text x="{}" y="{}" font-family="sans-serif" font-size="12" text-anchor="middle">{}</text>
<text x="14" y="{}" font-family="sans-serif" font-size="12" transform="rotate(-90 14 {})" text-anchor="middle">{}</text>"##,
        r - l,
        b - t,
        b + 14.0,
        short(f.x0),
        b + 14.0,
        short(f.x1),
        l - 4.0,
        short(f.y0),
        l - 4.0,
        t + 10.0,
        short(f.y1),
        WIDTH / 2.0,
        HEIGHT - 12.0,
        escape(x_label),
        HEIGHT / 2.0,
        HEIGHT / 2.0,
        escape(y_label),
    );
}

fn short(v: f64) -> String {
    format!("{v:.4}")
}

fn legend(out: &mut String, entries: &[(&str, String)]) {
    let x = WIDTH - MARGIN - 170.0;
    for (i, (stroke, text)) in entries.iter().enumerate() {
        let y = MARGIN + 16.0 + 16.0 * i as f64;
        let _ = writeln!(
            out,
            r#"<line x1="{x}" y1="{y}" x2="{}" y2="{y}" stroke="{stroke}" stroke-width="2"/>
<text x="{}" y="{}" font-family="sans-serif" font-size="11">{}</text>"#,
            x + 20.0,
            x + 26.0,
            y + 4.0,
            escape(text)
        );
    }
}

fn polyline(out: &mut String, f: &Frame, xs: &[f64], ys: &[f64], stroke: &str) {
    let mut pts = String::new();
    for (x, y) in xs.iter().zip(ys) {
        let _ = write!(pts, "{:.3},{:.3} ", f.px(*x), f.py(*y));
    }
    let _ = writeln!(
        out,
        r#"<polyline points="{}" fill="none" stroke="{stroke}" stroke-width="2"/>"#,
        pts.trim_end()
    );
}

/// Data points, one polyline per fit and the average line. Each fit is
/// labelled with its penalty and coefficient.
pub fn fit_plot(title: &str, data: &PointSet, fits: &[(PenaltyKind, f64, &BrokenLine)]) -> String {
    let mut y0 = data.y_min();
    let mut y1 = data.y_max();
    for (_, _, line) in fits {
        for &a in line.ordinates() {
            y0 = y0.min(a);
            y1 = y1.max(a);
        }
    }
    let xs = data.xs();
    let f = Frame::new(xs[0], xs[xs.len() - 1], y0, y1);
    let mean = data.y_mean();

    let mut out = String::new();
    header(&mut out, title);
    axes(&mut out, &f, "x", "y");
    let _ = writeln!(
        out,
        r#"<line x1="{:.3}" y1="{:.3}" x2="{:.3}" y2="{:.3}" stroke="{AVERAGE_COLOR}" stroke-width="1.5" stroke-dasharray="6 3"/>"#,
        f.px(f.x0),
        f.py(mean),
        f.px(f.x1),
        f.py(mean)
    );
    for (kind, _, line) in fits {
        polyline(&mut out, &f, xs, line.ordinates(), color(*kind));
    }
    for (x, y) in data.pairs() {
        let _ = writeln!(
            out,
            r#"<circle cx="{:.3}" cy="{:.3}" r="3" fill="{POINT_COLOR}"/>"#,
            f.px(x),
            f.py(y)
        );
    }
    let mut items: Vec<(&str, String)> = fits
        .iter()
        .map(|(kind, alpha, _)| (color(*kind), format!("{} (alpha = {alpha})", label(*kind))))
        .collect();
    items.push((AVERAGE_COLOR, "average line".to_string()));
    legend(&mut out, &items);
    out.push_str("</svg>\n");
    out
}

/// Distance to the average line against `log10(alpha)`, one polyline per
/// penalty. Non-positive coefficients cannot be placed on the axis and are
/// left out.
pub fn path_summary_plot(title: &str, series: &[(PenaltyKind, Vec<f64>, Vec<f64>)]) -> String {
    let points: Vec<(PenaltyKind, Vec<(f64, f64)>)> = series
        .iter()
        .map(|(kind, alphas, dist)| {
            let p = alphas
                .iter()
                .zip(dist)
                .filter(|(a, _)| **a > 0.0)
                .map(|(a, d)| (a.log10(), *d))
                .collect();
            (*kind, p)
        })
        .collect();
    let all = points.iter().flat_map(|(_, p)| p.iter());
    let (mut x0, mut x1, mut y0, mut y1) = (f64::INFINITY, f64::NEG_INFINITY, 0.0f64, 0.0f64);
    for &(x, y) in all {
        x0 = x0.min(x);
        x1 = x1.max(x);
        y0 = y0.min(y);
        y1 = y1.max(y);
    }
    if !x0.is_finite() {
        (x0, x1) = (0.0, 1.0);
    }
    let f = Frame::new(x0, x1, y0, y1);

    let mut out = String::new();
    header(&mut out, title);
    axes(&mut out, &f, "log10(alpha)", "distance to average line");
    for (kind, p) in &points {
        let (xs, ys): (Vec<f64>, Vec<f64>) = p.iter().copied().unzip();
        polyline(&mut out, &f, &xs, &ys, color(*kind));
        for (x, y) in p {
            let _ = writeln!(
                out,
                r#"<circle cx="{:.3}" cy="{:.3}" r="3" fill="{}"/>"#,
                f.px(*x),
                f.py(*y),
                color(*kind)
            );
        }
    }
    let items: Vec<(&str, String)> = points
        .iter()
        .map(|(kind, _)| (color(*kind), label(*kind).to_string()))
        .collect();
    legend(&mut out, &items);
    out.push_str("</svg>\n");
    out
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn escapes_markup() {
        assert_eq!(escape("a<b & \"c\""), "a&lt;b &amp; &quot;c&quot;");
    }

    #[test]
    fn counts_elements() {
        let d = PointSet::from_pairs([(0.0, 0.0), (1.0, 2.0), (2.0, 1.0)]).unwrap();
        let l = BrokenLine::constant(3, 1.0);
        let svg = fit_plot(
            "t",
            &d,
            &[
                (PenaltyKind::ArcLength, 1.0, &l),
                (PenaltyKind::LassoSlopes, 1.0, &l),
            ],
        );
        assert_eq!(svg.matches("<polyline").count(), 2);
        assert_eq!(svg.matches("<circle").count(), 3);
        assert!(svg.contains("stroke=\"orange\"") && svg.contains("stroke=\"red\""));
        assert!(svg.contains("stroke=\"blue\""));
    }

    #[test]
    fn constant_data_still_plots() {
        let d = PointSet::from_pairs([(0.0, 1.0), (1.0, 1.0)]).unwrap();
        let svg = fit_plot("flat", &d, &[]);
        assert!(!svg.contains("NaN") && !svg.contains("inf"));
    }
}
