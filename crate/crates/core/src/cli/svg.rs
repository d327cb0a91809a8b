// Copyright 2026 Qubot Contributors
// SPDX-License-Identifier: Apache-2.0

//! Minimal static SVG charts. Plots mirror the CSV files and are never the
//! data of record.

use std::fmt::Write;

const WIDTH: f64 = 640.0;
const HEIGHT: f64 = 440.0;
const LEFT: f64 = 70.0;
const RIGHT: f64 = 150.0;
const TOP: f64 = 40.0;
const BOTTOM: f64 = 55.0;
const PALETTE: [&str; 6] = ["#1f77b4", "#ff7f0e", "#2ca02c", "#d62728", "#9467bd", "#8c564b"];

/// One named polyline.
#[derive(Debug, Clone, PartialEq)]
pub struct Series {
    pub label: String,
    pub points: Vec<(f64, f64)>,
}

#[derive(Debug, Clone, Copy, PartialEq)]
struct Frame {
    x0: f64,
    x1: f64,
    y0: f64,
    y1: f64,
}

impl Frame {
    fn from_points<'a>(pts: impl Iterator<Item = &'a (f64, f64)>) -> Self {
        let mut f = Frame { x0: f64::INFINITY, x1: f64::NEG_INFINITY, y0: f64::INFINITY, y1: f64::NEG_INFINITY };
        for &(x, y) in pts.filter(|(x, y)| x.is_finite() && y.is_finite()) {
            f.x0 = f.x0.min(x);
            f.x1 = f.x1.max(x);
            f.y0 = f.y0.min(y);
            f.y1 = f.y1.max(y);
        }
        if !f.x0.is_finite() {
            return Frame { x0: 0.0, x1: 1.0, y0: 0.0, y1: 1.0 };
        }
        if f.x1 - f.x0 < 1e-12 {
            f.x1 = f.x0 + 1.0;
        }
        if f.y1 - f.y0 < 1e-12 {
            f.y0 -= 0.5;
            f.y1 += 0.5;
        }
        f
    }

    fn px(&self, x: f64) -> f64 {
        LEFT + (x - self.x0) / (self.x1 - self.x0) * (WIDTH - LEFT - RIGHT)
    }

    fn py(&self, y: f64) -> f64 {
        HEIGHT - BOTTOM - (y - self.y0) / (self.y1 - self.y0) * (HEIGHT - TOP - BOTTOM)
    }
}

fn escape(s: &str) -> String {
    s.replace('&', "&amp;").replace('<', "&lt;").replace('>', "&gt;")
}

fn open(title: &str) -> String {
    let mut s = String::new();
    let _ = writeln!(
        s,
        r#"<svg xmlns="http://www.w3.org/2000/svg" width="{WIDTH}" height="{HEIGHT}" viewBox="0 0 {WIDTH} {HEIGHT}" font-family="sans-serif" font-size="12">"#
    );
    let _ = writeln!(s, r#"<rect width="100%" height="100%" fill="white"/>"#);
    let _ =
        writeln!(s, r#"<text x="{}" y="22" text-anchor="middle" font-size="14">{}</text>"#, WIDTH / 2.0, escape(title));
    s
}

fn axes(s: &mut String, f: &Frame, x_label: &str, y_label: &str) {
    let (xl, xr, yb, yt) = (LEFT, WIDTH - RIGHT, HEIGHT - BOTTOM, TOP);
    let _ =
        writeln!(s, r#"<rect x="{xl}" y="{yt}" width="{}" height="{}" fill="none" stroke="black"/>"#, xr - xl, yb - yt);
    for k in 0..=4 {
        let t = k as f64 / 4.0;
        let xv = f.x0 + t * (f.x1 - f.x0);
        let yv = f.y0 + t * (f.y1 - f.y0);
        let (px, py) = (f.px(xv), f.py(yv));
        let _ = writeln!(s, r#"<line x1="{px:.2}" y1="{yb}" x2="{px:.2}" y2="{:.2}" stroke="black"/>"#, yb + 5.0);
        let _ = writeln!(s, r#"<text x="{px:.2}" y="{:.2}" text-anchor="middle">{}</text>"#, yb + 19.0, tick(xv));
        let _ = writeln!(s, r#"<line x1="{:.2}" y1="{py:.2}" x2="{xl}" y2="{py:.2}" stroke="black"/>"#, xl - 5.0);
        let _ = writeln!(s, r#"<text x="{:.2}" y="{:.2}" text-anchor="end">{}</text>"#, xl - 8.0, py + 4.0, tick(yv));
    }
    let _ = writeln!(
        s,
        r#"<text x="{:.2}" y="{:.2}" text-anchor="middle">{}</text>"#,
        (xl + xr) / 2.0,
        HEIGHT - 12.0,
        escape(x_label)
    );
    let _ = writeln!(
        s,
        r#"<text x="16" y="{0:.2}" text-anchor="middle" transform="rotate(-90 16 {0:.2})">{1}</text>"#,
        (yb + yt) / 2.0,
        escape(y_label)
    );
}

fn tick(v: f64) -> String {
    let v = if v.abs() < 1e-12 { 0.0 } else { v };
    if v != 0.0 && (v.abs() >= 1e4 || v.abs() < 1e-2) {
        format!("{v:.1e}")
    } else {
        format!("{v:.2}")
    }
}

/// Line chart with a legend on the right.
pub fn line_chart(title: &str, x_label: &str, y_label: &str, series: &[Series]) -> String {
    let f = Frame::from_points(series.iter().flat_map(|s| s.points.iter()));
    let mut s = open(title);
    axes(&mut s, &f, x_label, y_label);
    for (k, ser) in series.iter().enumerate() {
        let color = PALETTE[k % PALETTE.len()];
        // Missing values break the polyline.
        for run in ser.points.split(|(x, y)| !x.is_finite() || !y.is_finite()) {
            if run.is_empty() {
                continue;
            }
            let pts: Vec<String> = run.iter().map(|&(x, y)| format!("{:.2},{:.2}", f.px(x), f.py(y))).collect();
            let _ = writeln!(
                s,
                r#"<polyline fill="none" stroke="{color}" stroke-width="1.5" points="{}"/>"#,
                pts.join(" ")
            );
        }
        let ly = TOP + 16.0 + 18.0 * k as f64;
        let lx = WIDTH - RIGHT + 12.0;
        let _ = writeln!(
            s,
            r#"<line x1="{lx}" y1="{ly}" x2="{}" y2="{ly}" stroke="{color}" stroke-width="2"/>"#,
            lx + 20.0
        );
        let _ = writeln!(s, r#"<text x="{}" y="{}">{}</text>"#, lx + 26.0, ly + 4.0, escape(&ser.label));
    }
    s.push_str("</svg>\n");
    s
}

fn colormap(t: f64) -> String {
    const STOPS: [(f64, f64, f64); 5] =
        [(68.0, 1.0, 84.0), (59.0, 82.0, 139.0), (33.0, 145.0, 140.0), (94.0, 201.0, 98.0), (253.0, 231.0, 37.0)];
    let t = t.clamp(0.0, 1.0) * (STOPS.len() - 1) as f64;
    let k = (t.floor() as usize).min(STOPS.len() - 2);
    let u = t - k as f64;
    let (a, b) = (STOPS[k], STOPS[k + 1]);
    let mix = |p: f64, q: f64| (p + (q - p) * u).round() as u8;
    format!("#{:02x}{:02x}{:02x}", mix(a.0, b.0), mix(a.1, b.1), mix(a.2, b.2))
}

/// Heatmap of `values[i][j]` at `(xs[j], ys[i])` on a fixed scale `[lo, hi]`.
/// `None` cells are drawn grey.
pub fn heatmap(
    title: &str,
    x_label: &str,
    y_label: &str,
    xs: &[f64],
    ys: &[f64],
    values: &[Vec<Option<f64>>],
    scale: (f64, f64),
) -> String {
    let edges = |v: &[f64], k: usize, lo: bool| -> f64 {
        if v.len() == 1 {
            return if lo { v[0] - 0.5 } else { v[0] + 0.5 };
        }
        let left = if k == 0 { v[0] - (v[1] - v[0]) / 2.0 } else { (v[k - 1] + v[k]) / 2.0 };
        let right = if k + 1 == v.len() { v[k] + (v[k] - v[k - 1]) / 2.0 } else { (v[k] + v[k + 1]) / 2.0 };
        if lo {
            left
        } else {
            right
        }
    };
    let corners =
        [(edges(xs, 0, true), edges(ys, 0, true)), (edges(xs, xs.len() - 1, false), edges(ys, ys.len() - 1, false))];
    let f = Frame::from_points(corners.iter());
    let mut s = open(title);
    let (lo, hi) = scale;
    for (i, row) in values.iter().enumerate() {
        for (j, cell) in row.iter().enumerate() {
            let (x0, x1) = (f.px(edges(xs, j, true)), f.px(edges(xs, j, false)));
            let (y0, y1) = (f.py(edges(ys, i, false)), f.py(edges(ys, i, true)));
            let fill = match cell {
                Some(v) if v.is_finite() => colormap((v - lo) / (hi - lo).max(1e-300)),
                _ => "#bbbbbb".to_string(),
            };
            let _ = writeln!(
                s,
                r#"<rect x="{x0:.2}" y="{y0:.2}" width="{:.2}" height="{:.2}" fill="{fill}"/>"#,
                x1 - x0,
                y1 - y0
            );
        }
    }
    axes(&mut s, &f, x_label, y_label);
    let (bx, bt, bh) = (WIDTH - RIGHT + 20.0, TOP, HEIGHT - TOP - BOTTOM);
    for k in 0..50 {
        let t = k as f64 / 49.0;
        let y = bt + bh * (1.0 - (k + 1) as f64 / 50.0);
        let _ = writeln!(
            s,
            r#"<rect x="{bx}" y="{y:.2}" width="18" height="{:.2}" fill="{}"/>"#,
            bh / 50.0 + 0.5,
            colormap(t)
        );
    }
    let _ = writeln!(s, r#"<text x="{}" y="{}">{}</text>"#, bx + 24.0, bt + 10.0, tick(hi));
    let _ = writeln!(s, r#"<text x="{}" y="{}">{}</text>"#, bx + 24.0, bt + bh, tick(lo));
    s.push_str("</svg>\n");
    s
}

/// Scatter of points inside the fixed square `[-1, 1]²` with the unit circle.
pub fn bloch_scatter(title: &str, x_label: &str, y_label: &str, points: &[(f64, f64)]) -> String {
    let f = Frame { x0: -1.1, x1: 1.1, y0: -1.1, y1: 1.1 };
    let mut s = open(title);
    axes(&mut s, &f, x_label, y_label);
    let (cx, cy) = (f.px(0.0), f.py(0.0));
    let (rx, ry) = (f.px(1.0) - cx, cy - f.py(1.0));
    let _ =
        writeln!(s, r##"<ellipse cx="{cx:.2}" cy="{cy:.2}" rx="{rx:.2}" ry="{ry:.2}" fill="none" stroke="#888888"/>"##);
    for &(x, y) in points {
        let _ = writeln!(s, r#"<circle cx="{:.2}" cy="{:.2}" r="2.5" fill="{}"/>"#, f.px(x), f.py(y), PALETTE[0]);
    }
    s.push_str("</svg>\n");
    s
}
