//! Minimal hand-written SVG 1.1 plots: histograms and a log-scale scaling panel.

use std::fmt::Write;

use entconc::concentration::{Histogram, LinearFit};

const WIDTH: f64 = 640.0;
const HEIGHT: f64 = 420.0;
const LEFT: f64 = 70.0;
const RIGHT: f64 = 20.0;
const TOP: f64 = 40.0;
const BOTTOM: f64 = 55.0;
const PALETTE: [&str; 6] = [
    "#1f77b4", "#d62728", "#2ca02c", "#9467bd", "#ff7f0e", "#8c564b",
];

struct Frame {
    x_min: f64,
    x_max: f64,
    y_min: f64,
    y_max: f64,
}

impl Frame {
    fn px(&self, x: f64) -> f64 {
        LEFT + (x - self.x_min) / (self.x_max - self.x_min) * (WIDTH - LEFT - RIGHT)
    }

    fn py(&self, y: f64) -> f64 {
        HEIGHT - BOTTOM - (y - self.y_min) / (self.y_max - self.y_min) * (HEIGHT - TOP - BOTTOM)
    }
}

fn escape(text: &str) -> String {
    text.replace('&', "&amp;")
        .replace('<', "&lt;")
        .replace('>', "&gt;")
}

fn open(out: &mut String, title: &str, x_label: &str, y_label: &str) {
    let _ = writeln!(
        out,
        r#"<?xml version="1.0" encoding="UTF-8"?>
<svg xmlns="http://www.w3.org/2000/svg" version="1.1" width="{WIDTH}" height="{HEIGHT}" viewBox="0 0 {WIDTH} {HEIGHT}" font-family="sans-serif" font-size="12">
<rect width="100%" height="100%" fill="white"/>
<text x="{:.1}" y="22" text-anchor="middle" font-size="15">{}</text>
<text x="{:.1}" y="{:.1}" text-anchor="middle">{}</text>
<text transform="translate(18 {:.1}) rotate(-90)" text-anchor="middle">{}</text>"#,
        WIDTH / 2.0,
        escape(title),
        LEFT + (WIDTH - LEFT - RIGHT) / 2.0,
        HEIGHT - 12.0,
        escape(x_label),
        TOP + (HEIGHT - TOP - BOTTOM) / 2.0,
        escape(y_label),
    );
}

fn axes(out: &mut String, f: &Frame) {
    let (x0, x1, y0, y1) = (f.px(f.x_min), f.px(f.x_max), f.py(f.y_min), f.py(f.y_max));
    let _ = writeln!(
        out,
        r#"<path d="M{x0:.1} {y1:.1} L{x0:.1} {y0:.1} L{x1:.1} {y0:.1}" fill="none" stroke="black"/>"#
    );
}

fn x_tick(out: &mut String, f: &Frame, x: f64, label: &str) {
    let (px, py) = (f.px(x), f.py(f.y_min));
    let _ = writeln!(
        out,
        r#"<line x1="{px:.1}" y1="{py:.1}" x2="{px:.1}" y2="{:.1}" stroke="black"/><text x="{px:.1}" y="{:.1}" text-anchor="middle">{label}</text>"#,
        py + 5.0,
        py + 19.0
    );
}

fn y_tick(out: &mut String, f: &Frame, y: f64, label: &str) {
    let (px, py) = (f.px(f.x_min), f.py(y));
    let _ = writeln!(
        out,
        r#"<line x1="{:.1}" y1="{py:.1}" x2="{px:.1}" y2="{py:.1}" stroke="black"/><text x="{:.1}" y="{:.1}" text-anchor="end">{label}</text>"#,
        px - 5.0,
        px - 8.0,
        py + 4.0
    );
}

/// Bar chart of fixed-width bin counts.
pub fn histogram(title: &str, x_label: &str, hist: &Histogram) -> String {
    let lo = hist.edges[0];
    let hi = *hist.edges.last().expect("at least two edges");
    let peak = hist.counts.iter().copied().max().unwrap_or(0).max(1) as f64;
    let f = Frame {
        x_min: lo,
        x_max: hi,
        y_min: 0.0,
        y_max: peak * 1.05,
    };
    let mut out = String::new();
    open(&mut out, title, x_label, "count");
    for (k, &count) in hist.counts.iter().enumerate() {
        if count == 0 {
            continue;
        }
        let (x0, x1) = (f.px(hist.edges[k]), f.px(hist.edges[k + 1]));
        let (y0, y1) = (f.py(0.0), f.py(count as f64));
        let _ = writeln!(
            out,
            r##"<rect x="{x0:.2}" y="{y1:.2}" width="{:.2}" height="{:.2}" fill="#4c72b0" stroke="white" stroke-width="0.5"/>"##,
            x1 - x0,
            y0 - y1
        );
    }
    axes(&mut out, &f);
    for i in 0..=5 {
        let x = lo + (hi - lo) * i as f64 / 5.0;
        x_tick(&mut out, &f, x, &format!("{x:.3}"));
    }
    for i in 0..=4 {
        let y = peak * i as f64 / 4.0;
        y_tick(&mut out, &f, y, &format!("{}", y.round()));
    }
    out.push_str("</svg>\n");
    out
}

/// One series of the scaling panel: standard deviations by register size.
pub struct Series {
    pub label: String,
    pub points: Vec<(f64, f64)>,
    pub fit: Option<LinearFit>,
}

/// Standard deviation against N on a log axis, with fitted lines `exp(a + bN)`.
pub fn log_scaling(title: &str, series: &[Series]) -> String {
    let positive = || {
        series
            .iter()
            .flat_map(|s| s.points.iter())
            .filter(|(_, y)| *y > 0.0)
    };
    let (mut x_min, mut x_max) = (f64::INFINITY, f64::NEG_INFINITY);
    let (mut y_min, mut y_max) = (f64::INFINITY, f64::NEG_INFINITY);
    for &(x, y) in positive() {
        x_min = x_min.min(x);
        x_max = x_max.max(x);
        y_min = y_min.min(y.log10());
        y_max = y_max.max(y.log10());
    }
    if !x_min.is_finite() {
        (x_min, x_max, y_min, y_max) = (0.0, 1.0, -1.0, 0.0);
    }
    if x_max == x_min {
        x_max = x_min + 1.0;
    }
    let f = Frame {
        x_min: x_min - 0.3,
        x_max: x_max + 0.3,
        y_min: y_min.floor(),
        y_max: if y_max.ceil() > y_min.floor() {
            y_max.ceil()
        } else {
            y_min.floor() + 1.0
        },
    };
    let mut out = String::new();
    open(
        &mut out,
        title,
        "N (qubits)",
        "standard deviation (log scale)",
    );
    axes(&mut out, &f);
    for n in (x_min as i64)..=(x_max as i64) {
        x_tick(&mut out, &f, n as f64, &n.to_string());
    }
    for e in (f.y_min as i64)..=(f.y_max as i64) {
        y_tick(&mut out, &f, e as f64, &format!("1e{e}"));
    }
    for (k, s) in series.iter().enumerate() {
        let color = PALETTE[k % PALETTE.len()];
        if let Some(fit) = s.fit {
            let (xa, xb) = (x_min, x_max);
            let (ya, yb) = (
                (fit.intercept + fit.slope * xa) / std::f64::consts::LN_10,
                (fit.intercept + fit.slope * xb) / std::f64::consts::LN_10,
            );
            let _ = writeln!(
                out,
                r#"<line x1="{:.2}" y1="{:.2}" x2="{:.2}" y2="{:.2}" stroke="{color}" stroke-dasharray="5 3"/>"#,
                f.px(xa),
                f.py(ya),
                f.px(xb),
                f.py(yb)
            );
        }
        for &(x, y) in s.points.iter().filter(|(_, y)| *y > 0.0) {
            let _ = writeln!(
                out,
                r#"<circle cx="{:.2}" cy="{:.2}" r="4" fill="{color}"/>"#,
                f.px(x),
                f.py(y.log10())
            );
        }
        let ly = TOP + 12.0 + 18.0 * k as f64;
        let lx = WIDTH - RIGHT - 150.0;
        let _ = writeln!(
            out,
            r#"<circle cx="{lx:.1}" cy="{:.1}" r="4" fill="{color}"/><text x="{:.1}" y="{ly:.1}">{}</text>"#,
            ly - 4.0,
            lx + 10.0,
            escape(&s.label)
        );
    }
    out.push_str("</svg>\n");
    out
}
