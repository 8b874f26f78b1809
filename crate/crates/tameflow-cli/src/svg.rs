//! Minimal hand-rolled polyline plots; no charting dependency, so output is
//! byte-stable across runs.

use std::fmt::Write as _;

const WIDTH: f64 = 640.0;
const HEIGHT: f64 = 400.0;
const MARGIN: f64 = 48.0;
const COLORS: [&str; 6] = ["#1f77b4", "#d62728", "#2ca02c", "#9467bd", "#ff7f0e", "#8c564b"];

/// One polyline per series over a shared x-axis, with a small legend.
pub fn polyline_plot(xs: &[f64], series: &[(&str, Vec<f64>)]) -> String {
    let (xmin, xmax) = bounds(xs);
    let mut ys: Vec<f64> = Vec::new();
    for (_, s) in series {
        ys.extend_from_slice(s);
    }
    let (ymin, ymax) = bounds(&ys);

    let sx = |x: f64| MARGIN + (x - xmin) / span(xmin, xmax) * (WIDTH - 2.0 * MARGIN);
    let sy = |y: f64| HEIGHT - MARGIN - (y - ymin) / span(ymin, ymax) * (HEIGHT - 2.0 * MARGIN);

    let mut out = String::new();
    let _ = writeln!(
        out,
        r#"<svg xmlns="http://www.w3.org/2000/svg" width="{WIDTH}" height="{HEIGHT}" viewBox="0 0 {WIDTH} {HEIGHT}">"#
    );
    let _ = writeln!(out, r#"<rect width="{WIDTH}" height="{HEIGHT}" fill="white"/>"#);
    // axes
    let _ = writeln!(
        out,
        r#"<line x1="{m}" y1="{b}" x2="{r}" y2="{b}" stroke="black"/>"#,
        m = MARGIN,
        b = HEIGHT - MARGIN,
        r = WIDTH - MARGIN
    );
    let _ = writeln!(
        out,
        r#"<line x1="{m}" y1="{t}" x2="{m}" y2="{b}" stroke="black"/>"#,
        m = MARGIN,
        t = MARGIN,
        b = HEIGHT - MARGIN
    );
    let _ = writeln!(
        out,
        r#"<text x="{m}" y="{y}" font-size="11">{xmin:.3} .. {xmax:.3}</text>"#,
        m = MARGIN,
        y = HEIGHT - MARGIN / 3.0
    );
    let _ = writeln!(
        out,
        r#"<text x="4" y="{m}" font-size="11">{ymin:.3e} .. {ymax:.3e}</text>"#,
        m = MARGIN / 2.0
    );

    for (i, (name, svals)) in series.iter().enumerate() {
        let color = COLORS[i % COLORS.len()];
        let mut points = String::new();
        for (x, y) in xs.iter().zip(svals) {
            let _ = write!(points, "{:.3},{:.3} ", sx(*x), sy(*y));
        }
        let _ = writeln!(
            out,
            r#"<polyline fill="none" stroke="{color}" stroke-width="1.5" points="{}"/>"#,
            points.trim_end()
        );
        let _ = writeln!(
            out,
            r#"<text x="{x}" y="{y}" font-size="11" fill="{color}">{name}</text>"#,
            x = WIDTH - MARGIN + 4.0,
            y = MARGIN + 14.0 * i as f64
        );
    }
    out.push_str("</svg>\n");
    out
}

fn bounds(v: &[f64]) -> (f64, f64) {
    let mut min = f64::INFINITY;
    let mut max = f64::NEG_INFINITY;
    for &x in v {
        min = min.min(x);
        max = max.max(x);
    }
    if !min.is_finite() || !max.is_finite() {
        (0.0, 1.0)
    } else {
        (min, max)
    }
}

fn span(a: f64, b: f64) -> f64 {
    if (b - a).abs() < 1e-300 {
        1.0
    } else {
        b - a
    }
}
