//! Minimal static SVG scatter charts for bench output.

use std::collections::BTreeMap;
use std::fmt::Write;

use crate::bench::Row;

const WIDTH: f64 = 640.0;
const HEIGHT: f64 = 400.0;
const MARGIN: f64 = 50.0;
const COLORS: [&str; 6] = ["#1f77b4", "#d62728", "#2ca02c", "#ff7f0e", "#9467bd", "#8c564b"];

struct Series {
    name: String,
    points: Vec<(f64, f64)>,
}

fn scatter(title: &str, x_label: &str, y_label: &str, series: &[Series]) -> String {
    let all = series.iter().flat_map(|s| s.points.iter());
    let (mut x0, mut x1, mut y0, mut y1) = (f64::MAX, f64::MIN, 0.0f64, f64::MIN);
    for &(x, y) in all {
        x0 = x0.min(x);
        x1 = x1.max(x);
        y0 = y0.min(y);
        y1 = y1.max(y);
    }
    if x0 > x1 {
        (x0, x1, y1) = (0.0, 1.0, 1.0);
    }
    if x1 - x0 < 1e-12 {
        x1 = x0 + 1.0;
    }
    if y1 - y0 < 1e-12 {
        y1 = y0 + 1.0;
    }
    let sx = |x: f64| MARGIN + (x - x0) / (x1 - x0) * (WIDTH - 2.0 * MARGIN);
    let sy = |y: f64| HEIGHT - MARGIN - (y - y0) / (y1 - y0) * (HEIGHT - 2.0 * MARGIN);

    let mut svg = String::new();
    let _ = writeln!(
        svg,
        r#"<svg xmlns="http://www.w3.org/2000/svg" width="{WIDTH}" height="{HEIGHT}" font-family="sans-serif" font-size="12">"#
    );
    let _ = writeln!(svg, r#"<rect width="100%" height="100%" fill="white"/>"#);
    let _ = writeln!(svg, r#"<text x="{}" y="20" text-anchor="middle" font-size="14">{title}</text>"#, WIDTH / 2.0);
    let (left, bottom) = (MARGIN, HEIGHT - MARGIN);
    let _ = writeln!(
        svg,
        r#"<path d="M{left} {MARGIN} V{bottom} H{}" stroke="black" fill="none"/>"#,
        WIDTH - MARGIN
    );
    let _ = writeln!(svg, r#"<text x="{}" y="{}" text-anchor="middle">{x_label}</text>"#, WIDTH / 2.0, HEIGHT - 12.0);
    let _ = writeln!(
        svg,
        r#"<text x="14" y="{}" text-anchor="middle" transform="rotate(-90 14 {})">{y_label}</text>"#,
        HEIGHT / 2.0,
        HEIGHT / 2.0
    );
    for (v, anchor, x, y) in [
        (x0, "start", left, bottom + 16.0),
        (x1, "end", WIDTH - MARGIN, bottom + 16.0),
    ] {
        let _ = writeln!(svg, r#"<text x="{x}" y="{y}" text-anchor="{anchor}">{v:.3}</text>"#);
    }
    for v in [y0, y1] {
        let _ = writeln!(svg, r#"<text x="{}" y="{}" text-anchor="end">{v:.3}</text>"#, left - 4.0, sy(v) + 4.0);
    }
    for (s, color) in series.iter().zip(COLORS.iter().cycle()) {
        for &(x, y) in &s.points {
            let _ = writeln!(svg, r#"<circle cx="{:.1}" cy="{:.1}" r="2.5" fill="{color}" fill-opacity="0.7"/>"#, sx(x), sy(y));
        }
    }
    for (idx, (s, color)) in series.iter().zip(COLORS.iter().cycle()).enumerate() {
        let y = MARGIN + 16.0 * idx as f64;
        let _ = writeln!(svg, r#"<circle cx="{}" cy="{}" r="4" fill="{color}"/>"#, WIDTH - MARGIN - 110.0, y - 4.0);
        let _ = writeln!(svg, r#"<text x="{}" y="{y}">{}</text>"#, WIDTH - MARGIN - 100.0, s.name);
    }
    svg.push_str("</svg>\n");
    svg
}

fn by_algorithm(rows: &[Row], point: impl Fn(usize, &Row) -> Option<(f64, f64)>) -> Vec<Series> {
    let mut groups: BTreeMap<&str, Vec<(f64, f64)>> = BTreeMap::new();
    for (idx, row) in rows.iter().enumerate() {
        if let Some(p) = point(idx, row) {
            groups.entry(&row.algorithm).or_default().push(p);
        }
    }
    groups.into_iter().map(|(name, points)| Series { name: name.to_string(), points }).collect()
}

/// Value divided by the exact optimum, per run.
pub fn ratio_chart(rows: &[Row]) -> String {
    let series = by_algorithm(rows, |idx, r| r.ratio.map(|q| (idx as f64, q)));
    scatter("value / optimum", "run", "ratio", &series)
}

/// Runtime against instance size `m * n`.
pub fn runtime_chart(rows: &[Row]) -> String {
    let series = by_algorithm(rows, |_, r| r.value.map(|_| ((r.m * r.n) as f64, r.runtime_ms)));
    scatter("runtime", "m * n", "ms", &series)
}
