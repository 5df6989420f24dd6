use std::fmt::Write;

use super::PointSet;

const SIZE: f64 = 800.0;
const MARGIN: f64 = 40.0;

/// Standalone SVG of the first two coordinates of the points, with the given
/// edges drawn as segments. The viewBox is fixed; the drawing is scaled to fit.
pub fn render_svg(ps: &PointSet, edges: &[(usize, usize)]) -> String {
    let pts = ps.to_f64();
    let xy: Vec<(f64, f64)> = pts
        .iter()
        .map(|p| (p[0], p.get(1).copied().unwrap_or(0.0)))
        .collect();
    let (mut lo_x, mut hi_x, mut lo_y, mut hi_y) = (f64::INFINITY, f64::NEG_INFINITY, f64::INFINITY, f64::NEG_INFINITY);
    for &(x, y) in &xy {
        lo_x = lo_x.min(x);
        hi_x = hi_x.max(x);
        lo_y = lo_y.min(y);
        hi_y = hi_y.max(y);
    }
    let span = (hi_x - lo_x).max(hi_y - lo_y).max(1e-12);
    let s = (SIZE - 2.0 * MARGIN) / span;
    let map = |(x, y): (f64, f64)| (MARGIN + (x - lo_x) * s, SIZE - MARGIN - (y - lo_y) * s);
    let mut out = String::new();
    writeln!(
        out,
        r#"<svg xmlns="http://www.w3.org/2000/svg" viewBox="0 0 {SIZE} {SIZE}" width="{SIZE}" height="{SIZE}">"#
    )
    .expect("write");
    writeln!(out, r#"<rect width="100%" height="100%" fill="white"/>"#).expect("write");
    writeln!(out, r#"<g stroke="steelblue" stroke-width="1">"#).expect("write");
    for &(a, b) in edges {
        let (x1, y1) = map(xy[a]);
        let (x2, y2) = map(xy[b]);
        writeln!(out, r#"<line x1="{x1:.3}" y1="{y1:.3}" x2="{x2:.3}" y2="{y2:.3}"/>"#).expect("write");
    }
    writeln!(out, "</g>\n<g fill=\"black\">").expect("write");
    for &p in &xy {
        let (x, y) = map(p);
        writeln!(out, r#"<circle cx="{x:.3}" cy="{y:.3}" r="3"/>"#).expect("write");
    }
    writeln!(out, "</g>\n</svg>").expect("write");
    out
}
