//! Output emitters: SVG drawings of layouts and CSV energy traces.

use std::fmt::Write as _;

use crate::geom::Vec2;
use crate::graph::Graph;
use crate::solve::Trace;

// Sampled viridis control points, interpolated linearly over vertex index.
const PALETTE: [[f64; 3]; 9] = [
    [0.267, 0.005, 0.329],
    [0.283, 0.141, 0.458],
    [0.254, 0.265, 0.530],
    [0.207, 0.372, 0.553],
    [0.164, 0.471, 0.558],
    [0.128, 0.567, 0.551],
    [0.135, 0.659, 0.518],
    [0.478, 0.821, 0.316],
    [0.993, 0.906, 0.144],
];

/// Color for vertex `idx` of `n` on a fixed perceptual gradient.
pub fn vertex_color(idx: usize, n: usize) -> String {
    let t = if n <= 1 { 0.0 } else { idx as f64 / (n - 1) as f64 };
    let scaled = t * (PALETTE.len() - 1) as f64;
    let lo = (scaled.floor() as usize).min(PALETTE.len() - 2);
    let frac = scaled - lo as f64;
    let mut rgb = [0u8; 3];
    for (c, slot) in rgb.iter_mut().enumerate() {
        let v = PALETTE[lo][c] + frac * (PALETTE[lo + 1][c] - PALETTE[lo][c]);
        *slot = (v.clamp(0.0, 1.0) * 255.0).round() as u8;
    }
    format!("#{:02x}{:02x}{:02x}", rgb[0], rgb[1], rgb[2])
}

/// Renders a layout as a standalone SVG document: one line per edge, one
/// circle per vertex colored by index, viewport fitted to the bounding box
/// with a 5% margin.
pub fn layout_svg(g: &Graph, xs: &[Vec2]) -> String {
    assert_eq!(xs.len(), g.n(), "layout size must match vertex count");
    let (mut min_x, mut min_y) = (f64::INFINITY, f64::INFINITY);
    let (mut max_x, mut max_y) = (f64::NEG_INFINITY, f64::NEG_INFINITY);
    for p in xs {
        min_x = min_x.min(p.x);
        min_y = min_y.min(p.y);
        max_x = max_x.max(p.x);
        max_y = max_y.max(p.y);
    }
    if xs.is_empty() {
        (min_x, min_y, max_x, max_y) = (0.0, 0.0, 1.0, 1.0);
    }
    let span = (max_x - min_x).max(max_y - min_y).max(1e-9);
    let margin = 0.05 * span;
    let view_x = min_x - margin;
    let view_y = min_y - margin;
    let view_w = max_x - min_x + 2.0 * margin;
    let view_h = max_y - min_y + 2.0 * margin;
    let radius = 0.008 * span;
    let stroke = 0.002 * span;

    let mut out = String::new();
    out.push_str("<?xml version=\"1.0\" encoding=\"UTF-8\"?>\n");
    let _ = writeln!(
        out,
        "<svg version=\"1.1\" xmlns=\"http://www.w3.org/2000/svg\" \
         viewBox=\"{view_x} {view_y} {view_w} {view_h}\" width=\"720\" height=\"720\" \
         preserveAspectRatio=\"xMidYMid meet\">"
    );
    let _ = writeln!(out, "<g stroke=\"#888888\" stroke-width=\"{stroke}\" stroke-opacity=\"0.6\">");
    for e in g.edges() {
        let _ = writeln!(
            out,
            "<line x1=\"{}\" y1=\"{}\" x2=\"{}\" y2=\"{}\"/>",
            xs[e.i].x, xs[e.i].y, xs[e.j].x, xs[e.j].y
        );
    }
    out.push_str("</g>\n<g>\n");
    for (i, p) in xs.iter().enumerate() {
        let _ = writeln!(
            out,
            "<circle cx=\"{}\" cy=\"{}\" r=\"{radius}\" fill=\"{}\"/>",
            p.x,
            p.y,
            vertex_color(i, xs.len())
        );
    }
    out.push_str("</g>\n</svg>\n");
    out
}

/// Serializes a trace as CSV. With timing the header is
/// `iter,f,elapsed_ms`; without it the column is omitted entirely so equal
/// runs produce byte-identical files.
pub fn trace_csv(trace: &Trace, with_timing: bool) -> String {
    let mut out = String::new();
    if with_timing {
        out.push_str("iter,f,elapsed_ms\n");
        for r in &trace.records {
            let _ = writeln!(out, "{},{},{:.3}", r.iter, r.f, r.elapsed_ms);
        }
    } else {
        out.push_str("iter,f\n");
        for r in &trace.records {
            let _ = writeln!(out, "{},{}", r.iter, r.f);
        }
    }
    out
}
