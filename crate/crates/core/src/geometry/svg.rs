use std::collections::BTreeSet;
use std::fmt::Write;

use super::{Embedding, TreeOfLines};

/// Rendering knobs for [`to_svg`].
#[derive(Debug, Clone)]
pub struct SvgOptions {
    /// Pixels per unit of the plane.
    pub scale: f64,
    pub margin: f64,
    pub labels: bool,
    /// How far past the last node each half-line is drawn, in plane units.
    pub overshoot: f64,
}

impl Default for SvgOptions {
    fn default() -> Self {
        SvgOptions {
            scale: 60.0,
            margin: 30.0,
            labels: true,
            overshoot: 0.75,
        }
    }
}

fn escape(s: &str) -> String {
    s.replace('&', "&amp;")
        .replace('<', "&lt;")
        .replace('>', "&gt;")
        .replace('"', "&quot;")
}

/// Renders the half-lines, node points and origins as a standalone SVG document.
///
/// Output depends only on the inputs, so it is suitable for golden files.
pub fn to_svg(l: &TreeOfLines, e: &Embedding, names: &[String], opts: &SvgOptions) -> String {
    let nodes: Vec<(f64, f64)> = e.points.iter().map(|p| l.point(p).to_f64()).collect();

    // Each half-line is drawn up to a little past its farthest node or attachment.
    let mut reach = vec![1.0_f64; l.lines.len()];
    for p in &e.points {
        let t = super::rat_to_f64(&p.t);
        reach[p.line] = reach[p.line].max(t);
    }
    for h in &l.lines {
        if let Some((p, t)) = &h.parent {
            reach[*p] = reach[*p].max(super::rat_to_f64(t));
        }
    }
    let segments: Vec<((f64, f64), (f64, f64))> = l
        .lines
        .iter()
        .map(|h| {
            let (ox, oy) = h.origin.to_f64();
            let (dx, dy) = h.direction.to_f64();
            let len = (dx * dx + dy * dy).sqrt().max(f64::MIN_POSITIVE);
            let t = reach[h.id] + opts.overshoot / len;
            ((ox, oy), (ox + dx * t, oy + dy * t))
        })
        .collect();

    let mut xs: Vec<f64> = nodes.iter().map(|p| p.0).collect();
    let mut ys: Vec<f64> = nodes.iter().map(|p| p.1).collect();
    for (a, b) in &segments {
        xs.extend([a.0, b.0]);
        ys.extend([a.1, b.1]);
    }
    let min = |v: &[f64]| v.iter().copied().fold(f64::INFINITY, f64::min);
    let max = |v: &[f64]| v.iter().copied().fold(f64::NEG_INFINITY, f64::max);
    let (x0, x1, y0, y1) = if xs.is_empty() {
        (0.0, 0.0, 0.0, 0.0)
    } else {
        (min(&xs), max(&xs), min(&ys), max(&ys))
    };
    let m = opts.margin;
    let width = (x1 - x0) * opts.scale + 2.0 * m;
    let height = (y1 - y0) * opts.scale + 2.0 * m;
    // The plane's y axis points up; SVG's points down.
    let px = |x: f64| (x - x0) * opts.scale + m;
    let py = |y: f64| (y1 - y) * opts.scale + m;

    let mut out = String::new();
    let _ = writeln!(
        out,
        r#"<svg xmlns="http://www.w3.org/2000/svg" width="{width:.2}" height="{height:.2}" viewBox="0 0 {width:.2} {height:.2}">"#
    );
    let _ = writeln!(out, r#"<g stroke="black" stroke-width="1.5" fill="none">"#);
    for (i, (a, b)) in segments.iter().enumerate() {
        let _ = writeln!(
            out,
            r#"<line id="h{i}" x1="{:.2}" y1="{:.2}" x2="{:.2}" y2="{:.2}"/>"#,
            px(a.0),
            py(a.1),
            px(b.0),
            py(b.1)
        );
    }
    let _ = writeln!(out, "</g>");

    let mut origins = BTreeSet::new();
    for h in &l.lines {
        let (x, y) = h.origin.to_f64();
        origins.insert((format!("{:.2}", px(x)), format!("{:.2}", py(y))));
    }
    let _ = writeln!(out, r#"<g fill="none" stroke="gray">"#);
    for (x, y) in &origins {
        let _ = writeln!(
            out,
            r#"<rect x="{x}" y="{y}" width="8" height="8" transform="translate(-4,-4)"/>"#
        );
    }
    let _ = writeln!(out, "</g>");

    let _ = writeln!(out, r#"<g fill="black" font-family="monospace" font-size="12">"#);
    for (i, (x, y)) in nodes.iter().enumerate() {
        let _ = writeln!(out, r#"<circle cx="{:.2}" cy="{:.2}" r="3"/>"#, px(*x), py(*y));
        if opts.labels {
            let name = names.get(i).map(String::as_str).unwrap_or("?");
            let _ = writeln!(
                out,
                r#"<text x="{:.2}" y="{:.2}">{}</text>"#,
                px(*x) + 5.0,
                py(*y) - 5.0,
                escape(name)
            );
        }
    }
    let _ = writeln!(out, "</g>");
    out.push_str("</svg>\n");
    out
}
