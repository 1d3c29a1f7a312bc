//! Zero plots with ray overlays, as plain SVG 1.1.

use std::fmt::Write;
use std::path::Path;

use num_complex::Complex64;

use crate::error::Result;
use crate::io::write_text;
use crate::rays::RayFamily;

const PIXELS: u32 = 600;
const PADDING: f64 = 0.1;

/// Half-width of the plotted square: the largest coordinate of any point
/// (at least 1), padded by 10%.
fn half_width(points: &[Complex64]) -> f64 {
    let extent = points
        .iter()
        .filter(|z| z.re.is_finite() && z.im.is_finite())
        .map(|z| z.re.abs().max(z.im.abs()))
        .fold(1.0, f64::max);
    extent * (1.0 + PADDING)
}

/// The SVG document. Rays are `<line class="ray">` from the origin to the
/// frame edge, points are `<circle class="marker">`, and the two axes are
/// `<line class="axis">`. The y axis points up.
pub fn svg_document(points: &[Complex64], family: RayFamily) -> String {
    let l = half_width(points);
    let stroke = l * 0.004;
    let radius = l * 0.012;
    let mut s = String::new();
    let _ = writeln!(s, r#"<?xml version="1.0" encoding="UTF-8"?>"#);
    let _ = writeln!(
        s,
        r#"<svg xmlns="http://www.w3.org/2000/svg" version="1.1" width="{PIXELS}" height="{PIXELS}" viewBox="{:.6} {:.6} {:.6} {:.6}">"#,
        -l,
        -l,
        2.0 * l,
        2.0 * l
    );
    let _ = writeln!(s, r#"<rect x="{:.6}" y="{:.6}" width="{:.6}" height="{:.6}" fill="white"/>"#, -l, -l, 2.0 * l, 2.0 * l);
    for (x1, y1, x2, y2) in [(-l, 0.0, l, 0.0), (0.0, -l, 0.0, l)] {
        let _ = writeln!(
            s,
            r##"<line class="axis" x1="{x1:.6}" y1="{y1:.6}" x2="{x2:.6}" y2="{y2:.6}" stroke="#999999" stroke-width="{stroke:.6}"/>"##
        );
    }
    for u in family.directions() {
        let t = l / u.re.abs().max(u.im.abs());
        let _ = writeln!(
            s,
            r##"<line class="ray" x1="0" y1="0" x2="{:.6}" y2="{:.6}" stroke="#1f77b4" stroke-width="{stroke:.6}"/>"##,
            t * u.re,
            -t * u.im
        );
    }
    for z in points.iter().filter(|z| z.re.is_finite() && z.im.is_finite()) {
        let _ = writeln!(
            s,
            r##"<circle class="marker" cx="{:.6}" cy="{:.6}" r="{radius:.6}" fill="#d62728"/>"##,
            z.re, -z.im
        );
    }
    s.push_str("</svg>\n");
    s
}

pub fn render_svg(points: &[Complex64], family: RayFamily, path: &Path) -> Result<()> {
    write_text(path, &svg_document(points, family))
}
