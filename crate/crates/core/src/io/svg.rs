//! SVG rendering of Σ and of projected links.

use std::fmt::Write;

use num_complex::Complex64;

use crate::degeneration::SigmaCurve;
use crate::error::{Error, Result};
use crate::linking::ProjectedComponent;
use crate::orbit::Sign;

const SIZE: f64 = 480.0;
const MARGIN: f64 = 24.0;
const PALETTE: [&str; 6] = ["#1f77b4", "#d62728", "#2ca02c", "#9467bd", "#ff7f0e", "#17becf"];

/// Data that can be rendered.
#[derive(Debug, Clone, Copy)]
pub enum SvgData<'a> {
    Sigma(&'a SigmaCurve),
    Link(&'a [ProjectedComponent]),
}

pub fn emit_svg(data: SvgData<'_>) -> Result<String> {
    match data {
        SvgData::Sigma(c) => sigma_svg(c),
        SvgData::Link(l) => link_svg(l),
    }
}

/// Maps a bounding box onto the square canvas, flipping the y axis.
struct Frame {
    min: (f64, f64),
    scale: f64,
}

impl Frame {
    fn fit(points: impl Iterator<Item = (f64, f64)>) -> Frame {
        let (mut x0, mut y0, mut x1, mut y1) = (f64::INFINITY, f64::INFINITY, f64::NEG_INFINITY, f64::NEG_INFINITY);
        for (x, y) in points {
            x0 = x0.min(x);
            y0 = y0.min(y);
            x1 = x1.max(x);
            y1 = y1.max(y);
        }
        let span = (x1 - x0).max(y1 - y0).max(1e-9);
        let scale = (SIZE - 2.0 * MARGIN) / span;
        let cx = 0.5 * (x0 + x1) - 0.5 * span;
        let cy = 0.5 * (y0 + y1) - 0.5 * span;
        Frame { min: (cx, cy), scale }
    }

    fn map(&self, x: f64, y: f64) -> (f64, f64) {
        (MARGIN + (x - self.min.0) * self.scale, SIZE - MARGIN - (y - self.min.1) * self.scale)
    }
}

fn header(out: &mut String) {
    let _ = writeln!(
        out,
        r#"<?xml version="1.0" encoding="UTF-8"?>
<svg xmlns="http://www.w3.org/2000/svg" version="1.1" width="{SIZE}" height="{SIZE}" viewBox="0 0 {SIZE} {SIZE}">"#
    );
    let _ = writeln!(out, r#"<rect x="0" y="0" width="{SIZE}" height="{SIZE}" fill="white"/>"#);
}

fn closed_path(frame: &Frame, pts: &[(f64, f64)]) -> String {
    let mut d = String::new();
    for (k, &(x, y)) in pts.iter().enumerate() {
        let (sx, sy) = frame.map(x, y);
        let _ = write!(d, "{}{sx:.3} {sy:.3} ", if k == 0 { "M" } else { "L" });
    }
    d.push('Z');
    d
}

/// Σ as a closed path with the cusp `t = 1` and the point `t = −3` marked.
pub fn sigma_svg(curve: &SigmaCurve) -> Result<String> {
    if curve.samples.is_empty() {
        return Err(Error::EmptyData);
    }
    let pts: Vec<(f64, f64)> = curve.samples.iter().map(|(_, t)| (t.re, t.im)).collect();
    let frame = Frame::fit(pts.iter().copied());
    let mut out = String::new();
    header(&mut out);
    let (ax0, ay) = frame.map(pts.iter().map(|p| p.0).fold(f64::INFINITY, f64::min), 0.0);
    let (ax1, _) = frame.map(pts.iter().map(|p| p.0).fold(f64::NEG_INFINITY, f64::max), 0.0);
    let _ = writeln!(
        out,
        r##"<line x1="{ax0:.3}" y1="{ay:.3}" x2="{ax1:.3}" y2="{ay:.3}" stroke="#bbbbbb" stroke-width="1"/>"##
    );
    let _ = writeln!(
        out,
        r##"<path id="sigma" d="{}" fill="#eef3fb" stroke="#1f4e9c" stroke-width="2"/>"##,
        closed_path(&frame, &pts)
    );
    for (id, label, t) in [("cusp", "t = 1", Complex64::new(1.0, 0.0)), ("minus-three", "t = −3", Complex64::new(-3.0, 0.0))] {
        let (x, y) = frame.map(t.re, t.im);
        let _ = writeln!(out, r##"<circle id="{id}" cx="{x:.3}" cy="{y:.3}" r="4" fill="#c0392b"/>"##);
        let _ = writeln!(out, r#"<text x="{:.3}" y="{:.3}" font-size="12" font-family="sans-serif">{label}</text>"#, x + 6.0, y - 6.0);
    }
    out.push_str("</svg>\n");
    Ok(out)
}

/// Projected link components, dropping the third coordinate. Positive
/// components are solid, negative ones dashed; an arrowhead marks the
/// orientation.
pub fn link_svg(components: &[ProjectedComponent]) -> Result<String> {
    if components.is_empty() || components.iter().any(|c| c.curve.points.is_empty()) {
        return Err(Error::EmptyData);
    }
    let frame = Frame::fit(components.iter().flat_map(|c| c.curve.points.iter().map(|p| (p[0], p[1]))));
    let mut out = String::new();
    header(&mut out);
    for (k, comp) in components.iter().enumerate() {
        let color = PALETTE[k % PALETTE.len()];
        let pts: Vec<(f64, f64)> = comp.curve.points.iter().map(|p| (p[0], p[1])).collect();
        let dash = match comp.sign {
            Sign::Positive => "",
            Sign::Negative => r#" stroke-dasharray="6 4""#,
        };
        let _ = writeln!(
            out,
            r#"<path id="component-{k}" class="{}" d="{}" fill="none" stroke="{color}" stroke-width="1.5"{dash}/>"#,
            match comp.sign {
                Sign::Positive => "positive",
                Sign::Negative => "negative",
            },
            closed_path(&frame, &pts)
        );
        let i = pts.len() / 4;
        let (x0, y0) = frame.map(pts[i].0, pts[i].1);
        let (x1, y1) = frame.map(pts[(i + 1) % pts.len()].0, pts[(i + 1) % pts.len()].1);
        let len = ((x1 - x0).powi(2) + (y1 - y0).powi(2)).sqrt().max(1e-9);
        let (ux, uy) = ((x1 - x0) / len, (y1 - y0) / len);
        let (tip, back) = ((x0 + 6.0 * ux, y0 + 6.0 * uy), (x0 - 4.0 * ux, y0 - 4.0 * uy));
        let _ = writeln!(
            out,
            r#"<polygon class="arrow" points="{:.3},{:.3} {:.3},{:.3} {:.3},{:.3}" fill="{color}"/>"#,
            tip.0,
            tip.1,
            back.0 - 4.0 * uy,
            back.1 + 4.0 * ux,
            back.0 + 4.0 * uy,
            back.1 - 4.0 * ux
        );
    }
    out.push_str("</svg>\n");
    Ok(out)
}
