//! SVG rendering of planar instances: one marker style per group, chosen
//! lines clipped to the point bounding box plus a 10% margin.

use std::fmt::Write;

use num::ToPrimitive;

use crate::error::{Error, Result};
use crate::geometry::{Hyperplane, PointConfig};

const CANVAS: f64 = 480.0;
const PALETTE: [&str; 6] = [
    "#2e8b57", "#1f5fbf", "#c0392b", "#8e44ad", "#d68910", "#17202a",
];

#[derive(Clone, Copy)]
enum Marker {
    Cross,
    Dot,
    Square,
    Triangle,
    Diamond,
}

const MARKERS: [Marker; 5] = [
    Marker::Cross,
    Marker::Dot,
    Marker::Square,
    Marker::Triangle,
    Marker::Diamond,
];

struct Frame {
    x0: f64,
    y0: f64,
    x1: f64,
    y1: f64,
    scale: f64,
}

impl Frame {
    fn px(&self, x: f64) -> f64 {
        (x - self.x0) * self.scale
    }

    fn py(&self, y: f64) -> f64 {
        (self.y1 - y) * self.scale
    }
}

/// Renders `config` and `hyperplanes` (both planar) as an SVG 1.1 document.
pub fn emit_svg(config: &PointConfig, hyperplanes: &[Hyperplane]) -> Result<String> {
    if config.dim() != 2 {
        return Err(Error::Unsupported(format!(
            "plotting needs dimension 2, instance has {}",
            config.dim()
        )));
    }
    if let Some(h) = hyperplanes.iter().find(|h| h.dim() != 2) {
        return Err(Error::DimensionMismatch {
            expected: 2,
            got: h.dim(),
        });
    }
    let pts: Vec<(f64, f64)> = config
        .points()
        .iter()
        .map(|p| (to_f64(&p[0]), to_f64(&p[1])))
        .collect();
    let frame = frame(&pts);
    let width = (frame.x1 - frame.x0) * frame.scale;
    let height = (frame.y1 - frame.y0) * frame.scale;

    let mut out = String::new();
    let _ = writeln!(out, r#"<?xml version="1.0" encoding="UTF-8"?>"#);
    let _ = writeln!(
        out,
        r#"<svg xmlns="http://www.w3.org/2000/svg" version="1.1" width="{w:.0}" height="{h:.0}" viewBox="0 0 {w:.3} {h:.3}">"#,
        w = width,
        h = height
    );
    let _ = writeln!(
        out,
        r##"<rect x="0" y="0" width="{width:.3}" height="{height:.3}" fill="#ffffff" stroke="#cccccc"/>"##
    );

    let _ = writeln!(
        out,
        r##"<g id="lines" stroke="#555555" stroke-width="1.5">"##
    );
    for h in hyperplanes {
        if let Some(((ax, ay), (bx, by))) = clip(h, &frame) {
            let _ = writeln!(
                out,
                r#"<line x1="{:.3}" y1="{:.3}" x2="{:.3}" y2="{:.3}"/>"#,
                frame.px(ax),
                frame.py(ay),
                frame.px(bx),
                frame.py(by)
            );
        }
    }
    out.push_str("</g>\n");

    for (i, g) in config.groups().iter().enumerate() {
        let color = PALETTE[i % PALETTE.len()];
        let _ = writeln!(out, r#"<g id="group-{i}" fill="{color}" stroke="{color}">"#);
        let _ = writeln!(out, "<title>{}</title>", escape(&g.name));
        for &v in &g.members {
            let (x, y) = pts[v];
            marker(
                &mut out,
                MARKERS[i % MARKERS.len()],
                frame.px(x),
                frame.py(y),
            );
        }
        out.push_str("</g>\n");
    }
    out.push_str("</svg>\n");
    Ok(out)
}

fn to_f64(q: &crate::geometry::Rational) -> f64 {
    q.to_f64().unwrap_or(0.0)
}

fn frame(pts: &[(f64, f64)]) -> Frame {
    let (mut x0, mut y0, mut x1, mut y1) = (f64::MAX, f64::MAX, f64::MIN, f64::MIN);
    for &(x, y) in pts {
        x0 = x0.min(x);
        y0 = y0.min(y);
        x1 = x1.max(x);
        y1 = y1.max(y);
    }
    let margin = 0.1 * (x1 - x0).max(y1 - y0).max(1e-9);
    let (x0, x1, y0, y1) = (x0 - margin, x1 + margin, y0 - margin, y1 + margin);
    let scale = CANVAS / (x1 - x0).max(y1 - y0);
    Frame {
        x0,
        y0,
        x1,
        y1,
        scale,
    }
}

/// Liang-Barsky clip of the line `a·x = b` to the frame rectangle.
fn clip(h: &Hyperplane, f: &Frame) -> Option<((f64, f64), (f64, f64))> {
    let (a, b, c) = (
        to_f64(&h.normal()[0]),
        to_f64(&h.normal()[1]),
        to_f64(h.offset()),
    );
    let norm = a * a + b * b;
    // A point on the line and its direction.
    let (px, py) = (a * c / norm, b * c / norm);
    let (dx, dy) = (-b, a);
    let mut t0 = f64::NEG_INFINITY;
    let mut t1 = f64::INFINITY;
    for (p, q) in [
        (-dx, px - f.x0),
        (dx, f.x1 - px),
        (-dy, py - f.y0),
        (dy, f.y1 - py),
    ] {
        if p == 0.0 {
            if q < 0.0 {
                return None;
            }
        } else {
            let r = q / p;
            if p < 0.0 {
                t0 = t0.max(r);
            } else {
                t1 = t1.min(r);
            }
        }
    }
    (t0 < t1).then_some(((px + t0 * dx, py + t0 * dy), (px + t1 * dx, py + t1 * dy)))
}

fn marker(out: &mut String, kind: Marker, x: f64, y: f64) {
    const R: f64 = 5.0;
    let _ = match kind {
        Marker::Dot => writeln!(out, r#"<circle cx="{x:.3}" cy="{y:.3}" r="{R}"/>"#),
        Marker::Square => writeln!(
            out,
            r#"<rect x="{:.3}" y="{:.3}" width="{}" height="{}"/>"#,
            x - R,
            y - R,
            2.0 * R,
            2.0 * R
        ),
        Marker::Cross => writeln!(
            out,
            r#"<path d="M{:.3} {:.3}L{:.3} {:.3}M{:.3} {:.3}L{:.3} {:.3}" fill="none" stroke-width="2"/>"#,
            x - R,
            y - R,
            x + R,
            y + R,
            x - R,
            y + R,
            x + R,
            y - R
        ),
        Marker::Triangle => writeln!(
            out,
            r#"<path d="M{:.3} {:.3}L{:.3} {:.3}L{:.3} {:.3}Z"/>"#,
            x,
            y - R,
            x + R,
            y + R,
            x - R,
            y + R
        ),
        Marker::Diamond => writeln!(
            out,
            r#"<path d="M{:.3} {:.3}L{:.3} {:.3}L{:.3} {:.3}L{:.3} {:.3}Z"/>"#,
            x,
            y - R,
            x + R,
            y,
            x,
            y + R,
            x - R,
            y
        ),
    };
}

fn escape(s: &str) -> String {
    s.replace('&', "&amp;")
        .replace('<', "&lt;")
        .replace('>', "&gt;")
        .replace('"', "&quot;")
}
