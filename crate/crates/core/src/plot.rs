//! SVG rendering of bodies and Okounkov function slices. Every drawn polygon
//! carries its exact vertices in a `data-vertices` attribute.

use std::fmt::Write;

use crate::okounkov::{OkounkovSlices, Polygon};
use crate::rational::{format_q, frac, q, to_f64};
use crate::zariski::Threshold;

const SIZE: f64 = 480.0;
const MARGIN: f64 = 24.0;

/// The triangle `{0 <= a < 11/360, 4/15 - a < b <= 1 - 25a}` where the
/// six-point example bounds the Okounkov function by `4/15`. Two of its edges
/// are open.
pub fn six_point_omega() -> Polygon {
    Polygon::hull([
        (q(0), frac(4, 15)),
        (q(0), q(1)),
        (frac(11, 360), frac(17, 72)),
    ])
}

fn exact_vertices(p: &Polygon) -> String {
    p.vertices()
        .iter()
        .map(|(x, y)| format!("{},{}", format_q(x), format_q(y)))
        .collect::<Vec<_>>()
        .join(" ")
}

struct Frame {
    x0: f64,
    y0: f64,
    scale_x: f64,
    scale_y: f64,
}

impl Frame {
    fn new(p: &Polygon) -> Self {
        let xs: Vec<f64> = p.vertices().iter().map(|v| to_f64(&v.0)).collect();
        let ys: Vec<f64> = p.vertices().iter().map(|v| to_f64(&v.1)).collect();
        let (x0, x1) = bounds(&xs);
        let (y0, y1) = bounds(&ys);
        let span = SIZE - 2.0 * MARGIN;
        Self {
            x0,
            y0,
            scale_x: span / (x1 - x0).max(1e-12),
            scale_y: span / (y1 - y0).max(1e-12),
        }
    }

    fn point(&self, x: f64, y: f64) -> (f64, f64) {
        (
            MARGIN + (x - self.x0) * self.scale_x,
            SIZE - MARGIN - (y - self.y0) * self.scale_y,
        )
    }

    fn points(&self, p: &Polygon) -> String {
        p.vertices()
            .iter()
            .map(|(x, y)| {
                let (u, v) = self.point(to_f64(x), to_f64(y));
                format!("{u:.3},{v:.3}")
            })
            .collect::<Vec<_>>()
            .join(" ")
    }
}

fn bounds(v: &[f64]) -> (f64, f64) {
    let lo = v.iter().cloned().fold(f64::INFINITY, f64::min);
    let hi = v.iter().cloned().fold(f64::NEG_INFINITY, f64::max);
    if lo.is_finite() {
        (lo, hi)
    } else {
        (0.0, 1.0)
    }
}

/// Body outline, optionally with the superlevel slices of an Okounkov
/// function shaded by level and an overlay region.
pub fn body_svg(
    body: &Polygon,
    slices: Option<&OkounkovSlices>,
    overlay: Option<&Polygon>,
) -> String {
    let frame = Frame::new(body);
    let mut out = String::new();
    writeln!(
        out,
        r#"<svg xmlns="http://www.w3.org/2000/svg" width="{SIZE}" height="{SIZE}" viewBox="0 0 {SIZE} {SIZE}">"#
    )
    .unwrap();
    writeln!(
        out,
        r#"  <polygon class="body" points="{}" data-vertices="{}" fill="none" stroke="black" stroke-width="1.5"/>"#,
        frame.points(body),
        exact_vertices(body)
    )
    .unwrap();
    if let Some(sl) = slices {
        let top = match &sl.e_max {
            Threshold::Infinite => 1.0,
            t => t.to_f64().max(1e-12),
        };
        for s in &sl.slices {
            if s.polygon.vertices().len() < 3 {
                continue;
            }
            let shade = (to_f64(&s.lambda) / top).clamp(0.0, 1.0);
            writeln!(
                out,
                r#"  <polygon class="slice" points="{}" data-vertices="{}" data-lambda="{}" fill="rgb(30,80,200)" fill-opacity="{:.3}" stroke="none"/>"#,
                frame.points(&s.polygon),
                exact_vertices(&s.polygon),
                format_q(&s.lambda),
                0.04 + 0.1 * shade
            )
            .unwrap();
        }
    }
    if let Some(o) = overlay {
        writeln!(
            out,
            r#"  <polygon class="overlay" points="{}" data-vertices="{}" fill="rgb(220,60,40)" fill-opacity="0.25" stroke="rgb(220,60,40)" stroke-dasharray="4 3"/>"#,
            frame.points(o),
            exact_vertices(o)
        )
        .unwrap();
    }
    out.push_str("</svg>\n");
    out
}

/// Parses the `data-vertices` attributes of an SVG produced by [`body_svg`],
/// in document order.
pub fn parse_svg_vertices(svg: &str) -> crate::error::Result<Vec<Polygon>> {
    let mut out = Vec::new();
    for part in svg.split("data-vertices=\"").skip(1) {
        let text = part.split('"').next().unwrap_or("");
        let mut pts = Vec::new();
        for pair in text.split_whitespace() {
            let (x, y) = pair
                .split_once(',')
                .ok_or_else(|| crate::error::Error::Parse {
                    what: "vertex",
                    input: pair.to_string(),
                })?;
            pts.push((crate::rational::parse_q(x)?, crate::rational::parse_q(y)?));
        }
        out.push(Polygon::hull(pts));
    }
    Ok(out)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn omega_is_a_triangle() {
        let o = six_point_omega();
        assert_eq!(o.vertices().len(), 3);
        // 4/15 - 11/360 = 1 - 25 * 11/360 = 17/72
        assert_eq!(frac(4, 15) - frac(11, 360), frac(17, 72));
        assert_eq!(q(1) - q(25) * frac(11, 360), frac(17, 72));
    }

    #[test]
    fn svg_round_trip() {
        let body = Polygon::hull([(q(0), q(0)), (frac(1, 25), q(0)), (q(0), q(1))]);
        let svg = body_svg(&body, None, Some(&six_point_omega()));
        assert!(svg.contains(r#"data-vertices="0,0 1/25,0 0,1""#));
        let back = parse_svg_vertices(&svg).unwrap();
        assert_eq!(back, vec![body, six_point_omega()]);
    }
}
