//! SVG drawing of the real arrangement with critical and indeterminacy
//! points.

use std::fmt::Write;

use monodromy_lab::critical::CriticalKind;
use monodromy_lab::{rational, Pipeline, Side};

const WIDTH: f64 = 800.0;
const BLUE: &str = "#1f4fd1";
const GREEN: &str = "#1f9d3a";
const RED: &str = "#d11f1f";

struct Viewport {
    x0: f64,
    y0: f64,
    x1: f64,
    y1: f64,
    scale: f64,
}

impl Viewport {
    fn px(&self, x: f64, y: f64) -> (f64, f64) {
        ((x - self.x0) * self.scale, (self.y1 - y) * self.scale)
    }

    /// Portion of `a x + b y + c = 0` inside the box.
    fn clip(&self, [a, b, c]: [f64; 3]) -> Option<((f64, f64), (f64, f64))> {
        let mut pts: Vec<(f64, f64)> = Vec::new();
        if b != 0.0 {
            for x in [self.x0, self.x1] {
                let y = -(a * x + c) / b;
                if (self.y0..=self.y1).contains(&y) {
                    pts.push((x, y));
                }
            }
        }
        if a != 0.0 {
            for y in [self.y0, self.y1] {
                let x = -(b * y + c) / a;
                if (self.x0..=self.x1).contains(&x) {
                    pts.push((x, y));
                }
            }
        }
        pts.sort_by(|p, q| p.0.total_cmp(&q.0).then(p.1.total_cmp(&q.1)));
        pts.dedup_by(|p, q| (p.0 - q.0).abs() < 1e-12 && (p.1 - q.1).abs() < 1e-12);
        (pts.len() >= 2).then(|| (pts[0], pts[pts.len() - 1]))
    }
}

fn viewport(p: &Pipeline) -> Viewport {
    let pts: Vec<(f64, f64)> = p
        .arrangement
        .full
        .vertices
        .iter()
        .map(|v| (rational::to_f64(&v.point.0), rational::to_f64(&v.point.1)))
        .collect();
    let fold = |f: fn(f64, f64) -> f64, init: f64, sel: fn(&(f64, f64)) -> f64| pts.iter().map(sel).fold(init, f);
    let (mut x0, mut x1) = (fold(f64::min, f64::INFINITY, |p| p.0), fold(f64::max, f64::NEG_INFINITY, |p| p.0));
    let (mut y0, mut y1) = (fold(f64::min, f64::INFINITY, |p| p.1), fold(f64::max, f64::NEG_INFINITY, |p| p.1));
    let (mx, my) = (0.2 * (x1 - x0).max(1.0), 0.2 * (y1 - y0).max(1.0));
    x0 -= mx;
    x1 += mx;
    y0 -= my;
    y1 += my;
    Viewport { x0, y0, x1, y1, scale: WIDTH / (x1 - x0) }
}

fn cross(out: &mut String, class: &str, (x, y): (f64, f64), r: f64, color: &str) {
    let _ = writeln!(
        out,
        r#"  <g class="{class}"><line x1="{:.3}" y1="{:.3}" x2="{:.3}" y2="{:.3}" stroke="{color}" stroke-width="2"/><line x1="{:.3}" y1="{:.3}" x2="{:.3}" y2="{:.3}" stroke="{color}" stroke-width="2"/></g>"#,
        x - r, y - r, x + r, y + r, x - r, y + r, x + r, y - r
    );
}

fn dot(out: &mut String, class: &str, (x, y): (f64, f64), r: f64, color: &str) {
    let _ = writeln!(out, r#"  <circle class="{class}" cx="{x:.3}" cy="{y:.3}" r="{r}" fill="{color}"/>"#);
}

pub fn render(p: &Pipeline) -> String {
    let vp = viewport(p);
    let height = (vp.y1 - vp.y0) * vp.scale;
    let mut out = String::new();
    let _ = writeln!(
        out,
        r#"<svg xmlns="http://www.w3.org/2000/svg" width="{WIDTH:.0}" height="{height:.0}" viewBox="0 0 {WIDTH:.3} {height:.3}">"#
    );
    let _ = writeln!(out, r#"  <rect width="100%" height="100%" fill="white"/>"#);
    for line in p.arrangement.lines() {
        let Some((a, b)) = vp.clip(line.coeffs_f64()) else { continue };
        let (a, b) = (vp.px(a.0, a.1), vp.px(b.0, b.1));
        let (class, color) = match line.side {
            Side::P => ("arrangement-line line-p", BLUE),
            Side::Q => ("arrangement-line line-q", GREEN),
        };
        let _ = writeln!(
            out,
            r#"  <line class="{class}" data-k="{}" x1="{:.3}" y1="{:.3}" x2="{:.3}" y2="{:.3}" stroke="{color}" stroke-width="1.5"/>"#,
            line.k, a.0, a.1, b.0, b.1
        );
    }
    for cp in &p.catalog.critical_points {
        let at = vp.px(cp.x, cp.y);
        match cp.kind {
            CriticalKind::SaddleP => cross(&mut out, "critical saddle-p", at, 5.0, BLUE),
            CriticalKind::SaddleQ => cross(&mut out, "critical saddle-q", at, 5.0, GREEN),
            CriticalKind::CenterP => dot(&mut out, "critical center-p", at, 5.0, BLUE),
            CriticalKind::CenterQ => dot(&mut out, "critical center-q", at, 5.0, GREEN),
            CriticalKind::Saddle3 => cross(&mut out, "critical saddle-3", at, 5.0, RED),
        }
    }
    for ip in &p.catalog.indeterminacy {
        let at = vp.px(rational::to_f64(&ip.point.0), rational::to_f64(&ip.point.1));
        dot(&mut out, "indeterminacy", at, 3.5, "black");
    }
    out.push_str("</svg>\n");
    out
}
