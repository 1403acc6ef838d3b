//! Line integrals along traced ovals.
//!
//! Each segment is a cubic Hermite arc between consecutive nodes; Gauss
//! points on it are projected back onto the level set and the form is
//! paired with the exact unit tangent there, with `ds` from the arc-length
//! parametrization of the trace.

use num_complex::Complex64;
use num_traits::Zero;
use serde::Serialize;

use super::form::OneForm;
use super::trace::OvalTrace;
use crate::error::{Error, Result};
use crate::rational_map::RationalMap;

const GAUSS5: [(f64, f64); 5] = [
    (0.0, 0.568_888_888_888_888_9),
    (-0.538_469_310_105_683_1, 0.478_628_670_499_366_5),
    (0.538_469_310_105_683_1, 0.478_628_670_499_366_5),
    (-0.906_179_845_938_664, 0.236_926_885_056_189_08),
    (0.906_179_845_938_664, 0.236_926_885_056_189_08),
];

const GAUSS3: [(f64, f64); 3] = [
    (0.0, 8.0 / 9.0),
    (-0.774_596_669_241_483_4, 5.0 / 9.0),
    (0.774_596_669_241_483_4, 5.0 / 9.0),
];

#[derive(Clone, Copy, Debug, PartialEq, Serialize)]
pub struct Integral {
    pub value: Complex64,
    /// `Σ |I₅ − I₃|` over segments.
    pub error_estimate: f64,
}

fn hermite(p0: (f64, f64), p1: (f64, f64), t0: [f64; 2], t1: [f64; 2], len: f64, u: f64) -> (f64, f64) {
    let u2 = u * u;
    let u3 = u2 * u;
    let h00 = 2.0 * u3 - 3.0 * u2 + 1.0;
    let h10 = u3 - 2.0 * u2 + u;
    let h01 = -2.0 * u3 + 3.0 * u2;
    let h11 = u3 - u2;
    (
        h00 * p0.0 + h10 * len * t0[0] + h01 * p1.0 + h11 * len * t1[0],
        h00 * p0.1 + h10 * len * t0[1] + h01 * p1.1 + h11 * len * t1[1],
    )
}

/// Integral of `ω(τ)` with `ω` given pointwise as covector components.
pub fn integrate_with<W>(trace: &OvalTrace, omega: W) -> Integral
where
    W: Fn(f64, f64) -> [Complex64; 2],
{
    let mut total = Complex64::zero();
    let mut err = 0.0;
    for i in 0..trace.segments() {
        let (p0, p1) = (trace.nodes[i], trace.nodes[i + 1]);
        let (t0, t1) = (trace.tangents[i], trace.tangents[i + 1]);
        let len = trace.segment_lengths[i];
        let rule = |points: &[(f64, f64)]| {
            points.iter().fold(Complex64::zero(), |acc, &(xi, w)| {
                let u = 0.5 * (xi + 1.0);
                let (hx, hy) = hermite(p0, p1, t0, t1, len, u);
                let (x, y) = trace.project(hx, hy);
                let tau = trace.tangent_at(x, y);
                let c = omega(x, y);
                acc + (c[0] * tau[0] + c[1] * tau[1]) * (0.5 * w * len)
            })
        };
        let i5 = rule(&GAUSS5);
        let i3 = rule(&GAUSS3);
        total += i5;
        err += (i5 - i3).norm();
    }
    Integral { value: total, error_estimate: err }
}

/// Smallest distance from a trace node to one of `lines`.
pub fn clearance(trace: &OvalTrace, map: &RationalMap, lines: &[usize]) -> Option<(f64, f64, f64)> {
    let mut best: Option<(f64, f64, f64)> = None;
    for &(x, y) in &trace.nodes {
        for &k in lines {
            let [a, b, _] = map.line_coeffs(k);
            let dist = map.line_value(k, x, y).abs() / a.hypot(b);
            if best.is_none_or(|(_, _, d)| dist < d) {
                best = Some((x, y, dist));
            }
        }
    }
    best
}

/// `∮ ω` along the trace. The `dG` part of a logarithmic-family form is
/// summed as `G(end) − G(start)` per segment.
pub fn integrate(form: &OneForm, trace: &OvalTrace, map: &RationalMap, line_clearance: f64) -> Result<Integral> {
    if let Some((x, y, dist)) = clearance(trace, map, &form.pole_lines(map)) {
        if dist < line_clearance {
            return Err(Error::PoleProximity { x, y, clearance: dist });
        }
    }
    let mut out = integrate_with(trace, |x, y| form.components(map, x, y, form.exact_part().is_none()));
    if let Some(g) = form.exact_part() {
        let telescoped: f64 = trace
            .nodes
            .windows(2)
            .map(|w| g.eval(map, w[1].0, w[1].1) - g.eval(map, w[0].0, w[0].1))
            .sum();
        out.value += telescoped;
    }
    Ok(out)
}

/// `max_i ‖ω(node_i)‖`.
pub fn max_node_norm(form: &OneForm, trace: &OvalTrace, map: &RationalMap) -> f64 {
    trace
        .nodes
        .iter()
        .map(|&(x, y)| {
            let c = form.components(map, x, y, true);
            (c[0].norm_sqr() + c[1].norm_sqr()).sqrt()
        })
        .fold(0.0, f64::max)
}

/// Winding number of `R(path)` around 0 along a closed complex path
/// (the last point joins back to the first).
pub fn winding_number(path: &[[Complex64; 2]], coeffs: [f64; 3], line: usize) -> Result<i64> {
    let [a, b, c] = coeffs;
    let values: Vec<Complex64> = path.iter().map(|p| p[0] * a + p[1] * b + c).collect();
    let scale = values.iter().map(|v| v.norm()).fold(0.0, f64::max);
    if values.iter().any(|v| v.norm() <= 1e-14 * scale.max(1.0)) {
        return Err(Error::DegenerateWinding(line));
    }
    let n = values.len();
    let total: f64 = (0..n).map(|i| (values[(i + 1) % n] / values[i]).arg()).sum();
    Ok((total / std::f64::consts::TAU).round() as i64)
}

/// Winding of the line value `R_k` along a real trace.
pub fn winding_oracle(trace: &OvalTrace, map: &RationalMap, line: usize) -> Result<i64> {
    let path: Vec<[Complex64; 2]> =
        trace.nodes.iter().map(|&(x, y)| [Complex64::from(x), Complex64::from(y)]).collect();
    winding_number(&path, map.line_coeffs(line), line)
}

/// `∮ dR_k / R_k` by quadrature.
pub fn log_derivative_integral(trace: &OvalTrace, map: &RationalMap, line: usize) -> Integral {
    let [a, b, _] = map.line_coeffs(line);
    integrate_with(trace, |x, y| {
        let r = map.line_value(line, x, y);
        [Complex64::from(a / r), Complex64::from(b / r)]
    })
}
