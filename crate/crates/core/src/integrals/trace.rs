//! Real ovals `{F = t}` around a center, by arc-length continuation.

use serde::Serialize;

use crate::arrangement::{Arrangement, Face};
use crate::critical::{CriticalCatalog, CriticalKind, CriticalPoint, Location};
use crate::error::{Error, Result};
use crate::rational_map::{sym_eigenvalues, RationalMap};

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct TraceOptions {
    pub trace_tol: f64,
    pub closure_tol: f64,
    pub line_clearance: f64,
    /// Nodes aimed for on one loop; sets the step from the start radius.
    pub nodes: usize,
    pub max_step_factor: usize,
    pub max_retries: usize,
}

impl Default for TraceOptions {
    fn default() -> Self {
        Self {
            trace_tol: 1e-10,
            closure_tol: 1e-8,
            line_clearance: 1e-6,
            nodes: 8192,
            max_step_factor: 16,
            max_retries: 4,
        }
    }
}

/// Function whose level set is traced: `F` near P-centers, `1/F` near
/// Q-centers (so the swap symmetry maps one case onto the other).
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
#[serde(rename_all = "snake_case")]
pub enum Chart {
    F,
    InverseF,
}

#[derive(Clone, Debug, Serialize)]
pub struct OvalTrace {
    pub center: usize,
    pub kind: CriticalKind,
    pub chart: Chart,
    /// Level of `F`.
    pub t: f64,
    /// Level of the chart function.
    pub level: f64,
    pub nodes: Vec<(f64, f64)>,
    /// Unit tangents at the nodes, in the direction of travel.
    #[serde(skip)]
    pub tangents: Vec<[f64; 2]>,
    /// Arc length of the segment from node `i` to node `i + 1`.
    #[serde(skip)]
    pub segment_lengths: Vec<f64>,
    pub closed: bool,
    pub closure_error: f64,
    pub arc_length: f64,
    pub step: f64,
    /// Bounded face of the full arrangement holding the oval.
    pub face: usize,
    /// +1 for counterclockwise travel.
    pub orientation: f64,
    #[serde(skip)]
    pub chart_map: RationalMap,
}

impl OvalTrace {
    pub fn segments(&self) -> usize {
        self.nodes.len() - 1
    }

    /// Same oval traversed backwards.
    pub fn reversed(&self) -> Self {
        let mut r = self.clone();
        r.nodes.reverse();
        r.tangents = self.tangents.iter().rev().map(|t| [-t[0], -t[1]]).collect();
        r.segment_lengths.reverse();
        r.orientation = -self.orientation;
        r
    }

    /// Unit tangent of the level set at `(x, y)` in the direction of travel.
    pub fn tangent_at(&self, x: f64, y: f64) -> [f64; 2] {
        unit_tangent(&self.chart_map, x, y, self.orientation)
    }

    /// Moves `(x, y)` onto the level set along the gradient.
    pub fn project(&self, x: f64, y: f64) -> (f64, f64) {
        correct(&self.chart_map, self.level, (x, y), 0.1 * TraceOptions::default().trace_tol)
    }

    /// Largest `|F − t| / |t|` over the nodes.
    pub fn level_residual(&self, f: &RationalMap) -> f64 {
        self.nodes.iter().map(|&(x, y)| ((f.value(x, y) - self.t) / self.t).abs()).fold(0.0, f64::max)
    }
}

fn unit_tangent(map: &RationalMap, x: f64, y: f64, orientation: f64) -> [f64; 2] {
    let g = map.gradient(x, y);
    let n = g[0].hypot(g[1]);
    [-orientation * g[1] / n, orientation * g[0] / n]
}

/// Newton steps along the gradient back onto `{map = level}`.
fn correct(map: &RationalMap, level: f64, mut p: (f64, f64), rel_tol: f64) -> (f64, f64) {
    for _ in 0..4 {
        let r = map.value(p.0, p.1) - level;
        if r.abs() <= rel_tol * level.abs() {
            break;
        }
        let g = map.gradient(p.0, p.1);
        let gg = g[0] * g[0] + g[1] * g[1];
        p = (p.0 - r * g[0] / gg, p.1 - r * g[1] / gg);
    }
    p
}

fn rk4(map: &RationalMap, p: (f64, f64), h: f64, orientation: f64) -> (f64, f64) {
    let f = |q: (f64, f64)| unit_tangent(map, q.0, q.1, orientation);
    let k1 = f(p);
    let k2 = f((p.0 + 0.5 * h * k1[0], p.1 + 0.5 * h * k1[1]));
    let k3 = f((p.0 + 0.5 * h * k2[0], p.1 + 0.5 * h * k2[1]));
    let k4 = f((p.0 + h * k3[0], p.1 + h * k3[1]));
    (
        p.0 + h / 6.0 * (k1[0] + 2.0 * k2[0] + 2.0 * k3[0] + k4[0]),
        p.1 + h / 6.0 * (k1[1] + 2.0 * k2[1] + 2.0 * k3[1] + k4[1]),
    )
}

/// Level `t` of the chart function, offset from the center value by
/// `s · gap` towards the side where small ovals exist.
pub fn oval_level(catalog: &CriticalCatalog, center: &CriticalPoint, chart_map: &RationalMap, chart: Chart, s: f64) -> Result<(f64, f64)> {
    let in_chart = |v: crate::critical::CriticalValue| match chart {
        Chart::F => v,
        Chart::InverseF => v.inverse(),
    };
    let c = in_chart(center.value)
        .finite()
        .ok_or_else(|| Error::InvalidParameter("center at infinity".into()))?;
    let gap = catalog
        .critical_points
        .iter()
        .filter_map(|p| in_chart(p.value).finite())
        .map(|v| (v - c).abs())
        .filter(|&g| g > 1e-9 * c.abs().max(1.0))
        .fold(f64::INFINITY, f64::min);
    if !gap.is_finite() {
        return Err(Error::InvalidParameter("no other finite critical value".into()));
    }
    let eig = sym_eigenvalues(chart_map.hessian(center.x, center.y));
    let dir = if eig[1] < 0.0 {
        -1.0
    } else if eig[0] > 0.0 {
        1.0
    } else {
        return Err(Error::InvalidParameter(format!("critical point {} is not an extremum", center.id)));
    };
    Ok((c + dir * s * gap, gap))
}

fn chart_for(kind: CriticalKind) -> Result<Chart> {
    match kind {
        CriticalKind::CenterP => Ok(Chart::F),
        CriticalKind::CenterQ => Ok(Chart::InverseF),
        other => Err(Error::InvalidParameter(format!("{other:?} has no small real oval"))),
    }
}

fn clearance_ok(face: &Face, arr: &Arrangement, map: &RationalMap, p: (f64, f64), clearance: f64) -> bool {
    face.interior_margin(arr.lines(), p.0, p.1) > clearance && map.nearest_line(p.0, p.1).1 > clearance
}

/// Traces the oval at offset `s ∈ (0, 1/2]` around a center.
pub fn trace_oval(
    arr: &Arrangement,
    catalog: &CriticalCatalog,
    center: &CriticalPoint,
    s: f64,
    opts: &TraceOptions,
) -> Result<OvalTrace> {
    if !(s > 0.0 && s <= 0.5) {
        return Err(Error::InvalidParameter(format!("oval offset {s} outside (0, 1/2]")));
    }
    let chart = chart_for(center.kind)?;
    let f_map = crate::rational_map::RationalMap::new(arr.lines());
    let chart_map = match chart {
        Chart::F => f_map,
        Chart::InverseF => f_map.inverted(),
    };
    let (level, _gap) = oval_level(catalog, center, &chart_map, chart, s)?;
    let Location::Face { face: face_id, .. } = center.location else {
        return Err(Error::InvalidParameter("center not inside a face".into()));
    };
    let face = &arr.full.bounded_faces[face_id];
    let start = ray_start(arr, face, &chart_map, (center.x, center.y), level)?;
    let perimeter = ellipse_perimeter(&chart_map, center, level).unwrap_or_else(|| {
        std::f64::consts::TAU * (start.0 - center.x).hypot(start.1 - center.y)
    });

    let mut nodes_target = opts.nodes;
    let mut last_err = None;
    for _ in 0..=opts.max_retries {
        match march(arr, face, &chart_map, center, start, level, perimeter / nodes_target as f64, nodes_target, opts) {
            Ok((nodes, tangents, segment_lengths, closure_error, step)) => {
                let t = match chart {
                    Chart::F => level,
                    Chart::InverseF => 1.0 / level,
                };
                let closed = closure_error <= opts.closure_tol;
                if !closed {
                    return Err(Error::TraceFailure(format!(
                        "closure error {closure_error:e} above tolerance"
                    )));
                }
                return Ok(OvalTrace {
                    center: center.id,
                    kind: center.kind,
                    chart,
                    t,
                    level,
                    arc_length: segment_lengths.iter().sum(),
                    nodes,
                    tangents,
                    segment_lengths,
                    closed,
                    closure_error,
                    step,
                    face: face_id,
                    orientation: 1.0,
                    chart_map,
                });
            }
            Err(e @ Error::StepTooLarge(_)) => {
                last_err = Some(e);
                nodes_target *= 2;
            }
            Err(e) => return Err(e),
        }
    }
    Err(last_err.unwrap_or_else(|| Error::TraceFailure("no attempt made".into())))
}

/// Perimeter of the osculating ellipse `½ xᵀ H x = |level − c*|`.
fn ellipse_perimeter(map: &RationalMap, center: &CriticalPoint, level: f64) -> Option<f64> {
    let c = map.value(center.x, center.y);
    let eig = sym_eigenvalues(map.hessian(center.x, center.y));
    let dz = (level - c).abs();
    let a = (2.0 * dz / eig[0].abs()).sqrt();
    let b = (2.0 * dz / eig[1].abs()).sqrt();
    // Ramanujan's approximation
    let p = std::f64::consts::PI * (3.0 * (a + b) - ((3.0 * a + b) * (a + 3.0 * b)).sqrt());
    (p.is_finite() && p > 0.0).then_some(p)
}

/// First crossing of the level along the diagonal ray from the center.
fn ray_start(arr: &Arrangement, face: &Face, map: &RationalMap, c: (f64, f64), level: f64) -> Result<(f64, f64)> {
    let u = (std::f64::consts::FRAC_1_SQRT_2, std::f64::consts::FRAC_1_SQRT_2);
    let margin = face.interior_margin(arr.lines(), c.0, c.1);
    let at = |r: f64| (c.0 + r * u.0, c.1 + r * u.1);
    let phi = |r: f64| {
        let p = at(r);
        map.value(p.0, p.1) - level
    };
    let sign0 = phi(0.0).signum();
    let steps = 4096;
    let mut lo = 0.0;
    let mut hi = None;
    for i in 1..=steps {
        let r = margin * 64.0 * i as f64 / steps as f64;
        let p = at(r);
        if face.interior_margin(arr.lines(), p.0, p.1) <= 0.0 {
            break;
        }
        if phi(r).signum() != sign0 {
            hi = Some(r);
            break;
        }
        lo = r;
    }
    let mut hi = hi.ok_or_else(|| Error::TraceFailure("level not reached inside the face".into()))?;
    for _ in 0..200 {
        let mid = 0.5 * (lo + hi);
        if mid == lo || mid == hi {
            break;
        }
        if phi(mid).signum() == sign0 {
            lo = mid;
        } else {
            hi = mid;
        }
    }
    Ok(correct(map, level, at(0.5 * (lo + hi)), 1e-15))
}

type March = (Vec<(f64, f64)>, Vec<[f64; 2]>, Vec<f64>, f64, f64);

#[allow(clippy::too_many_arguments)]
fn march(
    arr: &Arrangement,
    face: &Face,
    map: &RationalMap,
    center: &CriticalPoint,
    start: (f64, f64),
    level: f64,
    h: f64,
    nodes_target: usize,
    opts: &TraceOptions,
) -> Result<March> {
    let c = (center.x, center.y);
    let radius = (start.0 - c.0).hypot(start.1 - c.1);
    // orient counterclockwise around the center
    let mut orientation = 1.0;
    let t0 = unit_tangent(map, start.0, start.1, orientation);
    if (start.0 - c.0) * t0[1] - (start.1 - c.1) * t0[0] < 0.0 {
        orientation = -1.0;
    }
    let tau0 = unit_tangent(map, start.0, start.1, orientation);
    let ahead = |p: (f64, f64)| (p.0 - start.0) * tau0[0] + (p.1 - start.1) * tau0[1];
    let angle = |p: (f64, f64)| (p.1 - c.1).atan2(p.0 - c.0);

    let mut nodes = vec![start];
    let mut tangents = vec![tau0];
    let mut lengths = Vec::new();
    let mut swept = 0.0;
    let max_steps = nodes_target * opts.max_step_factor;
    let rel = 0.1 * opts.trace_tol;
    for _ in 0..max_steps {
        let p = *nodes.last().expect("nonempty");
        let q = correct(map, level, rk4(map, p, h, orientation), rel);
        if !clearance_ok(face, arr, map, q, opts.line_clearance) {
            return Err(Error::StepTooLarge(h));
        }
        let mut da = angle(q) - angle(p);
        if da > std::f64::consts::PI {
            da -= std::f64::consts::TAU;
        } else if da < -std::f64::consts::PI {
            da += std::f64::consts::TAU;
        }
        if da <= 0.0 {
            return Err(Error::StepTooLarge(h));
        }
        swept += da;
        if swept > std::f64::consts::PI && ahead(p) < 0.0 && ahead(q) >= 0.0 {
            // closing step: secant on the partial step length
            let mut hh = -ahead(p) / (tangents.last().unwrap()[0] * tau0[0] + tangents.last().unwrap()[1] * tau0[1]);
            let mut end = p;
            for _ in 0..6 {
                end = correct(map, level, rk4(map, p, hh, orientation), rel);
                let a = ahead(end);
                let tn = unit_tangent(map, end.0, end.1, orientation);
                let denom = tn[0] * tau0[0] + tn[1] * tau0[1];
                if a.abs() < 1e-15 * radius || denom.abs() < 1e-3 {
                    break;
                }
                hh -= a / denom;
            }
            let closure = (end.0 - start.0).hypot(end.1 - start.1);
            // the final node is the start itself; the gap is reported
            nodes.push(start);
            tangents.push(tau0);
            lengths.push(hh);
            return Ok((nodes, tangents, lengths, closure, h));
        }
        nodes.push(q);
        tangents.push(unit_tangent(map, q.0, q.1, orientation));
        lengths.push(h);
    }
    Err(Error::TraceFailure(format!("oval did not close within {max_steps} steps")))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::critical::NewtonOptions;
    use num_traits::Zero;

    fn setup(d: usize) -> (Arrangement, CriticalCatalog) {
        let arr = Arrangement::family(d, &crate::rational::Rational::zero()).unwrap();
        let cat = CriticalCatalog::compute(&arr, &NewtonOptions::default()).unwrap();
        (arr, cat)
    }

    #[test]
    fn degree_two_p_oval_inside_triangle() {
        let (arr, cat) = setup(2);
        let center = cat.of_kind(CriticalKind::CenterP).next().unwrap();
        let tr = trace_oval(&arr, &cat, center, 0.1, &TraceOptions::default()).unwrap();
        assert!(tr.closed && tr.closure_error <= 1e-8);
        let f = RationalMap::new(arr.lines());
        assert!(tr.level_residual(&f) <= 1e-10);
        let triangle = &arr.p_only.bounded_faces[0];
        for &(x, y) in &tr.nodes {
            assert!(triangle.contains(arr.lines(), x, y));
        }
        // shoelace area positive for a counterclockwise loop
        let area: f64 = tr.nodes.windows(2).map(|w| w[0].0 * w[1].1 - w[1].0 * w[0].1).sum::<f64>() / 2.0;
        assert!(area > 0.0);
    }

    #[test]
    fn q_oval_mirrors_p_oval() {
        let (arr, cat) = setup(2);
        let opts = TraceOptions::default();
        let cp = cat.of_kind(CriticalKind::CenterP).next().unwrap();
        let cq = cat.of_kind(CriticalKind::CenterQ).next().unwrap();
        let tp = trace_oval(&arr, &cat, cp, 0.1, &opts).unwrap();
        let tq = trace_oval(&arr, &cat, cq, 0.1, &opts).unwrap();
        assert!((tq.t * tp.t - 1.0).abs() < 1e-9);
        assert!((tq.level - tp.level).abs() < 1e-9 * tp.level.abs());
        // reflection reverses orientation, so compare geometry, not indices
        assert!(tp.nodes.len().abs_diff(tq.nodes.len()) <= 1);
        assert!((tp.arc_length - tq.arc_length).abs() <= 1e-8 * tp.arc_length);
        let shoelace = |nodes: &[(f64, f64)]| {
            nodes.windows(2).map(|w| w[0].0 * w[1].1 - w[1].0 * w[0].1).sum::<f64>() / 2.0
        };
        let (ap, aq) = (shoelace(&tp.nodes), shoelace(&tq.nodes));
        assert!((ap - aq).abs() <= 1e-6 * ap, "{ap} vs {aq}");
        // swapped Q nodes sit on the P oval: projecting them moves them by ~0
        for &(x, y) in &tq.nodes {
            let (px, py) = tp.project(y, x);
            assert!((px - y).hypot(py - x) < 1e-9);
        }
        // every reflected P node lies on the Q level set
        let f = RationalMap::new(arr.lines());
        for &(x, y) in &tp.nodes {
            assert!((f.value(y, x) - tq.t).abs() <= 1e-9 * tq.t.abs());
        }
    }

    #[test]
    fn rejects_saddles_and_bad_offsets() {
        let (arr, cat) = setup(2);
        let saddle = cat.of_kind(CriticalKind::Saddle3).next().unwrap();
        assert!(trace_oval(&arr, &cat, saddle, 0.1, &TraceOptions::default()).is_err());
        let center = cat.of_kind(CriticalKind::CenterP).next().unwrap();
        assert!(trace_oval(&arr, &cat, center, 0.7, &TraceOptions::default()).is_err());
    }

    #[test]
    fn degree_three_ovals_close() {
        let (arr, cat) = setup(3);
        let f = RationalMap::new(arr.lines());
        for c in cat.critical_points.iter().filter(|p| p.kind.point_type() == 2) {
            let tr = trace_oval(&arr, &cat, c, 0.1, &TraceOptions::default()).unwrap();
            assert!(tr.closure_error <= 1e-8);
            assert!(tr.level_residual(&f) <= 1e-10);
        }
    }
}
