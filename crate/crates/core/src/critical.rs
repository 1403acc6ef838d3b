//! Critical and indeterminacy points of `F = P/Q`.
//!
//! Type 1 points (crossings of two lines on the same side) are exact vertices
//! of the arrangement. Interior points are found by damped Newton on
//! `∇ log|F|`, seeded from every bounded face of the full arrangement, and
//! classified by the Hessian signature together with the face they sit in.

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::arrangement::{intersect, Arrangement, Face, FaceKind, Side};
use crate::error::{Error, Result};
use crate::rational::{self, Rational};
use crate::rational_map::{sym_eigenvalues, RationalMap};

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
pub enum CriticalKind {
    SaddleP,
    SaddleQ,
    CenterP,
    CenterQ,
    Saddle3,
}

impl CriticalKind {
    /// Type 1, 2 or 3 in the crossing / region / mixed-region taxonomy.
    pub fn point_type(self) -> u8 {
        match self {
            Self::SaddleP | Self::SaddleQ => 1,
            Self::CenterP | Self::CenterQ => 2,
            Self::Saddle3 => 3,
        }
    }
}

/// Critical value in the extended line. Values of the real family are real.
#[derive(Clone, Copy, Debug, PartialEq)]
pub enum CriticalValue {
    Zero,
    Infinity,
    Finite(f64),
}

impl CriticalValue {
    pub fn finite(self) -> Option<f64> {
        match self {
            Self::Zero => Some(0.0),
            Self::Finite(v) => Some(v),
            Self::Infinity => None,
        }
    }

    /// Value in the `1/F` chart.
    pub fn inverse(self) -> Self {
        match self {
            Self::Zero => Self::Infinity,
            Self::Infinity => Self::Zero,
            Self::Finite(v) => Self::Finite(1.0 / v),
        }
    }
}

impl Serialize for CriticalValue {
    fn serialize<S: serde::Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
        match self {
            Self::Zero => s.serialize_str("0"),
            Self::Infinity => s.serialize_str("inf"),
            Self::Finite(v) => s.serialize_f64(*v),
        }
    }
}

impl<'de> Deserialize<'de> for CriticalValue {
    fn deserialize<D: serde::Deserializer<'de>>(d: D) -> std::result::Result<Self, D::Error> {
        match serde_json::Value::deserialize(d)? {
            serde_json::Value::String(s) if s == "0" => Ok(Self::Zero),
            serde_json::Value::String(s) if s == "inf" => Ok(Self::Infinity),
            serde_json::Value::Number(n) => Ok(Self::Finite(n.as_f64().unwrap_or(f64::NAN))),
            other => Err(serde::de::Error::custom(format!("bad critical value {other}"))),
        }
    }
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(tag = "at", rename_all = "snake_case")]
pub enum Location {
    /// Crossing of two lines (by index `k`).
    Vertex { lines: [usize; 2] },
    /// Inside bounded face `face` of the full arrangement; `region` indexes
    /// the bounded faces of the P-only (CenterP) or Q-only (CenterQ)
    /// sub-arrangement.
    Face { face: usize, region: Option<usize> },
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct CriticalPoint {
    pub id: usize,
    pub kind: CriticalKind,
    pub x: f64,
    pub y: f64,
    #[serde(skip_serializing_if = "Option::is_none", default, with = "opt_point")]
    pub exact_coords: Option<(Rational, Rational)>,
    pub value: CriticalValue,
    pub location: Location,
    /// `‖∇ log|F|‖` at the point; zero for exact vertices.
    pub residual: f64,
}

impl CriticalPoint {
    pub fn exact(&self) -> bool {
        self.exact_coords.is_some()
    }
}

mod opt_point {
    use super::*;
    use serde::{Deserializer, Serializer};

    pub fn serialize<S: Serializer>(
        p: &Option<(Rational, Rational)>,
        s: S,
    ) -> std::result::Result<S::Ok, S::Error> {
        match p {
            Some(p) => rational::point::serialize(p, s),
            None => s.serialize_none(),
        }
    }

    pub fn deserialize<'de, D: Deserializer<'de>>(
        d: D,
    ) -> std::result::Result<Option<(Rational, Rational)>, D::Error> {
        rational::point::deserialize(d).map(Some)
    }
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct IndeterminacyPoint {
    #[serde(with = "rational::point")]
    pub point: (Rational, Rational),
    pub p_line: usize,
    pub q_line: usize,
}

#[derive(Clone, Copy, Debug, PartialEq)]
pub struct NewtonOptions {
    /// Convergence threshold on `‖∇ log|F|‖`.
    pub newton_tol: f64,
    pub max_iter: usize,
    pub dedup_tol: f64,
    /// Scatter seeds per face in addition to the barycenter.
    pub scatter: usize,
    pub value_group_tol: f64,
}

impl Default for NewtonOptions {
    fn default() -> Self {
        Self { newton_tol: 1e-12, max_iter: 100, dedup_tol: 1e-9, scatter: 8, value_group_tol: 1e-9 }
    }
}

/// One saddle per same-side vertex with its exact coordinates.
pub fn saddle_points_exact(arr: &Arrangement) -> Vec<CriticalPoint> {
    let mut out = Vec::new();
    for (side, kind, value) in [
        (Side::P, CriticalKind::SaddleP, CriticalValue::Zero),
        (Side::Q, CriticalKind::SaddleQ, CriticalValue::Infinity),
    ] {
        for v in &arr.sub(side).vertices {
            out.push(CriticalPoint {
                id: out.len(),
                kind,
                x: rational::to_f64(&v.point.0),
                y: rational::to_f64(&v.point.1),
                exact_coords: Some(v.point.clone()),
                value,
                location: Location::Vertex { lines: [v.lines[0], v.lines[1]] },
                residual: 0.0,
            });
        }
    }
    out
}

/// All `P = Q = 0` points, one per P-line × Q-line crossing.
pub fn indeterminacy_points(arr: &Arrangement) -> Vec<IndeterminacyPoint> {
    let mut out = Vec::new();
    for p in arr.side_lines(Side::P) {
        for q in arr.side_lines(Side::Q) {
            let point = intersect(p, q).expect("generic arrangement");
            out.push(IndeterminacyPoint { point, p_line: p.k, q_line: q.k });
        }
    }
    out
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct SeedFailure {
    pub face: usize,
    pub seed: (f64, f64),
    pub reason: String,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct InteriorSearch {
    pub points: Vec<CriticalPoint>,
    /// Seeds that did not converge. Faces of split type carry no critical
    /// point, so failures there are expected.
    pub failed_seeds: Vec<SeedFailure>,
}

/// Damped Newton on `∇ log|F| = 0`, confined to the interior of `face`.
pub fn newton_in_face(
    map: &RationalMap,
    arr: &Arrangement,
    face: &Face,
    seed: (f64, f64),
    opts: &NewtonOptions,
) -> Result<(f64, f64, f64)> {
    let lines = arr.lines();
    let (mut x, mut y) = seed;
    let norm = |g: [f64; 2]| g[0].hypot(g[1]);
    let mut g = map.log_gradient(x, y);
    for _ in 0..opts.max_iter {
        let gn = norm(g);
        if gn <= opts.newton_tol {
            return Ok((x, y, gn));
        }
        let h = map.log_hessian(x, y);
        let det = h[0][0] * h[1][1] - h[0][1] * h[1][0];
        let step = if det.abs() > f64::EPSILON * (h[0][0].abs() + h[1][1].abs()).powi(2) {
            [
                -(h[1][1] * g[0] - h[0][1] * g[1]) / det,
                -(-h[1][0] * g[0] + h[0][0] * g[1]) / det,
            ]
        } else {
            [-g[0], -g[1]]
        };
        let mut alpha = 1.0;
        let mut accepted = false;
        for _ in 0..60 {
            let (nx, ny) = (x + alpha * step[0], y + alpha * step[1]);
            if face.contains(lines, nx, ny) {
                let ng = map.log_gradient(nx, ny);
                if norm(ng) < gn || alpha < 1e-12 {
                    x = nx;
                    y = ny;
                    g = ng;
                    accepted = true;
                    break;
                }
            }
            alpha *= 0.5;
        }
        if !accepted {
            break;
        }
    }
    let gn = norm(g);
    if gn <= opts.newton_tol {
        Ok((x, y, gn))
    } else {
        Err(Error::NonConvergence { x: seed.0, y: seed.1, iterations: opts.max_iter })
    }
}

/// Barycenter plus `count` pseudo-random interior points, seeded by face id.
pub fn face_seeds(arr: &Arrangement, face_id: usize, count: usize) -> Vec<(f64, f64)> {
    let face = &arr.full.bounded_faces[face_id];
    let verts: Vec<(f64, f64)> = face
        .vertices
        .iter()
        .map(|&v| {
            let p = &arr.full.vertices[v].point;
            (rational::to_f64(&p.0), rational::to_f64(&p.1))
        })
        .collect();
    let mut seeds = vec![(rational::to_f64(&face.barycenter.0), rational::to_f64(&face.barycenter.1))];
    let mut rng = ChaCha8Rng::seed_from_u64(face_id as u64);
    for _ in 0..count {
        let w: Vec<f64> = verts.iter().map(|_| -rng.gen_range(1e-6f64..1.0).ln()).collect();
        let total: f64 = w.iter().sum();
        let x = verts.iter().zip(&w).map(|(p, w)| p.0 * w).sum::<f64>() / total;
        let y = verts.iter().zip(&w).map(|(p, w)| p.1 * w).sum::<f64>() / total;
        seeds.push((x, y));
    }
    seeds
}

fn region_of(arr: &Arrangement, side: Side, x: f64, y: f64) -> Option<usize> {
    let sub = arr.sub(side);
    sub.bounded_faces.iter().position(|f| f.contains(&sub.lines, x, y))
}

/// Multistart search for type 2 and type 3 critical points.
/// Converged `(face, x, y, value)` solutions and failed seeds of one face.
type FaceSolutions = (Vec<(usize, f64, f64, f64)>, Vec<SeedFailure>);

pub fn find_interior_critical(arr: &Arrangement, opts: &NewtonOptions) -> Result<InteriorSearch> {
    let map = RationalMap::new(arr.lines());
    let faces = &arr.full.bounded_faces;
    let per_face: Vec<FaceSolutions> = (0..faces.len())
        .into_par_iter()
        .map(|fi| {
            let mut found = Vec::new();
            let mut failed = Vec::new();
            for seed in face_seeds(arr, fi, opts.scatter) {
                match newton_in_face(&map, arr, &faces[fi], seed, opts) {
                    Ok((x, y, r)) => found.push((fi, x, y, r)),
                    Err(e) => failed.push(SeedFailure { face: fi, seed, reason: e.to_string() }),
                }
            }
            (found, failed)
        })
        .collect();

    let mut unique: Vec<(usize, f64, f64, f64)> = Vec::new();
    let mut failed_seeds = Vec::new();
    for (found, failed) in per_face {
        for cand in found {
            if !unique
                .iter()
                .any(|u| (u.1 - cand.1).hypot(u.2 - cand.2) <= opts.dedup_tol)
            {
                unique.push(cand);
            }
        }
        failed_seeds.extend(failed);
    }

    let mut points = Vec::new();
    for (face, x, y, residual) in unique {
        let h = map.log_hessian(x, y);
        let ev = sym_eigenvalues(h);
        let value = map.value(x, y);
        let kind = if ev[0] * ev[1] < 0.0 {
            CriticalKind::Saddle3
        } else if region_of(arr, Side::P, x, y).is_some() {
            CriticalKind::CenterP
        } else if region_of(arr, Side::Q, x, y).is_some() {
            CriticalKind::CenterQ
        } else {
            return Err(Error::CountMismatch(format!(
                "extremum at ({x}, {y}) in face {face} lies in no single-side region"
            )));
        };
        let region = match kind {
            CriticalKind::CenterP => region_of(arr, Side::P, x, y),
            CriticalKind::CenterQ => region_of(arr, Side::Q, x, y),
            _ => None,
        };
        points.push(CriticalPoint {
            id: 0,
            kind,
            x,
            y,
            exact_coords: None,
            value: CriticalValue::Finite(value),
            location: Location::Face { face, region },
            residual,
        });
    }
    points.sort_by(|a, b| {
        a.kind
            .cmp(&b.kind)
            .then(a.x.total_cmp(&b.x))
            .then(a.y.total_cmp(&b.y))
    });
    check_interior_counts(arr, &points)?;
    Ok(InteriorSearch { points, failed_seeds })
}

fn check_interior_counts(arr: &Arrangement, points: &[CriticalPoint]) -> Result<()> {
    let d = arr.d;
    let mut problems = Vec::new();
    for (side, kind) in [(Side::P, CriticalKind::CenterP), (Side::Q, CriticalKind::CenterQ)] {
        for (j, face) in arr.sub(side).bounded_faces.iter().enumerate() {
            let hits = points
                .iter()
                .filter(|p| {
                    p.kind == kind
                        && matches!(p.location, Location::Face { region: Some(r), .. } if r == j)
                })
                .count();
            if hits != 1 {
                problems.push(format!(
                    "{side:?} region {j} at ({}, {}) has {hits} centers",
                    rational::format(&face.barycenter.0),
                    rational::format(&face.barycenter.1)
                ));
            }
        }
    }
    let saddles = points.iter().filter(|p| p.kind == CriticalKind::Saddle3).count();
    if saddles != d * d {
        let missing: Vec<usize> = arr
            .full
            .bounded_faces
            .iter()
            .enumerate()
            .filter(|(fi, f)| {
                f.kind == FaceKind::Alternating
                    && !points.iter().any(|p| {
                        p.kind == CriticalKind::Saddle3
                            && matches!(p.location, Location::Face { face, .. } if face == *fi)
                    })
            })
            .map(|(fi, _)| fi)
            .collect();
        problems.push(format!(
            "found {saddles} mixed saddles, expected {}; alternating faces without one: {missing:?}",
            d * d
        ));
    }
    let centers = points.len() - saddles;
    if centers != d * (d - 1) {
        problems.push(format!("found {centers} centers, expected {}", d * (d - 1)));
    }
    if problems.is_empty() {
        Ok(())
    } else {
        Err(Error::CountMismatch(problems.join("; ")))
    }
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct ValueGroup {
    pub id: usize,
    pub value: CriticalValue,
    pub members: Vec<usize>,
    pub tolerance: f64,
    pub kinds: Vec<CriticalKind>,
}

impl ValueGroup {
    pub fn mixed_kinds(&self) -> bool {
        self.kinds.len() > 1
    }
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct Grouping {
    pub groups: Vec<ValueGroup>,
    pub warnings: Vec<String>,
}

/// Clusters critical values: `0`, then finite values ascending, then `∞`.
pub fn group_values(points: &[CriticalPoint], tol: f64) -> Grouping {
    let kinds_of = |members: &[usize]| {
        let mut k: Vec<CriticalKind> = members.iter().map(|&m| points[m].kind).collect();
        k.sort();
        k.dedup();
        k
    };
    let mut groups = Vec::new();
    let mut warnings = Vec::new();

    let zero: Vec<usize> = points
        .iter()
        .filter(|p| p.value == CriticalValue::Zero)
        .map(|p| p.id)
        .collect();
    groups.push(ValueGroup {
        id: 0,
        value: CriticalValue::Zero,
        kinds: kinds_of(&zero),
        members: zero,
        tolerance: tol,
    });

    let mut finite: Vec<(f64, usize)> = points
        .iter()
        .filter_map(|p| match p.value {
            CriticalValue::Finite(v) => Some((v, p.id)),
            _ => None,
        })
        .collect();
    finite.sort_by(|a, b| a.0.total_cmp(&b.0).then(a.1.cmp(&b.1)));
    let close = |a: f64, b: f64, t: f64| (a - b).abs() <= t * a.abs().max(b.abs()).max(f64::MIN_POSITIVE);

    let mut current: Vec<(f64, usize)> = Vec::new();
    let flush = |current: &mut Vec<(f64, usize)>, groups: &mut Vec<ValueGroup>| {
        if current.is_empty() {
            return;
        }
        let members: Vec<usize> = current.iter().map(|c| c.1).collect();
        groups.push(ValueGroup {
            id: groups.len(),
            value: CriticalValue::Finite(current[0].0),
            kinds: kinds_of(&members),
            members,
            tolerance: tol,
        });
        current.clear();
    };
    for &(v, id) in &finite {
        match current.first() {
            Some(&(rep, _)) if close(rep, v, tol) => current.push((v, id)),
            Some(&(rep, _)) => {
                if close(rep, v, 10.0 * tol) || close(current.last().unwrap().0, v, 10.0 * tol) {
                    warnings.push(format!(
                        "values {rep} and {v} are separated by less than 10x the grouping tolerance"
                    ));
                }
                flush(&mut current, &mut groups);
                current.push((v, id));
            }
            None => current.push((v, id)),
        }
    }
    flush(&mut current, &mut groups);

    let inf: Vec<usize> = points
        .iter()
        .filter(|p| p.value == CriticalValue::Infinity)
        .map(|p| p.id)
        .collect();
    groups.push(ValueGroup {
        id: groups.len(),
        value: CriticalValue::Infinity,
        kinds: kinds_of(&inf),
        members: inf,
        tolerance: tol,
    });
    Grouping { groups, warnings }
}

/// Every critical point, indeterminacy point and value group of one family.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct CriticalCatalog {
    pub d: usize,
    pub critical_points: Vec<CriticalPoint>,
    pub indeterminacy: Vec<IndeterminacyPoint>,
    pub value_groups: Vec<ValueGroup>,
    pub warnings: Vec<String>,
    #[serde(skip)]
    pub failed_seeds: Vec<SeedFailure>,
}

impl CriticalCatalog {
    pub fn compute(arr: &Arrangement, opts: &NewtonOptions) -> Result<Self> {
        let mut points = saddle_points_exact(arr);
        let interior = find_interior_critical(arr, opts)?;
        points.extend(interior.points);
        for (i, p) in points.iter_mut().enumerate() {
            p.id = i;
        }
        let grouping = group_values(&points, opts.value_group_tol);
        Ok(Self {
            d: arr.d,
            critical_points: points,
            indeterminacy: indeterminacy_points(arr),
            value_groups: grouping.groups,
            warnings: grouping.warnings,
            failed_seeds: interior.failed_seeds,
        })
    }

    pub fn of_kind(&self, kind: CriticalKind) -> impl Iterator<Item = &CriticalPoint> {
        self.critical_points.iter().filter(move |p| p.kind == kind)
    }

    pub fn count(&self, kind: CriticalKind) -> usize {
        self.of_kind(kind).count()
    }

    pub fn group_of(&self, point: usize) -> usize {
        self.value_groups
            .iter()
            .position(|g| g.members.contains(&point))
            .expect("every point belongs to a value group")
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::rational::{int, rat};
    use num_traits::Zero;

    fn catalog(d: usize) -> (Arrangement, CriticalCatalog) {
        let arr = Arrangement::family(d, &Rational::zero()).unwrap();
        let cat = CriticalCatalog::compute(&arr, &NewtonOptions::default()).unwrap();
        (arr, cat)
    }

    #[test]
    fn degree_one_saddles_by_hand() {
        let arr = Arrangement::family(1, &Rational::zero()).unwrap();
        let s = saddle_points_exact(&arr);
        assert_eq!(s.len(), 2);
        assert_eq!(s[0].kind, CriticalKind::SaddleP);
        assert_eq!(s[0].exact_coords, Some((int(0), int(2))));
        assert_eq!(s[0].value, CriticalValue::Zero);
        assert_eq!(s[1].kind, CriticalKind::SaddleQ);
        assert_eq!(s[1].exact_coords, Some((int(2), int(0))));
        assert_eq!(s[1].value, CriticalValue::Infinity);
    }

    #[test]
    fn indeterminacy_counts() {
        for (d, n) in [(1, 4), (2, 9), (3, 16)] {
            let arr = Arrangement::family(d, &Rational::zero()).unwrap();
            let pts = indeterminacy_points(&arr);
            assert_eq!(pts.len(), n);
            for p in &pts {
                let on: Vec<&crate::Line> = arr
                    .lines()
                    .iter()
                    .filter(|l| l.eval(&p.point.0, &p.point.1).is_zero())
                    .collect();
                assert_eq!(on.len(), 2);
                assert_ne!(on[0].side, on[1].side);
            }
        }
        let arr = Arrangement::family(1, &Rational::zero()).unwrap();
        assert!(indeterminacy_points(&arr).iter().any(|p| p.point == (int(0), int(0))));
    }

    #[test]
    fn degree_one_mixed_saddle() {
        let (_, cat) = catalog(1);
        let s3: Vec<&CriticalPoint> = cat.of_kind(CriticalKind::Saddle3).collect();
        assert_eq!(s3.len(), 1);
        assert!((s3[0].x - 0.5).abs() < 1e-12 && (s3[0].y - 0.5).abs() < 1e-12);
        assert!(matches!(s3[0].value, CriticalValue::Finite(v) if (v - 1.0).abs() < 1e-12));
        assert_eq!(cat.count(CriticalKind::CenterP) + cat.count(CriticalKind::CenterQ), 0);
        let values: Vec<CriticalValue> = cat.value_groups.iter().map(|g| g.value).collect();
        assert_eq!(values.len(), 3);
        assert_eq!(values[0], CriticalValue::Zero);
        assert!(matches!(values[1], CriticalValue::Finite(v) if (v - 1.0).abs() < 1e-12));
        assert_eq!(values[2], CriticalValue::Infinity);
    }

    #[test]
    fn degree_two_counts_and_symmetry() {
        let (arr, cat) = catalog(2);
        assert_eq!(cat.count(CriticalKind::SaddleP), 3);
        assert_eq!(cat.count(CriticalKind::SaddleQ), 3);
        assert_eq!(cat.count(CriticalKind::CenterP), 1);
        assert_eq!(cat.count(CriticalKind::CenterQ), 1);
        assert_eq!(cat.count(CriticalKind::Saddle3), 4);
        let cp = cat.of_kind(CriticalKind::CenterP).next().unwrap();
        let cq = cat.of_kind(CriticalKind::CenterQ).next().unwrap();
        // (x, y) -> (y, x) exchanges P and Q
        assert!((cp.x - cq.y).abs() < 1e-9 && (cp.y - cq.x).abs() < 1e-9);
        let (vp, vq) = (cp.value.finite().unwrap(), cq.value.finite().unwrap());
        assert!((vp * vq - 1.0).abs() < 1e-9);
        // CenterP sits in the triangle (0,4), (0,3), (2/5, 12/5)
        let tri = &arr.p_only.bounded_faces[0];
        assert!(tri.contains(&arr.p_only.lines, cp.x, cp.y));
        assert_eq!(tri.barycenter, (rat(2, 15), rat(47, 15)));
    }

    #[test]
    fn counts_hold_through_degree_five() {
        for d in 1..=5 {
            let (arr, cat) = catalog(d);
            let n = |k| cat.count(k);
            assert_eq!(n(CriticalKind::SaddleP) + n(CriticalKind::SaddleQ), d * (d + 1));
            assert_eq!(n(CriticalKind::CenterP) + n(CriticalKind::CenterQ), d * (d - 1));
            assert_eq!(n(CriticalKind::Saddle3), d * d);
            assert_eq!(cat.critical_points.len(), 3 * d * d);
            assert_eq!(cat.indeterminacy.len(), (d + 1) * (d + 1));
            assert_eq!(cat.value_groups[0].members.len(), d * (d + 1) / 2);
            let map = RationalMap::new(arr.lines());
            for p in &cat.critical_points {
                if let Location::Face { face, .. } = p.location {
                    assert!(arr.full.bounded_faces[face].contains(arr.lines(), p.x, p.y));
                    assert!(p.residual <= 1e-12);
                    let g = map.gradient(p.x, p.y);
                    let f = map.value(p.x, p.y).abs().max(1.0);
                    assert!(g[0].hypot(g[1]) <= 1e-12 * f);
                }
                if p.kind == CriticalKind::Saddle3 {
                    if let Location::Face { face, .. } = p.location {
                        assert_eq!(arr.full.bounded_faces[face].kind, FaceKind::Alternating);
                    }
                }
            }
        }
    }

    #[test]
    fn hessian_classification_is_stable() {
        let (_, cat) = catalog(3);
        let map = RationalMap::new(&crate::arrangement::build_lines(3, &Rational::zero()).unwrap());
        for p in cat.critical_points.iter().filter(|p| !p.exact()) {
            let ev = sym_eigenvalues(map.log_hessian(p.x, p.y));
            let scale = ev[0].abs().max(ev[1].abs());
            assert!(ev[0].abs().min(ev[1].abs()) > 10.0 * 1e-12 * scale.max(1.0));
            let definite = ev[0] * ev[1] > 0.0;
            assert_eq!(definite, p.kind != CriticalKind::Saddle3);
        }
    }

    #[test]
    fn grouping_separates_zero_and_infinity() {
        let (_, cat) = catalog(3);
        let first = &cat.value_groups[0];
        let last = cat.value_groups.last().unwrap();
        assert_eq!(first.kinds, vec![CriticalKind::SaddleP]);
        assert_eq!(last.kinds, vec![CriticalKind::SaddleQ]);
        assert_eq!(last.members.len(), 6);
        for g in &cat.value_groups {
            if let CriticalValue::Finite(rep) = g.value {
                for &m in &g.members {
                    let v = cat.critical_points[m].value.finite().unwrap();
                    assert!((v - rep).abs() <= g.tolerance * rep.abs().max(v.abs()));
                }
            }
        }
    }

    #[test]
    fn nearby_values_trigger_warning() {
        let mk = |id, v| CriticalPoint {
            id,
            kind: CriticalKind::Saddle3,
            x: 0.0,
            y: 0.0,
            exact_coords: None,
            value: CriticalValue::Finite(v),
            location: Location::Face { face: 0, region: None },
            residual: 0.0,
        };
        let pts = vec![mk(0, 2.0), mk(1, 2.0 + 3e-9), mk(2, 2.0 + 5e-13), mk(3, 7.0)];
        let g = group_values(&pts, 1e-9);
        assert_eq!(g.groups.len(), 5);
        assert_eq!(g.groups[1].members, vec![0, 2]);
        assert_eq!(g.warnings.len(), 1);
    }

    #[test]
    fn value_serializes_with_markers() {
        assert_eq!(serde_json::to_string(&CriticalValue::Infinity).unwrap(), "\"inf\"");
        assert_eq!(serde_json::to_string(&CriticalValue::Zero).unwrap(), "\"0\"");
        assert_eq!(serde_json::to_string(&CriticalValue::Finite(1.5)).unwrap(), "1.5");
    }
}
