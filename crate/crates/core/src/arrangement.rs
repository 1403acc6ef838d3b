//! Exact planar arrangement of the line family `R_k`.
//!
//! Lines live in the affine chart `z = 1` as `a·x + b·y + c = 0` with rational
//! coefficients. The subdivision is built by walking half-edges: every bounded
//! face of a simple arrangement is a convex polygon traversed counterclockwise
//! by always turning left onto the other line through each vertex.

use std::collections::{BTreeMap, HashMap};

use num_traits::{One, Zero};
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::rational::{self, int, Rational};

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
pub enum Side {
    P,
    Q,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct Line {
    pub k: usize,
    pub side: Side,
    #[serde(with = "rational")]
    pub a: Rational,
    #[serde(with = "rational")]
    pub b: Rational,
    #[serde(with = "rational")]
    pub c: Rational,
}

impl Line {
    pub fn new(k: usize, side: Side, a: Rational, b: Rational, c: Rational) -> Result<Self> {
        if a.is_zero() && b.is_zero() {
            return Err(Error::InvalidParameter(format!(
                "line {k} has vanishing linear part"
            )));
        }
        Ok(Self { k, side, a, b, c })
    }

    pub fn eval(&self, x: &Rational, y: &Rational) -> Rational {
        &self.a * x + &self.b * y + &self.c
    }

    pub fn coeffs_f64(&self) -> [f64; 3] {
        [
            rational::to_f64(&self.a),
            rational::to_f64(&self.b),
            rational::to_f64(&self.c),
        ]
    }

    /// Direction vector `(-b, a)`.
    fn direction(&self) -> (Rational, Rational) {
        (-self.b.clone(), self.a.clone())
    }

    fn param(&self, p: &(Rational, Rational)) -> Rational {
        -&self.b * &p.0 + &self.a * &p.1
    }
}

/// Lines `R_k = (2d+1-k)x + ky - k(2d+1-k)` for `k = 0..=2d+1`; when `epsilon`
/// is nonzero the last line becomes `(2d+1)y + epsilon`.
pub fn build_lines(d: usize, epsilon: &Rational) -> Result<Vec<Line>> {
    if d < 1 {
        return Err(Error::InvalidParameter(format!("degree d = {d} must be >= 1")));
    }
    let m = 2 * d as i64 + 1;
    (0..=2 * d + 1)
        .map(|k| {
            let ki = k as i64;
            let side = if k <= d { Side::P } else { Side::Q };
            if k == 2 * d + 1 && !epsilon.is_zero() {
                Line::new(k, side, int(0), int(m), epsilon.clone())
            } else {
                Line::new(k, side, int(m - ki), int(ki), int(-ki * (m - ki)))
            }
        })
        .collect()
}

/// Exact solution of the 2×2 system for two non-parallel lines.
pub fn intersect(l1: &Line, l2: &Line) -> Result<(Rational, Rational)> {
    let det = &l1.a * &l2.b - &l2.a * &l1.b;
    if det.is_zero() {
        return Err(Error::DegenerateIntersection(l1.k, l2.k));
    }
    let x = (&l1.b * &l2.c - &l2.b * &l1.c) / &det;
    let y = (&l1.c * &l2.a - &l2.c * &l1.a) / &det;
    Ok((x, y))
}

#[derive(Clone, Debug, Default, PartialEq, Eq, Serialize, Deserialize)]
pub struct GenericityReport {
    pub parallel_pairs: Vec<(usize, usize)>,
    pub concurrent_triples: Vec<(usize, usize, usize)>,
}

impl GenericityReport {
    pub fn is_generic(&self) -> bool {
        self.parallel_pairs.is_empty() && self.concurrent_triples.is_empty()
    }
}

/// Reports parallel pairs and concurrent triples by line index `k`.
pub fn genericity_check(lines: &[Line]) -> GenericityReport {
    let mut report = GenericityReport::default();
    let n = lines.len();
    let mut points: HashMap<(usize, usize), (Rational, Rational)> = HashMap::new();
    for i in 0..n {
        for j in i + 1..n {
            match intersect(&lines[i], &lines[j]) {
                Ok(p) => {
                    points.insert((i, j), p);
                }
                Err(_) => report.parallel_pairs.push((lines[i].k, lines[j].k)),
            }
        }
    }
    for i in 0..n {
        for j in i + 1..n {
            let Some(p) = points.get(&(i, j)) else { continue };
            for l in j + 1..n {
                if points.contains_key(&(i, l))
                    && points.contains_key(&(j, l))
                    && lines[l].eval(&p.0, &p.1).is_zero()
                {
                    report
                        .concurrent_triples
                        .push((lines[i].k, lines[j].k, lines[l].k));
                }
            }
        }
    }
    report
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct Vertex {
    #[serde(with = "rational::point")]
    pub point: (Rational, Rational),
    /// Incident line indices `k`, ascending.
    pub lines: Vec<usize>,
}

/// A segment or ray of one line; `None` endpoints are unbounded. Oriented
/// along the line direction `(-b, a)`.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct Edge {
    pub line: usize,
    pub start: Option<usize>,
    pub end: Option<usize>,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub enum FaceKind {
    /// Every side lies on a P-line.
    POnly,
    /// Every side lies on a Q-line.
    QOnly,
    /// P and Q sides alternate at least twice around the boundary.
    Alternating,
    /// One run of P sides and one run of Q sides.
    Split,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct Face {
    /// Vertex indices, counterclockwise.
    pub vertices: Vec<usize>,
    /// `edges[i]` joins `vertices[i]` to `vertices[i + 1]`.
    pub edges: Vec<usize>,
    /// Line index `k` supporting each boundary edge.
    pub edge_lines: Vec<usize>,
    /// Distinct bounding line indices, ascending.
    pub lines: Vec<usize>,
    #[serde(with = "rational::point")]
    pub barycenter: (Rational, Rational),
    pub p_sign: i32,
    pub q_sign: i32,
    pub kind: FaceKind,
}

impl Face {
    /// Strict interior test against the supporting lines.
    pub fn contains(&self, lines: &[Line], x: f64, y: f64) -> bool {
        self.interior_margin(lines, x, y) > 0.0
    }

    /// Minimum signed distance from `(x, y)` to the boundary lines, positive
    /// inside.
    pub fn interior_margin(&self, lines: &[Line], x: f64, y: f64) -> f64 {
        let bx = rational::to_f64(&self.barycenter.0);
        let by = rational::to_f64(&self.barycenter.1);
        self.lines
            .iter()
            .map(|&k| {
                let line = lines.iter().find(|l| l.k == k).expect("face line in family");
                let [a, b, c] = line.coeffs_f64();
                let norm = a.hypot(b);
                let inside = (a * bx + b * by + c).signum();
                inside * (a * x + b * y + c) / norm
            })
            .fold(f64::INFINITY, f64::min)
    }

    pub fn contains_exact(&self, lines: &[Line], p: &(Rational, Rational)) -> bool {
        self.lines.iter().all(|&k| {
            let line = lines.iter().find(|l| l.k == k).expect("face line in family");
            let inside = rational::sign(&line.eval(&self.barycenter.0, &self.barycenter.1));
            rational::sign(&line.eval(&p.0, &p.1)) == inside
        })
    }
}

/// Vertices, edges and bounded faces cut out by a set of lines.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct Subdivision {
    pub lines: Vec<Line>,
    pub vertices: Vec<Vertex>,
    pub edges: Vec<Edge>,
    pub bounded_faces: Vec<Face>,
}

impl Subdivision {
    pub fn line(&self, k: usize) -> &Line {
        self.lines.iter().find(|l| l.k == k).expect("line index present")
    }

    /// Vertex index at the crossing of lines `k1` and `k2`.
    pub fn vertex_of(&self, k1: usize, k2: usize) -> Option<usize> {
        self.vertices
            .iter()
            .position(|v| v.lines.contains(&k1) && v.lines.contains(&k2))
    }

    /// Faces sharing at least one edge with face `i`.
    pub fn adjacent_faces(&self, i: usize) -> Vec<usize> {
        let edges = &self.bounded_faces[i].edges;
        (0..self.bounded_faces.len())
            .filter(|&j| j != i && self.bounded_faces[j].edges.iter().any(|e| edges.contains(e)))
            .collect()
    }
}

fn cross(u: &(Rational, Rational), v: &(Rational, Rational)) -> Rational {
    &u.0 * &v.1 - &u.1 * &v.0
}

fn product_sign(lines: &[Line], side: Side, p: &(Rational, Rational)) -> i32 {
    lines
        .iter()
        .filter(|l| l.side == side)
        .map(|l| rational::sign(&l.eval(&p.0, &p.1)))
        .product()
}

/// Builds the subdivision of `lines`. Face sign data (`p_sign`, `q_sign`) is
/// evaluated with the products over `family`.
pub fn build_subdivision(lines: &[Line], family: &[Line]) -> Result<Subdivision> {
    let n = lines.len();
    let mut by_point: BTreeMap<(Rational, Rational), Vec<usize>> = BTreeMap::new();
    for i in 0..n {
        for j in i + 1..n {
            let p = intersect(&lines[i], &lines[j])?;
            let entry = by_point.entry(p).or_default();
            for k in [lines[i].k, lines[j].k] {
                if !entry.contains(&k) {
                    entry.push(k);
                }
            }
        }
    }
    let mut vertices = Vec::with_capacity(by_point.len());
    for (point, mut ks) in by_point {
        if ks.len() > 2 {
            return Err(Error::GenericityViolation(format!(
                "lines {ks:?} are concurrent at ({}, {})",
                rational::format(&point.0),
                rational::format(&point.1)
            )));
        }
        ks.sort_unstable();
        vertices.push(Vertex { point, lines: ks });
    }

    // Vertices along each line, sorted by the line parameter.
    let mut along: Vec<Vec<usize>> = lines
        .iter()
        .map(|l| {
            (0..vertices.len())
                .filter(|&v| vertices[v].lines.contains(&l.k))
                .collect()
        })
        .collect();
    for (li, vs) in along.iter_mut().enumerate() {
        let line = &lines[li];
        vs.sort_by(|&u, &w| line.param(&vertices[u].point).cmp(&line.param(&vertices[w].point)));
    }

    let mut edges = Vec::new();
    // segment_edge[(li, pos)] = edge index between along[li][pos] and along[li][pos + 1]
    let mut segment_edge: HashMap<(usize, usize), usize> = HashMap::new();
    for (li, vs) in along.iter().enumerate() {
        let k = lines[li].k;
        edges.push(Edge { line: k, start: None, end: vs.first().copied() });
        for pos in 0..vs.len().saturating_sub(1) {
            segment_edge.insert((li, pos), edges.len());
            edges.push(Edge { line: k, start: Some(vs[pos]), end: Some(vs[pos + 1]) });
        }
        edges.push(Edge { line: k, start: vs.last().copied(), end: None });
    }

    let line_pos = |k: usize| lines.iter().position(|l| l.k == k).expect("line present");
    // Half-edge = (line position, segment position, forward?)
    type HalfEdge = (usize, usize, bool);
    let next_half_edge = |h: HalfEdge| -> Option<HalfEdge> {
        let (li, pos, fwd) = h;
        let line = &lines[li];
        let head = if fwd { along[li][pos + 1] } else { along[li][pos] };
        let mut dir = line.direction();
        if !fwd {
            dir = (-dir.0, -dir.1);
        }
        let other_k = *vertices[head].lines.iter().find(|&&k| k != line.k)?;
        let mi = line_pos(other_k);
        let mdir = lines[mi].direction();
        let forward_m = rational::sign(&cross(&dir, &mdir)) > 0;
        let idx = along[mi].iter().position(|&v| v == head)?;
        if forward_m {
            (idx + 1 < along[mi].len()).then_some((mi, idx, true))
        } else {
            (idx > 0).then(|| (mi, idx - 1, false))
        }
    };

    let mut seen: HashMap<HalfEdge, ()> = HashMap::new();
    let mut bounded_faces = Vec::new();
    for li in 0..n {
        for pos in 0..along[li].len().saturating_sub(1) {
            for fwd in [true, false] {
                let start: HalfEdge = (li, pos, fwd);
                if seen.contains_key(&start) {
                    continue;
                }
                let mut cycle = vec![start];
                let mut cur = start;
                let closed = loop {
                    match next_half_edge(cur) {
                        None => break false,
                        Some(h) if h == start => break true,
                        Some(h) => {
                            if cycle.len() > 2 * edges.len() {
                                break false;
                            }
                            cycle.push(h);
                            cur = h;
                        }
                    }
                };
                for h in &cycle {
                    seen.insert(*h, ());
                }
                if !closed {
                    continue;
                }
                let face_vertices: Vec<usize> = cycle
                    .iter()
                    .map(|&(l, p, f)| if f { along[l][p] } else { along[l][p + 1] })
                    .collect();
                let face_edges: Vec<usize> =
                    cycle.iter().map(|&(l, p, _)| segment_edge[&(l, p)]).collect();
                let edge_lines: Vec<usize> = cycle.iter().map(|&(l, _, _)| lines[l].k).collect();
                bounded_faces.push(make_face(
                    lines,
                    family,
                    &vertices,
                    face_vertices,
                    face_edges,
                    edge_lines,
                )?);
            }
        }
    }
    Ok(Subdivision { lines: lines.to_vec(), vertices, edges, bounded_faces })
}

fn make_face(
    lines: &[Line],
    family: &[Line],
    vertices: &[Vertex],
    face_vertices: Vec<usize>,
    edges: Vec<usize>,
    edge_lines: Vec<usize>,
) -> Result<Face> {
    let count = int(face_vertices.len() as i64);
    let mut bx = Rational::zero();
    let mut by = Rational::zero();
    for &v in &face_vertices {
        bx += &vertices[v].point.0;
        by += &vertices[v].point.1;
    }
    let mut barycenter = (bx / &count, by / &count);
    let on_line = |p: &(Rational, Rational)| {
        lines.iter().chain(family).any(|l| l.eval(&p.0, &p.1).is_zero())
    };
    if on_line(&barycenter) {
        barycenter = area_centroid(vertices, &face_vertices);
        if on_line(&barycenter) {
            return Err(Error::GenericityViolation(
                "no interior rational point found for face".into(),
            ));
        }
    }

    let sides: Vec<Side> = edge_lines
        .iter()
        .map(|&k| lines.iter().find(|l| l.k == k).expect("edge line").side)
        .collect();
    let changes = (0..sides.len())
        .filter(|&i| sides[i] != sides[(i + 1) % sides.len()])
        .count();
    let kind = match (changes, sides[0]) {
        (0, Side::P) => FaceKind::POnly,
        (0, Side::Q) => FaceKind::QOnly,
        (2, _) => FaceKind::Split,
        _ => FaceKind::Alternating,
    };
    let mut face_lines = edge_lines.clone();
    face_lines.sort_unstable();
    face_lines.dedup();

    Ok(Face {
        p_sign: product_sign(family, Side::P, &barycenter),
        q_sign: product_sign(family, Side::Q, &barycenter),
        vertices: face_vertices,
        edges,
        edge_lines,
        lines: face_lines,
        barycenter,
        kind,
    })
}

/// Centroid of the fan triangulation from the first vertex.
fn area_centroid(vertices: &[Vertex], face: &[usize]) -> (Rational, Rational) {
    let p0 = &vertices[face[0]].point;
    let mut area = Rational::zero();
    let mut cx = Rational::zero();
    let mut cy = Rational::zero();
    for w in face[1..].windows(2) {
        let p1 = &vertices[w[0]].point;
        let p2 = &vertices[w[1]].point;
        let u = (&p1.0 - &p0.0, &p1.1 - &p0.1);
        let v = (&p2.0 - &p0.0, &p2.1 - &p0.1);
        let a = cross(&u, &v);
        cx += &a * (&p0.0 + &p1.0 + &p2.0);
        cy += &a * (&p0.1 + &p1.1 + &p2.1);
        area += a;
    }
    let three = int(3);
    (cx / (&area * &three), cy / (&area * &three))
}

/// The full arrangement of the family together with the P-only and Q-only
/// sub-arrangements.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct Arrangement {
    pub d: usize,
    #[serde(with = "rational")]
    pub epsilon: Rational,
    #[serde(flatten)]
    pub full: Subdivision,
    pub p_only: Subdivision,
    pub q_only: Subdivision,
}

impl Arrangement {
    pub fn family(d: usize, epsilon: &Rational) -> Result<Self> {
        build_arrangement(&build_lines(d, epsilon)?)
    }

    pub fn lines(&self) -> &[Line] {
        &self.full.lines
    }

    pub fn side_lines(&self, side: Side) -> impl Iterator<Item = &Line> {
        self.full.lines.iter().filter(move |l| l.side == side)
    }

    pub fn sub(&self, side: Side) -> &Subdivision {
        match side {
            Side::P => &self.p_only,
            Side::Q => &self.q_only,
        }
    }

    pub fn genericity(&self) -> GenericityReport {
        genericity_check(self.lines())
    }
}

/// Builds the arrangement of a family `R_0..R_{2d+1}` (as returned by
/// [`build_lines`]).
pub fn build_arrangement(lines: &[Line]) -> Result<Arrangement> {
    let n = lines.len();
    if n < 4 || !n.is_multiple_of(2) {
        return Err(Error::InvalidParameter(format!(
            "family needs an even number >= 4 of lines, got {n}"
        )));
    }
    let d = n / 2 - 1;
    for (i, l) in lines.iter().enumerate() {
        let expected = if i <= d { Side::P } else { Side::Q };
        if l.k != i || l.side != expected {
            return Err(Error::InvalidParameter(format!(
                "line at position {i} has k = {} side {:?}",
                l.k, l.side
            )));
        }
    }
    let report = genericity_check(lines);
    if !report.is_generic() {
        return Err(Error::GenericityViolation(format!(
            "parallel {:?}, concurrent {:?}",
            report.parallel_pairs, report.concurrent_triples
        )));
    }
    let last = &lines[n - 1];
    let epsilon = if last.a.is_zero() { last.c.clone() } else { Rational::zero() };
    let p_lines: Vec<Line> = lines.iter().filter(|l| l.side == Side::P).cloned().collect();
    let q_lines: Vec<Line> = lines.iter().filter(|l| l.side == Side::Q).cloned().collect();
    Ok(Arrangement {
        d,
        epsilon,
        full: build_subdivision(lines, lines)?,
        p_only: build_subdivision(&p_lines, lines)?,
        q_only: build_subdivision(&q_lines, lines)?,
    })
}

/// Exact value of `P` (or `Q`) at a rational point.
pub fn side_product(lines: &[Line], side: Side, p: &(Rational, Rational)) -> Rational {
    lines
        .iter()
        .filter(|l| l.side == side)
        .fold(Rational::one(), |acc, l| acc * l.eval(&p.0, &p.1))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::rational::rat;

    fn binom2(n: usize) -> usize {
        n * (n - 1) / 2
    }

    #[test]
    fn degree_one_family_matches_worked_example() {
        let lines = build_lines(1, &Rational::zero()).unwrap();
        let coeffs: Vec<[i64; 3]> = vec![[3, 0, 0], [2, 1, -2], [1, 2, -2], [0, 3, 0]];
        for (l, c) in lines.iter().zip(coeffs) {
            assert_eq!((l.a.clone(), l.b.clone(), l.c.clone()), (int(c[0]), int(c[1]), int(c[2])));
        }
        assert_eq!(lines.iter().filter(|l| l.side == Side::P).count(), 2);
    }

    #[test]
    fn degree_two_line_one() {
        let lines = build_lines(2, &Rational::zero()).unwrap();
        assert_eq!(lines.len(), 6);
        assert_eq!((lines[1].a.clone(), lines[1].b.clone(), lines[1].c.clone()), (int(4), int(1), int(-4)));
    }

    #[test]
    fn perturbed_last_line() {
        let lines = build_lines(1, &rat(1, 10)).unwrap();
        let last = lines.last().unwrap();
        assert_eq!((last.a.clone(), last.b.clone(), last.c.clone()), (int(0), int(3), rat(1, 10)));
    }

    #[test]
    fn rejects_degree_zero() {
        assert!(matches!(build_lines(0, &Rational::zero()), Err(Error::InvalidParameter(_))));
    }

    #[test]
    fn intersections_by_hand() {
        let l1 = build_lines(1, &Rational::zero()).unwrap();
        assert_eq!(intersect(&l1[1], &l1[2]).unwrap(), (rat(2, 3), rat(2, 3)));
        assert_eq!(intersect(&l1[0], &l1[3]).unwrap(), (int(0), int(0)));
        let l2 = build_lines(2, &Rational::zero()).unwrap();
        assert_eq!(intersect(&l2[1], &l2[2]).unwrap(), (rat(2, 5), rat(12, 5)));
        assert_eq!(intersect(&l2[0], &l2[5]).unwrap(), (int(0), int(0)));
    }

    #[test]
    fn parallel_intersection_errors() {
        let a = Line::new(0, Side::P, int(1), int(1), int(0)).unwrap();
        let b = Line::new(1, Side::P, int(2), int(2), int(5)).unwrap();
        assert_eq!(intersect(&a, &b), Err(Error::DegenerateIntersection(0, 1)));
    }

    #[test]
    fn degree_one_arrangement() {
        let arr = Arrangement::family(1, &Rational::zero()).unwrap();
        assert_eq!(arr.full.vertices.len(), 6);
        // Four generic lines bound (4-1)(4-2)/2 = 3 faces: two triangles and
        // the alternating quadrilateral (0,0),(1,0),(2/3,2/3),(0,1).
        assert_eq!(arr.full.bounded_faces.len(), 3);
        let alternating: Vec<&Face> = arr
            .full
            .bounded_faces
            .iter()
            .filter(|f| f.kind == FaceKind::Alternating)
            .collect();
        assert_eq!(alternating.len(), 1);
        let quad = alternating[0];
        assert_eq!(quad.vertices.len(), 4);
        assert_eq!(quad.barycenter, (rat(5, 12), rat(5, 12)));
        assert!(arr.p_only.bounded_faces.is_empty());
        assert!(arr.q_only.bounded_faces.is_empty());
    }

    #[test]
    fn degree_two_sub_arrangements_have_one_triangle_each() {
        let arr = Arrangement::family(2, &Rational::zero()).unwrap();
        assert_eq!(arr.full.vertices.len(), 15);
        assert_eq!(arr.p_only.bounded_faces.len(), 1);
        assert_eq!(arr.q_only.bounded_faces.len(), 1);
        let tri = &arr.p_only.bounded_faces[0];
        let mut pts: Vec<(Rational, Rational)> =
            tri.vertices.iter().map(|&v| arr.p_only.vertices[v].point.clone()).collect();
        pts.sort();
        assert_eq!(pts, vec![(int(0), int(3)), (int(0), int(4)), (rat(2, 5), rat(12, 5))]);
    }

    #[test]
    fn faces_are_counterclockwise_and_barycenters_interior() {
        for d in 1..=4 {
            let arr = Arrangement::family(d, &Rational::zero()).unwrap();
            for sub in [&arr.full, &arr.p_only, &arr.q_only] {
                for f in &sub.bounded_faces {
                    let pts: Vec<&(Rational, Rational)> =
                        f.vertices.iter().map(|&v| &sub.vertices[v].point).collect();
                    let mut twice_area = Rational::zero();
                    for i in 0..pts.len() {
                        let (p, q) = (pts[i], pts[(i + 1) % pts.len()]);
                        twice_area += &p.0 * &q.1 - &q.0 * &p.1;
                    }
                    assert!(rational::sign(&twice_area) > 0);
                    assert!(f.contains_exact(&sub.lines, &f.barycenter));
                    assert_ne!(f.p_sign, 0);
                    assert_ne!(f.q_sign, 0);
                }
            }
        }
    }

    #[test]
    fn counts_for_small_degrees() {
        for d in 1..=5 {
            let arr = Arrangement::family(d, &Rational::zero()).unwrap();
            let n = 2 * d + 2;
            assert_eq!(arr.full.vertices.len(), binom2(n));
            assert_eq!(arr.full.bounded_faces.len(), binom2(n - 1));
            assert_eq!(arr.p_only.bounded_faces.len(), d * (d - 1) / 2);
            assert_eq!(arr.q_only.bounded_faces.len(), d * (d - 1) / 2);
            assert_eq!(arr.p_only.vertices.len(), d * (d + 1) / 2);
            assert!(arr.genericity().is_generic());
        }
    }

    #[test]
    fn family_lines_pass_through_axis_intercepts() {
        for d in 1..=5 {
            let lines = build_lines(d, &Rational::zero()).unwrap();
            for (k, l) in lines.iter().enumerate().take(2 * d + 1).skip(1) {
                assert!(l.eval(&int(k as i64), &int(0)).is_zero());
                assert!(l.eval(&int(0), &int((2 * d + 1 - k) as i64)).is_zero());
            }
        }
    }

    #[test]
    fn genericity_reports_duplicates_and_concurrency() {
        let mut lines = build_lines(2, &Rational::zero()).unwrap();
        let dup = Line { k: 6, ..lines[2].clone() };
        lines.push(dup);
        let report = genericity_check(&lines);
        assert_eq!(report.parallel_pairs, vec![(2, 6)]);

        let x = Line::new(0, Side::P, int(1), int(0), int(0)).unwrap();
        let y = Line::new(1, Side::P, int(0), int(1), int(0)).unwrap();
        let xy = Line::new(2, Side::Q, int(1), int(1), int(0)).unwrap();
        let report = genericity_check(&[x, y, xy]);
        assert!(report.parallel_pairs.is_empty());
        assert_eq!(report.concurrent_triples, vec![(0, 1, 2)]);
    }

    #[test]
    fn concurrent_family_is_rejected() {
        let mut lines = build_lines(1, &Rational::zero()).unwrap();
        // move R_3 through R_1 ∩ R_2 = (2/3, 2/3)
        lines[3] = Line::new(3, Side::Q, int(0), int(3), int(-2)).unwrap();
        assert!(matches!(build_arrangement(&lines), Err(Error::GenericityViolation(_))));
    }

    #[test]
    fn small_perturbation_keeps_counts() {
        for d in 1..=4 {
            let arr = Arrangement::family(d, &rat(1, 1000)).unwrap();
            assert_eq!(arr.full.vertices.len(), binom2(2 * d + 2));
            assert_eq!(arr.q_only.bounded_faces.len(), d * (d - 1) / 2);
            assert_eq!(arr.epsilon, rat(1, 1000));
        }
    }

    #[test]
    fn json_uses_rational_strings() {
        let arr = Arrangement::family(1, &rat(1, 10)).unwrap();
        let v = serde_json::to_value(&arr).unwrap();
        assert_eq!(v["epsilon"], "1/10");
        assert_eq!(v["lines"][3]["c"], "1/10");
        assert_eq!(v["lines"][1]["side"], "P");
        assert_eq!(v["lines"][1]["a"], "2/1");
        assert!(v["vertices"].is_array());
        assert!(v["bounded_faces"].is_array());
        let back: Arrangement = serde_json::from_value(v).unwrap();
        assert_eq!(back, arr);
    }
}
