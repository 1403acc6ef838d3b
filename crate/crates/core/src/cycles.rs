//! Vanishing-cycle catalog and the intersection form on cycle-symbol space.
//!
//! Cycles are ordered in five blocks: saddles of `P`, regions of `P`, saddles
//! of `Q`, regions of `Q`, and the mixed saddles. Only the region–saddle and
//! region–region entries inside one side are nonzero.

use std::fmt;

use num_traits::{One, Zero};
use serde::{Deserialize, Serialize};

use crate::arrangement::{Arrangement, Side};
use crate::critical::{CriticalCatalog, CriticalKind, CriticalValue, Location};
use crate::error::{Error, Result};
use crate::linalg::{self, IntMatrix};
use crate::rational::{self, Rational};

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum Symbol {
    /// `δ^P_i`, vanishing at a crossing of two P-lines.
    SaddleP(usize),
    /// `Δ^P_j`, vanishing at the extremum inside a P-region.
    RegionP(usize),
    SaddleQ(usize),
    RegionQ(usize),
    /// `σ_k`, vanishing at a mixed saddle.
    Mixed(usize),
}

impl Symbol {
    pub fn side(self) -> Option<Side> {
        match self {
            Self::SaddleP(_) | Self::RegionP(_) => Some(Side::P),
            Self::SaddleQ(_) | Self::RegionQ(_) => Some(Side::Q),
            Self::Mixed(_) => None,
        }
    }

    pub fn is_region(self) -> bool {
        matches!(self, Self::RegionP(_) | Self::RegionQ(_))
    }

    pub fn is_saddle(self) -> bool {
        matches!(self, Self::SaddleP(_) | Self::SaddleQ(_))
    }
}

impl fmt::Display for Symbol {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Self::SaddleP(i) => write!(f, "deltaP_{i}"),
            Self::RegionP(j) => write!(f, "DeltaP_{j}"),
            Self::SaddleQ(i) => write!(f, "deltaQ_{i}"),
            Self::RegionQ(j) => write!(f, "DeltaQ_{j}"),
            Self::Mixed(k) => write!(f, "sigma_{k}"),
        }
    }
}

impl Serialize for Symbol {
    fn serialize<S: serde::Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
        s.collect_str(self)
    }
}

#[derive(Clone, Debug, PartialEq, Serialize)]
#[serde(rename_all = "snake_case")]
pub enum Site {
    Vertex([usize; 2]),
    Region(usize),
    Interior,
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct VanishingCycle {
    pub id: usize,
    pub symbol: Symbol,
    pub critical_point: usize,
    pub value_group: usize,
    pub site: Site,
}

/// Coefficients on the cycle symbols.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct CycleVector(pub Vec<Rational>);

impl CycleVector {
    pub fn basis(n: usize, i: usize) -> Self {
        let mut v = vec![Rational::zero(); n];
        v[i] = Rational::one();
        Self(v)
    }
}

impl Serialize for CycleVector {
    fn serialize<S: serde::Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
        s.collect_seq(self.0.iter().map(rational::format))
    }
}

impl<'de> Deserialize<'de> for CycleVector {
    fn deserialize<D: serde::Deserializer<'de>>(d: D) -> std::result::Result<Self, D::Error> {
        let raw = Vec::<String>::deserialize(d)?;
        raw.iter()
            .map(|s| rational::parse(s))
            .collect::<Result<Vec<_>>>()
            .map(CycleVector)
            .map_err(serde::de::Error::custom)
    }
}

/// Order of the crossings on one side: along the first line against the
/// others from the far end, then the next line, and so on. For `P` this walks
/// `R_0 ∩ R_d, R_0 ∩ R_{d-1}, …, R_0 ∩ R_1, R_1 ∩ R_d, …`; the `Q` order is
/// its image under `k ↦ 2d+1-k`.
pub fn saddle_order(d: usize, side: Side) -> Vec<[usize; 2]> {
    let mirror = |k: usize| match side {
        Side::P => k,
        Side::Q => 2 * d + 1 - k,
    };
    let mut out = Vec::with_capacity(d * (d + 1) / 2);
    for a in 0..d {
        for b in (a + 1..=d).rev() {
            let (x, y) = (mirror(a), mirror(b));
            out.push([x.min(y), x.max(y)]);
        }
    }
    out
}

/// Region order: P-regions by barycenter `(x, y)`, Q-regions by `(y, x)`, so
/// that the swap `(x, y) ↦ (y, x)` maps `Δ^P_j` to `Δ^Q_j`.
pub fn region_order(arr: &Arrangement, side: Side) -> Vec<usize> {
    let faces = &arr.sub(side).bounded_faces;
    let mut idx: Vec<usize> = (0..faces.len()).collect();
    idx.sort_by(|&a, &b| {
        let (pa, pb) = (&faces[a].barycenter, &faces[b].barycenter);
        match side {
            Side::P => (&pa.0, &pa.1).cmp(&(&pb.0, &pb.1)),
            Side::Q => (&pa.1, &pa.0).cmp(&(&pb.1, &pb.0)),
        }
    });
    idx
}

pub fn enumerate_cycles(arr: &Arrangement, cat: &CriticalCatalog) -> Result<Vec<VanishingCycle>> {
    let d = arr.d;
    let mut cycles = Vec::with_capacity(3 * d * d);
    let push = |cycles: &mut Vec<VanishingCycle>, symbol, point: usize, site| {
        cycles.push(VanishingCycle {
            id: cycles.len(),
            symbol,
            critical_point: point,
            value_group: cat.group_of(point),
            site,
        });
    };
    for side in [Side::P, Side::Q] {
        let (saddle_kind, center_kind) = match side {
            Side::P => (CriticalKind::SaddleP, CriticalKind::CenterP),
            Side::Q => (CriticalKind::SaddleQ, CriticalKind::CenterQ),
        };
        for (i, pair) in saddle_order(d, side).into_iter().enumerate() {
            let point = cat
                .of_kind(saddle_kind)
                .find(|p| p.location == Location::Vertex { lines: pair })
                .ok_or_else(|| {
                    Error::CountMismatch(format!("no {saddle_kind:?} at lines {pair:?}"))
                })?;
            let symbol = match side {
                Side::P => Symbol::SaddleP(i + 1),
                Side::Q => Symbol::SaddleQ(i + 1),
            };
            push(&mut cycles, symbol, point.id, Site::Vertex(pair));
        }
        for (j, region) in region_order(arr, side).into_iter().enumerate() {
            let centers: Vec<_> = cat
                .of_kind(center_kind)
                .filter(|p| matches!(p.location, Location::Face { region: Some(r), .. } if r == region))
                .collect();
            if centers.len() != 1 {
                return Err(Error::CountMismatch(format!(
                    "{side:?} region {region} carries {} centers",
                    centers.len()
                )));
            }
            let symbol = match side {
                Side::P => Symbol::RegionP(j + 1),
                Side::Q => Symbol::RegionQ(j + 1),
            };
            push(&mut cycles, symbol, centers[0].id, Site::Region(region));
        }
    }
    let mut mixed: Vec<_> = cat.of_kind(CriticalKind::Saddle3).collect();
    mixed.sort_by(|a, b| a.x.total_cmp(&b.x).then(a.y.total_cmp(&b.y)));
    for (k, p) in mixed.into_iter().enumerate() {
        push(&mut cycles, Symbol::Mixed(k + 1), p.id, Site::Interior);
    }
    if cycles.len() != 3 * d * d {
        return Err(Error::CountMismatch(format!(
            "{} vanishing cycles, expected {}",
            cycles.len(),
            3 * d * d
        )));
    }
    Ok(cycles)
}

/// Skew-symmetric integer intersection matrix with its row/column labels.
#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct SkewIntMatrix {
    pub symbols: Vec<Symbol>,
    pub entries: IntMatrix,
}

impl SkewIntMatrix {
    pub fn n(&self) -> usize {
        self.symbols.len()
    }

    pub fn get(&self, i: usize, j: usize) -> i64 {
        self.entries.get(i, j)
    }

    pub fn is_antisymmetric(&self) -> bool {
        let n = self.n();
        (0..n).all(|i| (0..n).all(|j| self.get(i, j) == -self.get(j, i)))
    }

    pub fn block_indices(&self, block: Block) -> Vec<usize> {
        (0..self.n())
            .filter(|&i| match block {
                Block::Full => true,
                Block::P => self.symbols[i].side() == Some(Side::P),
                Block::Q => self.symbols[i].side() == Some(Side::Q),
            })
            .collect()
    }

    /// Header row of symbols followed by one row of entries per cycle.
    pub fn to_csv(&self) -> String {
        let mut out = String::new();
        let header: Vec<String> = self.symbols.iter().map(Symbol::to_string).collect();
        out.push_str(&header.join(","));
        out.push('\n');
        for i in 0..self.n() {
            let row: Vec<String> = self.entries.row(i).iter().map(i64::to_string).collect();
            out.push_str(&row.join(","));
            out.push('\n');
        }
        out
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Block {
    P,
    Q,
    Full,
}

/// Orientation of a shared-edge pairing `⟨Δ_{j1}, Δ_{j2}⟩` for `j1 < j2`:
/// `+1` when the region with the smaller cycle id has positive `P` (or `Q`)
/// at its barycenter.
pub fn region_pair_sign(smaller_region_sign: i32) -> i64 {
    if smaller_region_sign > 0 {
        1
    } else {
        -1
    }
}

pub fn build_intersection_matrix(arr: &Arrangement, cycles: &[VanishingCycle]) -> SkewIntMatrix {
    let n = cycles.len();
    let mut m = IntMatrix::zeros(n, n);
    for side in [Side::P, Side::Q] {
        let sub = arr.sub(side);
        let of_side = |c: &&VanishingCycle| c.symbol.side() == Some(side);
        let regions: Vec<&VanishingCycle> =
            cycles.iter().filter(of_side).filter(|c| c.symbol.is_region()).collect();
        let saddles: Vec<&VanishingCycle> =
            cycles.iter().filter(of_side).filter(|c| c.symbol.is_saddle()).collect();
        for r in &regions {
            let Site::Region(fi) = r.site else { continue };
            let face = &sub.bounded_faces[fi];
            for s in &saddles {
                let Site::Vertex(pair) = s.site else { continue };
                let on_boundary = face
                    .vertices
                    .iter()
                    .any(|&v| sub.vertices[v].lines == pair[..]);
                if on_boundary {
                    m.set(r.id, s.id, 1);
                    m.set(s.id, r.id, -1);
                }
            }
        }
        for (a, r1) in regions.iter().enumerate() {
            for r2 in &regions[a + 1..] {
                let (Site::Region(f1), Site::Region(f2)) = (&r1.site, &r2.site) else { continue };
                let (face1, face2) = (&sub.bounded_faces[*f1], &sub.bounded_faces[*f2]);
                if face1.edges.iter().any(|e| face2.edges.contains(e)) {
                    let (lo, hi, lo_face) =
                        if r1.id < r2.id { (r1.id, r2.id, face1) } else { (r2.id, r1.id, face2) };
                    let sign = match side {
                        Side::P => lo_face.p_sign,
                        Side::Q => lo_face.q_sign,
                    };
                    let v = region_pair_sign(sign);
                    m.set(lo, hi, v);
                    m.set(hi, lo, -v);
                }
            }
        }
    }
    SkewIntMatrix { symbols: cycles.iter().map(|c| c.symbol).collect(), entries: m }
}

/// Exact rank of a diagonal block (or the whole matrix).
pub fn rank_of_block(psi: &SkewIntMatrix, block: Block) -> usize {
    let idx = psi.block_indices(block);
    let rows: Vec<Vec<num_bigint::BigInt>> = idx
        .iter()
        .map(|&i| idx.iter().map(|&j| num_bigint::BigInt::from(psi.get(i, j))).collect())
        .collect();
    linalg::rank_bareiss(&rows)
}

/// Basis of the radical `{x : ⟨x, y⟩ = 0 for all y}`.
pub fn radical(psi: &SkewIntMatrix) -> Vec<CycleVector> {
    linalg::nullspace(&psi.entries.to_rational_rows())
        .into_iter()
        .map(CycleVector)
        .collect()
}

pub fn in_radical(psi: &SkewIntMatrix, v: &[Rational]) -> bool {
    linalg::is_zero_vector(&psi.entries.apply(v))
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct LineSum {
    pub line: usize,
    /// Saddle cycles on the line, in order along it.
    pub terms: Vec<usize>,
    pub vector: CycleVector,
    pub in_radical: bool,
    /// Membership with the opposite alternating phase.
    pub negated_in_radical: bool,
}

/// `Σ_j (-1)^j δ_j` over the same-side saddles on each line, ordered along
/// the line.
pub fn alternating_line_sums(
    arr: &Arrangement,
    cycles: &[VanishingCycle],
    psi: &SkewIntMatrix,
) -> Vec<LineSum> {
    let n = cycles.len();
    arr.lines()
        .iter()
        .map(|line| {
            let sub = arr.sub(line.side);
            let mut on_line: Vec<(&(Rational, Rational), usize)> = cycles
                .iter()
                .filter(|c| c.symbol.is_saddle() && c.symbol.side() == Some(line.side))
                .filter_map(|c| match c.site {
                    Site::Vertex(pair) if pair.contains(&line.k) => {
                        let v = sub.vertex_of(pair[0], pair[1])?;
                        Some((&sub.vertices[v].point, c.id))
                    }
                    _ => None,
                })
                .collect();
            on_line.sort();
            let mut v = vec![Rational::zero(); n];
            for (j, (_, id)) in on_line.iter().enumerate() {
                v[*id] = if (j + 1) % 2 == 0 { Rational::one() } else { -Rational::one() };
            }
            let neg: Vec<Rational> = v.iter().map(|x| -x.clone()).collect();
            LineSum {
                line: line.k,
                terms: on_line.iter().map(|t| t.1).collect(),
                in_radical: in_radical(psi, &v),
                negated_in_radical: in_radical(psi, &neg),
                vector: CycleVector(v),
            }
        })
        .collect()
}

/// Comparison of `⟨α_-, α_+⟩` with `½ Σ_δ ⟨α_+, δ⟩⟨α_-, δ⟩` over the saddles
/// at value 0, for same-side region cycles at opposite-sign values with no
/// other critical value between them. Reported only.
#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct PairingCheck {
    pub negative: Symbol,
    pub positive: Symbol,
    pub entry: i64,
    #[serde(with = "rational")]
    pub predicted: Rational,
    pub consistent: bool,
}

pub fn pairing_diagnostics(
    psi: &SkewIntMatrix,
    cycles: &[VanishingCycle],
    cat: &CriticalCatalog,
) -> Vec<PairingCheck> {
    let mut out = Vec::new();
    for side in [Side::P, Side::Q] {
        // chart in which this side's saddles sit at 0
        let chart = |v: CriticalValue| match side {
            Side::P => v,
            Side::Q => v.inverse(),
        };
        let all_values: Vec<f64> = cat
            .critical_points
            .iter()
            .filter_map(|p| chart(p.value).finite())
            .collect();
        let value_of = |c: &VanishingCycle| chart(cat.critical_points[c.critical_point].value).finite();
        let regions: Vec<&VanishingCycle> = cycles
            .iter()
            .filter(|c| c.symbol.is_region() && c.symbol.side() == Some(side))
            .collect();
        let zero_saddles: Vec<&VanishingCycle> = cycles
            .iter()
            .filter(|c| c.symbol.is_saddle() && c.symbol.side() == Some(side))
            .collect();
        for neg in &regions {
            for pos in &regions {
                let (Some(vn), Some(vp)) = (value_of(neg), value_of(pos)) else { continue };
                if !(vn < 0.0 && vp > 0.0) {
                    continue;
                }
                let blocked = all_values.iter().any(|&v| v > vn && v < vp && v != 0.0);
                if blocked {
                    continue;
                }
                let sum: i64 = zero_saddles
                    .iter()
                    .map(|s| psi.get(pos.id, s.id) * psi.get(neg.id, s.id))
                    .sum();
                let predicted = Rational::new(sum.into(), 2.into());
                let entry = psi.get(neg.id, pos.id);
                out.push(PairingCheck {
                    negative: neg.symbol,
                    positive: pos.symbol,
                    entry,
                    consistent: predicted == rational::int(entry),
                    predicted,
                });
            }
        }
    }
    out
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct MatrixSummary {
    pub n: usize,
    pub rank_full: usize,
    pub rank_p: usize,
    pub rank_q: usize,
    pub expected_block_rank: usize,
    pub radical_dim: usize,
    /// `2g = d(d-1)`, the rank of the form on a compact fiber.
    pub compact_fiber_rank: usize,
    /// `d(2d+1)`, the first Betti number of an open fiber.
    pub open_fiber_h1: usize,
}

pub fn summarize(d: usize, psi: &SkewIntMatrix) -> MatrixSummary {
    MatrixSummary {
        n: psi.n(),
        rank_full: rank_of_block(psi, Block::Full),
        rank_p: rank_of_block(psi, Block::P),
        rank_q: rank_of_block(psi, Block::Q),
        expected_block_rank: d * (d - 1),
        radical_dim: radical(psi).len(),
        compact_fiber_rank: d * (d - 1),
        open_fiber_h1: d * (2 * d + 1),
    }
}
