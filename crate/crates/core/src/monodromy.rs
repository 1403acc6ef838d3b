//! Picard–Lefschetz operators on cycle-symbol space and monodromy orbit
//! spans modulo the radical of the intersection form.

use num_traits::{One, Zero};
use rayon::prelude::*;
use serde::Serialize;

use crate::critical::{CriticalCatalog, ValueGroup};
use crate::cycles::{radical, CycleVector, SkewIntMatrix, Symbol, VanishingCycle};
use crate::error::{Error, Result};
use crate::linalg::{self, EchelonBasis, IntMatrix};
use crate::pipeline::Pipeline;
use crate::rational::Rational;

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct MonodromyOperator {
    pub matrix: IntMatrix,
    pub inverse: IntMatrix,
    /// Value group this operator is attached to, if any.
    pub group: Option<usize>,
    /// Cycle ids whose transvections were multiplied together.
    pub cycles: Vec<usize>,
}

impl MonodromyOperator {
    pub fn identity(n: usize) -> Self {
        Self { matrix: IntMatrix::identity(n), inverse: IntMatrix::identity(n), group: None, cycles: vec![] }
    }

    pub fn n(&self) -> usize {
        self.matrix.rows
    }

    pub fn apply(&self, v: &[Rational]) -> Vec<Rational> {
        self.matrix.apply(v)
    }

    pub fn is_identity(&self) -> bool {
        self.matrix == IntMatrix::identity(self.n())
    }

    /// `Mᵀ Ψ M = Ψ`.
    pub fn preserves(&self, psi: &SkewIntMatrix) -> bool {
        self.matrix.transpose().mul(&psi.entries).mul(&self.matrix) == psi.entries
    }

    pub fn determinant(&self) -> num_bigint::BigInt {
        linalg::determinant(&self.matrix)
    }

    pub fn commutes_with(&self, other: &Self) -> bool {
        self.matrix.mul(&other.matrix) == other.matrix.mul(&self.matrix)
    }
}

/// `x ↦ x + sign·⟨x, δ⟩ δ`; column `a` is `e_a + sign·Ψ[a][δ] e_δ`.
fn transvection(psi: &SkewIntMatrix, delta: usize, sign: i64) -> IntMatrix {
    let n = psi.n();
    let mut m = IntMatrix::identity(n);
    for a in 0..n {
        let p = psi.get(a, delta);
        if p != 0 {
            m.set(delta, a, m.get(delta, a) + sign * p);
        }
    }
    m
}

pub fn picard_lefschetz_operator(delta: &VanishingCycle, psi: &SkewIntMatrix) -> MonodromyOperator {
    MonodromyOperator {
        matrix: transvection(psi, delta.id, 1),
        inverse: transvection(psi, delta.id, -1),
        group: Some(delta.value_group),
        cycles: vec![delta.id],
    }
}

/// Product of the transvections of every cycle vanishing at the group's
/// value. The cycles must be pairwise orthogonal, which makes the product
/// independent of order.
pub fn value_group_operator(
    group: &ValueGroup,
    cycles: &[VanishingCycle],
    psi: &SkewIntMatrix,
) -> Result<MonodromyOperator> {
    let members: Vec<&VanishingCycle> =
        cycles.iter().filter(|c| c.value_group == group.id).collect();
    for (i, a) in members.iter().enumerate() {
        for b in &members[i + 1..] {
            if psi.get(a.id, b.id) != 0 {
                return Err(Error::NonOrthogonalGroup(a.symbol.to_string(), b.symbol.to_string()));
            }
        }
    }
    let mut op = MonodromyOperator::identity(psi.n());
    op.group = Some(group.id);
    for c in members {
        let t = picard_lefschetz_operator(c, psi);
        op.matrix = t.matrix.mul(&op.matrix);
        op.inverse = op.inverse.mul(&t.inverse);
        op.cycles.push(c.id);
    }
    Ok(op)
}

/// One operator per value group, including the groups at `0` and `∞`.
pub fn value_group_generators(
    catalog: &CriticalCatalog,
    cycles: &[VanishingCycle],
    psi: &SkewIntMatrix,
) -> Result<Vec<MonodromyOperator>> {
    catalog
        .value_groups
        .iter()
        .map(|g| value_group_operator(g, cycles, psi))
        .collect()
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct OrbitResult {
    pub start: usize,
    pub symbol: Symbol,
    pub basis: Vec<CycleVector>,
    pub span_rank: usize,
    pub quotient_rank: usize,
    pub applications: usize,
}

pub fn radical_basis(psi: &SkewIntMatrix) -> EchelonBasis {
    let mut e = EchelonBasis::new();
    for v in radical(psi) {
        e.insert(&v.0);
    }
    e
}

/// Closure of `span{start}` under every generator and its inverse:
/// breadth-first rounds of applications, exact elimination between rounds.
pub fn orbit_span(
    start: &VanishingCycle,
    generators: &[MonodromyOperator],
    radical: &EchelonBasis,
) -> OrbitResult {
    let n = generators.first().map_or(start.id + 1, MonodromyOperator::n);
    let mut span = EchelonBasis::new();
    let mut frontier = vec![CycleVector::basis(n, start.id).0];
    span.insert(&frontier[0]);
    let mut applications = 0;
    while !frontier.is_empty() {
        let images: Vec<Vec<Rational>> = frontier
            .par_iter()
            .flat_map_iter(|v| {
                generators
                    .iter()
                    .flat_map(move |g| [g.matrix.apply(v), g.inverse.apply(v)])
            })
            .collect();
        applications += images.len();
        frontier = images.into_iter().filter(|w| span.insert(w)).collect();
    }
    let mut joined = radical.clone();
    for v in span.basis() {
        joined.insert(v);
    }
    OrbitResult {
        start: start.id,
        symbol: start.symbol,
        span_rank: span.rank(),
        quotient_rank: joined.rank() - radical.rank(),
        basis: span.basis().iter().cloned().map(CycleVector).collect(),
        applications,
    }
}

/// Exact equality of two rational subspaces given by bases.
pub fn same_span(a: &[CycleVector], b: &[CycleVector]) -> bool {
    let mut ea = EchelonBasis::new();
    a.iter().for_each(|v| {
        ea.insert(&v.0);
    });
    let mut eb = EchelonBasis::new();
    b.iter().for_each(|v| {
        eb.insert(&v.0);
    });
    ea.rank() == eb.rank() && b.iter().all(|v| ea.contains(&v.0))
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct StartReport {
    pub cycle: String,
    pub span_rank: usize,
    pub quotient_rank: usize,
    pub expected: usize,
    pub pass: bool,
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct OrbitReport {
    pub d: usize,
    pub starts: Vec<StartReport>,
    pub expected_quotient_rank: usize,
    /// Value groups whose members are critical points of different kinds.
    pub mixed_kind_groups: Vec<usize>,
    pub pass: bool,
}

/// Orbit of every vanishing cycle: non-mixed starts must reach the full
/// `d(d-1)`-dimensional quotient, mixed-saddle starts must stay in the
/// radical.
pub fn verify_orbit_generation(p: &Pipeline) -> Result<OrbitReport> {
    let generators = value_group_generators(&p.catalog, &p.cycles, &p.psi)?;
    let rad = radical_basis(&p.psi);
    let expected = p.d * (p.d - 1);
    let starts: Vec<StartReport> = p
        .cycles
        .iter()
        .map(|c| {
            let r = orbit_span(c, &generators, &rad);
            let want = if matches!(c.symbol, Symbol::Mixed(_)) { 0 } else { expected };
            StartReport {
                cycle: c.symbol.to_string(),
                span_rank: r.span_rank,
                quotient_rank: r.quotient_rank,
                expected: want,
                pass: r.quotient_rank == want,
            }
        })
        .collect();
    let mixed_kind_groups =
        p.catalog.value_groups.iter().filter(|g| g.mixed_kinds()).map(|g| g.id).collect();
    Ok(OrbitReport {
        d: p.d,
        pass: starts.iter().all(|s| s.pass),
        starts,
        expected_quotient_rank: expected,
        mixed_kind_groups,
    })
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct SymplecticReport {
    pub operators: usize,
    pub preserve_form: bool,
    pub unimodular: bool,
    pub inverses_exact: bool,
    pub same_group_commute: bool,
    pub infinity_fixes_p_block: bool,
    pub pass: bool,
}

/// Exact checks on every transvection and every value-group product.
pub fn check_operators(p: &Pipeline) -> Result<SymplecticReport> {
    let n = p.psi.n();
    let single: Vec<MonodromyOperator> =
        p.cycles.iter().map(|c| picard_lefschetz_operator(c, &p.psi)).collect();
    let groups = value_group_generators(&p.catalog, &p.cycles, &p.psi)?;
    let all: Vec<&MonodromyOperator> = single.iter().chain(&groups).collect();
    let id = IntMatrix::identity(n);
    let preserve_form = all.par_iter().all(|op| op.preserves(&p.psi));
    let unimodular = all.par_iter().all(|op| linalg::is_unit(&op.determinant()));
    let inverses_exact = all.iter().all(|op| op.matrix.mul(&op.inverse) == id);
    let same_group_commute = p.catalog.value_groups.iter().all(|g| {
        let members: Vec<&MonodromyOperator> =
            single.iter().filter(|op| op.group == Some(g.id)).collect();
        members
            .iter()
            .enumerate()
            .all(|(i, a)| members[i + 1..].iter().all(|b| a.commutes_with(b)))
    });
    let infinity_fixes_p_block = match p
        .catalog
        .value_groups
        .iter()
        .find(|g| g.value == crate::critical::CriticalValue::Infinity)
    {
        Some(g) => p
            .cycles
            .iter()
            .filter(|c| c.symbol.side() == Some(crate::arrangement::Side::P))
            .all(|c| {
                let e = CycleVector::basis(n, c.id).0;
                groups[g.id].apply(&e) == e
            }),
        None => true,
    };
    Ok(SymplecticReport {
        operators: all.len(),
        pass: preserve_form && unimodular && inverses_exact && same_group_commute && infinity_fixes_p_block,
        preserve_form,
        unimodular,
        inverses_exact,
        same_group_commute,
        infinity_fixes_p_block,
    })
}

/// `⟨x, y⟩ = xᵀ Ψ y`.
pub fn pairing(psi: &SkewIntMatrix, x: &[Rational], y: &[Rational]) -> Rational {
    linalg::bilinear(&psi.entries, x, y)
}

pub fn unit(n: usize, i: usize) -> Vec<Rational> {
    let mut v = vec![Rational::zero(); n];
    v[i] = Rational::one();
    v
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::critical::CriticalValue;

    fn by_name<'a>(p: &'a Pipeline, name: &str) -> &'a VanishingCycle {
        p.cycles.iter().find(|c| c.symbol.to_string() == name).unwrap()
    }

    #[test]
    fn transvection_matches_formula() {
        let p = Pipeline::unperturbed(2).unwrap();
        let n = p.psi.n();
        let delta = by_name(&p, "deltaP_1");
        let region = by_name(&p, "DeltaP_1");
        let t = picard_lefschetz_operator(delta, &p.psi);
        // independent route: x + ⟨x, δ⟩ δ evaluated through the bilinear form
        for a in 0..n {
            let x = unit(n, a);
            let k = pairing(&p.psi, &x, &unit(n, delta.id));
            let mut want = x.clone();
            want[delta.id] += k;
            assert_eq!(t.apply(&x), want);
        }
        let image = t.apply(&unit(n, region.id));
        let coeff = p.psi.get(region.id, delta.id);
        assert_eq!(coeff.abs(), 1);
        assert_eq!(image[delta.id], crate::rational::int(coeff));
        assert_eq!(image[region.id], Rational::one());
        assert_eq!(t.apply(&unit(n, delta.id)), unit(n, delta.id));
        let sigma = by_name(&p, "sigma_1");
        assert!(picard_lefschetz_operator(sigma, &p.psi).is_identity());
    }

    #[test]
    fn degree_one_is_trivial() {
        let p = Pipeline::unperturbed(1).unwrap();
        let gens = value_group_generators(&p.catalog, &p.cycles, &p.psi).unwrap();
        assert_eq!(gens.len(), 3);
        assert!(gens.iter().all(MonodromyOperator::is_identity));
        let report = verify_orbit_generation(&p).unwrap();
        assert!(report.pass);
        assert!(report.starts.iter().all(|s| s.quotient_rank == 0 && s.span_rank == 1));
    }

    #[test]
    fn zero_group_multiplies_all_p_saddles() {
        let p = Pipeline::unperturbed(3).unwrap();
        let g0 = p.catalog.value_groups.iter().find(|g| g.value == CriticalValue::Zero).unwrap();
        let op = value_group_operator(g0, &p.cycles, &p.psi).unwrap();
        assert_eq!(op.cycles.len(), 6);
        assert!(op.cycles.iter().all(|&c| matches!(p.cycles[c].symbol, Symbol::SaddleP(_))));
    }

    #[test]
    fn non_orthogonal_group_is_rejected() {
        let p = Pipeline::unperturbed(2).unwrap();
        let mut cycles = p.cycles.clone();
        // force a region cycle into the group of its own vertices
        let g0 = p.catalog.value_groups.iter().find(|g| g.value == CriticalValue::Zero).unwrap();
        let region = by_name(&p, "DeltaP_1").id;
        cycles[region].value_group = g0.id;
        assert!(matches!(
            value_group_operator(g0, &cycles, &p.psi),
            Err(Error::NonOrthogonalGroup(_, _))
        ));
    }

    #[test]
    fn orbits_reach_full_quotient() {
        for d in 2..=3 {
            let p = Pipeline::unperturbed(d).unwrap();
            let report = verify_orbit_generation(&p).unwrap();
            for s in &report.starts {
                assert!(s.pass, "d={d} {s:?}");
                assert!(s.quotient_rank <= s.span_rank);
            }
            let sym = check_operators(&p).unwrap();
            assert!(sym.pass, "{sym:?}");
        }
    }

    #[test]
    fn orbit_independent_of_generator_order() {
        let p = Pipeline::unperturbed(3).unwrap();
        let mut gens = value_group_generators(&p.catalog, &p.cycles, &p.psi).unwrap();
        let rad = radical_basis(&p.psi);
        let start = by_name(&p, "deltaP_2");
        let a = orbit_span(start, &gens, &rad);
        gens.reverse();
        let b = orbit_span(start, &gens, &rad);
        assert!(same_span(&a.basis, &b.basis));
        // the span is invariant under each generator
        for g in &gens {
            let imgs: Vec<CycleVector> = a.basis.iter().map(|v| CycleVector(g.apply(&v.0))).collect();
            assert!(same_span(&imgs, &a.basis));
        }
    }

    #[test]
    fn sigma_orbit_is_a_point() {
        let p = Pipeline::unperturbed(2).unwrap();
        let gens = value_group_generators(&p.catalog, &p.cycles, &p.psi).unwrap();
        let rad = radical_basis(&p.psi);
        let r = orbit_span(by_name(&p, "sigma_3"), &gens, &rad);
        assert_eq!((r.span_rank, r.quotient_rank), (1, 0));
    }
}
