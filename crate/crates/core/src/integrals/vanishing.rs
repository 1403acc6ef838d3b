//! Integrals of the logarithmic family over ovals around every center, with
//! random control forms and quadrature self-tests.

use num_complex::Complex64;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rayon::prelude::*;
use serde::Serialize;

use super::form::{ComplexRational, OneForm, RationalFunction};
use super::poly::Poly2;
use super::quadrature::{integrate, integrate_with, log_derivative_integral, max_node_norm, winding_oracle};
use super::trace::{trace_oval, OvalTrace, TraceOptions};
use crate::arrangement::Arrangement;
use crate::critical::{CriticalCatalog, CriticalKind, CriticalPoint, CriticalValue};
use crate::error::Result;
use crate::rational::rat;
use crate::rational_map::RationalMap;

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct IntegralTolerances {
    pub quad_tol: f64,
    pub vanish_tol: f64,
    pub control_floor: f64,
    /// Controls per center that must clear `control_floor`, out of `trials`.
    pub control_pass_fraction: f64,
    /// Largest degree at which the control count gates `pass`; above it the
    /// ovals get thin enough that the floor is geometric, so the count is
    /// only reported.
    pub control_max_degree: usize,
}

impl Default for IntegralTolerances {
    fn default() -> Self {
        Self { quad_tol: 1e-8, vanish_tol: 1e-6, control_floor: 1e-3, control_pass_fraction: 0.9, control_max_degree: 3 }
    }
}

#[derive(Clone, Debug, Serialize)]
pub struct CenterInfo {
    pub id: usize,
    pub kind: CriticalKind,
    pub x: f64,
    pub y: f64,
    pub value: CriticalValue,
}

#[derive(Clone, Debug, Serialize)]
pub struct FormResult {
    pub d: usize,
    pub center: usize,
    pub t: f64,
    pub form: OneForm,
    pub integral: [f64; 2],
    pub error_estimate: f64,
    /// `arc length × max node norm of ω`.
    pub scale: f64,
    pub ratio: f64,
    pub pass: bool,
}

#[derive(Clone, Debug, Serialize)]
pub struct SelfTests {
    /// Scaled `|∮ dF|`.
    pub df: f64,
    /// Scaled `|∮ dG|` by quadrature of the differential.
    pub dg: f64,
    /// Scaled change of a control integral when the step is halved.
    pub halving: f64,
    /// Scaled `|I + I_reversed|`.
    pub reversal: f64,
    /// Largest scaled `|∮ dR/R − 2πi·winding|` over the lines.
    pub log_derivative: f64,
    pub pass: bool,
}

#[derive(Clone, Debug, Serialize)]
pub struct CenterReport {
    pub center: CenterInfo,
    pub t: f64,
    pub arc_length: f64,
    pub nodes: usize,
    pub closure_error: f64,
    pub windings: Vec<i64>,
    pub self_tests: SelfTests,
    pub log_family: Vec<FormResult>,
    pub controls: Vec<FormResult>,
    pub controls_above_floor: usize,
    /// Control count meets the required fraction, or is not gated at this degree.
    pub controls_pass: bool,
    pub pass: bool,
}

#[derive(Clone, Debug, Serialize)]
pub struct VanishingReport {
    pub d: usize,
    pub s: f64,
    pub seed: u64,
    pub trials: usize,
    pub tolerances: IntegralTolerances,
    pub centers: Vec<CenterReport>,
    pub pass: bool,
}

/// Random admissible coefficients: `λ₀..λ_d` with small rational real and
/// imaginary parts, `λ_{d+1}` solving the constraint.
pub fn random_lambda<R: Rng>(rng: &mut R, d: usize) -> Vec<ComplexRational> {
    let mut small = || rat(rng.gen_range(-9..=9), rng.gen_range(1..=9));
    let mut lambda: Vec<ComplexRational> =
        (0..=d).map(|_| ComplexRational::new(small(), small())).collect();
    let n = crate::rational::int(d as i64 + 1);
    let re: crate::Rational = lambda.iter().map(|l| l.re.clone()).sum();
    let im: crate::Rational = lambda.iter().map(|l| l.im.clone()).sum();
    lambda.push(ComplexRational::new(-re / &n, -im / &n));
    lambda
}

fn result(d: usize, trace: &OvalTrace, form: OneForm, value: Complex64, err: f64, scale: f64, pass: impl Fn(f64) -> bool) -> FormResult {
    let ratio = value.norm() / scale;
    FormResult {
        d,
        center: trace.center,
        t: trace.t,
        form,
        integral: [value.re, value.im],
        error_estimate: err,
        scale,
        ratio,
        pass: pass(ratio),
    }
}

fn scaled(form: &OneForm, trace: &OvalTrace, map: &RationalMap, value: Complex64) -> f64 {
    value.norm() / (trace.arc_length * max_node_norm(form, trace, map))
}

#[allow(clippy::too_many_arguments)]
fn check_center(
    arr: &Arrangement,
    catalog: &CriticalCatalog,
    center: &CriticalPoint,
    trials: usize,
    seed: u64,
    s: f64,
    topts: &TraceOptions,
    tol: &IntegralTolerances,
) -> Result<CenterReport> {
    let d = arr.d;
    let map = RationalMap::new(arr.lines());
    let trace = trace_oval(arr, catalog, center, s, topts)?;
    let clearance = topts.line_clearance;
    let origin = (center.x, center.y);
    let mut rng = ChaCha8Rng::seed_from_u64(seed ^ (center.id as u64).wrapping_mul(0x9E37_79B9_7F4A_7C15));

    let windings = (0..map.line_count())
        .map(|k| winding_oracle(&trace, &map, k))
        .collect::<Result<Vec<_>>>()?;

    let log_family = (0..trials)
        .map(|_| {
            let lambda = random_lambda(&mut rng, d);
            let g = RationalFunction::over_q(Poly2::random(&mut rng, 2, origin), &map);
            let form = OneForm::log_family(d, lambda, g)?;
            let v = integrate(&form, &trace, &map, clearance)?;
            let scale = trace.arc_length * max_node_norm(&form, &trace, &map);
            Ok(result(d, &trace, form, v.value, v.error_estimate, scale, |r| r <= tol.vanish_tol))
        })
        .collect::<Result<Vec<_>>>()?;

    let controls = (0..trials)
        .map(|_| {
            let form = OneForm::RawPolynomial {
                a: Poly2::random(&mut rng, 2, origin),
                b: Poly2::random(&mut rng, 2, origin),
            };
            let v = integrate(&form, &trace, &map, clearance)?;
            let scale = trace.arc_length * max_node_norm(&form, &trace, &map);
            Ok(result(d, &trace, form, v.value, v.error_estimate, scale, |r| r >= tol.control_floor))
        })
        .collect::<Result<Vec<_>>>()?;
    let controls_above_floor = controls.iter().filter(|c| c.pass).count();

    let self_tests = self_tests(arr, catalog, center, &trace, &map, &mut rng, s, topts, tol)?;
    let needed = (tol.control_pass_fraction * trials as f64).ceil() as usize;
    let controls_pass = d > tol.control_max_degree || controls_above_floor >= needed;
    let pass = windings.iter().all(|&w| w == 0) && log_family.iter().all(|r| r.pass) && controls_pass && self_tests.pass;
    Ok(CenterReport {
        center: CenterInfo { id: center.id, kind: center.kind, x: center.x, y: center.y, value: center.value },
        t: trace.t,
        arc_length: trace.arc_length,
        nodes: trace.nodes.len(),
        closure_error: trace.closure_error,
        windings,
        self_tests,
        log_family,
        controls,
        controls_above_floor,
        controls_pass,
        pass,
    })
}

#[allow(clippy::too_many_arguments)]
fn self_tests(
    arr: &Arrangement,
    catalog: &CriticalCatalog,
    center: &CriticalPoint,
    trace: &OvalTrace,
    map: &RationalMap,
    rng: &mut ChaCha8Rng,
    s: f64,
    topts: &TraceOptions,
    tol: &IntegralTolerances,
) -> Result<SelfTests> {
    let origin = (center.x, center.y);
    let df = {
        let v = integrate_with(trace, |x, y| {
            let g = map.gradient(x, y);
            [g[0].into(), g[1].into()]
        })
        .value;
        let gmax = trace
            .nodes
            .iter()
            .map(|&(x, y)| {
                let g = map.gradient(x, y);
                g[0].hypot(g[1])
            })
            .fold(0.0, f64::max);
        v.norm() / (trace.arc_length * gmax)
    };
    let exact = OneForm::ExactForm { g: RationalFunction::over_q(Poly2::random(rng, 2, origin), map) };
    let dg = scaled(&exact, trace, map, integrate(&exact, trace, map, topts.line_clearance)?.value);

    let control = OneForm::RawPolynomial { a: Poly2::random(rng, 2, origin), b: Poly2::random(rng, 2, origin) };
    let coarse = integrate(&control, trace, map, topts.line_clearance)?.value;
    let fine_opts = TraceOptions { nodes: topts.nodes * 2, ..topts.clone() };
    let fine = trace_oval(arr, catalog, center, s, &fine_opts)?;
    let halving = scaled(&control, trace, map, integrate(&control, &fine, map, topts.line_clearance)?.value - coarse);
    let back = integrate(&control, &trace.reversed(), map, topts.line_clearance)?.value;
    let reversal = scaled(&control, trace, map, coarse + back);

    let log_derivative = (0..map.line_count())
        .map(|k| -> Result<f64> {
            let w = winding_oracle(trace, map, k)?;
            let q = log_derivative_integral(trace, map, k).value;
            let [a, b, _] = map.line_coeffs(k);
            let peak = trace
                .nodes
                .iter()
                .map(|&(x, y)| a.hypot(b) / map.line_value(k, x, y).abs())
                .fold(0.0, f64::max);
            let miss = q - Complex64::new(0.0, std::f64::consts::TAU * w as f64);
            Ok(miss.norm() / (trace.arc_length * peak))
        })
        .collect::<Result<Vec<_>>>()?
        .into_iter()
        .fold(0.0, f64::max);

    let pass = df <= tol.quad_tol
        && dg <= tol.quad_tol
        && halving <= 10.0 * tol.quad_tol
        && reversal <= 1e-12
        && log_derivative <= tol.quad_tol;
    Ok(SelfTests { df, dg, halving, reversal, log_derivative, pass })
}

/// Runs the vanishing check over every P- and Q-center of the family.
pub fn check_center_vanishing(
    arr: &Arrangement,
    catalog: &CriticalCatalog,
    trials: usize,
    seed: u64,
    s: f64,
    topts: &TraceOptions,
    tol: &IntegralTolerances,
) -> Result<VanishingReport> {
    let centers: Vec<&CriticalPoint> =
        catalog.critical_points.iter().filter(|p| p.kind.point_type() == 2).collect();
    let reports = centers
        .par_iter()
        .map(|c| check_center(arr, catalog, c, trials, seed, s, topts, tol))
        .collect::<Result<Vec<_>>>()?;
    Ok(VanishingReport {
        d: arr.d,
        s,
        seed,
        trials,
        tolerances: tol.clone(),
        pass: !reports.is_empty() && reports.iter().all(|r| r.pass),
        centers: reports,
    })
}
