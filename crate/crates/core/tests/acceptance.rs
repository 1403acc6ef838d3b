//! Acceptance checks, one PASS/FAIL line per criterion; exits non-zero if
//! any criterion fails.

use std::time::{Duration, Instant};

use monodromy_lab::critical::CriticalKind;
use monodromy_lab::cycles::{rank_of_block, Block};
use monodromy_lab::integrals::{check_center_vanishing, IntegralTolerances, TraceOptions};
use monodromy_lab::monodromy::{check_operators, verify_orbit_generation};
use monodromy_lab::Pipeline;

struct Outcome {
    id: u8,
    name: &'static str,
    pass: bool,
    detail: String,
    elapsed: Duration,
    limit: Duration,
}

fn run(id: u8, name: &'static str, limit: Duration, f: impl FnOnce() -> (bool, String)) -> Outcome {
    let start = Instant::now();
    let (pass, detail) = f();
    let elapsed = start.elapsed();
    Outcome { id, name, pass: pass && elapsed <= limit, detail, elapsed, limit }
}

fn degree_one_exactness() -> (bool, String) {
    let p = Pipeline::unperturbed(1).expect("pipeline d=1");
    let names: Vec<String> = p.cycles.iter().map(|c| c.symbol.to_string()).collect();
    let ok = names == ["deltaP_1", "deltaQ_1", "sigma_1"] && p.psi.n() == 3 && p.psi.entries.is_zero();
    (ok, format!("catalog {names:?}, psi zero = {}", p.psi.entries.is_zero()))
}

fn counts() -> (bool, String) {
    let mut ok = true;
    let mut detail = Vec::new();
    for d in 1..=5usize {
        let p = Pipeline::unperturbed(d).expect("pipeline");
        let c = &p.catalog;
        let t1 = c.count(CriticalKind::SaddleP) + c.count(CriticalKind::SaddleQ);
        let t2 = c.count(CriticalKind::CenterP) + c.count(CriticalKind::CenterQ);
        let t3 = c.count(CriticalKind::Saddle3);
        let total = c.critical_points.len();
        let ind = c.indeterminacy.len();
        let faces = p.arrangement.p_only.bounded_faces.len();
        let good = t1 == d * (d + 1)
            && t2 == d * (d - 1)
            && t3 == d * d
            && total == 3 * d * d
            && ind == (d + 1) * (d + 1)
            && faces == d * (d - 1) / 2
            && d * (2 * d + 1) == total - t2;
        ok &= good;
        detail.push(format!(
            "d={d}: {t1}/{t2}/{t3} total {total} ind {ind} P-faces {faces} d(2d+1)={}",
            d * (2 * d + 1)
        ));
    }
    (ok, detail.join("; "))
}

fn ranks() -> (bool, String) {
    let mut ok = true;
    let mut detail = Vec::new();
    for d in 2..=4usize {
        let p = Pipeline::unperturbed(d).expect("pipeline");
        let (rp, rq) = (rank_of_block(&p.psi, Block::P), rank_of_block(&p.psi, Block::Q));
        ok &= rp == d * (d - 1) && rq == d * (d - 1);
        detail.push(format!("d={d}: rank P {rp}, rank Q {rq}, expected {}", d * (d - 1)));
    }
    (ok, detail.join("; "))
}

fn orbits(d: usize) -> (bool, String) {
    let p = Pipeline::unperturbed(d).expect("pipeline");
    let r = verify_orbit_generation(&p).expect("orbit report");
    let failures: Vec<String> = r
        .starts
        .iter()
        .filter(|s| !s.pass)
        .map(|s| format!("{} got {}", s.cycle, s.quotient_rank))
        .collect();
    (
        r.pass,
        format!("d={d}: {} starts, expected quotient rank {}, failures {failures:?}", r.starts.len(), r.expected_quotient_rank),
    )
}

fn symplectic() -> (bool, String) {
    let mut ok = true;
    let mut detail = Vec::new();
    for d in 1..=4usize {
        let p = Pipeline::unperturbed(d).expect("pipeline");
        let r = check_operators(&p).expect("operator check");
        ok &= r.pass;
        detail.push(format!(
            "d={d}: {} operators, form {} det {} commute {}",
            r.operators, r.preserve_form, r.unimodular, r.same_group_commute
        ));
    }
    (ok, detail.join("; "))
}

fn integral_criteria() -> ((bool, String), (bool, String)) {
    let mut vanish_ok = true;
    let mut self_ok = true;
    let mut vd = Vec::new();
    let mut sd = Vec::new();
    for d in 2..=3usize {
        let p = Pipeline::unperturbed(d).expect("pipeline");
        let r = check_center_vanishing(
            &p.arrangement,
            &p.catalog,
            20,
            2024,
            0.1,
            &TraceOptions::default(),
            &IntegralTolerances::default(),
        )
        .expect("vanishing report");
        let worst = r.centers.iter().flat_map(|c| &c.log_family).map(|f| f.ratio).fold(0.0, f64::max);
        let windings_zero = r.centers.iter().all(|c| c.windings.iter().all(|&w| w == 0));
        let min_controls = r.centers.iter().map(|c| c.controls_above_floor).min().unwrap_or(0);
        let families_ok = r.centers.iter().all(|c| c.log_family.iter().all(|f| f.pass));
        vanish_ok &= r.centers.len() == d * (d - 1) && families_ok && windings_zero && min_controls >= 18;
        vd.push(format!(
            "d={d}: {} centers, worst scaled |I| {worst:.2e}, windings zero {windings_zero}, controls >= floor min {min_controls}/20",
            r.centers.len()
        ));
        let st = r.centers.iter().map(|c| &c.self_tests);
        let max = |f: fn(&monodromy_lab::integrals::vanishing::SelfTests) -> f64| st.clone().map(f).fold(0.0, f64::max);
        let (df, dg, half, rev) = (max(|s| s.df), max(|s| s.dg), max(|s| s.halving), max(|s| s.reversal));
        self_ok &= df <= 1e-8 && dg <= 1e-8 && half <= 1e-7 && rev <= 1e-12;
        sd.push(format!("d={d}: dF {df:.1e}, dG {dg:.1e}, halving {half:.1e}, reversal {rev:.1e}"));
    }
    ((vanish_ok, vd.join("; ")), (self_ok, sd.join("; ")))
}

fn main() {
    let mut outcomes = vec![
        run(1, "degree-one catalog and zero matrix", Duration::from_secs(1), degree_one_exactness),
        run(2, "critical point and face counts, d = 1..5", Duration::from_secs(60), counts),
        run(3, "block ranks d(d-1), d = 2..4", Duration::from_secs(10), ranks),
    ];
    let start = Instant::now();
    let (mut ok4, mut d4) = (true, Vec::new());
    for d in 2..=4 {
        let (ok, detail) = orbits(d);
        ok4 &= ok;
        d4.push(detail);
    }
    outcomes.push(Outcome {
        id: 4,
        name: "orbit spans reach d(d-1) modulo the radical, d = 2..4",
        pass: ok4 && start.elapsed() <= Duration::from_secs(120),
        detail: d4.join("; "),
        elapsed: start.elapsed(),
        limit: Duration::from_secs(120),
    });
    outcomes.push(run(5, "operators preserve the form, are unimodular, commute within groups", Duration::from_secs(60), symplectic));

    let start = Instant::now();
    let (vanish, selftest) = integral_criteria();
    let elapsed = start.elapsed();
    let limit = Duration::from_secs(300);
    outcomes.push(Outcome {
        id: 6,
        name: "log-family integrals vanish around centers, d = 2, 3",
        pass: vanish.0 && elapsed <= limit,
        detail: vanish.1,
        elapsed,
        limit,
    });
    outcomes.push(Outcome {
        id: 7,
        name: "quadrature self-tests",
        pass: selftest.0 && elapsed <= limit,
        detail: selftest.1,
        elapsed,
        limit,
    });

    for o in &outcomes {
        println!(
            "[{}] criterion {}: {} ({:.2?} / limit {:?}) -- {}",
            if o.pass { "PASS" } else { "FAIL" },
            o.id,
            o.name,
            o.elapsed,
            o.limit,
            o.detail
        );
    }
    let failed: Vec<u8> = outcomes.iter().filter(|o| !o.pass).map(|o| o.id).collect();
    if !failed.is_empty() {
        eprintln!("failed criteria: {failed:?}");
        std::process::exit(1);
    }
}
