use std::path::Path;
use std::time::Instant;

use serde::Serialize;
use serde_json::{json, Value};

use monodromy_lab::critical::CriticalKind;
use monodromy_lab::cycles::{rank_of_block, Block};
use monodromy_lab::integrals::check_center_vanishing;
use monodromy_lab::monodromy::{check_operators, verify_orbit_generation};
use monodromy_lab::Pipeline;

use crate::{to_sorted_json, CliError, RunConfig};

#[derive(Debug, Clone, Serialize)]
pub struct CheckItem {
    pub name: String,
    pub category: &'static str,
    pub expected: Value,
    pub actual: Value,
    pub pass: bool,
}

fn item(name: &str, category: &'static str, expected: impl Serialize, actual: impl Serialize) -> CheckItem {
    let expected = json!(expected);
    let actual = json!(actual);
    CheckItem { name: name.into(), category, pass: expected == actual, expected, actual }
}

#[derive(Debug, Clone, Serialize)]
pub struct DegreeSection {
    pub d: usize,
    pub items: Vec<CheckItem>,
    pub pass: bool,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub timings_ms: Option<Value>,
}

#[derive(Debug, Clone, Serialize)]
pub struct VerificationReport {
    pub config: RunConfig,
    pub sections: Vec<DegreeSection>,
    pub pass: bool,
}

fn section(cfg: &RunConfig, d: usize) -> Result<DegreeSection, CliError> {
    let mut items = Vec::new();
    let mut times = serde_json::Map::new();
    let clock = Instant::now();
    let p = Pipeline::build(d, &cfg.epsilon, &cfg.newton)?;
    times.insert("pipeline".into(), json!(clock.elapsed().as_millis() as u64));

    let c = &p.catalog;
    let t1 = c.count(CriticalKind::SaddleP) + c.count(CriticalKind::SaddleQ);
    let t2 = c.count(CriticalKind::CenterP) + c.count(CriticalKind::CenterQ);
    let t3 = c.count(CriticalKind::Saddle3);
    items.push(item("type1_saddles", "count", d * (d + 1), t1));
    items.push(item("type2_centers", "count", d * (d - 1), t2));
    items.push(item("type3_saddles", "count", d * d, t3));
    items.push(item("critical_points", "count", 3 * d * d, c.critical_points.len()));
    items.push(item("indeterminacy_points", "count", (d + 1) * (d + 1), c.indeterminacy.len()));
    items.push(item("p_only_bounded_faces", "count", d * (d - 1) / 2, p.arrangement.p_only.bounded_faces.len()));
    items.push(item("q_only_bounded_faces", "count", d * (d - 1) / 2, p.arrangement.q_only.bounded_faces.len()));
    items.push(item("open_fiber_h1", "count", d * (2 * d + 1), c.critical_points.len() - t2));
    items.push(item("vanishing_cycles", "count", 3 * d * d, p.cycles.len()));
    items.push(item("psi_antisymmetric", "rank", true, p.psi.is_antisymmetric()));
    if d == 1 {
        items.push(item("psi_zero_matrix", "rank", true, p.psi.entries.is_zero()));
    }

    let clock = Instant::now();
    items.push(item("rank_psi_p", "rank", d * (d - 1), rank_of_block(&p.psi, Block::P)));
    items.push(item("rank_psi_q", "rank", d * (d - 1), rank_of_block(&p.psi, Block::Q)));
    items.push(item("rank_psi", "rank", 2 * d * (d - 1), rank_of_block(&p.psi, Block::Full)));
    times.insert("ranks".into(), json!(clock.elapsed().as_millis() as u64));

    let clock = Instant::now();
    let orbit = verify_orbit_generation(&p)?;
    for s in &orbit.starts {
        items.push(item(&format!("orbit_quotient_rank_{}", s.cycle), "orbit", s.expected, s.quotient_rank));
    }
    let ops = check_operators(&p)?;
    items.push(item("operators_preserve_form", "orbit", true, ops.preserve_form));
    items.push(item("operators_unimodular", "orbit", true, ops.unimodular));
    items.push(item("same_group_operators_commute", "orbit", true, ops.same_group_commute));
    items.push(item("infinity_operator_fixes_p_block", "orbit", true, ops.infinity_fixes_p_block));
    times.insert("orbit".into(), json!(clock.elapsed().as_millis() as u64));

    if d >= 2 {
        let clock = Instant::now();
        let r = check_center_vanishing(&p.arrangement, &p.catalog, cfg.trials, cfg.seed, cfg.s, &cfg.trace, &cfg.integrals)?;
        let forms = r.centers.iter().flat_map(|c| &c.log_family);
        items.push(item("log_family_forms_vanishing", "integral", r.centers.len() * cfg.trials, forms.filter(|f| f.pass).count()));
        items.push(item(
            "windings_zero",
            "integral",
            true,
            r.centers.iter().all(|c| c.windings.iter().all(|&w| w == 0)),
        ));
        items.push(item(
            "controls_above_floor",
            "integral",
            true,
            r.centers.iter().all(|c| c.controls_pass),
        ));
        items.push(item("quadrature_self_tests", "integral", true, r.centers.iter().all(|c| c.self_tests.pass)));
        times.insert("integrals".into(), json!(clock.elapsed().as_millis() as u64));
    }
    Ok(DegreeSection {
        d,
        pass: items.iter().all(|i| i.pass),
        items,
        timings_ms: cfg.timings.then_some(Value::Object(times)),
    })
}

/// Runs every check for `d = 1..=d_max`.
pub fn verify(cfg: &RunConfig) -> Result<VerificationReport, CliError> {
    let sections = (1..=cfg.d_max).map(|d| section(cfg, d)).collect::<Result<Vec<_>, _>>()?;
    Ok(VerificationReport { config: cfg.clone(), pass: sections.iter().all(|s| s.pass), sections })
}

pub fn emit_report(report: &VerificationReport, path: &Path) -> Result<(), CliError> {
    std::fs::write(path, to_sorted_json(report)?)?;
    Ok(())
}
