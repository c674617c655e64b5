//! The release gate: eleven end-to-end criteria, each with its tolerance and
//! runtime budget fixed here. Shared by the `acceptance` test target and the
//! CLI `selftest` verb.

use std::time::{Duration, Instant};

use serde::Serialize;

use crate::canon::is_isomorphic;
use crate::error::Result;
use crate::families;
use crate::minor::{branch_set_oracle, has_k1t_minor, MinorKind};
use crate::report::{round_floats, Assertion};
use crate::search::{
    enumerate_connected, extremal_search_with, odd_case_discrepancy, verify_theorem, Prediction,
    SearchConfig,
};
use crate::spectral::{
    closed_form_kn_minus_e, cubic_largest_root, degree_bound, eq3_coeffs, eq3_residual,
    eq4_decreasing, lemma24_coeffs, lemma31_bounds, merris_bound, q_index, DEFAULT_TOL,
    STRICT_MARGIN,
};
use crate::transforms::{monotonicity_trials, rotation_trials};

pub const AGREEMENT_TOL: f64 = 1e-8;
pub const EQ3_RESIDUAL_TOL: f64 = 1e-6;
pub const BOUND_SLACK: f64 = 1e-9;
pub const EQUALITY_TOL: f64 = 1e-8;
pub const EQ4_GRID_POINTS: usize = 100;
pub const PERTURBATION_TRIALS: usize = 500;
pub const PERTURBATION_MAX_ORDER: usize = 8;
/// Seed of the monotonicity trials; the rotation trials use the next one.
pub const DEFAULT_SEED: u64 = 0x5eed_0001;

pub const CRITERIA: [(u8, &str); 11] = [
    (1, "theorem, t = 3, n = 4..9: unique extremal C_n with q1 = 4"),
    (2, "theorem, t = 4, n = 5..8: odd-case family at n = 5, S^(n-4)(K_4) beyond"),
    (3, "theorem, t = 5 (n = 6..8) and t = 6 (n = 7, 8) within the q* window"),
    (4, "closed form for K_n - e matches the eigensolver, n = 3..12"),
    (5, "G^e_t cubic root matches the eigensolver and exceeds 2t-2-2/(t-1), t = 3..8"),
    (6, "odd-case cubic residuals and decrease of c(q)"),
    (7, "degree and Merris bounds over all connected graphs with n <= 7"),
    (8, "boundary scan agrees with the branch-set oracle, n <= 7, t = 3..5"),
    (9, "edge deletion lowers and Perron-guided rotation raises the Q-index"),
    (10, "literal odd-order statement fails, derived odd-case structure passes"),
    (11, "search reports are byte-identical for 1 and 4 workers"),
];

#[derive(Debug, Clone, Serialize)]
pub struct CriterionOutcome {
    pub id: u8,
    pub title: String,
    pub pass: bool,
    pub elapsed_ms: u128,
    pub assertions: Vec<Assertion>,
}

impl CriterionOutcome {
    pub fn line(&self) -> String {
        let failed: Vec<&str> = self
            .assertions
            .iter()
            .filter(|a| !a.pass)
            .map(|a| a.name.as_str())
            .collect();
        let mut s = format!(
            "[{}] criterion {:>2}: {} ({} checks, {} ms)",
            if self.pass { "PASS" } else { "FAIL" },
            self.id,
            self.title,
            self.assertions.len(),
            self.elapsed_ms
        );
        if !failed.is_empty() {
            s.push_str(&format!(" failing: {}", failed.join("; ")));
        }
        s
    }
}

fn budget(assertions: &mut Vec<Assertion>, start: Instant, limit: Duration) {
    let elapsed = start.elapsed();
    assertions.push(Assertion::new(
        "runtime within budget",
        format!("< {} s", limit.as_secs()),
        elapsed.as_secs_f64(),
        0.0,
        elapsed < limit,
    ));
}

fn cycle(n: usize) -> Result<crate::graph::Graph> {
    crate::graph::Graph::new(n, &(0..n).map(|i| (i, (i + 1) % n)).collect::<Vec<_>>())
}

fn theorem_checks(t: usize, n: usize, workers: usize, out: &mut Vec<Assertion>) -> Result<f64> {
    let v = verify_theorem(&SearchConfig::new(n, t).with_workers(workers))?;
    let q_star = v.report.extremal[0].q1;
    out.push(Assertion::new(
        format!("t={t} n={n}: verify-theorem passes"),
        true,
        v.pass,
        0.0,
        v.pass,
    ));
    for a in v.assertions.iter().filter(|a| !a.pass) {
        out.push(Assertion {
            name: format!("t={t} n={n}: {}", a.name),
            ..a.clone()
        });
    }
    Ok(q_star)
}

fn criterion_1(workers: usize) -> Result<Vec<Assertion>> {
    let start = Instant::now();
    let mut out = Vec::new();
    for n in 4..=9 {
        let q = theorem_checks(3, n, workers, &mut out)?;
        out.push(Assertion::close(format!("n={n}: q* = 4"), 4.0, q, AGREEMENT_TOL));
        let r = extremal_search_with(&SearchConfig::new(n, 3).with_workers(workers), &Prediction::Theorem, None)?;
        let g = crate::graph6::decode(&r.extremal[0].graph6)?;
        out.push(Assertion::exact(format!("n={n}: extremal is C_{n}"), true, is_isomorphic(&g, &cycle(n)?)));
    }
    budget(&mut out, start, Duration::from_secs(60));
    Ok(out)
}

fn criterion_2(workers: usize) -> Result<Vec<Assertion>> {
    let start = Instant::now();
    let mut out = Vec::new();
    let r = extremal_search_with(&SearchConfig::new(5, 4).with_workers(workers), &Prediction::Theorem, None)?;
    let g = crate::graph6::decode(&r.extremal[0].graph6)?;
    out.push(Assertion::exact("n=5: unique extremal class", true, r.unique));
    out.push(Assertion::exact(
        "n=5: extremal isomorphic to odd_case_family(4, 2)",
        true,
        is_isomorphic(&g, &families::odd_case_family(4, 2)?),
    ));
    let root = cubic_largest_root(&eq3_coeffs(4, 2)?, 1e-14)?;
    out.push(Assertion::close(
        "n=5: q* equals largest root of q^3 - 9q^2 + 20q - 8",
        root,
        r.extremal[0].q1,
        AGREEMENT_TOL,
    ));
    theorem_checks(4, 5, workers, &mut out)?;
    for n in 6..=8 {
        theorem_checks(4, n, workers, &mut out)?;
        let r = extremal_search_with(&SearchConfig::new(n, 4).with_workers(workers), &Prediction::Theorem, None)?;
        let g = crate::graph6::decode(&r.extremal[0].graph6)?;
        out.push(Assertion::exact(
            format!("n={n}: extremal is S^{}(K_4)", n - 4),
            true,
            r.unique && is_isomorphic(&g, &families::subdivided_clique(n, 4)?),
        ));
    }
    budget(&mut out, start, Duration::from_secs(300));
    Ok(out)
}

fn criterion_3(workers: usize) -> Result<Vec<Assertion>> {
    let start = Instant::now();
    let mut out = Vec::new();
    for (t, n) in [(5, 6), (5, 7), (5, 8), (6, 7), (6, 8)] {
        let q = theorem_checks(t, n, workers, &mut out)?;
        let (lower, upper) = lemma31_bounds(t, n)?;
        out.push(Assertion::above(format!("t={t} n={n}: q* above lower bound"), lower, q, STRICT_MARGIN));
        out.push(Assertion::at_most(format!("t={t} n={n}: q* at most 2t-2"), upper, q, STRICT_MARGIN));
    }
    budget(&mut out, start, Duration::from_secs(600));
    Ok(out)
}

fn criterion_4() -> Result<Vec<Assertion>> {
    (3..=12)
        .map(|n| {
            let q = q_index(&families::kn_minus_e(n)?, DEFAULT_TOL)?.q1;
            Ok(Assertion::close(
                format!("n={n}"),
                closed_form_kn_minus_e(n)?,
                q,
                AGREEMENT_TOL,
            ))
        })
        .collect()
}

fn criterion_5() -> Result<Vec<Assertion>> {
    let mut out = Vec::new();
    for t in 3..=8 {
        let root = cubic_largest_root(&lemma24_coeffs(t)?, 1e-14)?;
        let q = q_index(&families::g_e_t(t)?, DEFAULT_TOL)?.q1;
        out.push(Assertion::close(format!("t={t}: root matches q1(G^e_t)"), root, q, AGREEMENT_TOL));
        let tf = t as f64;
        out.push(Assertion::above(
            format!("t={t}: root above 2t-2-2/(t-1)"),
            2.0 * tf - 2.0 - 2.0 / (tf - 1.0),
            root,
            0.0,
        ));
    }
    Ok(out)
}

fn criterion_6() -> Result<Vec<Assertion>> {
    let mut out = Vec::new();
    for t in [4usize, 6, 8] {
        for a1 in (2..=t - 2).step_by(2) {
            let q = q_index(&families::odd_case_family(t, a1)?, DEFAULT_TOL)?.q1;
            let r = eq3_residual(t, a1, q)?;
            out.push(Assertion::close(format!("t={t} a1={a1}: cubic residual"), 0.0, r, EQ3_RESIDUAL_TOL));
            out.push(Assertion::exact(
                format!("t={t} a1={a1}: c(q) decreasing on {EQ4_GRID_POINTS} points"),
                true,
                eq4_decreasing(t, a1, EQ4_GRID_POINTS)?,
            ));
        }
    }
    Ok(out)
}

fn criterion_7(workers: usize) -> Result<Vec<Assertion>> {
    let start = Instant::now();
    let mut out = Vec::new();
    for n in 2..=7 {
        let graphs = crate::search::enumerate_connected_with_workers(n, n, workers)?;
        if n == 7 {
            out.push(Assertion::exact("connected classes at n=7", 853u64, graphs.len() as u64));
        }
        let (mut over, mut deg_mismatch, mut merris_mismatch) = (Vec::new(), Vec::new(), Vec::new());
        for (_, g) in &graphs {
            let q = q_index(g, DEFAULT_TOL)?.q1;
            let db = degree_bound(g);
            let mb = merris_bound(g)?;
            let g6 = crate::graph6::encode(g)?;
            if q > db.min(mb) + BOUND_SLACK {
                over.push(g6.clone());
            }
            if ((db - q).abs() < EQUALITY_TOL) != g.is_regular() {
                deg_mismatch.push(g6.clone());
            }
            if ((mb - q).abs() < EQUALITY_TOL) != (g.is_regular() || g.is_semiregular_bipartite()) {
                merris_mismatch.push(g6);
            }
        }
        out.push(Assertion::exact(format!("n={n}: q1 <= min(2Δ, Merris) + 1e-9"), serde_json::json!([]), serde_json::json!(over)));
        out.push(Assertion::exact(format!("n={n}: 2Δ equality iff regular"), serde_json::json!([]), serde_json::json!(deg_mismatch)));
        out.push(Assertion::exact(
            format!("n={n}: Merris equality iff regular or semiregular bipartite"),
            serde_json::json!([]),
            serde_json::json!(merris_mismatch),
        ));
    }
    budget(&mut out, start, Duration::from_secs(120));
    Ok(out)
}

fn criterion_8() -> Result<Vec<Assertion>> {
    let mut out = Vec::new();
    for t in 3..=5 {
        let mut disagreements = Vec::new();
        let mut total = 0u64;
        for n in 1..=7 {
            for (_, g) in enumerate_connected(n, n)? {
                total += 1;
                let cert = has_k1t_minor(&g, t)?;
                let fast = cert.kind == MinorKind::Witness;
                if fast && !cert.is_valid_witness(&g, t) {
                    disagreements.push(format!("invalid witness {}", crate::graph6::encode(&g)?));
                }
                if fast != branch_set_oracle(&g, t)? {
                    disagreements.push(crate::graph6::encode(&g)?);
                }
            }
        }
        out.push(Assertion::exact(format!("t={t}: graphs checked"), 1 + 1 + 2 + 6 + 21 + 112 + 853u64, total));
        out.push(Assertion::exact(
            format!("t={t}: disagreements"),
            serde_json::json!([]),
            serde_json::json!(disagreements),
        ));
    }
    Ok(out)
}

fn criterion_9(seed: u64) -> Result<Vec<Assertion>> {
    let m = monotonicity_trials(seed, PERTURBATION_TRIALS, PERTURBATION_MAX_ORDER, DEFAULT_TOL)?;
    let r = rotation_trials(seed.wrapping_add(1), PERTURBATION_TRIALS, PERTURBATION_MAX_ORDER, DEFAULT_TOL)?;
    Ok(vec![
        Assertion::exact("edge deletions with strict decrease", m.trials as u64, m.confirmed as u64),
        Assertion::above("smallest decrease", 0.0, m.min_change, STRICT_MARGIN),
        Assertion::exact("rotations with strict increase", r.trials as u64, r.confirmed as u64),
        Assertion::above("smallest increase", 0.0, r.min_change, STRICT_MARGIN),
    ])
}

fn criterion_10(workers: usize) -> Result<Vec<Assertion>> {
    let d = odd_case_discrepancy(&SearchConfig::new(5, 4).with_workers(workers), None)?;
    let literal = families::kn_minus_matching(5, 2)?;
    let literal_free = has_k1t_minor(&literal, 4)?.kind == MinorKind::Absent;
    Ok(vec![
        Assertion::exact("K_5 minus 2 independent edges has Δ = 4", 4u64, literal.max_degree() as u64),
        Assertion::exact("K_5 minus 2 independent edges is excluded by the minor filter", false, literal_free),
        Assertion::exact("literal statement prediction fails", false, d.literal_statement.pass),
        Assertion::exact("derived odd-case prediction passes", true, d.proof_structure.pass),
    ])
}

/// JSON of a search report exactly as the CLI emits it.
pub fn report_json(report: &impl Serialize) -> String {
    let mut v = serde_json::to_value(report).expect("reports serialize");
    round_floats(&mut v);
    serde_json::to_string_pretty(&v).expect("reports serialize")
}

fn criterion_11() -> Result<Vec<Assertion>> {
    let mut out = Vec::new();
    for (t, n) in [(4, 7), (5, 8), (6, 8)] {
        let one = report_json(&verify_theorem(&SearchConfig::new(n, t).with_workers(1))?);
        let four = report_json(&verify_theorem(&SearchConfig::new(n, t).with_workers(4))?);
        out.push(Assertion::exact(format!("t={t} n={n}: identical reports"), true, one == four));
    }
    Ok(out)
}

pub fn run_criterion(id: u8, workers: usize) -> Result<CriterionOutcome> {
    run_criterion_seeded(id, workers, DEFAULT_SEED)
}

pub fn run_criterion_seeded(id: u8, workers: usize, seed: u64) -> Result<CriterionOutcome> {
    let title = CRITERIA
        .iter()
        .find(|c| c.0 == id)
        .map(|c| c.1)
        .ok_or_else(|| crate::error::Error::Domain(format!("no criterion {id}")))?;
    let start = Instant::now();
    let assertions = match id {
        1 => criterion_1(workers)?,
        2 => criterion_2(workers)?,
        3 => criterion_3(workers)?,
        4 => criterion_4()?,
        5 => criterion_5()?,
        6 => criterion_6()?,
        7 => criterion_7(workers)?,
        8 => criterion_8()?,
        9 => criterion_9(seed)?,
        10 => criterion_10(workers)?,
        _ => criterion_11()?,
    };
    Ok(CriterionOutcome {
        id,
        title: title.to_string(),
        pass: assertions.iter().all(|a| a.pass),
        elapsed_ms: start.elapsed().as_millis(),
        assertions,
    })
}

pub fn run_all(workers: usize, seed: u64) -> Result<Vec<CriterionOutcome>> {
    CRITERIA.iter().map(|&(id, _)| run_criterion_seeded(id, workers, seed)).collect()
}
