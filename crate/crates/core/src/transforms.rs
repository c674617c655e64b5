//! Edge rotation and single-edge deletion, with executable checks that the
//! Q-index moves the way the extremal arguments need it to.

use rand::seq::SliceRandom;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde::Serialize;

use crate::error::{domain, Error, Result};
use crate::graph::{Graph, VertexSet};
use crate::spectral::{q_index, q_index_any, STRICT_MARGIN};

/// Tolerance on the Perron hypothesis `x_u >= x_v`.
pub const HYPOTHESIS_TOL: f64 = 1e-12;

/// Move the edges `v w` (`w ∈ moved`) over to `u w`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
pub struct RotationSpec {
    pub u: usize,
    pub v: usize,
    pub moved: VertexSet,
}

impl RotationSpec {
    pub fn validate(&self, g: &Graph) -> Result<()> {
        let n = g.order();
        let RotationSpec { u, v, moved } = *self;
        if u >= n || v >= n {
            return domain(format!("rotation endpoint outside 0..{n}"));
        }
        if u == v {
            return domain(format!("rotation needs distinct u and v, both are {u}"));
        }
        if moved.contains(u) {
            return domain(format!("vertex {u} is u itself and cannot be moved"));
        }
        if moved.contains(v) {
            return domain(format!("vertex {v} is v itself and cannot be moved"));
        }
        for w in moved.iter() {
            if w >= n || !g.has_edge(v, w) {
                return domain(format!("vertex {w} is not a neighbour of v = {v}"));
            }
            if g.has_edge(u, w) {
                return domain(format!("vertex {w} is already a neighbour of u = {u}"));
            }
        }
        Ok(())
    }

    /// The rotation that undoes this one on the rotated graph.
    pub fn inverse(&self) -> RotationSpec {
        RotationSpec {
            u: self.v,
            v: self.u,
            moved: self.moved,
        }
    }
}

pub fn rotate_edges(g: &Graph, spec: &RotationSpec) -> Result<Graph> {
    spec.validate(g)?;
    let mut rows = g.rows().to_vec();
    for w in spec.moved.iter() {
        rows[spec.v] &= !(1u64 << w);
        rows[w] &= !(1u64 << spec.v);
        rows[spec.u] |= 1u64 << w;
        rows[w] |= 1u64 << spec.u;
    }
    Ok(Graph::from_rows_unchecked(rows))
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(rename_all = "snake_case")]
pub enum RotationOutcome {
    IncreaseConfirmed,
    HypothesisNotMet,
    Inconclusive,
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct RotationCheck {
    pub outcome: RotationOutcome,
    pub x_u: f64,
    pub x_v: f64,
    pub q_before: f64,
    /// Q-index of the rotated graph (maximum over components); absent when
    /// the hypothesis fails.
    pub q_after: Option<f64>,
}

pub fn check_rotation_lemma(g: &Graph, spec: &RotationSpec, tol: f64) -> Result<RotationCheck> {
    spec.validate(g)?;
    let before = q_index(g, tol)?;
    let (x_u, x_v) = (before.perron[spec.u], before.perron[spec.v]);
    if x_u < x_v - HYPOTHESIS_TOL {
        return Ok(RotationCheck {
            outcome: RotationOutcome::HypothesisNotMet,
            x_u,
            x_v,
            q_before: before.q1,
            q_after: None,
        });
    }
    let after = q_index_any(&rotate_edges(g, spec)?, tol)?;
    let outcome = if after > before.q1 + STRICT_MARGIN {
        RotationOutcome::IncreaseConfirmed
    } else {
        RotationOutcome::Inconclusive
    };
    Ok(RotationCheck {
        outcome,
        x_u,
        x_v,
        q_before: before.q1,
        q_after: Some(after),
    })
}

/// Whether deleting `e` strictly lowers the Q-index (by more than the margin).
pub fn check_monotonicity(g: &Graph, e: (usize, usize), tol: f64) -> Result<bool> {
    if !g.has_edge(e.0, e.1) {
        return domain(format!("({}, {}) is not an edge", e.0, e.1));
    }
    let h = g.without_edge(e.0, e.1)?;
    if !h.is_connected() {
        return Err(Error::Disconnected);
    }
    Ok(q_index(&h, tol)?.q1 < q_index(g, tol)?.q1 - STRICT_MARGIN)
}

/// Random connected graph: a random labelled tree plus each remaining pair
/// independently with probability `density`.
pub fn random_connected_graph(rng: &mut impl Rng, n: usize, density: f64) -> Graph {
    let mut edges = Vec::new();
    for v in 1..n {
        edges.push((rng.gen_range(0..v), v));
    }
    for i in 0..n {
        for j in i + 1..n {
            if rng.gen_bool(density) {
                edges.push((i, j));
            }
        }
    }
    let mut perm: Vec<usize> = (0..n).collect();
    perm.shuffle(rng);
    Graph::new(n, &edges).expect("valid edges").permuted(&perm)
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct TrialSummary {
    pub seed: u64,
    pub trials: usize,
    pub confirmed: usize,
    /// Smallest observed Q-index change in the direction the check expects.
    pub min_change: f64,
    pub failures: Vec<String>,
}

impl TrialSummary {
    pub fn all_confirmed(&self) -> bool {
        self.confirmed == self.trials && self.failures.is_empty()
    }
}

/// Deletes a random non-bridge edge from random connected graphs of order
/// 3..=max_order and checks the strict decrease.
pub fn monotonicity_trials(seed: u64, trials: usize, max_order: usize, tol: f64) -> Result<TrialSummary> {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut summary = TrialSummary {
        seed,
        trials,
        confirmed: 0,
        min_change: f64::INFINITY,
        failures: Vec::new(),
    };
    let mut done = 0;
    while done < trials {
        let n = rng.gen_range(3..=max_order);
        let density = rng.gen_range(0.1..0.7);
        let g = random_connected_graph(&mut rng, n, density);
        let removable: Vec<(usize, usize)> = g
            .edges()
            .into_iter()
            .filter(|&(a, b)| g.without_edge(a, b).map(|h| h.is_connected()).unwrap_or(false))
            .collect();
        let Some(&e) = removable.choose(&mut rng) else {
            continue;
        };
        done += 1;
        let before = q_index(&g, tol)?.q1;
        let after = q_index(&g.without_edge(e.0, e.1)?, tol)?.q1;
        summary.min_change = summary.min_change.min(before - after);
        if before - after > STRICT_MARGIN {
            summary.confirmed += 1;
        } else {
            summary
                .failures
                .push(format!("{g:?} minus {e:?}: {before} -> {after}"));
        }
    }
    Ok(summary)
}

/// Random rotations with a non-empty moved set; only trials meeting the
/// Perron hypothesis count towards `trials`.
pub fn rotation_trials(seed: u64, trials: usize, max_order: usize, tol: f64) -> Result<TrialSummary> {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut summary = TrialSummary {
        seed,
        trials,
        confirmed: 0,
        min_change: f64::INFINITY,
        failures: Vec::new(),
    };
    let mut done = 0;
    while done < trials {
        let n = rng.gen_range(3..=max_order);
        let density = rng.gen_range(0.1..0.7);
        let g = random_connected_graph(&mut rng, n, density);
        let u = rng.gen_range(0..n);
        let v = rng.gen_range(0..n);
        if u == v {
            continue;
        }
        let pool: Vec<usize> = g
            .neighbors(v)
            .difference(g.neighbors(u))
            .remove(u)
            .iter()
            .collect();
        if pool.is_empty() {
            continue;
        }
        let k = rng.gen_range(1..=pool.len());
        let moved = VertexSet::from_vertices(pool.choose_multiple(&mut rng, k).copied());
        let spec = RotationSpec { u, v, moved };
        let check = check_rotation_lemma(&g, &spec, tol)?;
        if check.outcome == RotationOutcome::HypothesisNotMet {
            continue;
        }
        done += 1;
        let gain = check.q_after.unwrap_or(f64::NAN) - check.q_before;
        summary.min_change = summary.min_change.min(gain);
        if check.outcome == RotationOutcome::IncreaseConfirmed {
            summary.confirmed += 1;
        } else {
            summary
                .failures
                .push(format!("{g:?} with {spec:?}: gain {gain:e}"));
        }
    }
    Ok(summary)
}
