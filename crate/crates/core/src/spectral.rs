//! Signless Laplacian spectra and the closed forms that pin them down.
//!
//! `Q(G) = D(G) + A(G)` is non-negative with a positive diagonal, so for a
//! connected graph it is primitive and plain power iteration from the
//! all-ones vector converges to the top eigenpair.

use serde::Serialize;

use crate::error::{domain, Error, Result};
use crate::graph::Graph;

pub const DEFAULT_TOL: f64 = 1e-10;
pub const MAX_ITERATIONS: usize = 1_000_000;

/// Margin for strict inequalities between computed Q-indices.
pub const STRICT_MARGIN: f64 = 1e-9;

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct SpectralResult {
    /// Rayleigh quotient at the final iterate.
    pub q1: f64,
    /// Eigenvector estimate scaled to unit maximum entry.
    pub perron: Vec<f64>,
    /// `max_i |(Q x)_i - q1 x_i|` at the final iterate.
    pub residual: f64,
    pub iterations: usize,
}

/// Dense row-major `Q(G)`.
pub fn q_matrix(g: &Graph) -> Vec<Vec<f64>> {
    let n = g.order();
    (0..n)
        .map(|i| {
            (0..n)
                .map(|j| {
                    if i == j {
                        g.deg(i) as f64
                    } else if g.has_edge(i, j) {
                        1.0
                    } else {
                        0.0
                    }
                })
                .collect()
        })
        .collect()
}

fn apply_q(g: &Graph, x: &[f64], out: &mut [f64]) {
    for (i, o) in out.iter_mut().enumerate() {
        let mut s = g.deg(i) as f64 * x[i];
        let mut row = g.rows()[i];
        while row != 0 {
            s += x[row.trailing_zeros() as usize];
            row &= row - 1;
        }
        *o = s;
    }
}

/// Q-index and Perron vector of a connected graph.
pub fn q_index(g: &Graph, tol: f64) -> Result<SpectralResult> {
    q_index_capped(g, tol, MAX_ITERATIONS)
}

pub fn q_index_capped(g: &Graph, tol: f64, max_iterations: usize) -> Result<SpectralResult> {
    if !(tol > 0.0) {
        return domain(format!("tolerance must be positive, got {tol}"));
    }
    let n = g.order();
    if n == 1 {
        return Ok(SpectralResult {
            q1: 0.0,
            perron: vec![1.0],
            residual: 0.0,
            iterations: 0,
        });
    }
    if !g.is_connected() {
        return Err(Error::Disconnected);
    }
    let mut x = vec![1.0; n];
    let mut y = vec![0.0; n];
    let mut residual = f64::INFINITY;
    for it in 1..=max_iterations {
        apply_q(g, &x, &mut y);
        let xy: f64 = x.iter().zip(&y).map(|(a, b)| a * b).sum();
        let xx: f64 = x.iter().map(|a| a * a).sum();
        let q1 = xy / xx;
        residual = x
            .iter()
            .zip(&y)
            .map(|(a, b)| (b - q1 * a).abs())
            .fold(0.0, f64::max);
        if residual < tol {
            return Ok(SpectralResult {
                q1,
                perron: x,
                residual,
                iterations: it,
            });
        }
        let top = y.iter().copied().fold(0.0, f64::max);
        for (xi, yi) in x.iter_mut().zip(&y) {
            *xi = yi / top;
        }
    }
    Err(Error::NoConvergence {
        iterations: max_iterations,
        residual,
    })
}

/// Q-index of an arbitrary graph: the maximum over its components.
pub fn q_index_any(g: &Graph, tol: f64) -> Result<f64> {
    let mut best = 0.0f64;
    for c in g.components() {
        let sub = g.induced(c)?;
        best = best.max(q_index(&sub, tol)?.q1);
    }
    Ok(best)
}

/// `q1(K_n - e) = 3n/2 - 3 + sqrt(n^2 + 4n - 12) / 2`.
pub fn closed_form_kn_minus_e(n: usize) -> Result<f64> {
    if n < 3 {
        return domain(format!("closed form for K_n - e needs n >= 3, got {n}"));
    }
    let n = n as f64;
    Ok(1.5 * n - 3.0 + (n * n + 4.0 * n - 12.0).sqrt() / 2.0)
}

/// Monic cubic `x^3 + b x^2 + c x + d` with a bracket `[lo, hi]` around its
/// largest real root.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct CubicSpec {
    pub b: f64,
    pub c: f64,
    pub d: f64,
    pub lo: f64,
    pub hi: f64,
}

impl CubicSpec {
    pub fn eval(&self, x: f64) -> f64 {
        ((x + self.b) * x + self.c) * x + self.d
    }
}

/// Bisection keeping `f(lo) <= 0 < f(hi)`. Since the cubic is monic this
/// converges to the largest root in the bracket when `f` is positive on
/// `(root, hi]`.
pub fn cubic_largest_root(spec: &CubicSpec, tol: f64) -> Result<f64> {
    let (mut lo, mut hi) = (spec.lo, spec.hi);
    let bracket = Error::Bracket { lo, hi };
    if !(lo <= hi) || !(tol > 0.0) {
        return Err(bracket);
    }
    if spec.eval(hi) == 0.0 {
        return Ok(hi);
    }
    if !(spec.eval(lo) <= 0.0 && spec.eval(hi) > 0.0) {
        return Err(bracket);
    }
    while hi - lo >= tol {
        let mid = 0.5 * (lo + hi);
        if mid <= lo || mid >= hi {
            break;
        }
        if spec.eval(mid) <= 0.0 {
            lo = mid;
        } else {
            hi = mid;
        }
    }
    Ok(if spec.eval(lo) == 0.0 { lo } else { 0.5 * (lo + hi) })
}

/// `g(x) = x^3 - (3t-4) x^2 + (t-2)(2t-1) x - 2(t-2)(t-3)`, whose largest
/// root is the Q-index of `G^e_t` (order `t + 2`).
pub fn lemma24_coeffs(t: usize) -> Result<CubicSpec> {
    if t < 3 {
        return domain(format!("G^e_t cubic needs t >= 3, got {t}"));
    }
    let t = t as f64;
    Ok(CubicSpec {
        b: -(3.0 * t - 4.0),
        c: (t - 2.0) * (2.0 * t - 1.0),
        d: -2.0 * (t - 2.0) * (t - 3.0),
        lo: 2.0 * t - 3.0,
        hi: 2.0 * t,
    })
}

fn check_odd_params(t: usize, a1: usize) -> Result<()> {
    if t < 4 || a1 % 2 != 0 || a1 < 2 || a1 > t - 2 {
        return domain(format!(
            "odd-case cubic needs t >= 4 and even a1 in [2, t-2], got t={t}, a1={a1}"
        ));
    }
    Ok(())
}

/// Characteristic cubic of the three-class quotient of `odd_case_family(t, a1)`:
/// `q^3 + (5-3t-a1) q^2 + (3 a1 t - 8t - 5 a1 + 2t^2 + 6) q + c` with
/// `c = -2 a1^2 - (2t^2 - 10t + 8) a1`.
pub fn eq3_coeffs(t: usize, a1: usize) -> Result<CubicSpec> {
    check_odd_params(t, a1)?;
    let (t, a) = (t as f64, a1 as f64);
    Ok(CubicSpec {
        b: 5.0 - 3.0 * t - a,
        c: 3.0 * a * t - 8.0 * t - 5.0 * a + 2.0 * t * t + 6.0,
        d: -2.0 * a * a - (2.0 * t * t - 10.0 * t + 8.0) * a,
        lo: 2.0 * t - 3.0,
        hi: 2.0 * t,
    })
}

pub fn eq3_residual(t: usize, a1: usize, q: f64) -> Result<f64> {
    Ok(eq3_coeffs(t, a1)?.eval(q))
}

/// The constant term solved for as a function of `q`:
/// `c(q) = -q^3 - (5-3t-a1) q^2 - (3 a1 t - 8t - 5 a1 + 2t^2 + 6) q`.
pub fn eq4_constant(t: usize, a1: usize, q: f64) -> Result<f64> {
    let s = eq3_coeffs(t, a1)?;
    Ok(-((q + s.b) * q + s.c) * q)
}

/// Checks that `c(q)` strictly decreases along `points` evenly spaced values
/// spanning `(2t-3, 2t-2]`.
pub fn eq4_decreasing(t: usize, a1: usize, points: usize) -> Result<bool> {
    check_odd_params(t, a1)?;
    let lo = 2.0 * t as f64 - 3.0;
    let values = (1..=points)
        .map(|k| eq4_constant(t, a1, lo + k as f64 / points as f64))
        .collect::<Result<Vec<f64>>>()?;
    Ok(values.windows(2).all(|w| w[1] < w[0]))
}

/// `max_u d(u) + (1/d(u)) sum_{v in N(u)} d(v)`.
pub fn merris_bound(g: &Graph) -> Result<f64> {
    let mut best = f64::NEG_INFINITY;
    for u in 0..g.order() {
        let du = g.deg(u);
        if du == 0 {
            return domain(format!("vertex {u} is isolated"));
        }
        let s: usize = g.neighbors(u).iter().map(|v| g.deg(v)).sum();
        best = best.max(du as f64 + s as f64 / du as f64);
    }
    Ok(best)
}

/// `2 Δ(G)`.
pub fn degree_bound(g: &Graph) -> f64 {
    2.0 * g.max_degree() as f64
}

/// Window `(lower, upper]` for the extremal Q-index among connected
/// `K_{1,t}`-minor-free graphs of order `n`: upper `2t-2`; lower `2t-3` when
/// `n = t+1`, else `2t - 2 - 2/(t-1)`.
pub fn lemma31_bounds(t: usize, n: usize) -> Result<(f64, f64)> {
    if t < 3 || n < t + 1 {
        return domain(format!("bounds need t >= 3 and n >= t+1, got t={t}, n={n}"));
    }
    let tf = t as f64;
    let upper = 2.0 * tf - 2.0;
    let lower = if n == t + 1 {
        2.0 * tf - 3.0
    } else {
        2.0 * tf - 2.0 - 2.0 / (tf - 1.0)
    };
    Ok((lower, upper))
}

/// The `G^e_t` cubic evaluated at `2t - 2 - 2/(t-1)`; negative for all `t >= 3`.
pub fn lemma31_sign_value(t: usize) -> Result<f64> {
    let g = lemma24_coeffs(t)?;
    let tf = t as f64;
    Ok(g.eval(2.0 * tf - 2.0 - 2.0 / (tf - 1.0)))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::families;
    use approx::assert_abs_diff_eq;

    fn path(n: usize) -> Graph {
        Graph::new(n, &(1..n).map(|i| (i - 1, i)).collect::<Vec<_>>()).unwrap()
    }

    fn cycle(n: usize) -> Graph {
        Graph::new(n, &(0..n).map(|i| (i, (i + 1) % n)).collect::<Vec<_>>()).unwrap()
    }

    #[test]
    fn q_matrix_examples() {
        assert_eq!(q_matrix(&path(2)), vec![vec![1.0, 1.0], vec![1.0, 1.0]]);
        assert_eq!(
            q_matrix(&path(3)),
            vec![vec![1.0, 1.0, 0.0], vec![1.0, 2.0, 1.0], vec![0.0, 1.0, 1.0]]
        );
        let c4 = q_matrix(&cycle(4));
        assert!((0..4).all(|i| c4[i][i] == 2.0));
        assert_eq!(c4[0][1], 1.0);
        assert_eq!(c4[0][2], 0.0);
    }

    #[test]
    fn q_index_small() {
        assert_abs_diff_eq!(q_index(&path(2), DEFAULT_TOL).unwrap().q1, 2.0, epsilon = 1e-9);
        for n in 2..9 {
            let r = q_index(&families::complete(n).unwrap(), DEFAULT_TOL).unwrap();
            assert_abs_diff_eq!(r.q1, 2.0 * n as f64 - 2.0, epsilon = 1e-9);
        }
        // P_3: characteristic polynomial x(x-1)(x-3)
        assert_abs_diff_eq!(q_index(&path(3), DEFAULT_TOL).unwrap().q1, 3.0, epsilon = 1e-9);
    }

    #[test]
    fn q_index_result_invariants() {
        let r = q_index(&families::subdivided_clique(9, 5).unwrap(), DEFAULT_TOL).unwrap();
        assert!(r.residual < DEFAULT_TOL);
        assert!(r.perron.iter().all(|&x| x > 0.0));
        assert_abs_diff_eq!(r.perron.iter().copied().fold(0.0, f64::max), 1.0, epsilon = 1e-6);
    }

    #[test]
    fn q_index_errors() {
        let two_edges = Graph::new(4, &[(0, 1), (2, 3)]).unwrap();
        assert_eq!(q_index(&two_edges, DEFAULT_TOL), Err(Error::Disconnected));
        assert_abs_diff_eq!(q_index_any(&two_edges, DEFAULT_TOL).unwrap(), 2.0, epsilon = 1e-9);
        assert!(matches!(
            q_index_capped(&path(30), 1e-14, 3),
            Err(Error::NoConvergence { iterations: 3, .. })
        ));
        let single = q_index(&Graph::empty(1).unwrap(), DEFAULT_TOL).unwrap();
        assert_eq!(single.q1, 0.0);
    }

    #[test]
    fn kn_minus_e_closed_form() {
        assert_abs_diff_eq!(closed_form_kn_minus_e(3).unwrap(), 3.0, epsilon = 1e-15);
        assert_abs_diff_eq!(
            closed_form_kn_minus_e(4).unwrap(),
            3.0 + 20f64.sqrt() / 2.0,
            epsilon = 1e-15
        );
        assert_abs_diff_eq!(closed_form_kn_minus_e(4).unwrap(), 5.2360680, epsilon = 1e-7);
        assert!(closed_form_kn_minus_e(2).is_err());
    }

    #[test]
    fn cubic_roots() {
        let t3 = lemma24_coeffs(3).unwrap();
        assert_eq!((t3.b, t3.c, t3.d), (-5.0, 5.0, 0.0));
        let r = cubic_largest_root(&t3, 1e-13).unwrap();
        assert_abs_diff_eq!(r, (5.0 + 5f64.sqrt()) / 2.0, epsilon = 1e-12);

        let t5 = lemma24_coeffs(5).unwrap();
        // -2(t-2)(t-3) at t = 5
        assert_eq!((t5.b, t5.c, t5.d), (-11.0, 27.0, -12.0));

        let zero = CubicSpec { b: 0.0, c: 0.0, d: 0.0, lo: -1.0, hi: 1.0 };
        assert_abs_diff_eq!(cubic_largest_root(&zero, 1e-12).unwrap(), 0.0, epsilon = 1e-12);

        let bad = CubicSpec { lo: 10.0, hi: 11.0, ..t3 };
        assert!(matches!(cubic_largest_root(&bad, 1e-12), Err(Error::Bracket { .. })));
    }

    #[test]
    fn eq3_example_coefficients() {
        let s = eq3_coeffs(4, 2).unwrap();
        assert_eq!((s.b, s.c, s.d), (-9.0, 20.0, -8.0));
        let r = cubic_largest_root(&s, 1e-13).unwrap();
        assert_abs_diff_eq!(r, 5.7785, epsilon = 1e-4);
        assert!(eq3_coeffs(5, 2).is_ok());
        assert!(eq3_coeffs(6, 1).is_err());
        assert!(eq3_coeffs(3, 2).is_err());
    }

    #[test]
    fn eq4_is_negated_eq3_without_constant() {
        let s = eq3_coeffs(6, 2).unwrap();
        for q in [7.0, 9.5, 10.0] {
            assert_abs_diff_eq!(eq4_constant(6, 2, q).unwrap(), s.d - s.eval(q), epsilon = 1e-9);
        }
    }

    #[test]
    fn bounds_examples() {
        assert_abs_diff_eq!(merris_bound(&cycle(6)).unwrap(), 4.0);
        let k13 = families::complete_bipartite(1, 3).unwrap();
        assert_abs_diff_eq!(merris_bound(&k13).unwrap(), 4.0);
        assert_abs_diff_eq!(
            merris_bound(&families::kn_minus_e(4).unwrap()).unwrap(),
            16.0 / 3.0,
            epsilon = 1e-15
        );
        assert!(merris_bound(&Graph::new(3, &[(0, 1)]).unwrap()).is_err());
        assert_eq!(degree_bound(&cycle(4)), 4.0);
        assert_eq!(degree_bound(&path(4)), 4.0);
        assert_eq!(degree_bound(&families::subdivided_clique(6, 4).unwrap()), 6.0);
    }

    #[test]
    fn lemma31_windows() {
        assert_eq!(lemma31_bounds(3, 4).unwrap(), (3.0, 4.0));
        let (lo, hi) = lemma31_bounds(4, 6).unwrap();
        assert_abs_diff_eq!(lo, 16.0 / 3.0, epsilon = 1e-15);
        assert_eq!(hi, 6.0);
        assert_eq!(lemma31_bounds(5, 6).unwrap(), (7.0, 8.0));
        assert!(lemma31_bounds(2, 4).is_err());
        assert!(lemma31_bounds(5, 5).is_err());
    }

    #[test]
    fn lemma31_sign_matches_simplified_expression() {
        for t in 3..=10 {
            let s = (t - 1) as f64;
            let simplified = -10.0 + 14.0 / s + 4.0 / (s * s) - 8.0 / (s * s * s);
            let direct = lemma31_sign_value(t).unwrap();
            assert_abs_diff_eq!(direct, simplified, epsilon = 1e-9);
            assert!(direct < 0.0);
        }
    }
}
