//! Constructors for the named graph families. Labelings are fixed and
//! documented per constructor; compare shapes through `canon` only.

use crate::error::{domain, Error, Result};
use crate::graph::{Graph, VertexSet, MAX_VERTICES};

fn check_order(n: usize) -> Result<()> {
    if n > MAX_VERTICES {
        return Err(Error::Capacity {
            what: "vertex count",
            got: n,
            limit: MAX_VERTICES,
        });
    }
    Ok(())
}

fn clique_edges(vertices: std::ops::Range<usize>) -> Vec<(usize, usize)> {
    let vs: Vec<usize> = vertices.collect();
    let mut out = Vec::new();
    for (k, &i) in vs.iter().enumerate() {
        for &j in &vs[k + 1..] {
            out.push((i, j));
        }
    }
    out
}

pub fn complete(n: usize) -> Result<Graph> {
    check_order(n)?;
    Graph::new(n, &clique_edges(0..n))
}

/// Parts `0..s` and `s..s+t`.
pub fn complete_bipartite(s: usize, t: usize) -> Result<Graph> {
    check_order(s + t)?;
    let edges: Vec<_> = (0..s).flat_map(|i| (s..s + t).map(move |j| (i, j))).collect();
    Graph::new(s + t, &edges)
}

/// `g` keeps its ids; `h` is shifted by `g.order()`.
pub fn disjoint_union(g: &Graph, h: &Graph) -> Result<Graph> {
    let n = g.order() + h.order();
    check_order(n)?;
    let shift = g.order();
    let mut edges = g.edges();
    edges.extend(h.edges().into_iter().map(|(i, j)| (i + shift, j + shift)));
    Graph::new(n, &edges)
}

/// Disjoint union plus every edge between the two sides.
pub fn join(g: &Graph, h: &Graph) -> Result<Graph> {
    let u = disjoint_union(g, h)?;
    let shift = g.order();
    let mut edges = u.edges();
    for i in 0..shift {
        for j in shift..u.order() {
            edges.push((i, j));
        }
    }
    Graph::new(u.order(), &edges)
}

/// `K_n` without the edge `(0, 1)`.
pub fn kn_minus_e(n: usize) -> Result<Graph> {
    if n < 2 {
        return domain(format!("K_n - e needs n >= 2, got {n}"));
    }
    complete(n)?.without_edge(0, 1)
}

/// `K_n` without the `k` independent edges `(0,1), (2,3), ..., (2k-2, 2k-1)`.
pub fn kn_minus_matching(n: usize, k: usize) -> Result<Graph> {
    if 2 * k > n {
        return domain(format!("{k} independent edges do not fit in {n} vertices"));
    }
    let mut g = complete(n)?;
    for i in 0..k {
        g = g.without_edge(2 * i, 2 * i + 1)?;
    }
    Ok(g)
}

/// `K_n` minus the perfect matching `(0,1), (2,3), ...`; `(n-2)`-regular.
///
/// Odd `n` is rejected. The odd-order analogue in the extremal problem is a
/// different graph, see [`odd_case_family`].
pub fn kn_minus_perfect_matching(n: usize) -> Result<Graph> {
    if n < 2 || n % 2 != 0 {
        return domain(format!(
            "perfect matching complement needs even n >= 2, got {n}; use odd_case_family for odd orders"
        ));
    }
    kn_minus_matching(n, n / 2)
}

/// `K_t` with the edge `(0,1)` subdivided `n - t` times. The new vertices
/// `t, t+1, ..., n-1` form the path `0, t, t+1, ..., n-1, 1`. For `n == t`
/// this is `K_t` itself.
pub fn subdivided_clique(n: usize, t: usize) -> Result<Graph> {
    if t < 3 {
        return domain(format!("subdivided clique needs t >= 3, got {t}"));
    }
    if n < t {
        return domain(format!("subdivided clique needs n >= t, got n={n}, t={t}"));
    }
    check_order(n)?;
    let mut edges: Vec<_> = clique_edges(0..t)
        .into_iter()
        .filter(|&e| e != (0, 1))
        .collect();
    if n == t {
        edges.push((0, 1));
    } else {
        let path: Vec<usize> = std::iter::once(0).chain(t..n).chain(std::iter::once(1)).collect();
        edges.extend(path.windows(2).map(|w| (w[0], w[1])));
    }
    Graph::new(n, &edges)
}

/// `K_t` minus `(0,1)` with pendant vertices `t` on `0` and `t+1` on `1`.
pub fn g_e_t(t: usize) -> Result<Graph> {
    if t < 3 {
        return domain(format!("G^e_t needs t >= 3, got {t}"));
    }
    complete(t)?
        .without_edge(0, 1)?
        .with_vertex(VertexSet::singleton(0))?
        .with_vertex(VertexSet::singleton(1))
}

/// `K_{s-1}` joined to `p` disjoint copies of `K_t` plus one `K_r`, where
/// `n - s + 1 = p t + r` with `0 <= r < t`. The clique `K_{s-1}` takes ids
/// `0..s-1`, then the `K_t` copies in order, then `K_r`. For `s == 1` the
/// result is the (possibly disconnected) union alone.
pub fn f_family(s: usize, t: usize, n: usize) -> Result<Graph> {
    if s < 1 || t < 1 {
        return domain(format!("F_(s,t)(n) needs s >= 1 and t >= 1, got s={s}, t={t}"));
    }
    if n < s {
        return domain(format!("F_(s,t)(n) needs n >= s, got n={n}, s={s}"));
    }
    check_order(n)?;
    let rest = n - s + 1;
    let (p, r) = (rest / t, rest % t);
    let mut blocks: Vec<(usize, usize)> = (0..p).map(|_| (0, t)).collect();
    if r > 0 {
        blocks.push((0, r));
    }
    let mut edges = clique_edges(0..s - 1);
    let mut next = s - 1;
    for b in blocks.iter_mut() {
        b.0 = next;
        edges.extend(clique_edges(next..next + b.1));
        next += b.1;
    }
    for i in 0..s - 1 {
        for j in s - 1..n {
            edges.push((i, j));
        }
    }
    Graph::new(n, &edges)
}

/// The odd-order candidate `G*` for `n = t + 1`, parametrised by the even
/// size `a1` of the matched part.
///
/// Labeling: `0` is the hub `u*`; `1 .. t-1-a1` is `A_0`; the next `a1` ids are
/// `A_1`; `t` is `w`. The hub together with `A_0 ∪ A_1` induces `K_t` minus a
/// perfect matching of `A_1` (consecutive pairs), and `w` is adjacent exactly
/// to `A_1`. Every vertex except `w` has degree `t - 1`; `w` has degree `a1`.
pub fn odd_case_family(t: usize, a1: usize) -> Result<Graph> {
    if t < 4 {
        return domain(format!("odd case family needs t >= 4, got {t}"));
    }
    if a1 % 2 != 0 || a1 < 2 || a1 > t - 2 {
        return domain(format!("a1 must be even with 2 <= a1 <= t-2, got a1={a1}, t={t}"));
    }
    let first_a1 = t - a1;
    let w = t;
    let mut g = complete(t)?;
    for k in (0..a1).step_by(2) {
        g = g.without_edge(first_a1 + k, first_a1 + k + 1)?;
    }
    g.with_vertex(VertexSet::from_vertices(first_a1..w))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::canon::is_isomorphic;

    fn sorted(mut v: Vec<usize>) -> Vec<usize> {
        v.sort_unstable();
        v
    }

    fn cycle(n: usize) -> Graph {
        Graph::new(n, &(0..n).map(|i| (i, (i + 1) % n)).collect::<Vec<_>>()).unwrap()
    }

    fn path(n: usize) -> Graph {
        Graph::new(n, &(1..n).map(|i| (i - 1, i)).collect::<Vec<_>>()).unwrap()
    }

    #[test]
    fn basic_families() {
        assert_eq!(complete(4).unwrap().edge_count(), 6);
        let k23 = complete_bipartite(2, 3).unwrap();
        assert_eq!(k23.edge_count(), 6);
        assert_eq!(sorted(k23.degrees()), vec![2, 2, 2, 3, 3]);
        let wheel = join(&complete(1).unwrap(), &cycle(4)).unwrap();
        assert_eq!(wheel.edge_count(), 8);
        assert!(matches!(
            join(&complete(40).unwrap(), &complete(25).unwrap()),
            Err(Error::Capacity { .. })
        ));
    }

    #[test]
    fn kn_minus_e_examples() {
        assert!(is_isomorphic(&kn_minus_e(3).unwrap(), &path(3)));
        assert_eq!(sorted(kn_minus_e(4).unwrap().degrees()), vec![2, 2, 3, 3]);
        assert_eq!(kn_minus_e(5).unwrap().edge_count(), 9);
        assert!(kn_minus_e(1).is_err());
    }

    #[test]
    fn perfect_matching_complement() {
        assert!(is_isomorphic(&kn_minus_perfect_matching(4).unwrap(), &cycle(4)));
        let g = kn_minus_perfect_matching(6).unwrap();
        assert_eq!(g.edge_count(), 12);
        assert!(g.is_regular() && g.max_degree() == 4);
        assert!(kn_minus_perfect_matching(5).is_err());
    }

    #[test]
    fn subdivided_clique_examples() {
        assert!(is_isomorphic(&subdivided_clique(5, 3).unwrap(), &cycle(5)));
        let s = subdivided_clique(6, 4).unwrap();
        assert_eq!(s.edge_count(), 8);
        assert_eq!(s.max_degree(), 3);
        let once = subdivided_clique(5, 4).unwrap();
        assert!(!once.has_edge(0, 1) && once.has_edge(0, 4) && once.has_edge(4, 1));
        assert_eq!(subdivided_clique(4, 4).unwrap(), complete(4).unwrap());
        assert!(subdivided_clique(3, 4).is_err());
        for t in 3..8 {
            for n in t + 1..t + 6 {
                let g = subdivided_clique(n, t).unwrap();
                assert_eq!(g.order(), n);
                assert_eq!(g.edge_count(), t * (t - 1) / 2 - 1 + (n - t + 1));
                assert!(g.is_connected());
            }
        }
    }

    #[test]
    fn g_e_t_examples() {
        assert!(is_isomorphic(&g_e_t(3).unwrap(), &path(5)));
        let g4 = g_e_t(4).unwrap();
        assert_eq!((g4.order(), g4.edge_count()), (6, 7));
        // brute-force degree census for t = 5: the two endpoints of the
        // removed edge keep t-1 = 4 (lose one, gain a pendant); the other
        // three clique vertices have 4; the pendants have 1.
        let g5 = g_e_t(5).unwrap();
        let census: Vec<usize> = (0..7)
            .map(|v| (0..7).filter(|&w| g5.has_edge(v, w)).count())
            .collect();
        assert_eq!(sorted(census), vec![1, 1, 4, 4, 4, 4, 4]);
        assert!(g_e_t(2).is_err());
    }

    #[test]
    fn f_family_examples() {
        let g = f_family(2, 3, 8).unwrap();
        assert_eq!((g.order(), g.edge_count()), (8, 13));
        let h = f_family(2, 3, 7).unwrap();
        assert_eq!(h.order(), 7);
        assert_eq!(h.edge_count(), 6 + 6);
        let u = f_family(1, 3, 7).unwrap();
        assert_eq!(u.components().len(), 3);
        assert_eq!(u.edge_count(), 3 + 3);
    }

    #[test]
    fn odd_case_examples() {
        let g = odd_case_family(4, 2).unwrap();
        assert_eq!((g.order(), g.edge_count()), (5, 7));
        // non-edges: hub-w, A_0-w, and the matched pair inside A_1
        let non_edges: Vec<(usize, usize)> = g.complement().edges();
        assert_eq!(non_edges, vec![(0, 4), (1, 4), (2, 3)]);
        let h = odd_case_family(6, 4).unwrap();
        assert_eq!((h.order(), h.edge_count()), (7, 17));
        for (t, a1) in [(4, 2), (6, 2), (6, 4), (8, 6), (5, 2)] {
            let g = odd_case_family(t, a1).unwrap();
            let d = g.degrees();
            assert!(d[..t].iter().all(|&x| x == t - 1));
            assert_eq!(d[t], a1);
        }
        assert!(odd_case_family(6, 3).is_err());
        assert!(odd_case_family(6, 6).is_err());
        assert!(odd_case_family(3, 2).is_err());
    }

    #[test]
    fn constructors_are_deterministic() {
        assert_eq!(subdivided_clique(9, 5).unwrap(), subdivided_clique(9, 5).unwrap());
        assert_eq!(odd_case_family(8, 4).unwrap(), odd_case_family(8, 4).unwrap());
    }
}
