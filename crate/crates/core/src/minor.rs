//! Star-minor containment.
//!
//! `G` has a `K_{1,t}` minor iff some connected vertex set `S` has at least `t`
//! neighbours outside itself: contract `S` to the centre and keep `t` of those
//! neighbours as leaves. The fast path scans connected subsets directly;
//! [`branch_set_oracle`] re-derives the answer from branch sets and an edge
//! list without touching the scan code.

use serde::Serialize;

use crate::error::{Error, Result};
use crate::graph::{Graph, VertexSet};

pub const DEFAULT_SCAN_CAP: usize = 24;
pub const ORACLE_CAP: usize = 10;
pub const UNRESTRICTED_ORACLE_CAP: usize = 7;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(rename_all = "lowercase")]
pub enum MinorKind {
    Witness,
    Absent,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct MinorCertificate {
    pub kind: MinorKind,
    /// Connected set contracted to the star centre (witness only).
    pub witness_set: Option<VertexSet>,
    /// Outside neighbours of the witness set (empty for absence).
    pub boundary: VertexSet,
    /// Subset-scan cap in force; absence is an exhaustion result under it.
    pub scan_cap: usize,
}

impl MinorCertificate {
    /// Re-checks a witness against `g` from scratch.
    pub fn is_valid_witness(&self, g: &Graph, t: usize) -> bool {
        let Some(s) = self.witness_set else {
            return false;
        };
        self.kind == MinorKind::Witness
            && s.is_subset(g.vertices())
            && g.is_connected_set(s)
            && s.intersection(self.boundary).is_empty()
            && self
                .boundary
                .iter()
                .all(|b| !g.neighbors(b).intersection(s).is_empty())
            && self.boundary.len() >= t
    }
}

fn check_cap(g: &Graph, cap: usize) -> Result<()> {
    if g.order() > cap {
        return Err(Error::Capacity {
            what: "order for exhaustive connected-subset scan (use the max-degree bound instead)",
            got: g.order(),
            limit: cap,
        });
    }
    Ok(())
}

/// Visits subsets of `0..n` by increasing size, each size in increasing
/// numeric order. Stops when `f` returns `true`.
fn for_each_subset_by_size(n: usize, max_size: usize, mut f: impl FnMut(u64) -> bool) {
    for k in 1..=max_size.min(n) {
        let mut s: u64 = (1u64 << k) - 1;
        let limit = if n == 64 { u64::MAX } else { 1u64 << n };
        while n == 64 || s < limit {
            if f(s) {
                return;
            }
            // Gosper's hack
            let c = s & s.wrapping_neg();
            let r = s.wrapping_add(c);
            if r == 0 {
                break;
            }
            s = (((r ^ s) >> 2) / c) | r;
        }
    }
}

/// Largest `|N(S) \ S|` over connected non-empty `S`, with the smallest
/// maximizing mask among sets of minimum size.
pub fn max_connected_boundary(g: &Graph) -> Result<(usize, VertexSet)> {
    max_connected_boundary_capped(g, DEFAULT_SCAN_CAP)
}

pub fn max_connected_boundary_capped(g: &Graph, cap: usize) -> Result<(usize, VertexSet)> {
    check_cap(g, cap)?;
    let n = g.order();
    let mut best = (0usize, VertexSet::singleton(0));
    for_each_subset_by_size(n, n, |mask| {
        let s = VertexSet(mask);
        if n - s.len() <= best.0 {
            // no room outside S to beat the incumbent; larger sets have less
            return true;
        }
        if g.is_connected_set(s) {
            let b = g.boundary(s).len();
            if b > best.0 {
                best = (b, s);
            }
        }
        false
    });
    Ok(best)
}

pub fn has_k1t_minor(g: &Graph, t: usize) -> Result<MinorCertificate> {
    has_k1t_minor_capped(g, t, DEFAULT_SCAN_CAP)
}

pub fn has_k1t_minor_capped(g: &Graph, t: usize, cap: usize) -> Result<MinorCertificate> {
    if t == 0 {
        return Err(Error::Domain("star minor needs t >= 1".into()));
    }
    let n = g.order();
    let absent = MinorCertificate {
        kind: MinorKind::Absent,
        witness_set: None,
        boundary: VertexSet::EMPTY,
        scan_cap: cap,
    };
    if n < t + 1 {
        return Ok(absent);
    }
    // Single vertices first: covers every graph with Δ >= t without a scan.
    if let Some(v) = (0..n).find(|&v| g.deg(v) >= t) {
        return Ok(MinorCertificate {
            kind: MinorKind::Witness,
            witness_set: Some(VertexSet::singleton(v)),
            boundary: g.neighbors(v),
            scan_cap: cap,
        });
    }
    check_cap(g, cap)?;
    let mut found = None;
    for_each_subset_by_size(n, n - t, |mask| {
        let s = VertexSet(mask);
        if s.len() > 1 && g.is_connected_set(s) {
            let b = g.boundary(s);
            if b.len() >= t {
                found = Some((s, b));
                return true;
            }
        }
        false
    });
    Ok(match found {
        Some((s, b)) => MinorCertificate {
            kind: MinorKind::Witness,
            witness_set: Some(s),
            boundary: b,
            scan_cap: cap,
        },
        None => absent,
    })
}

/// Shorthand for `has_k1t_minor(g, t)?.kind == MinorKind::Absent`.
pub fn is_k1t_minor_free(g: &Graph, t: usize) -> Result<bool> {
    Ok(has_k1t_minor(g, t)?.kind == MinorKind::Absent)
}

struct EdgeView {
    n: usize,
    edges: Vec<(usize, usize)>,
}

impl EdgeView {
    fn new(g: &Graph) -> EdgeView {
        let n = g.order();
        let mut edges = Vec::new();
        for i in 0..n {
            for j in i + 1..n {
                if g.has_edge(i, j) {
                    edges.push((i, j));
                }
            }
        }
        EdgeView { n, edges }
    }

    fn member(mask: u64, v: usize) -> bool {
        mask >> v & 1 == 1
    }

    /// Union-find over the induced edges.
    fn connected(&self, mask: u64) -> bool {
        if mask == 0 {
            return false;
        }
        let mut parent: Vec<usize> = (0..self.n).collect();
        fn root(p: &mut [usize], mut x: usize) -> usize {
            while p[x] != x {
                x = p[x];
            }
            x
        }
        for &(a, b) in &self.edges {
            if Self::member(mask, a) && Self::member(mask, b) {
                let (ra, rb) = (root(&mut parent, a), root(&mut parent, b));
                if ra != rb {
                    parent[ra.max(rb)] = ra.min(rb);
                }
            }
        }
        let members: Vec<usize> = (0..self.n).filter(|&v| Self::member(mask, v)).collect();
        let r0 = root(&mut parent, members[0]);
        members.iter().all(|&v| root(&mut parent, v) == r0)
    }

    fn touches(&self, a: u64, b: u64) -> bool {
        self.edges.iter().any(|&(x, y)| {
            (Self::member(a, x) && Self::member(b, y)) || (Self::member(a, y) && Self::member(b, x))
        })
    }

    /// Vertices outside `center` joined to it by an edge, in increasing order.
    fn leaf_candidates(&self, center: u64) -> Vec<usize> {
        let mut out: Vec<usize> = self
            .edges
            .iter()
            .filter_map(|&(x, y)| match (Self::member(center, x), Self::member(center, y)) {
                (true, false) => Some(y),
                (false, true) => Some(x),
                _ => None,
            })
            .collect();
        out.sort_unstable();
        out.dedup();
        out
    }
}

/// Independent decision procedure: exists a connected centre branch set with
/// `t` disjoint single-vertex leaf branch sets attached to it.
///
/// For `n <= 7` it also runs the unrestricted search where leaf branch sets
/// may be arbitrary connected sets, and reports an internal error if the two
/// disagree.
pub fn branch_set_oracle(g: &Graph, t: usize) -> Result<bool> {
    let n = g.order();
    if n > ORACLE_CAP {
        return Err(Error::Capacity {
            what: "order for the branch-set oracle",
            got: n,
            limit: ORACLE_CAP,
        });
    }
    let view = EdgeView::new(g);
    let mut single_leaf = false;
    for center in 1u64..(1u64 << n) {
        if !view.connected(center) {
            continue;
        }
        // leaves are distinct vertices, so a greedy assignment of the first t
        // candidates to the t leaf slots is a complete matching
        if view.leaf_candidates(center).len() >= t {
            single_leaf = true;
            break;
        }
    }
    if n <= UNRESTRICTED_ORACLE_CAP {
        let unrestricted = unrestricted_branch_sets(&view, t);
        if unrestricted != single_leaf {
            return Err(Error::Internal(format!(
                "branch-set oracle disagrees with its unrestricted form (t={t}, single-leaf={single_leaf})"
            )));
        }
    }
    Ok(single_leaf)
}

/// Exhaustive search over a connected centre and `t` pairwise disjoint
/// connected leaf sets, each adjacent to the centre.
pub fn branch_set_oracle_unrestricted(g: &Graph, t: usize) -> Result<bool> {
    if g.order() > UNRESTRICTED_ORACLE_CAP {
        return Err(Error::Capacity {
            what: "order for the unrestricted branch-set oracle",
            got: g.order(),
            limit: UNRESTRICTED_ORACLE_CAP,
        });
    }
    Ok(unrestricted_branch_sets(&EdgeView::new(g), t))
}

fn unrestricted_branch_sets(view: &EdgeView, t: usize) -> bool {
    let n = view.n;
    let connected: Vec<u64> = (1u64..(1u64 << n)).filter(|&m| view.connected(m)).collect();
    fn pick(cands: &[u64], used: u64, min_low: u32, need: usize) -> bool {
        if need == 0 {
            return true;
        }
        cands.iter().any(|&c| {
            c & used == 0
                && c.trailing_zeros() >= min_low
                && pick(cands, used | c, c.trailing_zeros() + 1, need - 1)
        })
    }
    connected.iter().any(|&center| {
        let leaves: Vec<u64> = connected
            .iter()
            .copied()
            .filter(|&l| l & center == 0 && view.touches(center, l))
            .collect();
        pick(&leaves, center, 0, t)
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::families;

    fn cycle(n: usize) -> Graph {
        Graph::new(n, &(0..n).map(|i| (i, (i + 1) % n)).collect::<Vec<_>>()).unwrap()
    }

    fn path(n: usize) -> Graph {
        Graph::new(n, &(1..n).map(|i| (i - 1, i)).collect::<Vec<_>>()).unwrap()
    }

    #[test]
    fn boundary_examples() {
        let k13 = families::complete_bipartite(1, 3).unwrap();
        assert_eq!(max_connected_boundary(&k13).unwrap(), (3, VertexSet::singleton(0)));
        for n in 4..10 {
            assert_eq!(max_connected_boundary(&cycle(n)).unwrap().0, 2);
        }
        let s = families::subdivided_clique(6, 4).unwrap();
        let (size, wit) = max_connected_boundary(&s).unwrap();
        assert_eq!(size, 3);
        assert!(s.is_connected_set(wit));
    }

    #[test]
    fn minor_examples() {
        let k13 = families::complete_bipartite(1, 3).unwrap();
        let c = has_k1t_minor(&k13, 3).unwrap();
        assert_eq!(c.kind, MinorKind::Witness);
        assert!(c.is_valid_witness(&k13, 3));
        assert_eq!(has_k1t_minor(&cycle(9), 3).unwrap().kind, MinorKind::Absent);
        for t in 3..=6 {
            for n in t + 1..=t + 4 {
                let g = families::subdivided_clique(n, t).unwrap();
                assert!(is_k1t_minor_free(&g, t).unwrap(), "S^{}(K_{t})", n - t);
            }
        }
    }

    #[test]
    fn witness_needs_contraction() {
        // Δ = 3, but contracting the edge 0-1 leaves a centre with
        // neighbours {2, 3, 5, 6}.
        let g = Graph::new(7, &[(0, 1), (1, 2), (0, 3), (3, 4), (0, 5), (1, 6)]).unwrap();
        assert_eq!(g.max_degree(), 3);
        let c = has_k1t_minor(&g, 4).unwrap();
        assert_eq!(c.kind, MinorKind::Witness);
        assert!(c.is_valid_witness(&g, 4));
        assert_eq!(c.witness_set, Some(VertexSet::from_vertices([0, 1])));
        assert!(branch_set_oracle(&g, 4).unwrap());
    }

    #[test]
    fn oracle_examples() {
        assert!(branch_set_oracle(&families::complete(4).unwrap(), 3).unwrap());
        assert!(!branch_set_oracle(&path(6), 3).unwrap());
        assert!(matches!(
            branch_set_oracle(&path(11), 3),
            Err(Error::Capacity { .. })
        ));
    }

    #[test]
    fn scan_cap_is_enforced() {
        let p = path(30);
        assert!(matches!(max_connected_boundary(&p), Err(Error::Capacity { .. })));
        // Δ >= t short-circuits without a scan
        let star = families::complete_bipartite(1, 40).unwrap();
        assert_eq!(has_k1t_minor(&star, 5).unwrap().kind, MinorKind::Witness);
    }

    #[test]
    fn small_orders_are_minor_free() {
        assert_eq!(has_k1t_minor(&families::complete(3).unwrap(), 3).unwrap().kind, MinorKind::Absent);
        assert!(has_k1t_minor(&path(3), 0).is_err());
    }
}
