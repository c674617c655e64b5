//! Immutable simple undirected graphs on at most 64 vertices.
//!
//! Each vertex owns one adjacency row stored as a `u64` bitmask. All edit-style
//! operations return new values.

use std::fmt;

use serde::{Serialize, Serializer};

use crate::error::{domain, Error, Result};

pub const MAX_VERTICES: usize = 64;

/// A set of vertex ids packed into one machine word.
#[derive(Clone, Copy, Default, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct VertexSet(pub u64);

impl VertexSet {
    pub const EMPTY: VertexSet = VertexSet(0);

    /// The set {0, 1, ..., n-1}.
    pub fn full(n: usize) -> VertexSet {
        if n >= 64 {
            VertexSet(u64::MAX)
        } else {
            VertexSet((1u64 << n) - 1)
        }
    }

    pub fn singleton(v: usize) -> VertexSet {
        VertexSet(1u64 << v)
    }

    pub fn from_vertices<I: IntoIterator<Item = usize>>(it: I) -> VertexSet {
        VertexSet(it.into_iter().fold(0u64, |acc, v| acc | (1u64 << v)))
    }

    pub fn contains(self, v: usize) -> bool {
        v < 64 && self.0 >> v & 1 == 1
    }

    pub fn insert(self, v: usize) -> VertexSet {
        VertexSet(self.0 | 1u64 << v)
    }

    pub fn remove(self, v: usize) -> VertexSet {
        VertexSet(self.0 & !(1u64 << v))
    }

    pub fn len(self) -> usize {
        self.0.count_ones() as usize
    }

    pub fn is_empty(self) -> bool {
        self.0 == 0
    }

    pub fn union(self, other: VertexSet) -> VertexSet {
        VertexSet(self.0 | other.0)
    }

    pub fn intersection(self, other: VertexSet) -> VertexSet {
        VertexSet(self.0 & other.0)
    }

    pub fn difference(self, other: VertexSet) -> VertexSet {
        VertexSet(self.0 & !other.0)
    }

    pub fn is_subset(self, other: VertexSet) -> bool {
        self.0 & !other.0 == 0
    }

    pub fn first(self) -> Option<usize> {
        (self.0 != 0).then(|| self.0.trailing_zeros() as usize)
    }

    pub fn iter(self) -> impl Iterator<Item = usize> {
        let mut bits = self.0;
        std::iter::from_fn(move || {
            if bits == 0 {
                None
            } else {
                let v = bits.trailing_zeros() as usize;
                bits &= bits - 1;
                Some(v)
            }
        })
    }
}

/// Serialized as the ascending list of member ids.
impl Serialize for VertexSet {
    fn serialize<S: Serializer>(&self, serializer: S) -> std::result::Result<S::Ok, S::Error> {
        serializer.collect_seq(self.iter())
    }
}

impl fmt::Debug for VertexSet {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.debug_set().entries(self.iter()).finish()
    }
}

#[derive(Clone, PartialEq, Eq, Hash)]
pub struct Graph {
    n: usize,
    adj: Vec<u64>,
}

impl Graph {
    /// Builds a graph from an edge list. Duplicate and reversed pairs collapse.
    pub fn new(n: usize, edges: &[(usize, usize)]) -> Result<Graph> {
        let mut g = Graph::empty(n)?;
        for &(i, j) in edges {
            if i >= n || j >= n {
                return domain(format!("edge ({i},{j}) has a vertex outside 0..{n}"));
            }
            if i == j {
                return domain(format!("loop at vertex {i}"));
            }
            g.adj[i] |= 1u64 << j;
            g.adj[j] |= 1u64 << i;
        }
        Ok(g)
    }

    /// The edgeless graph on `n` vertices.
    pub fn empty(n: usize) -> Result<Graph> {
        if n == 0 {
            return domain("a graph needs at least one vertex");
        }
        if n > MAX_VERTICES {
            return Err(Error::Capacity {
                what: "vertex count",
                got: n,
                limit: MAX_VERTICES,
            });
        }
        Ok(Graph { n, adj: vec![0; n] })
    }

    /// Builds from raw rows, validating symmetry, loops and range.
    pub fn from_rows(rows: Vec<u64>) -> Result<Graph> {
        let n = rows.len();
        Graph::empty(n.max(1))?;
        if n == 0 {
            return domain("a graph needs at least one vertex");
        }
        let outside = !VertexSet::full(n).0;
        for (i, &row) in rows.iter().enumerate() {
            if row & outside != 0 {
                return domain(format!("row {i} has bits beyond vertex {}", n - 1));
            }
            if row >> i & 1 == 1 {
                return domain(format!("loop at vertex {i}"));
            }
            for j in VertexSet(row).iter() {
                if rows[j] >> i & 1 == 0 {
                    return domain(format!("asymmetric adjacency between {i} and {j}"));
                }
            }
        }
        Ok(Graph { n, adj: rows })
    }

    /// Trusted constructor for rows that are already symmetric and loop-free.
    pub(crate) fn from_rows_unchecked(adj: Vec<u64>) -> Graph {
        debug_assert!(Graph::from_rows(adj.clone()).is_ok());
        Graph { n: adj.len(), adj }
    }

    pub fn order(&self) -> usize {
        self.n
    }

    pub fn rows(&self) -> &[u64] {
        &self.adj
    }

    pub fn vertices(&self) -> VertexSet {
        VertexSet::full(self.n)
    }

    pub fn edge_count(&self) -> usize {
        self.adj.iter().map(|r| r.count_ones() as usize).sum::<usize>() / 2
    }

    /// Edges as `(i, j)` with `i < j`, in row-major order.
    pub fn edges(&self) -> Vec<(usize, usize)> {
        let mut out = Vec::with_capacity(self.edge_count());
        for i in 0..self.n {
            for j in VertexSet(self.adj[i] >> i >> 1).iter() {
                out.push((i, i + 1 + j));
            }
        }
        out
    }

    pub fn has_edge(&self, i: usize, j: usize) -> bool {
        i < self.n && j < self.n && self.adj[i] >> j & 1 == 1
    }

    pub fn neighbors(&self, v: usize) -> VertexSet {
        VertexSet(self.adj[v])
    }

    /// Open neighbourhood of a set: vertices outside `s` adjacent to some vertex of `s`.
    pub fn boundary(&self, s: VertexSet) -> VertexSet {
        let mut nb = 0u64;
        for v in s.iter() {
            nb |= self.adj[v];
        }
        VertexSet(nb & !s.0)
    }

    pub fn degree(&self, v: usize) -> Result<usize> {
        if v >= self.n {
            return domain(format!("vertex {v} outside 0..{}", self.n));
        }
        Ok(self.deg(v))
    }

    #[inline]
    pub(crate) fn deg(&self, v: usize) -> usize {
        self.adj[v].count_ones() as usize
    }

    pub fn degrees(&self) -> Vec<usize> {
        (0..self.n).map(|v| self.deg(v)).collect()
    }

    pub fn max_degree(&self) -> usize {
        (0..self.n).map(|v| self.deg(v)).max().unwrap_or(0)
    }

    pub fn min_degree(&self) -> usize {
        (0..self.n).map(|v| self.deg(v)).min().unwrap_or(0)
    }

    pub fn is_regular(&self) -> bool {
        self.max_degree() == self.min_degree()
    }

    /// Vertices reachable from `start` inside `within`.
    pub fn reach(&self, start: usize, within: VertexSet) -> VertexSet {
        let mut seen = 1u64 << start;
        let mut frontier = seen;
        while frontier != 0 {
            let mut next = 0u64;
            for v in VertexSet(frontier).iter() {
                next |= self.adj[v];
            }
            next &= within.0 & !seen;
            seen |= next;
            frontier = next;
        }
        VertexSet(seen)
    }

    /// Whether the induced subgraph on `s` is connected (the empty set is not).
    pub fn is_connected_set(&self, s: VertexSet) -> bool {
        match s.first() {
            None => false,
            Some(v) => self.reach(v, s) == s,
        }
    }

    pub fn is_connected(&self) -> bool {
        self.is_connected_set(self.vertices())
    }

    /// Vertex sets of the connected components, ordered by smallest member.
    pub fn components(&self) -> Vec<VertexSet> {
        let mut left = self.vertices();
        let mut out = Vec::new();
        while let Some(v) = left.first() {
            let c = self.reach(v, left);
            out.push(c);
            left = left.difference(c);
        }
        out
    }

    /// Induced subgraph, vertices relabeled in increasing id order.
    pub fn induced(&self, s: VertexSet) -> Result<Graph> {
        let ids: Vec<usize> = s.iter().filter(|&v| v < self.n).collect();
        if ids.is_empty() {
            return domain("induced subgraph on an empty set");
        }
        let rows = ids
            .iter()
            .map(|&v| {
                ids.iter()
                    .enumerate()
                    .filter(|&(_, &w)| self.has_edge(v, w))
                    .fold(0u64, |acc, (k, _)| acc | 1u64 << k)
            })
            .collect();
        Ok(Graph::from_rows_unchecked(rows))
    }

    pub fn with_edge(&self, i: usize, j: usize) -> Result<Graph> {
        self.check_pair(i, j)?;
        let mut adj = self.adj.clone();
        adj[i] |= 1u64 << j;
        adj[j] |= 1u64 << i;
        Ok(Graph { n: self.n, adj })
    }

    pub fn without_edge(&self, i: usize, j: usize) -> Result<Graph> {
        self.check_pair(i, j)?;
        let mut adj = self.adj.clone();
        adj[i] &= !(1u64 << j);
        adj[j] &= !(1u64 << i);
        Ok(Graph { n: self.n, adj })
    }

    /// Adds one vertex (id `n`) adjacent to `nbrs`.
    pub fn with_vertex(&self, nbrs: VertexSet) -> Result<Graph> {
        if self.n >= MAX_VERTICES {
            return Err(Error::Capacity {
                what: "vertex count",
                got: self.n + 1,
                limit: MAX_VERTICES,
            });
        }
        if !nbrs.is_subset(self.vertices()) {
            return domain("new vertex neighbourhood outside the graph");
        }
        let v = self.n;
        let mut adj = self.adj.clone();
        for w in nbrs.iter() {
            adj[w] |= 1u64 << v;
        }
        adj.push(nbrs.0);
        Ok(Graph { n: v + 1, adj })
    }

    /// Relabels so that old vertex `v` becomes `perm[v]`.
    pub fn permuted(&self, perm: &[usize]) -> Graph {
        assert_eq!(perm.len(), self.n);
        let mut adj = vec![0u64; self.n];
        for (v, &pv) in perm.iter().enumerate() {
            adj[pv] = VertexSet(self.adj[v])
                .iter()
                .fold(0u64, |acc, w| acc | 1u64 << perm[w]);
        }
        Graph { n: self.n, adj }
    }

    /// One side of a proper 2-colouring (the side holding each component's
    /// smallest vertex), or `None` if the graph has an odd cycle.
    pub fn bipartition(&self) -> Option<VertexSet> {
        let mut side = vec![None::<bool>; self.n];
        for start in 0..self.n {
            if side[start].is_some() {
                continue;
            }
            side[start] = Some(true);
            let mut stack = vec![start];
            while let Some(v) = stack.pop() {
                let sv = side[v].expect("coloured");
                for w in self.neighbors(v).iter() {
                    match side[w] {
                        None => {
                            side[w] = Some(!sv);
                            stack.push(w);
                        }
                        Some(sw) if sw == sv => return None,
                        _ => {}
                    }
                }
            }
        }
        Some(VertexSet::from_vertices((0..self.n).filter(|&v| side[v] == Some(true))))
    }

    /// Bipartite with constant degree on each side.
    pub fn is_semiregular_bipartite(&self) -> bool {
        let Some(left) = self.bipartition() else {
            return false;
        };
        let right = self.vertices().difference(left);
        let constant = |s: VertexSet| {
            let mut d = s.iter().map(|v| self.deg(v));
            match d.next() {
                None => true,
                Some(first) => d.all(|x| x == first),
            }
        };
        constant(left) && constant(right)
    }

    /// Complement graph.
    pub fn complement(&self) -> Graph {
        let full = VertexSet::full(self.n).0;
        let adj = (0..self.n)
            .map(|v| !self.adj[v] & full & !(1u64 << v))
            .collect();
        Graph { n: self.n, adj }
    }

    fn check_pair(&self, i: usize, j: usize) -> Result<()> {
        if i >= self.n || j >= self.n {
            return domain(format!("edge ({i},{j}) has a vertex outside 0..{}", self.n));
        }
        if i == j {
            return domain(format!("loop at vertex {i}"));
        }
        Ok(())
    }
}

impl fmt::Debug for Graph {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "Graph(n={}, edges={:?})", self.n, self.edges())
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn triangle() {
        let g = Graph::new(3, &[(0, 1), (1, 2), (0, 2)]).unwrap();
        assert_eq!(g.edge_count(), 3);
        assert!(g.is_regular());
    }

    #[test]
    fn four_cycle_degrees() {
        let g = Graph::new(4, &[(0, 1), (1, 2), (2, 3), (3, 0)]).unwrap();
        assert_eq!(g.degrees(), vec![2, 2, 2, 2]);
    }

    #[test]
    fn duplicate_edges_collapse() {
        let g = Graph::new(2, &[(0, 1), (1, 0)]).unwrap();
        assert_eq!(g.edge_count(), 1);
    }

    #[test]
    fn construction_errors() {
        assert!(matches!(Graph::new(3, &[(0, 3)]), Err(Error::Domain(_))));
        assert!(matches!(Graph::new(3, &[(1, 1)]), Err(Error::Domain(_))));
        assert!(matches!(Graph::new(65, &[]), Err(Error::Capacity { .. })));
        assert!(Graph::new(64, &[(0, 63)]).is_ok());
    }

    #[test]
    fn degree_queries() {
        let star = Graph::new(4, &[(0, 1), (0, 2), (0, 3)]).unwrap();
        assert_eq!(star.degree(0).unwrap(), 3);
        assert_eq!(star.degree(2).unwrap(), 1);
        assert_eq!(star.max_degree(), 3);
        assert_eq!(star.min_degree(), 1);
        assert!(star.degree(4).is_err());
    }

    #[test]
    fn connectivity() {
        let c6 = Graph::new(6, &[(0, 1), (1, 2), (2, 3), (3, 4), (4, 5), (5, 0)]).unwrap();
        assert!(c6.is_connected());
        let two_edges = Graph::new(4, &[(0, 1), (2, 3)]).unwrap();
        assert!(!two_edges.is_connected());
        assert_eq!(two_edges.components().len(), 2);
        assert!(Graph::empty(1).unwrap().is_connected());
    }

    #[test]
    fn from_rows_rejects_asymmetry() {
        assert!(Graph::from_rows(vec![0b10, 0b00]).is_err());
        assert!(Graph::from_rows(vec![0b01]).is_err());
        assert!(Graph::from_rows(vec![0b10, 0b01]).is_ok());
    }

    #[test]
    fn bipartite_checks() {
        let c6 = Graph::new(6, &[(0, 1), (1, 2), (2, 3), (3, 4), (4, 5), (5, 0)]).unwrap();
        assert_eq!(c6.bipartition(), Some(VertexSet::from_vertices([0, 2, 4])));
        assert!(c6.is_semiregular_bipartite());
        let c5 = Graph::new(5, &[(0, 1), (1, 2), (2, 3), (3, 4), (4, 0)]).unwrap();
        assert_eq!(c5.bipartition(), None);
        let p4 = Graph::new(4, &[(0, 1), (1, 2), (2, 3)]).unwrap();
        assert!(!p4.is_semiregular_bipartite());
        let k13 = Graph::new(4, &[(0, 1), (0, 2), (0, 3)]).unwrap();
        assert!(k13.is_semiregular_bipartite());
    }

    #[test]
    fn vertex_set_ops() {
        let s = VertexSet::from_vertices([1, 3, 5]);
        assert_eq!(s.len(), 3);
        assert_eq!(s.iter().collect::<Vec<_>>(), vec![1, 3, 5]);
        assert_eq!(s.first(), Some(1));
        assert!(s.contains(3) && !s.contains(2));
        assert_eq!(VertexSet::full(64).len(), 64);
    }

    #[test]
    fn permutation_preserves_degree_multiset() {
        let g = Graph::new(5, &[(0, 1), (1, 2), (2, 3), (1, 4)]).unwrap();
        let h = g.permuted(&[4, 3, 2, 1, 0]);
        let mut a = g.degrees();
        let mut b = h.degrees();
        a.sort();
        b.sort();
        assert_eq!(a, b);
        assert!(h.has_edge(3, 0));
    }
}
