//! Canonical labeling by partition refinement and exhaustive backtracking.
//!
//! Every node of the search tree holds an ordered partition refined to
//! equitability. Discrete leaves define a relabeling; the canonical one is the
//! leaf whose relabeled adjacency rows are lexicographically smallest.
//! Automorphisms discovered between equal leaves prune sibling subtrees that
//! lie in the same orbit of the pointwise stabilizer of the current path.

use std::fmt;

use crate::graph::{Graph, VertexSet};

/// Labeling-invariant encoding: the vertex count followed by the upper
/// triangle of the canonically relabeled adjacency matrix, row-major,
/// packed eight bits per byte (MSB first).
#[derive(Clone, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct CanonicalForm(Vec<u8>);

impl CanonicalForm {
    pub fn as_bytes(&self) -> &[u8] {
        &self.0
    }

    pub fn to_hex(&self) -> String {
        self.0.iter().map(|b| format!("{b:02x}")).collect()
    }

    pub fn from_hex(s: &str) -> Option<CanonicalForm> {
        if s.len() % 2 != 0 {
            return None;
        }
        (0..s.len())
            .step_by(2)
            .map(|i| u8::from_str_radix(s.get(i..i + 2)?, 16).ok())
            .collect::<Option<Vec<u8>>>()
            .map(CanonicalForm)
    }

    /// Rebuilds the canonically labelled graph the form encodes.
    pub fn to_graph(&self) -> Option<Graph> {
        let (&n, body) = self.0.split_first()?;
        let n = n as usize;
        let bits = n * n.saturating_sub(1) / 2;
        if n == 0 || body.len() != bits.div_ceil(8) {
            return None;
        }
        let mut edges = Vec::new();
        let mut k = 0;
        for i in 0..n {
            for j in i + 1..n {
                if body[k / 8] >> (7 - k % 8) & 1 == 1 {
                    edges.push((i, j));
                }
                k += 1;
            }
        }
        Graph::new(n, &edges).ok()
    }

    fn encode(g: &Graph) -> CanonicalForm {
        let n = g.order();
        let mut bytes = Vec::with_capacity(1 + (n * n.saturating_sub(1) / 2).div_ceil(8));
        bytes.push(n as u8);
        let mut acc = 0u8;
        let mut filled = 0;
        for i in 0..n {
            for j in i + 1..n {
                acc = acc << 1 | g.has_edge(i, j) as u8;
                filled += 1;
                if filled == 8 {
                    bytes.push(acc);
                    acc = 0;
                    filled = 0;
                }
            }
        }
        if filled > 0 {
            bytes.push(acc << (8 - filled));
        }
        CanonicalForm(bytes)
    }
}

impl fmt::Debug for CanonicalForm {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "CanonicalForm({})", self.to_hex())
    }
}

type Partition = Vec<Vec<usize>>;

/// Splits cells until every cell is equitable with respect to every other.
fn refine(g: &Graph, mut cells: Partition) -> Partition {
    let mut splitter = 0;
    while splitter < cells.len() {
        let target = VertexSet::from_vertices(cells[splitter].iter().copied());
        let mut changed = false;
        let mut next: Partition = Vec::with_capacity(cells.len());
        for cell in cells.into_iter() {
            if cell.len() == 1 {
                next.push(cell);
                continue;
            }
            let mut keyed: Vec<(u32, usize)> = cell
                .iter()
                .map(|&v| ((g.rows()[v] & target.0).count_ones(), v))
                .collect();
            keyed.sort_unstable();
            let mut start = 0;
            for k in 1..=keyed.len() {
                if k == keyed.len() || keyed[k].0 != keyed[start].0 {
                    next.push(keyed[start..k].iter().map(|&(_, v)| v).collect());
                    start = k;
                }
            }
            if keyed.first().map(|x| x.0) != keyed.last().map(|x| x.0) {
                changed = true;
            }
        }
        cells = next;
        // Any split may break equitability against earlier splitters.
        splitter = if changed { 0 } else { splitter + 1 };
    }
    cells
}

/// Moves `v` into its own cell placed just before the rest of its cell.
fn individualize(cells: &Partition, cell: usize, v: usize) -> Partition {
    let mut out = Vec::with_capacity(cells.len() + 1);
    out.extend_from_slice(&cells[..cell]);
    out.push(vec![v]);
    out.push(cells[cell].iter().copied().filter(|&w| w != v).collect());
    out.extend_from_slice(&cells[cell + 1..]);
    out
}

struct Search<'a> {
    g: &'a Graph,
    best_key: Option<Vec<u64>>,
    /// `best_pos[v]` = label of `v` in the best leaf.
    best_pos: Vec<usize>,
    automorphisms: Vec<Vec<usize>>,
}

impl<'a> Search<'a> {
    fn leaf(&mut self, cells: &Partition) {
        let n = self.g.order();
        let mut pos = vec![0usize; n];
        for (k, cell) in cells.iter().enumerate() {
            pos[cell[0]] = k;
        }
        let mut key = vec![0u64; n];
        for v in 0..n {
            key[pos[v]] = VertexSet(self.g.rows()[v])
                .iter()
                .fold(0u64, |acc, w| acc | 1u64 << (63 - pos[w]));
        }
        match &self.best_key {
            Some(best) if key > *best => {}
            Some(best) if key == *best => {
                // gamma(x) = y with pos[x] == best_pos[y]
                let mut inv = vec![0usize; n];
                for (y, &p) in self.best_pos.iter().enumerate() {
                    inv[p] = y;
                }
                let gamma: Vec<usize> = (0..n).map(|x| inv[pos[x]]).collect();
                if gamma.iter().enumerate().any(|(x, &y)| x != y) {
                    self.automorphisms.push(gamma);
                }
            }
            _ => {
                self.best_key = Some(key);
                self.best_pos = pos;
            }
        }
    }

    fn descend(&mut self, cells: Partition, path: &mut Vec<usize>) {
        let cells = refine(self.g, cells);
        let Some(target) = cells.iter().position(|c| c.len() > 1) else {
            self.leaf(&cells);
            return;
        };
        let mut tried: Vec<usize> = Vec::new();
        let mut candidates = cells[target].clone();
        candidates.sort_unstable();
        for v in candidates {
            if !tried.is_empty() && self.same_orbit_as_tried(path, v, &tried) {
                continue;
            }
            tried.push(v);
            path.push(v);
            let child = individualize(&cells, target, v);
            self.descend(child, path);
            path.pop();
        }
    }

    /// Orbit test under the group generated by the known automorphisms that
    /// fix every vertex of `path`.
    fn same_orbit_as_tried(&self, path: &[usize], v: usize, tried: &[usize]) -> bool {
        let n = self.g.order();
        let mut parent: Vec<usize> = (0..n).collect();
        fn find(p: &mut [usize], mut x: usize) -> usize {
            while p[x] != x {
                p[x] = p[p[x]];
                x = p[x];
            }
            x
        }
        let mut any = false;
        for gamma in &self.automorphisms {
            if path.iter().all(|&p| gamma[p] == p) {
                any = true;
                for x in 0..n {
                    let (a, b) = (find(&mut parent, x), find(&mut parent, gamma[x]));
                    if a != b {
                        parent[a] = b;
                    }
                }
            }
        }
        if !any {
            return false;
        }
        let rv = find(&mut parent, v);
        tried.iter().any(|&w| find(&mut parent, w) == rv)
    }
}

fn search(g: &Graph, initial: Partition) -> Vec<usize> {
    let mut s = Search {
        g,
        best_key: None,
        best_pos: Vec::new(),
        automorphisms: Vec::new(),
    };
    s.descend(initial, &mut Vec::new());
    s.best_pos
}

/// Canonical relabeling: `perm[v]` is the canonical label of vertex `v`.
pub fn canonical_labeling(g: &Graph) -> Vec<usize> {
    search(g, vec![(0..g.order()).collect()])
}

pub fn canonical_graph(g: &Graph) -> Graph {
    g.permuted(&canonical_labeling(g))
}

pub fn canonical_form(g: &Graph) -> CanonicalForm {
    CanonicalForm::encode(&canonical_graph(g))
}

/// Canonical labeling together with the form it induces.
pub fn canonical_labeling_and_form(g: &Graph) -> (Vec<usize>, CanonicalForm) {
    let perm = canonical_labeling(g);
    let form = CanonicalForm::encode(&g.permuted(&perm));
    (perm, form)
}

/// Canonical form of `g` with vertex `v` distinguished. Two vertices `v`, `w`
/// give equal forms iff some automorphism of `g` maps `v` to `w`.
pub fn rooted_canonical_form(g: &Graph, v: usize) -> CanonicalForm {
    let rest: Vec<usize> = (0..g.order()).filter(|&w| w != v).collect();
    let initial = if rest.is_empty() {
        vec![vec![v]]
    } else {
        vec![vec![v], rest]
    };
    CanonicalForm::encode(&g.permuted(&search(g, initial)))
}

pub fn is_isomorphic(g: &Graph, h: &Graph) -> bool {
    g.order() == h.order()
        && g.edge_count() == h.edge_count()
        && canonical_form(g) == canonical_form(h)
}

#[cfg(test)]
mod tests {
    use super::*;

    fn cycle(n: usize) -> Graph {
        let e: Vec<_> = (0..n).map(|i| (i, (i + 1) % n)).collect();
        Graph::new(n, &e).unwrap()
    }

    fn path(n: usize) -> Graph {
        let e: Vec<_> = (1..n).map(|i| (i - 1, i)).collect();
        Graph::new(n, &e).unwrap()
    }

    #[test]
    fn c4_relabelings_agree() {
        let a = cycle(4);
        let b = Graph::new(4, &[(0, 2), (2, 1), (1, 3), (3, 0)]).unwrap();
        assert_eq!(canonical_form(&a), canonical_form(&b));
    }

    #[test]
    fn p3_is_k12() {
        let k12 = Graph::new(3, &[(1, 0), (1, 2)]).unwrap();
        let p3 = Graph::new(3, &[(0, 2), (2, 1)]).unwrap();
        assert_eq!(canonical_form(&p3), canonical_form(&k12));
    }

    #[test]
    fn p4_differs_from_k13() {
        let k13 = Graph::new(4, &[(0, 1), (0, 2), (0, 3)]).unwrap();
        assert_ne!(canonical_form(&path(4)), canonical_form(&k13));
    }

    #[test]
    fn isomorphism_examples() {
        let c5 = cycle(5);
        assert!(is_isomorphic(&c5, &c5.permuted(&[3, 0, 4, 1, 2])));
        assert!(!is_isomorphic(&cycle(6), &path(6)));
        let k4_minus_matching = Graph::new(4, &[(0, 2), (0, 3), (1, 2), (1, 3)]).unwrap();
        assert!(is_isomorphic(&k4_minus_matching, &cycle(4)));
    }

    #[test]
    fn rooted_forms_detect_orbits() {
        let p4 = path(4);
        assert_eq!(rooted_canonical_form(&p4, 0), rooted_canonical_form(&p4, 3));
        assert_eq!(rooted_canonical_form(&p4, 1), rooted_canonical_form(&p4, 2));
        assert_ne!(rooted_canonical_form(&p4, 0), rooted_canonical_form(&p4, 1));
    }

    #[test]
    fn highly_symmetric_graphs_finish() {
        let k12 = Graph::new(
            12,
            &(0..12)
                .flat_map(|i| (i + 1..12).map(move |j| (i, j)))
                .collect::<Vec<_>>(),
        )
        .unwrap();
        let perm: Vec<usize> = (0..12).rev().collect();
        assert_eq!(canonical_form(&k12), canonical_form(&k12.permuted(&perm)));
        let empty = Graph::empty(10).unwrap();
        assert_eq!(canonical_form(&empty).as_bytes()[0], 10);
    }

    #[test]
    fn hex_round_trip() {
        let f = canonical_form(&cycle(7));
        assert_eq!(CanonicalForm::from_hex(&f.to_hex()), Some(f.clone()));
        assert_eq!(canonical_form(&f.to_graph().unwrap()), f);
    }
}
