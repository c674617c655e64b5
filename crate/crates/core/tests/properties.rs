use std::collections::HashSet;

use approx::assert_abs_diff_eq;
use nalgebra::DMatrix;
use proptest::prelude::*;

use qextremal::canon::{canonical_form, is_isomorphic};
use qextremal::families;
use qextremal::graph::Graph;
use qextremal::graph6;
use qextremal::minor::{has_k1t_minor, is_k1t_minor_free, MinorKind};
use qextremal::search::{enumerate_connected, enumerate_connected_labeled};
use qextremal::spectral::{q_index, q_matrix, DEFAULT_TOL};

fn cycle(n: usize) -> Graph {
    Graph::new(n, &(0..n).map(|i| (i, (i + 1) % n)).collect::<Vec<_>>()).unwrap()
}

fn graph_strategy(max_n: usize) -> impl Strategy<Value = Graph> {
    (1..=max_n).prop_flat_map(|n| {
        let pairs = n * (n - 1) / 2;
        proptest::collection::vec(any::<bool>(), pairs).prop_map(move |bits| {
            let mut edges = Vec::new();
            let mut k = 0;
            for i in 0..n {
                for j in i + 1..n {
                    if bits[k] {
                        edges.push((i, j));
                    }
                    k += 1;
                }
            }
            Graph::new(n, &edges).unwrap()
        })
    })
}

fn permutations(n: usize) -> Vec<Vec<usize>> {
    if n == 0 {
        return vec![vec![]];
    }
    let mut out = Vec::new();
    for p in permutations(n - 1) {
        for pos in 0..n {
            let mut q = p.clone();
            q.insert(pos, n - 1);
            out.push(q);
        }
    }
    out
}

fn brute_isomorphic(g: &Graph, h: &Graph) -> bool {
    g.order() == h.order()
        && g.edge_count() == h.edge_count()
        && permutations(g.order()).iter().any(|p| g.permuted(p) == *h)
}

#[test]
fn enumeration_matches_labeled_reference() {
    for n in 1..=7 {
        for max_deg in [2, 3, n] {
            let fast: Vec<_> = enumerate_connected(n, max_deg).unwrap().into_iter().map(|x| x.0).collect();
            assert_eq!(fast, enumerate_connected_labeled(n, max_deg).unwrap(), "n={n} max_deg={max_deg}");
        }
    }
}

#[test]
fn enumeration_examples() {
    assert_eq!(enumerate_connected(4, 3).unwrap().len(), 6);
    assert_eq!(enumerate_connected(5, 5).unwrap().len(), 21);
    let paths_and_cycles = enumerate_connected(6, 2).unwrap();
    assert_eq!(paths_and_cycles.len(), 2);
    assert!(paths_and_cycles.iter().any(|(_, g)| is_isomorphic(g, &cycle(6))));
    assert_eq!(enumerate_connected(8, 8).unwrap().len(), 11117);
    assert!(enumerate_connected(11, 3).is_err());
}

#[test]
fn degree_cap_never_drops_minor_free_graphs() {
    let n = 6;
    for t in 3..=5 {
        let free = |v: Vec<(qextremal::CanonicalForm, Graph)>| -> HashSet<_> {
            v.into_iter()
                .filter(|(_, g)| is_k1t_minor_free(g, t).unwrap())
                .map(|x| x.0)
                .collect()
        };
        let uncapped = free(enumerate_connected(n, n).unwrap());
        let capped = free(enumerate_connected(n, t - 1).unwrap());
        assert!(!uncapped.is_empty());
        assert_eq!(uncapped, capped, "t={t}");
    }
}

#[test]
fn isomorphism_agrees_with_permutation_search() {
    for n in 1..=5 {
        let graphs: Vec<Graph> = enumerate_connected(n, n).unwrap().into_iter().map(|x| x.1).collect();
        let relabel: Vec<usize> = (0..n).rev().collect();
        for g in &graphs {
            for h in &graphs {
                let h = h.permuted(&relabel);
                assert_eq!(is_isomorphic(g, &h), brute_isomorphic(g, &h));
            }
        }
    }
}

#[test]
fn graph6_round_trips_connected_graphs() {
    for n in 1..=8 {
        for (_, g) in enumerate_connected(n, n).unwrap() {
            let text = graph6::encode(&g).unwrap();
            assert_eq!(graph6::decode(&text).unwrap(), g);
        }
    }
}

#[test]
fn q_index_matches_dense_eigensolver() {
    for n in 2..=6 {
        for (_, g) in enumerate_connected(n, n).unwrap() {
            let rows = q_matrix(&g);
            let m = DMatrix::from_fn(n, n, |i, j| rows[i][j]);
            let top = m.symmetric_eigen().eigenvalues.iter().cloned().fold(f64::MIN, f64::max);
            let r = q_index(&g, DEFAULT_TOL).unwrap();
            assert_abs_diff_eq!(r.q1, top, epsilon = 1e-8);
            assert!(r.residual < DEFAULT_TOL);
            assert!(r.perron.iter().all(|&x| x > 0.0));
        }
    }
}

#[test]
fn star_minor_examples() {
    let k13 = families::complete_bipartite(1, 3).unwrap();
    assert_eq!(has_k1t_minor(&k13, 3).unwrap().kind, MinorKind::Witness);
    assert_eq!(has_k1t_minor(&cycle(9), 3).unwrap().kind, MinorKind::Absent);
    assert_eq!(has_k1t_minor(&cycle(8), 3).unwrap().kind, MinorKind::Absent);
    for t in 3..=6 {
        for n in t + 1..=t + 4 {
            let g = families::subdivided_clique(n, t).unwrap();
            assert!(is_k1t_minor_free(&g, t).unwrap(), "S^{}(K_{t})", n - t);
        }
    }
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(256))]

    #[test]
    fn canonical_form_ignores_labels(g in graph_strategy(8), seed in any::<u64>()) {
        let n = g.order();
        let mut perm: Vec<usize> = (0..n).collect();
        let mut s = seed;
        for i in (1..n).rev() {
            s = s.wrapping_mul(6364136223846793005).wrapping_add(1442695040888963407);
            perm.swap(i, (s >> 33) as usize % (i + 1));
        }
        prop_assert_eq!(canonical_form(&g), canonical_form(&g.permuted(&perm)));
    }

    #[test]
    fn witnesses_survive_edge_addition(g in graph_strategy(8), t in 2usize..6) {
        prop_assume!(g.is_connected());
        let before = has_k1t_minor(&g, t).unwrap();
        if before.kind == MinorKind::Witness {
            prop_assert!(before.is_valid_witness(&g, t));
            let n = g.order();
            for i in 0..n {
                for j in i + 1..n {
                    if !g.has_edge(i, j) {
                        let h = g.with_edge(i, j).unwrap();
                        prop_assert_eq!(has_k1t_minor(&h, t).unwrap().kind, MinorKind::Witness);
                    }
                }
            }
        }
    }

    #[test]
    fn degree_sum_is_twice_edge_count(g in graph_strategy(10)) {
        let total: usize = (0..g.order()).map(|v| g.degree(v).unwrap()).sum();
        prop_assert_eq!(total, 2 * g.edge_count());
    }
}
