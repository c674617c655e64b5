use qextremal::canon::is_isomorphic;
use qextremal::families;
use qextremal::graph::Graph;
use qextremal::graph6;
use qextremal::search::{extremal_search, lemma_suite, verify_theorem, verify_theorem_with, Prediction, SearchConfig};
use qextremal::spectral::{cubic_largest_root, eq3_coeffs, DEFAULT_TOL};

fn cycle(n: usize) -> Graph {
    Graph::new(n, &(0..n).map(|i| (i, (i + 1) % n)).collect::<Vec<_>>()).unwrap()
}

fn extremal_graph(n: usize, t: usize) -> (Graph, f64, bool) {
    let r = extremal_search(&SearchConfig::new(n, t)).unwrap();
    (graph6::decode(&r.extremal[0].graph6).unwrap(), r.extremal[0].q1, r.unique)
}

#[test]
fn cycles_are_extremal_for_t3() {
    for n in [4, 7] {
        let (g, q, unique) = extremal_graph(n, 3);
        assert!(unique);
        assert!(is_isomorphic(&g, &cycle(n)));
        assert!((q - 4.0).abs() < 1e-8);
    }
}

#[test]
fn odd_order_t4_extremal() {
    let (g, q, unique) = extremal_graph(5, 4);
    assert!(unique);
    assert!(is_isomorphic(&g, &families::odd_case_family(4, 2).unwrap()));
    let root = cubic_largest_root(&eq3_coeffs(4, 2).unwrap(), 1e-14).unwrap();
    assert!((q - root).abs() < 1e-8);
    assert!((q - 5.7785).abs() < 1e-4);
}

#[test]
fn verify_theorem_examples() {
    assert!(verify_theorem(&SearchConfig::new(6, 3)).unwrap().pass);
    let v = verify_theorem(&SearchConfig::new(6, 4)).unwrap();
    assert!(v.pass);
    let s2k4 = graph6::decode(&v.report.extremal[0].graph6).unwrap();
    assert!(is_isomorphic(&s2k4, &families::subdivided_clique(6, 4).unwrap()));
    let literal = verify_theorem_with(&SearchConfig::new(5, 4), &Prediction::LiteralStatement, None).unwrap();
    assert!(!literal.pass);
    assert!(!literal.report.matches_prediction);
}

#[test]
fn even_order_t_plus_one_is_kn_minus_perfect_matching() {
    let v = verify_theorem(&SearchConfig::new(6, 5)).unwrap();
    assert!(v.pass);
    let g = graph6::decode(&v.report.extremal[0].graph6).unwrap();
    assert!(is_isomorphic(&g, &families::kn_minus_perfect_matching(6).unwrap()));
}

#[test]
fn lemma_suite_examples() {
    let a = lemma_suite(3, 5..=9, DEFAULT_TOL, 2, None).unwrap();
    assert!(a.pass);
    assert!(a.rows.iter().all(|r| (r.q_star - 4.0).abs() < 1e-8 && r.upper == 4.0));

    let b = lemma_suite(4, 6..=8, DEFAULT_TOL, 2, None).unwrap();
    assert!(b.pass);
    assert!(b.rows.iter().all(|r| r.q_star > 16.0 / 3.0 && r.q_star < 6.0));

    let c = lemma_suite(5, 6..=6, DEFAULT_TOL, 2, None).unwrap();
    assert!(c.pass);
    assert!(c.rows[0].q_star > 7.0 && c.rows[0].q_star <= 8.0);

    assert!(lemma_suite(8, 9..=9, DEFAULT_TOL, 1, None).is_err());
}

#[test]
fn infeasible_configs_are_rejected() {
    assert!(extremal_search(&SearchConfig::new(3, 3)).is_err());
    assert!(extremal_search(&SearchConfig::new(11, 3)).is_err());
    assert!(extremal_search(&SearchConfig::new(5, 2)).is_err());
}
