//! Hand-derived and oracle-computed values, checked against the library.

mod common;

use approx::assert_abs_diff_eq;
use common::{exact_hitting_times, lu_pinned_solve, max_abs_diff, to_f64, Q};
use laplace_walk::generate;
use laplace_walk::{
    eliminate_vertex, hitting_matrix, hitting_times_to, laplacian_from_graph, pinned_solve, LoadVector,
    WeightedGraph,
};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

fn edges_of(g: &WeightedGraph) -> Vec<(usize, usize)> {
    g.edges().iter().map(|e| (e.u, e.v)).collect()
}

fn q(n: i128) -> Q {
    Q::from_integer(n)
}

#[test]
fn oracle_reproduces_hand_solved_values() {
    // P3 towards vertex 3
    let p3 = common::adjacency(3, &[(0, 1), (1, 2)]);
    assert_eq!(exact_hitting_times(&p3, 2), vec![q(4), q(3), q(0)]);
    // K_{1,3}, centre 0: leaf -> centre 1, centre -> leaf 5, leaf -> other leaf 6
    let star = common::adjacency(4, &[(0, 1), (0, 2), (0, 3)]);
    assert_eq!(exact_hitting_times(&star, 0), vec![q(0), q(1), q(1), q(1)]);
    assert_eq!(exact_hitting_times(&star, 1), vec![q(5), q(0), q(6), q(6)]);
    // K_n: every off-diagonal entry n - 1
    for n in 3..=5 {
        let edges: Vec<_> = (0..n).flat_map(|u| (u + 1..n).map(move |v| (u, v))).collect();
        let adj = common::adjacency(n, &edges);
        for target in 0..n {
            let h = exact_hitting_times(&adj, target);
            for (j, hj) in h.iter().enumerate() {
                assert_eq!(*hj, if j == target { q(0) } else { q(n as i128 - 1) });
            }
        }
    }
}

#[test]
fn hitting_values_match_exact_rationals() {
    assert_eq!(hitting_times_to(&generate::path(3), 2).unwrap(), vec![4.0, 3.0, 0.0]);

    let h = hitting_matrix(&generate::star(3)).unwrap();
    assert_abs_diff_eq!(h.get(1, 0), 1.0, epsilon = 1e-9);
    assert_abs_diff_eq!(h.get(0, 1), 5.0, epsilon = 1e-9);
    assert_abs_diff_eq!(h.get(2, 1), 6.0, epsilon = 1e-9);

    let h = hitting_matrix(&generate::path(3)).unwrap();
    let expected = [(0, 2, 4.0), (1, 2, 3.0), (0, 1, 1.0), (1, 0, 3.0), (2, 0, 4.0), (2, 1, 1.0)];
    for (j, i, v) in expected {
        assert_abs_diff_eq!(h.get(j, i), v, epsilon = 1e-9);
    }

    let mut rng = ChaCha8Rng::seed_from_u64(2024);
    for _ in 0..30 {
        let n = rng.random_range(2..=10);
        let g = generate::random_connected(&mut rng, n, 0.3, false);
        let adj = common::adjacency(n, &edges_of(&g));
        let table = hitting_matrix(&g).unwrap();
        for target in 0..n {
            let exact: Vec<f64> = exact_hitting_times(&adj, target).into_iter().map(to_f64).collect();
            let col: Vec<f64> = (0..n).map(|j| table.get(j, target)).collect();
            assert!(max_abs_diff(&exact, &col) <= 1e-9 * table.max(), "{exact:?} vs {col:?}");
        }
    }
}

#[test]
fn triangle_pinned_solve() {
    let a = laplacian_from_graph(&generate::complete(3));
    let x = pinned_solve(&a, &LoadVector::new(vec![2.0; 3]), 0).unwrap();
    assert_eq!(x.values[0], 0.0);
    assert_abs_diff_eq!(x.values[1], 2.0, epsilon = 1e-12);
    assert_abs_diff_eq!(x.values[2], 2.0, epsilon = 1e-12);
}

#[test]
fn cholesky_route_agrees_with_pivoted_lu() {
    let mut rng = ChaCha8Rng::seed_from_u64(7);
    for _ in 0..50 {
        let n = rng.random_range(2..=30);
        let g = generate::random_connected(&mut rng, n, 0.2, true);
        let a = laplacian_from_graph(&g);
        let f = generate::random_load(&mut rng, n);
        let pin = rng.random_range(0..n);
        let ours = pinned_solve(&a, &f, pin).unwrap();
        let shifted: Vec<f64> = {
            let mut v = f.values().to_vec();
            v[pin] -= f.total();
            v
        };
        let theirs = lu_pinned_solve(&a.rows(), &shifted, pin);
        let scale = theirs.iter().fold(1.0_f64, |m, x| m.max(x.abs()));
        assert!(max_abs_diff(&ours.values, &theirs) <= 1e-9 * scale);
    }
}

#[test]
fn one_schur_step_on_path() {
    let a = laplacian_from_graph(&generate::path(3));
    let r = eliminate_vertex(&a, &LoadVector::new(vec![1.0, 2.0, -3.0]), 0).unwrap();
    assert_eq!(r.reduced_matrix.rows(), vec![vec![1.0, -1.0], vec![-1.0, 1.0]]);
    assert_eq!(r.reduced_load.values(), &[3.0, -3.0]);
}
