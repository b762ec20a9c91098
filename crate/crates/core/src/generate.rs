//! Named graph families and seeded random instances.

use rand::seq::SliceRandom;
use rand::Rng;

use crate::graph::WeightedGraph;
use crate::pinned::LoadVector;

/// Path `1 - 2 - … - n` with unit weights.
pub fn path(n: usize) -> WeightedGraph {
    WeightedGraph::new(n, (1..n).map(|v| (v - 1, v, 1.0))).expect("path is connected")
}

/// Complete graph `K_n` with unit weights.
pub fn complete(n: usize) -> WeightedGraph {
    let edges = (0..n).flat_map(|u| (u + 1..n).map(move |v| (u, v, 1.0)));
    WeightedGraph::new(n, edges).expect("complete graph is connected")
}

/// Star `K_{1,leaves}` centred at vertex 0, unit weights.
pub fn star(leaves: usize) -> WeightedGraph {
    WeightedGraph::new(leaves + 1, (1..=leaves).map(|v| (0, v, 1.0))).expect("star is connected")
}

/// Triangle whose edge opposite vertex `i` has weight `alphas[i]`.
pub fn triangle(alphas: [f64; 3]) -> WeightedGraph {
    WeightedGraph::new(3, [(1, 2, alphas[0]), (0, 2, alphas[1]), (0, 1, alphas[2])]).expect("positive alphas")
}

/// Connected random graph: a random spanning tree plus every other pair with
/// probability `extra`. Weights are uniform in `[0.1, 10)` when `weighted`,
/// otherwise 1.
pub fn random_connected<R: Rng + ?Sized>(rng: &mut R, n: usize, extra: f64, weighted: bool) -> WeightedGraph {
    let mut order: Vec<usize> = (0..n).collect();
    order.shuffle(rng);
    let mut pairs = Vec::new();
    for t in 1..n {
        let parent = order[rng.random_range(0..t)];
        let v = order[t];
        pairs.push((parent.min(v), parent.max(v)));
    }
    for u in 0..n {
        for v in u + 1..n {
            if !pairs.contains(&(u, v)) && rng.random_bool(extra) {
                pairs.push((u, v));
            }
        }
    }
    let edges: Vec<(usize, usize, f64)> = pairs
        .into_iter()
        .map(|(u, v)| (u, v, if weighted { rng.random_range(0.1..10.0) } else { 1.0 }))
        .collect();
    WeightedGraph::new(n, edges).expect("spanning tree keeps the graph connected")
}

/// Load with entries uniform in `[-10, 10)`.
pub fn random_load<R: Rng + ?Sized>(rng: &mut R, n: usize) -> LoadVector {
    LoadVector::new((0..n).map(|_| rng.random_range(-10.0..10.0)).collect())
}

/// `count` distinct vertices drawn uniformly from `0..n`.
pub fn distinct_vertices<R: Rng + ?Sized>(rng: &mut R, n: usize, count: usize) -> Vec<usize> {
    rand::seq::index::sample(rng, n, count).into_vec()
}
