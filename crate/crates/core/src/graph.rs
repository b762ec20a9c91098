//! Simple connected graphs with strictly positive edge weights.

use std::collections::BTreeSet;

use serde::Serialize;

use crate::error::{Error, Result};

#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct Edge {
    #[serde(serialize_with = "crate::one_based")]
    pub u: usize,
    #[serde(serialize_with = "crate::one_based")]
    pub v: usize,
    pub w: f64,
}

/// A simple, connected, undirected graph on vertices `0..n`.
///
/// Edges are stored with `u < v`, sorted by `(u, v)`, so two graphs with the
/// same edge set compare equal regardless of input order.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct WeightedGraph {
    n: usize,
    edges: Vec<Edge>,
}

impl WeightedGraph {
    pub fn new(n: usize, edges: impl IntoIterator<Item = (usize, usize, f64)>) -> Result<Self> {
        if n < 2 {
            return Err(Error::TooSmall { what: "graph", n, min: 2 });
        }
        let mut seen = BTreeSet::new();
        let mut out = Vec::new();
        for (u, v, w) in edges {
            Error::check_vertex(u, n)?;
            Error::check_vertex(v, n)?;
            if u == v {
                return Err(Error::SelfLoop(u));
            }
            let (u, v) = if u < v { (u, v) } else { (v, u) };
            if !(w > 0.0 && w.is_finite()) {
                return Err(Error::NonPositiveWeight { u, v, w });
            }
            if !seen.insert((u, v)) {
                return Err(Error::DuplicateEdge(u, v));
            }
            out.push(Edge { u, v, w });
        }
        out.sort_by_key(|e| (e.u, e.v));
        let g = Self { n, edges: out };
        let components = g.components();
        if components.len() > 1 {
            let unreachable = components[1..].iter().flatten().copied().collect();
            return Err(Error::Disconnected { unreachable });
        }
        Ok(g)
    }

    /// Same edge set with every weight replaced by 1.
    pub fn unweighted(&self) -> Self {
        Self {
            n: self.n,
            edges: self.edges.iter().map(|e| Edge { w: 1.0, ..*e }).collect(),
        }
    }

    /// Same edge set with weights taken from `weights`, in edge order.
    pub fn reweighted(&self, weights: &[f64]) -> Self {
        assert_eq!(weights.len(), self.edges.len(), "one weight per edge");
        let edges = self.edges.iter().zip(weights).map(|(e, &w)| (e.u, e.v, w));
        Self::new(self.n, edges).expect("reweighting keeps the graph valid")
    }

    pub fn n(&self) -> usize {
        self.n
    }

    pub fn edges(&self) -> &[Edge] {
        &self.edges
    }

    pub fn edge_count(&self) -> usize {
        self.edges.len()
    }

    /// Neighbour lists with weights, each sorted by neighbour index.
    pub fn adjacency(&self) -> Vec<Vec<(usize, f64)>> {
        let mut adj = vec![Vec::new(); self.n];
        for e in &self.edges {
            adj[e.u].push((e.v, e.w));
            adj[e.v].push((e.u, e.w));
        }
        for list in &mut adj {
            list.sort_by_key(|&(k, _)| k);
        }
        adj
    }

    /// Number of incident edges per vertex.
    pub fn degrees(&self) -> Vec<usize> {
        let mut deg = vec![0; self.n];
        for e in &self.edges {
            deg[e.u] += 1;
            deg[e.v] += 1;
        }
        deg
    }

    /// Sum of incident edge weights per vertex.
    pub fn weighted_degrees(&self) -> Vec<f64> {
        let mut deg = vec![0.0; self.n];
        for e in &self.edges {
            deg[e.u] += e.w;
            deg[e.v] += e.w;
        }
        deg
    }

    fn components(&self) -> Vec<Vec<usize>> {
        components_of(self.n, self.edges.iter().map(|e| (e.u, e.v)))
    }
}

/// Connected components of a pattern, each sorted, ordered by smallest vertex.
pub(crate) fn components_of(n: usize, edges: impl Iterator<Item = (usize, usize)>) -> Vec<Vec<usize>> {
    let mut adj = vec![Vec::new(); n];
    for (u, v) in edges {
        adj[u].push(v);
        adj[v].push(u);
    }
    let mut label = vec![usize::MAX; n];
    let mut out = Vec::new();
    for start in 0..n {
        if label[start] != usize::MAX {
            continue;
        }
        let id = out.len();
        let mut members = vec![start];
        let mut stack = vec![start];
        label[start] = id;
        while let Some(x) = stack.pop() {
            for &y in &adj[x] {
                if label[y] == usize::MAX {
                    label[y] = id;
                    members.push(y);
                    stack.push(y);
                }
            }
        }
        members.sort_unstable();
        out.push(members);
    }
    out
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn edges_are_canonical() {
        let a = WeightedGraph::new(3, [(2, 1, 1.0), (1, 0, 2.0)]).unwrap();
        let b = WeightedGraph::new(3, [(0, 1, 2.0), (1, 2, 1.0)]).unwrap();
        assert_eq!(a, b);
        assert_eq!(a.edges()[0], Edge { u: 0, v: 1, w: 2.0 });
    }

    #[test]
    fn rejects_malformed_graphs() {
        assert_eq!(WeightedGraph::new(3, [(0, 0, 1.0)]), Err(Error::SelfLoop(0)));
        assert_eq!(
            WeightedGraph::new(2, [(0, 1, 1.0), (1, 0, 3.0)]),
            Err(Error::DuplicateEdge(0, 1))
        );
        assert!(matches!(
            WeightedGraph::new(2, [(0, 1, 0.0)]),
            Err(Error::NonPositiveWeight { .. })
        ));
        assert!(matches!(
            WeightedGraph::new(2, [(0, 1, -1.0)]),
            Err(Error::NonPositiveWeight { .. })
        ));
        assert_eq!(
            WeightedGraph::new(2, [(0, 2, 1.0)]),
            Err(Error::VertexOutOfRange { index: 2, n: 2 })
        );
        assert!(matches!(WeightedGraph::new(1, []), Err(Error::TooSmall { .. })));
    }

    #[test]
    fn disconnected_graph_reports_unreachable_component() {
        let err = WeightedGraph::new(4, [(0, 1, 1.0), (2, 3, 1.0)]).unwrap_err();
        assert_eq!(err, Error::Disconnected { unreachable: vec![2, 3] });
        assert_eq!(err.to_string(), "graph is disconnected: vertices {3, 4} are unreachable from vertex 1");
    }

    #[test]
    fn degrees() {
        let g = WeightedGraph::new(3, [(0, 1, 2.0), (1, 2, 0.5)]).unwrap();
        assert_eq!(g.degrees(), vec![1, 2, 1]);
        assert_eq!(g.weighted_degrees(), vec![2.0, 2.5, 0.5]);
        assert_eq!(g.adjacency()[1], vec![(0, 2.0), (2, 0.5)]);
    }
}
