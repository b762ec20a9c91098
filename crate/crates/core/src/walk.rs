//! Exact hitting and return times of random walks on a graph.
//!
//! For the simple walk, `H(j,i) = 1 + (1/deg j) Σ_{k~j} H(k,i)` for `j ≠ i`.
//! Multiplying by `deg j` turns the column `H(·,i)` into a solution of
//! `A x = f_i` with `A = diag(deg) - adjacency` and `f = deg`, pinned at `i`.
//! The weighted law (step probability proportional to edge weight) gives the
//! same system with the weighted Laplacian and weighted degrees.

use nalgebra::DMatrix;
use rayon::prelude::*;
use serde::{Serialize, Serializer};

use crate::cycle::{check_distinct, check_sequence, cyclic_difference, CycleResidual};
use crate::error::{Error, Result};
use crate::graph::WeightedGraph;
use crate::laplacian::{laplacian_from_graph, ConductanceMatrix};
use crate::pinned::{pinned_solve, LoadVector};
use crate::tol;

/// How the next vertex is chosen among the neighbours.
#[derive(Debug, Clone, Copy, Default, PartialEq, Eq, Serialize)]
#[serde(rename_all = "lowercase")]
pub enum WalkLaw {
    /// Uniformly; edge weights are ignored.
    #[default]
    Uniform,
    /// With probability proportional to the edge weight.
    Weighted,
}

/// The walk's Laplacian and degree vector.
pub fn walk_system(g: &WeightedGraph, law: WalkLaw) -> (ConductanceMatrix, LoadVector) {
    match law {
        WalkLaw::Uniform => {
            let a = laplacian_from_graph(&g.unweighted());
            let deg = g.degrees().into_iter().map(|d| d as f64).collect();
            (a, LoadVector::new(deg))
        }
        WalkLaw::Weighted => (laplacian_from_graph(g), LoadVector::new(g.weighted_degrees())),
    }
}

/// `H(j, target)` for every `j`, simple walk.
pub fn hitting_times_to(g: &WeightedGraph, target: usize) -> Result<Vec<f64>> {
    hitting_times_to_with(g, target, WalkLaw::Uniform)
}

pub fn hitting_times_to_with(g: &WeightedGraph, target: usize, law: WalkLaw) -> Result<Vec<f64>> {
    let (a, deg) = walk_system(g, law);
    Ok(pinned_solve(&a, &deg, target)?.values)
}

fn serialize_rows<S: Serializer>(m: &DMatrix<f64>, s: S) -> std::result::Result<S::Ok, S::Error> {
    s.collect_seq(m.row_iter().map(|r| r.iter().copied().collect::<Vec<f64>>()))
}

/// `H[j][i]` = expected steps from `j` to first reach `i`.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct HittingTable {
    #[serde(rename = "H", serialize_with = "serialize_rows")]
    h: DMatrix<f64>,
}

impl HittingTable {
    pub fn n(&self) -> usize {
        self.h.nrows()
    }

    /// `H(from, to)`.
    pub fn get(&self, from: usize, to: usize) -> f64 {
        self.h[(from, to)]
    }

    pub fn matrix(&self) -> &DMatrix<f64> {
        &self.h
    }

    pub fn max(&self) -> f64 {
        self.h.max()
    }

    /// Largest violation of the one-step recurrence over all `j ≠ i`,
    /// relative to `H(j,i)`.
    pub fn max_recurrence_residual(&self, g: &WeightedGraph, law: WalkLaw) -> f64 {
        let adj = g.adjacency();
        let mut worst = 0.0_f64;
        for i in 0..self.n() {
            for (j, nbrs) in adj.iter().enumerate().filter(|&(j, _)| j != i) {
                let (total, avg) = match law {
                    WalkLaw::Uniform => {
                        let s: f64 = nbrs.iter().map(|&(k, _)| self.h[(k, i)]).sum();
                        (nbrs.len() as f64, s)
                    }
                    WalkLaw::Weighted => {
                        let s: f64 = nbrs.iter().map(|&(k, w)| w * self.h[(k, i)]).sum();
                        (nbrs.iter().map(|&(_, w)| w).sum(), s)
                    }
                };
                let rhs = 1.0 + avg / total;
                let r = (self.h[(j, i)] - rhs).abs() / self.h[(j, i)].abs().max(1.0);
                worst = worst.max(r);
            }
        }
        worst
    }

    /// CSV with row `j`, column `i` holding `H(j,i)`.
    pub fn to_csv(&self) -> String {
        crate::io::write_matrix_csv(&self.h)
    }
}

/// All hitting times, one pinned solve per target, targets in parallel.
pub fn hitting_matrix(g: &WeightedGraph) -> Result<HittingTable> {
    hitting_matrix_with(g, WalkLaw::Uniform)
}

pub fn hitting_matrix_with(g: &WeightedGraph, law: WalkLaw) -> Result<HittingTable> {
    let (a, deg) = walk_system(g, law);
    let cols = (0..g.n())
        .into_par_iter()
        .map(|i| pinned_solve(&a, &deg, i).map(|s| s.values))
        .collect::<Result<Vec<_>>>()?;
    Ok(HittingTable { h: DMatrix::from_fn(g.n(), g.n(), |j, i| cols[i][j]) })
}

/// Expected first-return times, from the closed form and from the
/// one-step average over hitting times of the neighbours.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct ReturnTimes {
    /// Number of edges.
    pub m: usize,
    /// `Σ deg`, which is `2m` for the simple walk.
    pub total_degree: f64,
    pub degrees: Vec<f64>,
    /// `total_degree / deg(i)`.
    pub r: Vec<f64>,
    /// `1 + (1/deg i) Σ_{k~i} H(k,i)`, with weights under the weighted law.
    pub via_neighbors: Vec<f64>,
}

pub fn return_times(g: &WeightedGraph) -> Result<ReturnTimes> {
    return_times_with(g, WalkLaw::Uniform)
}

/// Fails with [`Error::RouteMismatch`] when the two routes differ by more
/// than `1e-9` relative.
pub fn return_times_with(g: &WeightedGraph, law: WalkLaw) -> Result<ReturnTimes> {
    let (_, deg) = walk_system(g, law);
    let total = deg.total();
    let table = hitting_matrix_with(g, law)?;
    let adj = g.adjacency();
    let r: Vec<f64> = deg.values().iter().map(|d| total / d).collect();
    let via_neighbors: Vec<f64> = (0..g.n())
        .map(|i| {
            let s: f64 = adj[i]
                .iter()
                .map(|&(k, w)| match law {
                    WalkLaw::Uniform => table.get(k, i),
                    WalkLaw::Weighted => w * table.get(k, i),
                })
                .sum();
            1.0 + s / deg.values()[i]
        })
        .collect();
    for (i, (&closed, &avg)) in r.iter().zip(&via_neighbors).enumerate() {
        if (closed - avg).abs() > tol::IDENTITY * closed {
            return Err(Error::RouteMismatch { what: "return-time routes", index: i, left: closed, right: avg });
        }
    }
    Ok(ReturnTimes { m: g.edge_count(), total_degree: total, degrees: deg.values().to_vec(), r, via_neighbors })
}

/// `Σ_{k~i} H(k,i) - (2m - deg i)` for the simple walk.
pub fn neighbor_sum_residual(g: &WeightedGraph, i: usize) -> Result<f64> {
    Error::check_vertex(i, g.n())?;
    let h = hitting_times_to(g, i)?;
    let deg = g.degrees();
    let two_m = 2 * g.edge_count();
    let s: f64 = g.adjacency()[i].iter().map(|&(k, _)| h[k]).sum();
    Ok(s - (two_m - deg[i]) as f64)
}

/// `H(i,j) + H(j,k) + H(k,i) - (H(j,i) + H(k,j) + H(i,k))`, judged against
/// the largest entry of the table.
pub fn ctw_residual(h: &HittingTable, i: usize, j: usize, k: usize) -> Result<CycleResidual> {
    for p in [i, j, k] {
        Error::check_vertex(p, h.n())?;
    }
    check_distinct(&[i, j, k])?;
    Ok(CycleResidual { residual: cyclic_difference(&[i, j, k], |p, q| h.get(p, q)), scale: h.max() })
}

/// Closed-sequence generalisation of [`ctw_residual`].
pub fn hitting_cycle_residual(h: &HittingTable, seq: &[usize]) -> Result<CycleResidual> {
    check_sequence(seq, h.n())?;
    Ok(CycleResidual { residual: cyclic_difference(seq, |p, q| h.get(p, q)), scale: h.max() })
}
