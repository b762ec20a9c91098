//! Masses joined by linear springs, one of them nailed to the origin.
//!
//! Mass `j` feels its applied force `F[j]`, a spring force
//! `a_jk (x_k - x_j)` from every neighbour `k`, and, at the nail only, the
//! reaction `-Σ_j F[j]`. Springs have zero rest length and act in both
//! directions, so every coordinate axis decouples into one pinned solve.

use nalgebra::DMatrix;
use rayon::prelude::*;
use serde::{Serialize, Serializer};

use crate::error::{Error, Result};
use crate::graph::WeightedGraph;
use crate::laplacian::laplacian_from_graph;
use crate::pinned::{pinned_solve, LoadVector};

/// Applied forces, one row per mass, one column per axis.
#[derive(Debug, Clone, PartialEq)]
pub struct ForceField {
    forces: DMatrix<f64>,
}

impl ForceField {
    pub fn new(forces: DMatrix<f64>) -> Result<Self> {
        if forces.ncols() == 0 {
            return Err(Error::DimensionMismatch { what: "force dimension", expected: 1, found: 0 });
        }
        Ok(Self { forces })
    }

    /// `d = 1`: one scalar weight per mass.
    pub fn scalar(weights: &[f64]) -> Self {
        Self { forces: DMatrix::from_column_slice(weights.len(), 1, weights) }
    }

    pub fn from_rows(rows: &[Vec<f64>]) -> Result<Self> {
        let d = rows.first().map_or(0, Vec::len);
        if let Some(bad) = rows.iter().find(|r| r.len() != d) {
            return Err(Error::DimensionMismatch { what: "force row", expected: d, found: bad.len() });
        }
        Self::new(DMatrix::from_fn(rows.len(), d, |j, c| rows[j][c]))
    }

    pub fn zeros(n: usize, d: usize) -> Self {
        Self { forces: DMatrix::zeros(n, d) }
    }

    pub fn n(&self) -> usize {
        self.forces.nrows()
    }

    pub fn dim(&self) -> usize {
        self.forces.ncols()
    }

    pub fn forces(&self) -> &DMatrix<f64> {
        &self.forces
    }

    pub fn axis(&self, c: usize) -> LoadVector {
        LoadVector::new(self.forces.column(c).iter().copied().collect())
    }

    fn check_masses(&self, n: usize) -> Result<()> {
        if self.n() == n {
            Ok(())
        } else {
            Err(Error::DimensionMismatch { what: "force field rows", expected: n, found: self.n() })
        }
    }
}

fn serialize_rows<S: Serializer>(m: &DMatrix<f64>, s: S) -> std::result::Result<S::Ok, S::Error> {
    s.collect_seq(m.row_iter().map(|r| r.iter().copied().collect::<Vec<f64>>()))
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct Equilibrium {
    #[serde(serialize_with = "crate::one_based")]
    pub nail: usize,
    /// Row `j` is the position of mass `j`; the nail row is zero.
    #[serde(serialize_with = "serialize_rows")]
    pub positions: DMatrix<f64>,
    pub reaction: Vec<f64>,
}

/// Force exerted by the nail: the negated total applied force.
pub fn nail_reaction(forces: &ForceField) -> Vec<f64> {
    forces.forces.column_iter().map(|c| -c.iter().sum::<f64>()).collect()
}

/// Equilibrium positions with mass `nail` fixed at the origin.
///
/// Each axis is an independent pinned solve of the graph Laplacian against
/// that axis of the force field; axes are solved in parallel.
pub fn solve_equilibrium(g: &WeightedGraph, forces: &ForceField, nail: usize) -> Result<Equilibrium> {
    forces.check_masses(g.n())?;
    Error::check_vertex(nail, g.n())?;
    let a = laplacian_from_graph(g);
    let axes = (0..forces.dim())
        .into_par_iter()
        .map(|c| pinned_solve(&a, &forces.axis(c), nail))
        .collect::<Result<Vec<_>>>()?;
    let positions = DMatrix::from_fn(g.n(), forces.dim(), |j, c| axes[c].values[j]);
    Ok(Equilibrium { nail, positions, reaction: nail_reaction(forces) })
}

/// Net force on every mass at the given positions, including the nail's
/// reaction. Zero at a true equilibrium.
pub fn residual_forces(g: &WeightedGraph, forces: &ForceField, eq: &Equilibrium) -> Result<DMatrix<f64>> {
    forces.check_masses(g.n())?;
    if eq.positions.shape() != forces.forces.shape() {
        return Err(Error::DimensionMismatch {
            what: "equilibrium positions",
            expected: forces.forces.len(),
            found: eq.positions.len(),
        });
    }
    Error::check_vertex(eq.nail, g.n())?;
    let mut net = forces.forces.clone();
    for e in g.edges() {
        for c in 0..forces.dim() {
            let pull = e.w * (eq.positions[(e.v, c)] - eq.positions[(e.u, c)]);
            net[(e.u, c)] += pull;
            net[(e.v, c)] -= pull;
        }
    }
    for (c, r) in eq.reaction.iter().enumerate() {
        net[(eq.nail, c)] += r;
    }
    Ok(net)
}

/// Largest spring force magnitude along any axis.
pub fn max_band_force(g: &WeightedGraph, eq: &Equilibrium) -> f64 {
    let d = eq.positions.ncols();
    g.edges()
        .iter()
        .flat_map(|e| (0..d).map(move |c| (e.w * (eq.positions[(e.v, c)] - eq.positions[(e.u, c)])).abs()))
        .fold(0.0, f64::max)
}
