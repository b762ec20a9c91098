//! Pinned solves of `A x = f_i` with `x_i = 0`.

use nalgebra::{Cholesky, DVector};
use serde::Serialize;

use crate::error::{Error, Result};
use crate::laplacian::ConductanceMatrix;
use crate::tol;

/// A load (force, weight, degree) vector together with its total `f·1`.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct LoadVector {
    values: Vec<f64>,
    #[serde(skip)]
    total: f64,
}

impl LoadVector {
    pub fn new(values: Vec<f64>) -> Self {
        let total = values.iter().sum();
        Self { values, total }
    }

    pub fn zeros(n: usize) -> Self {
        Self::new(vec![0.0; n])
    }

    pub fn len(&self) -> usize {
        self.values.len()
    }

    pub fn is_empty(&self) -> bool {
        self.values.is_empty()
    }

    pub fn values(&self) -> &[f64] {
        &self.values
    }

    pub fn total(&self) -> f64 {
        self.total
    }

    pub fn norm_inf(&self) -> f64 {
        self.values.iter().fold(0.0, |m, x| m.max(x.abs()))
    }

    pub(crate) fn check_len(&self, n: usize) -> Result<()> {
        if self.len() == n {
            Ok(())
        } else {
            Err(Error::DimensionMismatch { what: "load vector", expected: n, found: self.len() })
        }
    }
}

impl From<Vec<f64>> for LoadVector {
    fn from(values: Vec<f64>) -> Self {
        Self::new(values)
    }
}

/// `f_i`: `f` with coordinate `i` reduced by `f·1`, so the result sums to zero.
pub fn shift_load(f: &LoadVector, i: usize) -> Result<LoadVector> {
    Error::check_vertex(i, f.len())?;
    let mut values = f.values.clone();
    values[i] -= f.total;
    Ok(LoadVector::new(values))
}

/// The unique solution of `A x = f_pin` with `x[pin] = 0`.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct PinnedSolution {
    #[serde(serialize_with = "crate::one_based")]
    pub pin: usize,
    pub values: Vec<f64>,
    /// `‖A x - f_pin‖∞`.
    pub residual: f64,
}

impl PinnedSolution {
    pub fn get(&self, j: usize) -> f64 {
        self.values[j]
    }

    pub fn max_abs(&self) -> f64 {
        self.values.iter().fold(0.0, |m, x| m.max(x.abs()))
    }
}

/// Solves `A x = shift_load(f, pin)` subject to `x[pin] = 0`.
///
/// Row and column `pin` are deleted; the remaining principal submatrix is
/// positive definite for a connected Laplacian and is Cholesky-factorized.
/// Coordinate `pin` of the load is never read, which is why any `f` works.
pub fn pinned_solve(a: &ConductanceMatrix, f: &LoadVector, pin: usize) -> Result<PinnedSolution> {
    let n = a.n();
    f.check_len(n)?;
    Error::check_vertex(pin, n)?;
    let shifted = shift_load(f, pin)?;

    let sub = a.matrix().clone().remove_row(pin).remove_column(pin);
    let rhs = DVector::from_iterator(n - 1, (0..n).filter(|&j| j != pin).map(|j| f.values[j]));
    let chol = Cholesky::new(sub).ok_or(Error::FactorizationFailed)?;
    let y = chol.solve(&rhs);

    let mut values = Vec::with_capacity(n);
    values.extend(y.iter().take(pin).copied());
    values.push(0.0);
    values.extend(y.iter().skip(pin).copied());

    let x = DVector::from_column_slice(&values);
    let ax = a.matrix() * &x;
    let residual = ax
        .iter()
        .zip(shifted.values())
        .fold(0.0_f64, |m, (l, r)| m.max((l - r).abs()));
    let x_norm = x.iter().fold(0.0_f64, |m, v| m.max(v.abs()));
    let bound = tol::SOLVER_RESIDUAL * (a.norm_inf() * x_norm + shifted.norm_inf());
    if !(residual <= bound) {
        return Err(Error::ResidualTooLarge { residual, bound });
    }
    Ok(PinnedSolution { pin, values, residual })
}
