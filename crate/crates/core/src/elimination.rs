//! Symmetric Gaussian elimination of one vertex, and the triangle to star
//! expansion whose elimination gives the triangle back.

use nalgebra::DMatrix;
use serde::Serialize;

use crate::error::{Error, Result};
use crate::laplacian::ConductanceMatrix;
use crate::pinned::LoadVector;
use crate::tol;

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct EliminationResult {
    pub reduced_matrix: ConductanceMatrix,
    pub reduced_load: LoadVector,
    #[serde(serialize_with = "crate::one_based")]
    pub eliminated: usize,
    /// Index in the original system of each surviving vertex, in order.
    #[serde(skip)]
    pub kept: Vec<usize>,
}

/// One Schur step without preconditions on the load.
///
/// `A' = A_VV - A_Vv A_vV / A_vv` and `f' = f_V - A_Vv f_v / A_vv`. Only the
/// upper triangle is computed; the lower one is mirrored from it.
pub(crate) fn schur_step(a: &DMatrix<f64>, f: &[f64], v: usize) -> (DMatrix<f64>, Vec<f64>) {
    let n = a.nrows();
    let kept: Vec<usize> = (0..n).filter(|&j| j != v).collect();
    let pivot = a[(v, v)];
    let mut reduced = DMatrix::zeros(n - 1, n - 1);
    for (r, &j) in kept.iter().enumerate() {
        let ajv = a[(j, v)];
        for (c, &k) in kept.iter().enumerate().skip(r) {
            let value = if ajv == 0.0 || a[(v, k)] == 0.0 {
                a[(j, k)]
            } else {
                a[(j, k)] - ajv * a[(v, k)] / pivot
            };
            reduced[(r, c)] = value;
            reduced[(c, r)] = value;
        }
    }
    let fv = f[v] / pivot;
    let load = kept.iter().map(|&j| f[j] - a[(j, v)] * fv).collect();
    (reduced, load)
}

/// Eliminates vertex `v` from `A x = f`.
///
/// `f` must already sum to zero (a shifted load with its pin among the
/// surviving vertices). Any pinned solution of the original system with pin
/// other than `v`, restricted to the survivors, solves the reduced one.
pub fn eliminate_vertex(a: &ConductanceMatrix, f: &LoadVector, v: usize) -> Result<EliminationResult> {
    let n = a.n();
    if n < 3 {
        return Err(Error::TooSmall { what: "vertex elimination", n, min: 3 });
    }
    f.check_len(n)?;
    Error::check_vertex(v, n)?;
    let l1: f64 = f.values().iter().map(|x| x.abs()).sum();
    if f.total().abs() > tol::BALANCE * l1 {
        return Err(Error::UnbalancedLoad { total: f.total() });
    }
    let (reduced, load) = schur_step(a.matrix(), f.values(), v);
    Ok(EliminationResult {
        reduced_matrix: ConductanceMatrix::new(reduced)?,
        reduced_load: LoadVector::new(load),
        eliminated: v,
        kept: (0..n).filter(|&j| j != v).collect(),
    })
}

/// Triangle conductances `[α₁, α₂, α₃]`, where `α_i` sits on the edge
/// opposite vertex `i`.
pub fn triangle_alphas(a: &ConductanceMatrix) -> Result<[f64; 3]> {
    if a.n() != 3 {
        return Err(Error::DimensionMismatch { what: "triangle matrix", expected: 3, found: a.n() });
    }
    let alphas = [-a.get(1, 2), -a.get(0, 2), -a.get(0, 1)];
    let zero = tol::ZERO * a.max_diagonal();
    if let Some(i) = alphas.iter().position(|&x| x <= zero) {
        return Err(Error::NotTriangle(i));
    }
    Ok(alphas)
}

/// Replaces the triangle by a star `K_{1,3}` through a new fourth vertex.
///
/// With `c = α₁α₂ + α₂α₃ + α₃α₁` the spokes carry `β_i = c / α_i`;
/// eliminating the centre reproduces the triangle.
pub fn star_expand_triangle(a: &ConductanceMatrix) -> Result<ConductanceMatrix> {
    let [a1, a2, a3] = triangle_alphas(a)?;
    let c = a1 * a2 + a2 * a3 + a3 * a1;
    let beta = [c / a1, c / a2, c / a3];
    let mut b = DMatrix::zeros(4, 4);
    for (i, &bi) in beta.iter().enumerate() {
        b[(i, i)] = bi;
        b[(i, 3)] = -bi;
        b[(3, i)] = -bi;
    }
    b[(3, 3)] = beta.iter().sum::<f64>();
    Ok(ConductanceMatrix::from_raw(b))
}

#[cfg(test)]
mod tests {
    use super::*;
    use approx::assert_relative_eq;
    use nalgebra::dmatrix;

    fn p3() -> ConductanceMatrix {
        ConductanceMatrix::new(dmatrix![1.0, -1.0, 0.0; -1.0, 2.0, -1.0; 0.0, -1.0, 1.0]).unwrap()
    }

    #[test]
    fn star_with_equal_spokes_eliminates_to_unit_triangle() {
        let b = ConductanceMatrix::new(dmatrix![
            3.0, 0.0, 0.0, -3.0;
            0.0, 3.0, 0.0, -3.0;
            0.0, 0.0, 3.0, -3.0;
            -3.0, -3.0, -3.0, 9.0
        ])
        .unwrap();
        let r = eliminate_vertex(&b, &LoadVector::zeros(4), 3).unwrap();
        assert_eq!(
            r.reduced_matrix.matrix(),
            &dmatrix![2.0, -1.0, -1.0; -1.0, 2.0, -1.0; -1.0, -1.0, 2.0]
        );
        assert_eq!(r.kept, vec![0, 1, 2]);
    }

    #[test]
    fn path_elimination_of_first_vertex() {
        let r = eliminate_vertex(&p3(), &LoadVector::new(vec![1.0, 2.0, -3.0]), 0).unwrap();
        assert_eq!(r.reduced_matrix.matrix(), &dmatrix![1.0, -1.0; -1.0, 1.0]);
        assert_eq!(r.reduced_load.values(), &[3.0, -3.0]);
        assert_eq!(r.eliminated, 0);
    }

    #[test]
    fn triangle_elimination_leaves_single_edge() {
        let a = ConductanceMatrix::new(dmatrix![5.0, -3.0, -2.0; -3.0, 4.0, -1.0; -2.0, -1.0, 3.0]).unwrap();
        for v in 0..3 {
            let m = eliminate_vertex(&a, &LoadVector::zeros(3), v).unwrap().reduced_matrix;
            let w = m.get(0, 0);
            assert!(w > 0.0);
            assert_relative_eq!(m.get(1, 1), w, max_relative = 1e-14);
            assert_relative_eq!(m.get(0, 1), -w, max_relative = 1e-14);
        }
    }

    #[test]
    fn elimination_errors() {
        let two = ConductanceMatrix::new(dmatrix![1.0, -1.0; -1.0, 1.0]).unwrap();
        assert!(matches!(
            eliminate_vertex(&two, &LoadVector::zeros(2), 0),
            Err(Error::TooSmall { .. })
        ));
        assert!(matches!(
            eliminate_vertex(&p3(), &LoadVector::new(vec![1.0, 2.0, 1.0]), 0),
            Err(Error::UnbalancedLoad { .. })
        ));
        assert!(matches!(
            eliminate_vertex(&p3(), &LoadVector::zeros(3), 3),
            Err(Error::VertexOutOfRange { .. })
        ));
    }

    #[test]
    fn star_expansion_values() {
        let unit = ConductanceMatrix::new(dmatrix![2.0, -1.0, -1.0; -1.0, 2.0, -1.0; -1.0, -1.0, 2.0]).unwrap();
        let b = star_expand_triangle(&unit).unwrap();
        assert_eq!(b.get(0, 0), 3.0);
        assert_eq!(b.get(1, 1), 3.0);
        assert_eq!(b.get(2, 2), 3.0);
        assert_eq!(b.get(3, 3), 9.0);

        let a = ConductanceMatrix::new(dmatrix![5.0, -3.0, -2.0; -3.0, 4.0, -1.0; -2.0, -1.0, 3.0]).unwrap();
        assert_eq!(triangle_alphas(&a).unwrap(), [1.0, 2.0, 3.0]);
        let b = star_expand_triangle(&a).unwrap();
        assert_eq!(b.get(0, 3), -11.0);
        assert_eq!(b.get(1, 3), -5.5);
        assert_relative_eq!(b.get(2, 3), -11.0 / 3.0, max_relative = 1e-15);
        assert!(b.validate().is_valid());
        let back = eliminate_vertex(&b, &LoadVector::zeros(4), 3).unwrap().reduced_matrix;
        for j in 0..3 {
            for k in 0..3 {
                assert_relative_eq!(back.get(j, k), a.get(j, k), max_relative = 1e-10);
            }
        }
    }

    #[test]
    fn star_expansion_rejects_paths() {
        assert_eq!(star_expand_triangle(&p3()), Err(Error::NotTriangle(1)));
    }
}
