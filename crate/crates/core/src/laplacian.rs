//! Laplacian-type matrices: construction from graphs, the reverse mapping,
//! and the property checks.
//!
//! A matrix qualifies when it is (i) symmetric, (ii) has non-positive
//! off-diagonal entries, (iii) has a connected off-diagonal pattern and
//! (iv) has zero row sums. Together these force rank `n - 1`, which
//! [`validate`] confirms numerically from the spectrum.

use std::fmt;

use nalgebra::{DMatrix, SymmetricEigen};
use serde::{Serialize, Serializer};

use crate::error::{Error, Result};
use crate::graph::{components_of, WeightedGraph};
use crate::tol::Tolerances;

/// One failed property, with 0-based locations (displayed 1-based).
#[derive(Debug, Clone, PartialEq)]
pub enum Violation {
    Shape { rows: usize, cols: usize },
    Asymmetric { row: usize, col: usize },
    PositiveOffDiagonal { row: usize, col: usize, value: f64 },
    Reducible { components: Vec<Vec<usize>> },
    NonzeroRowSum { row: usize, sum: f64 },
    NonFinite { row: usize, col: usize },
}

impl fmt::Display for Violation {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Violation::Shape { rows, cols } => {
                write!(f, "matrix must be square with dimension >= 2, got {rows}x{cols}")
            }
            Violation::Asymmetric { row, col } => {
                write!(f, "property (i) violated at ({},{})", row + 1, col + 1)
            }
            Violation::PositiveOffDiagonal { row, col, value } => {
                write!(f, "property (ii) violated at ({},{}): entry {value} > 0", row + 1, col + 1)
            }
            Violation::Reducible { components } => {
                let parts: Vec<String> = components
                    .iter()
                    .map(|c| {
                        let vs: Vec<String> = c.iter().map(|v| (v + 1).to_string()).collect();
                        format!("{{{}}}", vs.join(", "))
                    })
                    .collect();
                write!(f, "property (iii) violated: underlying graph has components {}", parts.join(" "))
            }
            Violation::NonzeroRowSum { row, sum } => {
                write!(f, "property (iv) violated at row {}: row sum {sum:e}", row + 1)
            }
            Violation::NonFinite { row, col } => {
                write!(f, "non-finite entry at ({},{})", row + 1, col + 1)
            }
        }
    }
}

fn serialize_violations<S: Serializer>(vs: &[Violation], s: S) -> std::result::Result<S::Ok, S::Error> {
    s.collect_seq(vs.iter().map(|v| v.to_string()))
}

/// Outcome of [`validate`]. Never an error; failures are recorded here.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct ValidationReport {
    pub n: usize,
    pub symmetric: bool,
    pub nonpositive_off_diagonal: bool,
    pub irreducible: bool,
    pub zero_row_sums: bool,
    pub rank_check: bool,
    pub worst_row_sum: f64,
    pub smallest_eigenvalue: f64,
    pub second_smallest_eigenvalue: f64,
    #[serde(serialize_with = "serialize_violations")]
    pub violations: Vec<Violation>,
}

impl ValidationReport {
    pub fn is_valid(&self) -> bool {
        self.symmetric && self.nonpositive_off_diagonal && self.irreducible && self.zero_row_sums && self.rank_check
    }
}

struct Structure {
    violations: Vec<Violation>,
    worst_row_sum: f64,
}

impl Structure {
    fn has(&self, pred: impl Fn(&Violation) -> bool) -> bool {
        self.violations.iter().any(pred)
    }
}

fn max_abs_diagonal(a: &DMatrix<f64>) -> f64 {
    a.diagonal().iter().fold(0.0_f64, |m, x| m.max(x.abs()))
}

/// Checks (i), (ii), (iv) and (iii), reporting the first offender of each.
fn check_structure(a: &DMatrix<f64>, tol: &Tolerances) -> Structure {
    let (rows, cols) = a.shape();
    if rows != cols || rows < 2 {
        return Structure {
            violations: vec![Violation::Shape { rows, cols }],
            worst_row_sum: f64::NAN,
        };
    }
    let n = rows;
    if let Some(idx) = a.iter().position(|x| !x.is_finite()) {
        // column-major storage
        return Structure {
            violations: vec![Violation::NonFinite { row: idx % n, col: idx / n }],
            worst_row_sum: f64::NAN,
        };
    }
    let scale = max_abs_diagonal(a);
    let zero = tol.zero * scale;
    let mut violations = Vec::new();

    let asym = (0..n)
        .flat_map(|j| (j + 1..n).map(move |k| (j, k)))
        .find(|&(j, k)| (a[(j, k)] - a[(k, j)]).abs() > zero);
    if let Some((row, col)) = asym {
        violations.push(Violation::Asymmetric { row, col });
    }

    let positive = (0..n)
        .flat_map(|j| (0..n).map(move |k| (j, k)))
        .find(|&(j, k)| j != k && a[(j, k)] > zero);
    if let Some((row, col)) = positive {
        violations.push(Violation::PositiveOffDiagonal { row, col, value: a[(row, col)] });
    }

    let pattern = (0..n)
        .flat_map(|j| (j + 1..n).map(move |k| (j, k)))
        .filter(|&(j, k)| a[(j, k)].abs() > zero || a[(k, j)].abs() > zero);
    let components = components_of(n, pattern);
    if components.len() > 1 {
        violations.push(Violation::Reducible { components });
    }

    let mut worst = 0.0_f64;
    let mut worst_row = 0;
    for j in 0..n {
        let s: f64 = a.row(j).iter().sum();
        if s.abs() > worst {
            worst = s.abs();
            worst_row = j;
        }
    }
    if worst > tol.row_sum * scale || scale == 0.0 {
        let sum: f64 = a.row(worst_row).iter().sum();
        violations.push(Violation::NonzeroRowSum { row: worst_row, sum });
    }

    Structure { violations, worst_row_sum: worst }
}

/// Runs every property check plus the rank check, using default tolerances.
pub fn validate(a: &DMatrix<f64>) -> ValidationReport {
    validate_with(a, &Tolerances::default())
}

pub fn validate_with(a: &DMatrix<f64>, tol: &Tolerances) -> ValidationReport {
    let structure = check_structure(a, tol);
    let shape_ok = !structure.has(|v| matches!(v, Violation::Shape { .. } | Violation::NonFinite { .. }));
    let n = a.nrows();
    let (smallest, second) = if shape_ok {
        // Eigen-decompose the symmetric part; for valid input this is A itself.
        let sym = (a + a.transpose()) * 0.5;
        let mut ev: Vec<f64> = SymmetricEigen::new(sym).eigenvalues.iter().copied().collect();
        ev.sort_by(|x, y| x.total_cmp(y));
        (ev[0], ev[1])
    } else {
        (f64::NAN, f64::NAN)
    };
    let gap = if shape_ok { tol.rank * max_abs_diagonal(a) } else { 0.0 };
    let rank_check = shape_ok && smallest.abs() <= gap && second > gap;
    ValidationReport {
        n,
        symmetric: shape_ok && !structure.has(|v| matches!(v, Violation::Asymmetric { .. })),
        nonpositive_off_diagonal: shape_ok
            && !structure.has(|v| matches!(v, Violation::PositiveOffDiagonal { .. })),
        irreducible: shape_ok && !structure.has(|v| matches!(v, Violation::Reducible { .. })),
        zero_row_sums: shape_ok && !structure.has(|v| matches!(v, Violation::NonzeroRowSum { .. })),
        rank_check,
        worst_row_sum: structure.worst_row_sum,
        smallest_eigenvalue: smallest,
        second_smallest_eigenvalue: second,
        violations: structure.violations,
    }
}

/// Dense matrix known to satisfy properties (i)–(iv).
///
/// Symmetry is exact: the lower triangle mirrors the upper one.
#[derive(Debug, Clone, PartialEq)]
pub struct ConductanceMatrix {
    a: DMatrix<f64>,
}

impl ConductanceMatrix {
    /// Checks (i)–(iv) with default tolerances. The rank check is left to
    /// [`validate`]; it follows from the other four.
    pub fn new(a: DMatrix<f64>) -> Result<Self> {
        Self::with_tolerances(a, &Tolerances::default())
    }

    pub fn with_tolerances(mut a: DMatrix<f64>, tol: &Tolerances) -> Result<Self> {
        let structure = check_structure(&a, tol);
        if !structure.violations.is_empty() {
            return Err(Error::InvalidMatrix(structure.violations));
        }
        mirror_upper(&mut a);
        Ok(Self { a })
    }

    pub fn from_rows(rows: &[Vec<f64>]) -> Result<Self> {
        let n = rows.len();
        if let Some(bad) = rows.iter().find(|r| r.len() != n) {
            return Err(Error::InvalidMatrix(vec![Violation::Shape { rows: n, cols: bad.len() }]));
        }
        Self::new(DMatrix::from_fn(n, n, |j, k| rows[j][k]))
    }

    /// Caller guarantees (i)–(iv).
    pub(crate) fn from_raw(mut a: DMatrix<f64>) -> Self {
        mirror_upper(&mut a);
        debug_assert!(check_structure(&a, &Tolerances::default()).violations.is_empty());
        Self { a }
    }

    pub fn n(&self) -> usize {
        self.a.nrows()
    }

    pub fn matrix(&self) -> &DMatrix<f64> {
        &self.a
    }

    pub fn into_matrix(self) -> DMatrix<f64> {
        self.a
    }

    pub fn get(&self, j: usize, k: usize) -> f64 {
        self.a[(j, k)]
    }

    pub fn rows(&self) -> Vec<Vec<f64>> {
        self.a.row_iter().map(|r| r.iter().copied().collect()).collect()
    }

    /// `‖A‖∞`, the largest absolute row sum.
    pub fn norm_inf(&self) -> f64 {
        self.a
            .row_iter()
            .map(|r| r.iter().map(|x| x.abs()).sum::<f64>())
            .fold(0.0, f64::max)
    }

    pub fn max_diagonal(&self) -> f64 {
        max_abs_diagonal(&self.a)
    }

    pub fn validate(&self) -> ValidationReport {
        validate(&self.a)
    }

    pub fn to_graph(&self) -> WeightedGraph {
        let n = self.n();
        let zero = crate::tol::ZERO * self.max_diagonal();
        let edges = (0..n)
            .flat_map(|j| (j + 1..n).map(move |k| (j, k)))
            .filter(|&(j, k)| self.a[(j, k)] < -zero)
            .map(|(j, k)| (j, k, -self.a[(j, k)]));
        WeightedGraph::new(n, edges).expect("conductance matrix pattern is a connected simple graph")
    }
}

impl Serialize for ConductanceMatrix {
    fn serialize<S: Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
        self.rows().serialize(s)
    }
}

fn mirror_upper(a: &mut DMatrix<f64>) {
    let n = a.nrows();
    for j in 0..n {
        for k in j + 1..n {
            a[(k, j)] = a[(j, k)];
        }
    }
}

/// Weighted Laplacian: `A[j][k] = -w(j,k)` on edges, diagonal = incident weight.
pub fn laplacian_from_graph(g: &WeightedGraph) -> ConductanceMatrix {
    let n = g.n();
    let mut a = DMatrix::zeros(n, n);
    for e in g.edges() {
        a[(e.u, e.v)] = -e.w;
        a[(e.v, e.u)] = -e.w;
    }
    for j in 0..n {
        let s: f64 = (0..n).filter(|&k| k != j).map(|k| a[(j, k)]).sum();
        a[(j, j)] = -s;
    }
    ConductanceMatrix::from_raw(a)
}

/// Underlying graph of a matrix, with weights `-A[j][k]`.
pub fn graph_from_matrix(a: &DMatrix<f64>) -> Result<WeightedGraph> {
    Ok(ConductanceMatrix::new(a.clone())?.to_graph())
}
