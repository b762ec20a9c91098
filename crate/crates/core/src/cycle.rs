//! Cycle-reversal residuals of pinned solutions.
//!
//! For pinned solutions `x_p` of `A x = f_p`, traversing any closed sequence
//! of vertices forwards or backwards accumulates the same total:
//! `Σ x_{i_t i_{t+1}} = Σ x_{i_{t+1} i_t}`. The functions here return the
//! difference, which should vanish up to rounding.

use std::collections::BTreeMap;

use serde::Serialize;

use crate::elimination::{schur_step, star_expand_triangle};
use crate::error::{Error, Result};
use crate::laplacian::ConductanceMatrix;
use crate::pinned::{pinned_solve, LoadVector, PinnedSolution};

/// A residual together with the magnitude it should be judged against.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct CycleResidual {
    pub residual: f64,
    /// Largest absolute solution entry among the solves involved.
    pub scale: f64,
}

impl CycleResidual {
    pub fn relative(&self) -> f64 {
        if self.scale == 0.0 {
            self.residual.abs()
        } else {
            self.residual.abs() / self.scale
        }
    }

    pub fn within(&self, rel_tol: f64) -> bool {
        self.residual.abs() <= rel_tol * self.scale
    }
}

/// `Σ_t (x(a_t, a_{t+1}) - x(a_{t+1}, a_t))` around the closed sequence.
///
/// Summing per-step differences makes repeated back-and-forth steps cancel
/// exactly.
pub(crate) fn cyclic_difference(seq: &[usize], x: impl Fn(usize, usize) -> f64) -> f64 {
    seq.iter()
        .zip(seq.iter().cycle().skip(1))
        .map(|(&p, &q)| if p == q { 0.0 } else { x(p, q) - x(q, p) })
        .sum()
}

pub(crate) fn check_distinct(idx: &[usize]) -> Result<()> {
    for (a, &p) in idx.iter().enumerate() {
        if idx[a + 1..].contains(&p) {
            return Err(Error::NotDistinct(idx.to_vec()));
        }
    }
    Ok(())
}

pub(crate) fn check_sequence(seq: &[usize], n: usize) -> Result<()> {
    if seq.len() < 3 {
        return Err(Error::SequenceTooShort(seq.len()));
    }
    seq.iter().try_for_each(|&p| Error::check_vertex(p, n))
}

fn solve_pins(a: &ConductanceMatrix, f: &LoadVector, pins: &[usize]) -> Result<BTreeMap<usize, PinnedSolution>> {
    let mut out = BTreeMap::new();
    for &p in pins {
        if !out.contains_key(&p) {
            out.insert(p, pinned_solve(a, f, p)?);
        }
    }
    Ok(out)
}

fn residual_over(a: &ConductanceMatrix, f: &LoadVector, seq: &[usize]) -> Result<CycleResidual> {
    let sols = solve_pins(a, f, seq)?;
    let residual = cyclic_difference(seq, |p, q| sols[&p].get(q));
    let scale = sols.values().map(PinnedSolution::max_abs).fold(0.0, f64::max);
    Ok(CycleResidual { residual, scale })
}

/// `(x_ij + x_jk + x_ki) - (x_ji + x_kj + x_ik)` with `x_pq` read from the
/// solution pinned at `p`.
pub fn three_cycle_residual(a: &ConductanceMatrix, f: &LoadVector, i: usize, j: usize, k: usize) -> Result<CycleResidual> {
    f.check_len(a.n())?;
    for p in [i, j, k] {
        Error::check_vertex(p, a.n())?;
    }
    check_distinct(&[i, j, k])?;
    residual_over(a, f, &[i, j, k])
}

/// Cycle residual for an arbitrary closed sequence of at least three
/// vertices. Repeats are allowed; adjacent duplicates contribute zero.
pub fn cycle_residual(a: &ConductanceMatrix, f: &LoadVector, seq: &[usize]) -> Result<CycleResidual> {
    f.check_len(a.n())?;
    check_sequence(seq, a.n())?;
    residual_over(a, f, seq)
}

#[derive(Debug, Clone, PartialEq, Serialize)]
#[serde(rename_all = "kebab-case", tag = "kind")]
pub enum TraceStage {
    /// The system as given, or after eliminating `eliminated`.
    Eliminated {
        n: usize,
        #[serde(serialize_with = "option_one_based")]
        eliminated: Option<usize>,
        residual: CycleResidual,
    },
    /// The remaining triangle replaced by a star through a new centre.
    StarExpanded { residual: CycleResidual, shortcut_residual: f64 },
    /// The remaining three vertices already form a path, which is a star.
    Star { shortcut_residual: f64 },
}

fn option_one_based<S: serde::Serializer>(v: &Option<usize>, s: S) -> std::result::Result<S::Ok, S::Error> {
    match v {
        Some(i) => s.serialize_some(&(i + 1)),
        None => s.serialize_none(),
    }
}

/// `max |x_pq - (x_pc + x_cq)|` over ordered pairs of non-centre vertices.
fn star_shortcut_residual(a: &ConductanceMatrix, f: &LoadVector, centre: usize) -> Result<f64> {
    let n = a.n();
    let pins: Vec<usize> = (0..n).collect();
    let sols = solve_pins(a, f, &pins)?;
    let mut worst = 0.0_f64;
    for p in (0..n).filter(|&p| p != centre) {
        for q in (0..n).filter(|&q| q != centre && q != p) {
            let d = sols[&p].get(q) - (sols[&p].get(centre) + sols[&centre].get(q));
            worst = worst.max(d.abs());
        }
    }
    Ok(worst)
}

/// Reduces `(A, f)` to the triple `{i, j, k}` one elimination at a time,
/// recording the three-cycle residual at every stage, and finishes with the
/// star at `n = 3`.
///
/// The load is carried unshifted: eliminating a vertex commutes with
/// shifting at any surviving pin, so each stage's pinned solves see the
/// reduced form of `f_p` for every `p` in the triple.
pub fn reduction_trace(a: &ConductanceMatrix, f: &LoadVector, i: usize, j: usize, k: usize) -> Result<Vec<TraceStage>> {
    let first = three_cycle_residual(a, f, i, j, k)?;
    let mut stages = vec![TraceStage::Eliminated { n: a.n(), eliminated: None, residual: first }];

    let mut labels: Vec<usize> = (0..a.n()).collect();
    let mut m = a.matrix().clone();
    let mut load = f.values().to_vec();
    while let Some(pos) = labels.iter().rposition(|v| ![i, j, k].contains(v)) {
        let (reduced, reduced_load) = schur_step(&m, &load, pos);
        let eliminated = labels.remove(pos);
        m = reduced;
        load = reduced_load;
        let cm = ConductanceMatrix::new(m.clone())?;
        let at = |v| labels.iter().position(|&l| l == v).expect("triple survives");
        let residual = three_cycle_residual(&cm, &LoadVector::new(load.clone()), at(i), at(j), at(k))?;
        stages.push(TraceStage::Eliminated { n: labels.len(), eliminated: Some(eliminated), residual });
    }

    let tri = ConductanceMatrix::new(m)?;
    let f3 = LoadVector::new(load);
    match star_expand_triangle(&tri) {
        Ok(b) => {
            let mut fb = f3.values().to_vec();
            fb.push(0.0);
            let fb = LoadVector::new(fb);
            let residual = three_cycle_residual(&b, &fb, 0, 1, 2)?;
            let shortcut_residual = star_shortcut_residual(&b, &fb, 3)?;
            stages.push(TraceStage::StarExpanded { residual, shortcut_residual });
        }
        Err(Error::NotTriangle(missing)) => {
            // the vertex opposite the missing edge is the path's middle
            stages.push(TraceStage::Star { shortcut_residual: star_shortcut_residual(&tri, &f3, missing)? });
        }
        Err(e) => return Err(e),
    }
    Ok(stages)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::generate;
    use crate::laplacian::laplacian_from_graph;
    use crate::pinned::shift_load;
    use rand::SeedableRng;
    use rand_chacha::ChaCha8Rng;

    #[test]
    fn zero_load_is_exactly_zero() {
        let a = laplacian_from_graph(&generate::complete(5));
        let r = three_cycle_residual(&a, &LoadVector::zeros(5), 0, 2, 4).unwrap();
        assert_eq!(r, CycleResidual { residual: 0.0, scale: 0.0 });
        assert!(r.within(1e-9));
    }

    #[test]
    fn back_and_forth_cancels_exactly() {
        let mut rng = ChaCha8Rng::seed_from_u64(3);
        let g = generate::random_connected(&mut rng, 7, 0.3, true);
        let a = laplacian_from_graph(&g);
        let f = generate::random_load(&mut rng, 7);
        assert_eq!(cycle_residual(&a, &f, &[1, 4, 1, 4]).unwrap().residual, 0.0);
    }

    #[test]
    fn triple_sequence_matches_three_cycle() {
        let mut rng = ChaCha8Rng::seed_from_u64(4);
        let g = generate::random_connected(&mut rng, 6, 0.4, true);
        let a = laplacian_from_graph(&g);
        let f = generate::random_load(&mut rng, 6);
        let three = three_cycle_residual(&a, &f, 5, 0, 3).unwrap();
        assert_eq!(cycle_residual(&a, &f, &[5, 0, 3]).unwrap(), three);
        assert!(three.within(1e-9), "{three:?}");
    }

    #[test]
    fn argument_errors() {
        let a = laplacian_from_graph(&generate::path(4));
        let f = LoadVector::zeros(4);
        assert_eq!(three_cycle_residual(&a, &f, 0, 1, 0), Err(Error::NotDistinct(vec![0, 1, 0])));
        assert_eq!(cycle_residual(&a, &f, &[0, 1]), Err(Error::SequenceTooShort(2)));
        assert!(matches!(cycle_residual(&a, &f, &[0, 1, 9]), Err(Error::VertexOutOfRange { .. })));
        // adjacent duplicates are accepted
        assert!(cycle_residual(&a, &f, &[0, 0, 1, 2]).is_ok());
    }

    #[test]
    fn star_shortcut_holds_on_star() {
        let g = generate::star(4);
        let a = laplacian_from_graph(&g.reweighted(&[0.5, 2.0, 1.5, 3.0]));
        let f = LoadVector::new(vec![0.2, -1.0, 3.0, 0.7, 1.1]);
        assert!(star_shortcut_residual(&a, &f, 0).unwrap() < 1e-12);
    }

    #[test]
    fn elimination_commutes_with_shift() {
        let mut rng = ChaCha8Rng::seed_from_u64(5);
        let g = generate::random_connected(&mut rng, 6, 0.5, true);
        let a = laplacian_from_graph(&g);
        let f = generate::random_load(&mut rng, 6);
        let (_, reduced) = schur_step(a.matrix(), f.values(), 5);
        for p in 0..5 {
            let shifted_first = shift_load(&f, p).unwrap();
            let (_, lhs) = schur_step(a.matrix(), shifted_first.values(), 5);
            let rhs = shift_load(&LoadVector::new(reduced.clone()), p).unwrap();
            for (l, r) in lhs.iter().zip(rhs.values()) {
                assert!((l - r).abs() < 1e-12, "{l} vs {r}");
            }
        }
    }

    #[test]
    fn trace_reaches_star() {
        let mut rng = ChaCha8Rng::seed_from_u64(6);
        let g = generate::random_connected(&mut rng, 7, 0.6, true);
        let a = laplacian_from_graph(&g);
        let f = generate::random_load(&mut rng, 7);
        let trace = reduction_trace(&a, &f, 0, 3, 5).unwrap();
        assert_eq!(trace.len(), 1 + 4 + 1);
        for stage in &trace {
            match stage {
                TraceStage::Eliminated { residual, .. } => assert!(residual.within(1e-9)),
                TraceStage::StarExpanded { residual, shortcut_residual } => {
                    assert!(residual.within(1e-9));
                    assert!(*shortcut_residual < 1e-9 * residual.scale.max(1.0));
                }
                TraceStage::Star { shortcut_residual } => assert!(*shortcut_residual < 1e-9),
            }
        }
        let TraceStage::Eliminated { eliminated, n, .. } = &trace[1] else { panic!() };
        assert_eq!((*eliminated, *n), (Some(6), 6));
    }

    #[test]
    fn trace_on_path_ends_in_star() {
        let a = laplacian_from_graph(&generate::path(3));
        let f = LoadVector::new(vec![1.0, 2.0, 1.0]);
        let trace = reduction_trace(&a, &f, 0, 1, 2).unwrap();
        assert_eq!(trace.len(), 2);
        assert!(matches!(trace[1], TraceStage::Star { shortcut_residual } if shortcut_residual < 1e-12));
    }
}
