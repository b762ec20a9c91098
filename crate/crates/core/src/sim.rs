//! Monte Carlo random walks, used as an independent check on [`crate::walk`].
//!
//! Reproducibility: the seed is expanded once into a ChaCha8 key
//! (`ChaCha8Rng::seed_from_u64(seed).get_seed()`), and trial `t` draws from
//! stream `t` of that key. Each step draws one `u64` `r` and moves to
//! neighbour `floor(r * deg / 2^64)`, i.e. `floor(u * deg)` for the unit
//! uniform `u = r / 2^64`, computed as a 128-bit multiply-high. Under the
//! weighted law `u` is the top 53 bits of `r` scaled to `[0, 1)` and the
//! neighbour is located in the cumulative weights by binary search.
//!
//! Trials run in parallel. Step counts and their squares are summed as
//! exact integers, so the statistics do not depend on scheduling.

use rand::{RngCore, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rayon::prelude::*;
use serde::Serialize;

use crate::error::{Error, Result};
use crate::graph::WeightedGraph;
use crate::walk::WalkLaw;

pub const DEFAULT_MAX_STEPS: u64 = 1_000_000_000;

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct WalkConfig {
    pub trials: u64,
    pub seed: u64,
    /// Trials still walking after this many steps are discarded.
    pub max_steps: u64,
    pub law: WalkLaw,
}

impl WalkConfig {
    pub fn new(trials: u64, seed: u64) -> Self {
        Self { trials, seed, max_steps: DEFAULT_MAX_STEPS, law: WalkLaw::Uniform }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct WalkStats {
    pub estimate: f64,
    /// Sample standard deviation over `sqrt(trials)`.
    pub stderr: f64,
    /// Completed trials, excluding any discarded at the step cap.
    pub trials: u64,
    pub seed: u64,
    pub max_steps_hit: u64,
}

struct Walker {
    neighbors: Vec<Vec<usize>>,
    cumulative: Vec<Vec<f64>>,
    law: WalkLaw,
}

impl Walker {
    fn new(g: &WeightedGraph, law: WalkLaw) -> Self {
        let adj = g.adjacency();
        let neighbors = adj.iter().map(|l| l.iter().map(|&(k, _)| k).collect()).collect();
        let cumulative = adj
            .iter()
            .map(|l| {
                l.iter()
                    .scan(0.0, |acc, &(_, w)| {
                        *acc += w;
                        Some(*acc)
                    })
                    .collect()
            })
            .collect();
        Self { neighbors, cumulative, law }
    }

    fn step(&self, at: usize, rng: &mut ChaCha8Rng) -> usize {
        let nbrs = &self.neighbors[at];
        let r = rng.next_u64();
        match self.law {
            WalkLaw::Uniform => nbrs[((r as u128 * nbrs.len() as u128) >> 64) as usize],
            WalkLaw::Weighted => {
                let cum = &self.cumulative[at];
                let u = (r >> 11) as f64 * (1.0 / (1u64 << 53) as f64);
                let target = u * cum[cum.len() - 1];
                let idx = cum.partition_point(|&c| c <= target);
                nbrs[idx.min(nbrs.len() - 1)]
            }
        }
    }

    /// Steps from `from` until the first visit to `to` after time zero,
    /// or `None` past the cap.
    fn run(&self, from: usize, to: usize, max_steps: u64, rng: &mut ChaCha8Rng) -> Option<u64> {
        let mut at = from;
        for t in 1..=max_steps {
            at = self.step(at, rng);
            if at == to {
                return Some(t);
            }
        }
        None
    }
}

#[derive(Default, Clone, Copy)]
struct Tally {
    count: u64,
    sum: u128,
    sum_sq: u128,
    capped: u64,
}

impl Tally {
    fn merge(self, o: Tally) -> Tally {
        Tally {
            count: self.count + o.count,
            sum: self.sum + o.sum,
            sum_sq: self.sum_sq + o.sum_sq,
            capped: self.capped + o.capped,
        }
    }
}

fn simulate(g: &WeightedGraph, from: usize, to: usize, cfg: &WalkConfig) -> Result<WalkStats> {
    if cfg.trials == 0 {
        return Err(Error::NoTrials);
    }
    let walker = Walker::new(g, cfg.law);
    let key = ChaCha8Rng::seed_from_u64(cfg.seed).get_seed();
    let tally = (0..cfg.trials)
        .into_par_iter()
        .map(|t| {
            let mut rng = ChaCha8Rng::from_seed(key);
            rng.set_stream(t);
            match walker.run(from, to, cfg.max_steps, &mut rng) {
                Some(s) => Tally { count: 1, sum: s as u128, sum_sq: s as u128 * s as u128, capped: 0 },
                None => Tally { capped: 1, ..Tally::default() },
            }
        })
        .reduce(Tally::default, Tally::merge);

    if tally.capped > 0 {
        log::warn!(
            "{} of {} trials exceeded {} steps and were discarded",
            tally.capped,
            cfg.trials,
            cfg.max_steps
        );
    }
    if tally.count == 0 {
        return Err(Error::AllTrialsCapped { trials: cfg.trials, max_steps: cfg.max_steps });
    }
    let n = tally.count as f64;
    let estimate = tally.sum as f64 / n;
    let stderr = if tally.count < 2 {
        0.0
    } else {
        // N Σx² - (Σx)² is exact when it fits; it is never negative.
        let spread = (tally.count as u128)
            .checked_mul(tally.sum_sq)
            .and_then(|a| tally.sum.checked_mul(tally.sum).map(|b| (a - b) as f64))
            .unwrap_or_else(|| n * tally.sum_sq as f64 - (tally.sum as f64).powi(2));
        let variance = spread / (n * (n - 1.0));
        (variance.max(0.0) / n).sqrt()
    };
    Ok(WalkStats { estimate, stderr, trials: tally.count, seed: cfg.seed, max_steps_hit: tally.capped })
}

/// Estimates `H(from, to)`.
pub fn simulate_hitting(g: &WeightedGraph, from: usize, to: usize, cfg: &WalkConfig) -> Result<WalkStats> {
    Error::check_vertex(from, g.n())?;
    Error::check_vertex(to, g.n())?;
    if from == to {
        return Err(Error::SameEndpoints(from));
    }
    simulate(g, from, to, cfg)
}

/// Estimates the return time `R(vertex)`: at least one step, then stop on
/// the first revisit.
pub fn simulate_return(g: &WeightedGraph, vertex: usize, cfg: &WalkConfig) -> Result<WalkStats> {
    Error::check_vertex(vertex, g.n())?;
    simulate(g, vertex, vertex, cfg)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::generate;

    #[test]
    fn single_edge_is_forced() {
        let g = generate::path(2);
        let s = simulate_hitting(&g, 0, 1, &WalkConfig::new(1000, 1)).unwrap();
        assert_eq!((s.estimate, s.stderr, s.trials), (1.0, 0.0, 1000));
        let s = simulate_return(&g, 1, &WalkConfig::new(1000, 1)).unwrap();
        assert_eq!((s.estimate, s.stderr), (2.0, 0.0));
    }

    #[test]
    fn deterministic_for_fixed_seed() {
        let g = generate::random_connected(&mut ChaCha8Rng::seed_from_u64(1), 9, 0.3, false);
        let cfg = WalkConfig::new(5000, 77);
        let a = simulate_hitting(&g, 0, 8, &cfg).unwrap();
        let b = simulate_hitting(&g, 0, 8, &cfg).unwrap();
        assert_eq!(a, b);
        assert_eq!(a.estimate.to_bits(), b.estimate.to_bits());
        let c = simulate_hitting(&g, 0, 8, &WalkConfig::new(5000, 78)).unwrap();
        assert_ne!(a.estimate, c.estimate);
    }

    #[test]
    fn independent_of_thread_count() {
        let g = generate::complete(6);
        let cfg = WalkConfig::new(4000, 5);
        let one = rayon::ThreadPoolBuilder::new().num_threads(1).build().unwrap();
        let four = rayon::ThreadPoolBuilder::new().num_threads(4).build().unwrap();
        let a = one.install(|| simulate_return(&g, 2, &cfg)).unwrap();
        let b = four.install(|| simulate_return(&g, 2, &cfg)).unwrap();
        assert_eq!(a, b);
    }

    #[test]
    fn cap_discards_trials() {
        let g = generate::path(6);
        let cfg = WalkConfig { max_steps: 5, ..WalkConfig::new(200, 3) };
        let s = simulate_hitting(&g, 0, 5, &cfg).unwrap();
        // the shortest route takes exactly 5 steps
        assert_eq!(s.estimate, 5.0);
        assert_eq!(s.trials + s.max_steps_hit, 200);
        assert!(s.max_steps_hit > 0);
        let cfg = WalkConfig { max_steps: 4, ..cfg };
        assert_eq!(
            simulate_hitting(&g, 0, 5, &cfg),
            Err(Error::AllTrialsCapped { trials: 200, max_steps: 4 })
        );
    }

    #[test]
    fn argument_errors() {
        let g = generate::path(3);
        assert_eq!(simulate_hitting(&g, 1, 1, &WalkConfig::new(1, 0)), Err(Error::SameEndpoints(1)));
        assert_eq!(simulate_return(&g, 1, &WalkConfig::new(0, 0)), Err(Error::NoTrials));
    }

    #[test]
    fn uniform_choice_covers_all_neighbours() {
        let walker = Walker::new(&generate::star(5), WalkLaw::Uniform);
        let mut rng = ChaCha8Rng::seed_from_u64(0);
        let mut seen = [0u32; 6];
        for _ in 0..6000 {
            seen[walker.step(0, &mut rng)] += 1;
        }
        assert_eq!(seen[0], 0);
        assert!(seen[1..].iter().all(|&c| (900..1500).contains(&c)), "{seen:?}");
    }
}
