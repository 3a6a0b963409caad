//! Monte Carlo estimate of Kemeny's constant.
//!
//! Each trial draws a start and a target independently from the stationary
//! distribution `pi_j = d_j / 2E`, then walks uniformly at random until the
//! target is hit (zero steps if they coincide). Trial `t` uses a ChaCha8
//! stream selected by `t`, so results do not depend on thread scheduling.

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rayon::prelude::*;
use serde::Serialize;

use crate::graph::Graph;
use crate::scalar::Scalar;

pub const MIN_TRIALS: u64 = 10_000;

#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct WalkEstimate<T> {
    pub mean: T,
    pub standard_error: T,
    pub trials: u64,
    pub seed: u64,
}

impl<T: Scalar> WalkEstimate<T> {
    /// `|mean - expected|` in units of the standard error.
    pub fn z_score(&self, expected: T) -> T {
        (self.mean - expected).abs() / self.standard_error
    }
}

/// # Panics
///
/// If `trials < MIN_TRIALS`.
pub fn kemeny_montecarlo<T: Scalar>(g: &Graph, trials: u64, seed: u64) -> WalkEstimate<T> {
    assert!(trials >= MIN_TRIALS, "need at least {MIN_TRIALS} trials, got {trials}");
    // each edge contributes both endpoints, so a uniform edge endpoint is pi-distributed
    let endpoints: Vec<usize> = g.edges().iter().flat_map(|&(u, v)| [u, v]).collect();

    let hits: Vec<u64> = (0..trials)
        .into_par_iter()
        .map(|t| {
            let mut rng = ChaCha8Rng::seed_from_u64(seed);
            rng.set_stream(t);
            let mut at = endpoints[rng.random_range(0..endpoints.len())];
            let target = endpoints[rng.random_range(0..endpoints.len())];
            let mut steps = 0u64;
            while at != target {
                let nbrs = g.neighbors(at);
                at = nbrs[rng.random_range(0..nbrs.len())];
                steps += 1;
            }
            steps
        })
        .collect();

    let n = T::from_count(trials);
    let mean = hits.iter().map(|&h| T::from_count(h)).sum::<T>() / n;
    let var = hits
        .iter()
        .map(|&h| {
            let d = T::from_count(h) - mean;
            d * d
        })
        .sum::<T>()
        / (n - T::one());
    WalkEstimate { mean, standard_error: (var / n).sqrt(), trials, seed }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn k2_estimate() {
        let est = kemeny_montecarlo::<f64>(&Graph::complete(2).unwrap(), 20_000, 7);
        assert!(est.z_score(0.5) < 3.0, "{est:?}");
    }

    #[test]
    fn k4_estimate() {
        let est = kemeny_montecarlo::<f64>(&Graph::complete(4).unwrap(), 100_000, 42);
        assert!(est.z_score(2.25) < 3.0, "{est:?}");
    }

    #[test]
    fn deterministic_for_seed() {
        let g = Graph::cycle(5).unwrap();
        let a = kemeny_montecarlo::<f64>(&g, 10_000, 3);
        let b = kemeny_montecarlo::<f64>(&g, 10_000, 3);
        assert_eq!(a.mean.to_bits(), b.mean.to_bits());
        assert_eq!(a.standard_error.to_bits(), b.standard_error.to_bits());
        let c = kemeny_montecarlo::<f64>(&g, 10_000, 4);
        assert_ne!(a.mean.to_bits(), c.mean.to_bits());
    }

    #[test]
    #[should_panic(expected = "at least")]
    fn too_few_trials() {
        kemeny_montecarlo::<f64>(&Graph::complete(2).unwrap(), 10, 1);
    }
}
