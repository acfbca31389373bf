use rand::seq::index::sample;
use rayon::prelude::*;
use serde::Serialize;

use super::RandModelError;
use crate::combinatorics::binomial;
use crate::rng::{chunks, substream, tag};
use crate::Hypergraph;

const CHUNK: u64 = 64;

#[derive(Clone, Debug)]
pub struct QuasiRandomParams {
    pub epsilon: f64,
    /// Uniform `floor(n/2)`-subsets to draw.
    pub samples: usize,
    /// Subsets examined before the random ones (e.g. a planted dense half).
    pub extra_subsets: Vec<Vec<usize>>,
}

/// Result of a sampled audit. `pass` means no examined subset deviated by
/// more than `epsilon`; it is not a proof of quasi-randomness.
#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct AuditReport {
    pub p: f64,
    pub epsilon: f64,
    pub samples: usize,
    pub max_abs_deviation: f64,
    pub violations: usize,
    pub seed: u64,
    pub pass: bool,
    /// Induced densities, extra subsets first, then the random draws in order.
    pub densities: Vec<f64>,
}

fn induced_density(g: &Hypergraph, subset: &[usize], inside: &mut [bool]) -> f64 {
    inside.fill(false);
    for &v in subset {
        inside[v] = true;
    }
    let count = g.edges().filter(|e| e.vertices().iter().all(|&v| inside[v])).count();
    count as f64 / binomial(subset.len() as u64, g.r() as u64).unwrap_or(u128::MAX) as f64
}

/// Compares the density of `g[W]` with the density of `g` for sampled
/// `floor(n/2)`-subsets `W`. Draws are chunked on fixed boundaries with one
/// RNG stream per chunk, so the report does not depend on the thread count.
pub fn audit_quasirandomness(g: &Hypergraph, params: &QuasiRandomParams, seed: u64) -> Result<AuditReport, RandModelError> {
    let n = g.n();
    if n < 4 {
        return Err(RandModelError::TooSmall(n));
    }
    let half = n / 2;
    if half < g.r() {
        return Err(RandModelError::TooSmall(n));
    }
    for s in &params.extra_subsets {
        let mut sorted = s.clone();
        sorted.sort_unstable();
        sorted.dedup();
        if sorted.len() != s.len() || s.len() < g.r() || sorted.last().is_some_and(|&v| v >= n) {
            return Err(RandModelError::InvalidDensity(format!("extra subset {s:?} is not a valid vertex set")));
        }
    }
    let p = g.density();
    let mut inside = vec![false; n];
    let mut densities: Vec<f64> = params
        .extra_subsets
        .iter()
        .map(|s| induced_density(g, s, &mut inside))
        .collect();
    let parts: Vec<(u64, std::ops::Range<u64>)> = chunks(params.samples as u64, CHUNK).collect();
    let drawn: Vec<Vec<f64>> = parts
        .into_par_iter()
        .map(|(c, range)| {
            let mut rng = substream(seed, tag::AUDIT, c);
            let mut inside = vec![false; n];
            range
                .map(|_| induced_density(g, &sample(&mut rng, n, half).into_vec(), &mut inside))
                .collect()
        })
        .collect();
    densities.extend(drawn.into_iter().flatten());
    let deviations = densities.iter().map(|d| (d - p).abs());
    let max_abs_deviation = deviations.clone().fold(0.0, f64::max);
    let violations = deviations.filter(|&d| d > params.epsilon).count();
    Ok(AuditReport {
        p,
        epsilon: params.epsilon,
        samples: densities.len(),
        max_abs_deviation,
        violations,
        seed,
        pass: violations == 0,
        densities,
    })
}
