use rand::seq::index::sample;
use rand::Rng;
use serde::Serialize;

use super::validate::{degree_shortfall, validate_packing};
use super::{Packing, PackingElement, PackingError, PackingParams};
use crate::combinatorics::{rsets, RSetRanker};
use crate::rng::{substream, tag};

#[derive(Clone, Debug)]
pub struct BuildConfig {
    /// Full restarts before giving up.
    pub max_attempts: usize,
}

impl Default for BuildConfig {
    fn default() -> Self {
        Self { max_attempts: 50 }
    }
}

/// Per-attempt failure counters. An attempt can fail several claims at once;
/// each is counted.
#[derive(Clone, Debug, Default, PartialEq, Serialize)]
pub struct BuildStats {
    pub attempts: usize,
    /// Some subset has red degree below its threshold.
    pub claim1_failures: usize,
    /// Some element has more than a third of `C(q, r)` surviving edges.
    pub claim2_failures: usize,
    /// Some element's red count exceeds another's surviving count.
    pub claim3_failures: usize,
    /// Claims held but the trimmed packing failed validation.
    pub validation_failures: usize,
    /// Low-degree subsets summed over all attempts.
    pub low_degree_subsets: usize,
    /// Subsets examined per attempt (`K * sum_s C(q, s)`).
    pub subsets_per_attempt: usize,
    /// Stream id (attempt index) of the successful attempt.
    pub winning_attempt: Option<u64>,
}

impl BuildStats {
    pub fn summary(&self) -> String {
        format!(
            "claim 1 failed {}x, claim 2 {}x, claim 3 {}x, validation {}x; {:.2} low-degree subsets per attempt out of {}",
            self.claim1_failures,
            self.claim2_failures,
            self.claim3_failures,
            self.validation_failures,
            self.low_degree_subsets as f64 / self.attempts.max(1) as f64,
            self.subsets_per_attempt,
        )
    }
}

pub fn build_random_packing(params: &PackingParams, seed: u64) -> Result<(Packing, BuildStats), PackingError> {
    build_random_packing_with(params, seed, &BuildConfig::default())
}

/// Attempt `a` draws from stream `(seed, PACKING, a)`, so any attempt can be
/// replayed on its own.
pub fn build_random_packing_with(
    params: &PackingParams,
    seed: u64,
    cfg: &BuildConfig,
) -> Result<(Packing, BuildStats), PackingError> {
    let mut stats = BuildStats {
        subsets_per_attempt: params.count() * (1..params.r).map(|s| crate::combinatorics::binomial_usize(params.q(), s)).sum::<usize>(),
        ..BuildStats::default()
    };
    for a in 0..cfg.max_attempts as u64 {
        stats.attempts += 1;
        let mut rng = substream(seed, tag::PACKING, a);
        if let Some(p) = attempt(params, &mut rng, &mut stats) {
            if validate_packing(&p, params).pass {
                stats.winning_attempt = Some(a);
                return Ok((p, stats));
            }
            stats.validation_failures += 1;
        }
    }
    Err(PackingError::RetryBudgetExhausted(Box::new(stats)))
}

fn attempt(params: &PackingParams, rng: &mut impl Rng, stats: &mut BuildStats) -> Option<Packing> {
    let (n, r, q, count, m) = (params.n, params.r, params.q(), params.count(), params.m());
    let ranker = RSetRanker::new(n, r);

    let sets: Vec<Vec<usize>> = (0..count)
        .map(|_| {
            let mut v = sample(rng, n, q).into_vec();
            v.sort_unstable();
            v
        })
        .collect();

    // ownership lists C(e), as (edge rank, element) sorted by rank then element
    let local_edges: Vec<Vec<usize>> = rsets(q, r).collect();
    let mut incidence: Vec<(usize, u32)> = Vec::with_capacity(count * local_edges.len());
    let mut buf = vec![0; r];
    for (i, vs) in sets.iter().enumerate() {
        for le in &local_edges {
            for (b, &l) in buf.iter_mut().zip(le) {
                *b = vs[l];
            }
            incidence.push((ranker.rank(&buf), i as u32));
        }
    }
    incidence.sort_unstable();

    // reassignment: keep e only in the j-th owner, or nowhere
    let mut kept: Vec<(usize, u32)> = Vec::new();
    for group in incidence.chunk_by(|a, b| a.0 == b.0) {
        let j = rng.gen_range(1..=m);
        if group.len() <= m && j <= group.len() {
            kept.push(group[j - 1]);
        }
    }
    let mut red: Vec<Vec<Vec<usize>>> = vec![Vec::new(); count];
    let mut white: Vec<Vec<Vec<usize>>> = vec![Vec::new(); count];
    for &(e, i) in &kept {
        let side = if rng.gen_bool(0.5) { &mut red } else { &mut white };
        side[i as usize].push(ranker.unrank(e));
    }

    let mut ok = true;
    // Claim 1: red degrees
    let mut low = 0;
    for (vs, reds) in sets.iter().zip(&red) {
        low += degree_shortfall(vs, reds.iter().map(Vec::as_slice), r, |s| params.threshold(s)).0;
    }
    stats.low_degree_subsets += low;
    if low > 0 {
        stats.claim1_failures += 1;
        ok = false;
    }
    // Claim 2: surviving edges per element at most C(q, r) / 3
    let full = local_edges.len();
    let surviving: Vec<usize> = red.iter().zip(&white).map(|(a, b)| a.len() + b.len()).collect();
    if surviving.iter().any(|&s| 3 * s > full) {
        stats.claim2_failures += 1;
        ok = false;
    }
    // Claim 3: every red count at most every surviving count
    let z = surviving.iter().copied().min().unwrap_or(0);
    if red.iter().any(|reds| reds.len() > z) {
        stats.claim3_failures += 1;
        ok = false;
    }
    if !ok {
        return None;
    }

    let elements = sets
        .into_iter()
        .zip(red.into_iter().zip(white))
        .map(|(vertices, (reds, mut whites))| {
            whites.sort_unstable();
            let surplus = reds.len() + whites.len() - z;
            let mut edges = reds;
            edges.extend(whites.drain(surplus..));
            edges.sort_unstable();
            PackingElement { vertices, edges }
        })
        .collect::<Vec<_>>();

    let mut covered = vec![false; ranker.len()];
    for e in elements.iter().flat_map(|el| &el.edges) {
        covered[ranker.rank(e)] = true;
    }
    let leftover = rsets(n, r).filter(|e| !covered[ranker.rank(e)]).collect();
    Some(Packing {
        n,
        r,
        q,
        k: params.k,
        z,
        elements,
        leftover,
    })
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn roomy_direct_packing_builds_and_validates() {
        // Half-sized pair degrees make any positive threshold fail here, so
        // only claims 2 and 3 are exercised.
        let params = PackingParams::direct(40, 3, 2, 16, 6, 4, 0.0).unwrap();
        let (p, stats) = build_random_packing(&params, 5).unwrap();
        assert!(validate_packing(&p, &params).pass);
        assert!(stats.winning_attempt.is_some());
        assert_eq!(p.elements.len(), 6);
        assert!(p.elements.iter().all(|e| e.edges.len() == p.z));
        // kept edges are at most one per owner list, so the union has no repeats
        let mut all: Vec<&Vec<usize>> = p.elements.iter().flat_map(|e| &e.edges).collect();
        let len = all.len();
        all.sort();
        all.dedup();
        assert_eq!(all.len(), len);
    }

    #[test]
    fn same_seed_same_packing() {
        let params = PackingParams::direct(40, 3, 2, 16, 6, 4, 0.0).unwrap();
        let a = build_random_packing(&params, 9).unwrap();
        let b = build_random_packing(&params, 9).unwrap();
        assert_eq!(a.0, b.0);
        assert_eq!(a.1, b.1);
    }

    #[test]
    fn hopeless_thresholds_exhaust_the_budget() {
        let params = PackingParams::direct(30, 3, 2, 10, 20, 2, 30.0).unwrap();
        let cfg = BuildConfig { max_attempts: 3 };
        match build_random_packing_with(&params, 1, &cfg) {
            Err(PackingError::RetryBudgetExhausted(s)) => {
                assert_eq!(s.attempts, 3);
                assert_eq!(s.claim1_failures, 3);
            }
            other => panic!("unexpected {other:?}"),
        }
    }
}
