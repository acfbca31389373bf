use itertools::Itertools;
use num_bigint::BigUint;

use super::{check_cycle_domain, CountError, CountMethod, CountResult};
use crate::Hypergraph;

pub const MAX_BRUTE_FORCE_N: usize = 10;

/// Enumerates every permutation starting at vertex 0 whose second vertex is
/// smaller than its last (one representative per cycle) and checks all
/// windows directly.
pub fn brute_force_ham_count(g: &Hypergraph) -> Result<CountResult, CountError> {
    let (n, r) = (g.n(), g.r());
    check_cycle_domain(n, r)?;
    if n > MAX_BRUTE_FORCE_N {
        return Err(CountError::ScaleLimit(format!(
            "brute force supports n <= {MAX_BRUTE_FORCE_N}, got n = {n}"
        )));
    }
    let mut count: u64 = 0;
    let mut seq = vec![0usize; n];
    let mut window = vec![0usize; r];
    for tail in (1..n).permutations(n - 1) {
        if tail[0] > tail[n - 2] {
            continue;
        }
        seq[1..].copy_from_slice(&tail);
        let all = (0..n).all(|i| {
            for (j, w) in window.iter_mut().enumerate() {
                *w = seq[(i + j) % n];
            }
            window.sort_unstable();
            g.contains(&window)
        });
        if all {
            count += 1;
        }
    }
    Ok(CountResult {
        count: BigUint::from(count),
        method: CountMethod::BruteForce,
    })
}
