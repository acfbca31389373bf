use num_bigint::BigUint;

use super::{BinaryMatrix, CountError};
use crate::Hypergraph;

pub const MAX_TWO_FACTOR_N: usize = 10;

/// `counts[k]` is the number of generalized 2-factors (spanning subgraphs
/// whose components are cycles and single edges) with exactly `k` cycles.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct TwoFactorProfile {
    pub counts: Vec<u64>,
    /// Factors consisting of one spanning cycle.
    pub hamiltonian: u64,
}

impl TwoFactorProfile {
    pub fn f(&self, k: usize) -> u64 {
        self.counts.get(k).copied().unwrap_or(0)
    }

    pub fn total(&self) -> u64 {
        self.counts.iter().sum()
    }

    /// `sum_k 2^k F_k`, which equals the permanent of the adjacency matrix.
    pub fn weighted_sum(&self) -> BigUint {
        self.counts
            .iter()
            .enumerate()
            .map(|(k, &c)| BigUint::from(c) << k)
            .sum()
    }
}

pub fn two_factor_profile(g: &Hypergraph) -> Result<TwoFactorProfile, CountError> {
    let adj = BinaryMatrix::adjacency(g)?;
    let n = g.n();
    if n > MAX_TWO_FACTOR_N {
        return Err(CountError::ScaleLimit(format!(
            "two-factor enumeration supports n <= {MAX_TWO_FACTOR_N}, got n = {n}"
        )));
    }
    let mut search = Search {
        adj: &adj,
        n,
        covered: vec![false; n],
        counts: vec![0; n / 3 + 1],
        hamiltonian: 0,
    };
    search.cover(0);
    Ok(TwoFactorProfile {
        counts: search.counts,
        hamiltonian: search.hamiltonian,
    })
}

struct Search<'a> {
    adj: &'a BinaryMatrix,
    n: usize,
    covered: Vec<bool>,
    counts: Vec<u64>,
    hamiltonian: u64,
}

impl Search<'_> {
    fn cover(&mut self, cycles: usize) {
        let Some(v) = (0..self.n).find(|&v| !self.covered[v]) else {
            self.counts[cycles] += 1;
            return;
        };
        self.covered[v] = true;
        for u in v + 1..self.n {
            if self.covered[u] || !self.adj.get(v, u) {
                continue;
            }
            self.covered[u] = true;
            self.cover(cycles);
            self.walk(&mut vec![v, u], cycles);
            self.covered[u] = false;
        }
        self.covered[v] = false;
    }

    // path = [v, a, ..., last]; v is the minimum of the cycle and a < last
    // fixes the orientation.
    fn walk(&mut self, path: &mut Vec<usize>, cycles: usize) {
        let (v, a, last) = (path[0], path[1], path[path.len() - 1]);
        if path.len() >= 3 && a < last && self.adj.get(last, v) {
            if path.len() == self.n {
                self.hamiltonian += 1;
            }
            self.cover(cycles + 1);
        }
        for w in v + 1..self.n {
            if self.covered[w] || !self.adj.get(last, w) {
                continue;
            }
            self.covered[w] = true;
            path.push(w);
            self.walk(path, cycles);
            path.pop();
            self.covered[w] = false;
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::counting::{brute_force_ham_count, permanent};
    use rand::{Rng, SeedableRng};
    use rand_chacha::ChaCha8Rng;

    fn graph(n: usize, edges: &[(usize, usize)]) -> Hypergraph {
        Hypergraph::new(n, 2, edges.iter().map(|&(a, b)| vec![a, b])).unwrap()
    }

    #[test]
    fn four_cycle() {
        let g = graph(4, &[(0, 1), (1, 2), (2, 3), (3, 0)]);
        let prof = two_factor_profile(&g).unwrap();
        assert_eq!((prof.f(0), prof.f(1)), (2, 1));
        assert_eq!(prof.weighted_sum(), BigUint::from(4u32));
        assert_eq!(permanent(&BinaryMatrix::adjacency(&g).unwrap()).unwrap(), BigUint::from(4u32));
    }

    #[test]
    fn triangle() {
        let prof = two_factor_profile(&graph(3, &[(0, 1), (1, 2), (0, 2)])).unwrap();
        assert_eq!((prof.f(0), prof.f(1)), (0, 1));
    }

    #[test]
    fn one_cycle_factors_can_include_single_edges() {
        // K_5: 12 Hamiltonian cycles plus 10 triangle + edge factors
        let prof = two_factor_profile(&Hypergraph::complete(5, 2).unwrap()).unwrap();
        assert_eq!(prof.hamiltonian, 12);
        assert_eq!(prof.f(1), 22);
    }

    #[test]
    fn permanent_identity_on_random_graphs() {
        let mut rng = ChaCha8Rng::seed_from_u64(5);
        for _ in 0..300 {
            let n = rng.gen_range(2..=6);
            let dens = rng.gen_range(0.2..1.0);
            let edges: Vec<Vec<usize>> = crate::combinatorics::rsets(n, 2).filter(|_| rng.gen_bool(dens)).collect();
            let g = Hypergraph::new(n, 2, edges).unwrap();
            let prof = two_factor_profile(&g).unwrap();
            let per = permanent(&BinaryMatrix::adjacency(&g).unwrap()).unwrap();
            assert_eq!(prof.weighted_sum(), per);
            assert!(prof.hamiltonian <= prof.f(1));
            if n >= 4 {
                let h = brute_force_ham_count(&g).unwrap().count;
                assert_eq!(h, BigUint::from(prof.hamiltonian));
            }
        }
    }
}
