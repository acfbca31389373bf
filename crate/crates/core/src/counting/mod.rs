//! Exact tight Hamiltonian cycle counting, permanents and related bounds.

mod bounds;
mod brute;
mod dp;
mod permanent;
mod two_factor;

use num_bigint::BigUint;
use serde::Serialize;

pub use bounds::{
    alon_upper_bound_h2, bregman_bound, expectation_value, ln_alon_upper_bound_h2, ln_bregman_bound,
    ln_expectation_value,
};
pub use brute::brute_force_ham_count;
pub use dp::{exact_ham_count, exact_ham_count_with, DpConfig};
pub use permanent::{permanent, permanent_brute_force, MAX_PERMANENT_ORDER};
pub use two_factor::{two_factor_profile, TwoFactorProfile};

#[derive(Debug, Clone, PartialEq, Eq, thiserror::Error)]
pub enum CountError {
    #[error("scale limit: {0}")]
    ScaleLimit(String),
    #[error("cycle counting needs n >= r + 2 (n = {n}, r = {r})")]
    DegenerateCycle { n: usize, r: usize },
    #[error("expected a graph (r = 2), got r = {0}")]
    NotAGraph(usize),
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(rename_all = "snake_case")]
pub enum CountMethod {
    SubsetDp,
    BruteForce,
}

/// Number of tight Hamiltonian cycles `H(G)`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct CountResult {
    pub count: BigUint,
    pub method: CountMethod,
}

/// Square 0/1 matrix, row-major.
#[derive(Clone, PartialEq, Eq, Debug)]
pub struct BinaryMatrix {
    order: usize,
    rows: Vec<Vec<bool>>,
}

impl BinaryMatrix {
    pub fn new(rows: Vec<Vec<bool>>) -> Self {
        let order = rows.len();
        assert!(rows.iter().all(|r| r.len() == order), "matrix must be square");
        Self { order, rows }
    }

    pub fn from_fn(order: usize, mut f: impl FnMut(usize, usize) -> bool) -> Self {
        let mut rows = vec![vec![false; order]; order];
        for (i, row) in rows.iter_mut().enumerate() {
            for (j, x) in row.iter_mut().enumerate() {
                *x = f(i, j);
            }
        }
        Self { order, rows }
    }

    pub fn identity(order: usize) -> Self {
        Self::from_fn(order, |i, j| i == j)
    }

    pub fn ones(order: usize) -> Self {
        Self::from_fn(order, |_, _| true)
    }

    /// Adjacency matrix of a graph (`r = 2`).
    pub fn adjacency(g: &crate::Hypergraph) -> Result<Self, CountError> {
        if g.r() != 2 {
            return Err(CountError::NotAGraph(g.r()));
        }
        let mut m = Self::from_fn(g.n(), |_, _| false);
        for e in g.edges() {
            let (a, b) = (e.vertices()[0], e.vertices()[1]);
            m.rows[a][b] = true;
            m.rows[b][a] = true;
        }
        Ok(m)
    }

    pub fn order(&self) -> usize {
        self.order
    }

    pub fn get(&self, i: usize, j: usize) -> bool {
        self.rows[i][j]
    }

    pub fn row_sums(&self) -> Vec<usize> {
        self.rows.iter().map(|r| r.iter().filter(|&&b| b).count()).collect()
    }
}

fn check_cycle_domain(n: usize, r: usize) -> Result<(), CountError> {
    if n < r + 2 {
        return Err(CountError::DegenerateCycle { n, r });
    }
    Ok(())
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::combinatorics::factorial;
    use crate::Hypergraph;
    use rand::{Rng, SeedableRng};
    use rand_chacha::ChaCha8Rng;

    fn random_graph(n: usize, r: usize, p: f64, rng: &mut impl Rng) -> Hypergraph {
        let edges: Vec<Vec<usize>> = crate::combinatorics::rsets(n, r).filter(|_| rng.gen_bool(p)).collect();
        Hypergraph::new(n, r, edges).unwrap()
    }

    #[test]
    fn complete_graphs_have_half_factorial_cycles() {
        for r in 2..=4 {
            for n in (r + 2)..=9 {
                let g = Hypergraph::complete(n, r).unwrap();
                let expect = factorial(n as u64 - 1) / 2u32;
                assert_eq!(exact_ham_count(&g).unwrap().count, expect, "n={n} r={r}");
            }
        }
        let g = Hypergraph::complete(5, 3).unwrap();
        assert_eq!(brute_force_ham_count(&g).unwrap().count, BigUint::from(12u32));
        let g = Hypergraph::complete(7, 3).unwrap();
        assert_eq!(exact_ham_count(&g).unwrap().count, BigUint::from(360u32));
    }

    #[test]
    fn small_cases() {
        let cycle = Hypergraph::new(6, 2, (0..6).map(|i| vec![i, (i + 1) % 6])).unwrap();
        assert_eq!(brute_force_ham_count(&cycle).unwrap().count, BigUint::from(1u32));
        assert_eq!(exact_ham_count(&cycle).unwrap().count, BigUint::from(1u32));
        let empty = Hypergraph::empty(6, 3).unwrap();
        assert_eq!(brute_force_ham_count(&empty).unwrap().count, BigUint::from(0u32));
        assert_eq!(exact_ham_count(&empty).unwrap().count, BigUint::from(0u32));
    }

    #[test]
    fn complete_bipartite_k44() {
        let edges = (0..4).flat_map(|a| (4..8).map(move |b| vec![a, b]));
        let g = Hypergraph::new(8, 2, edges).unwrap();
        // (n/2)! (n/2 - 1)! / 2 = 24 * 6 / 2
        assert_eq!(brute_force_ham_count(&g).unwrap().count, BigUint::from(72u32));
        assert_eq!(exact_ham_count(&g).unwrap().count, BigUint::from(72u32));
    }

    #[test]
    fn dp_matches_brute_force_on_random_graphs() {
        let mut rng = ChaCha8Rng::seed_from_u64(7);
        for _ in 0..200 {
            let g = random_graph(8, 3, 0.6, &mut rng);
            assert_eq!(exact_ham_count(&g).unwrap().count, brute_force_ham_count(&g).unwrap().count);
        }
        // r large relative to n: prefix and closing frontier overlap.
        for _ in 0..50 {
            let g = random_graph(7, 5, 0.9, &mut rng);
            assert_eq!(exact_ham_count(&g).unwrap().count, brute_force_ham_count(&g).unwrap().count);
        }
    }

    #[test]
    fn monotone_under_edge_addition() {
        let mut rng = ChaCha8Rng::seed_from_u64(11);
        let mut g = random_graph(8, 3, 0.4, &mut rng);
        let mut last = exact_ham_count(&g).unwrap().count;
        for e in crate::combinatorics::rsets(8, 3) {
            if !g.contains(&e) && rng.gen_bool(0.3) {
                g.insert(e).unwrap();
                let now = exact_ham_count(&g).unwrap().count;
                assert!(now >= last);
                last = now;
            }
        }
    }

    #[test]
    fn domain_errors() {
        let g = Hypergraph::complete(4, 3).unwrap();
        assert!(matches!(exact_ham_count(&g), Err(CountError::DegenerateCycle { .. })));
        assert!(matches!(brute_force_ham_count(&g), Err(CountError::DegenerateCycle { .. })));
        let big = Hypergraph::complete(11, 2).unwrap();
        assert!(matches!(brute_force_ham_count(&big), Err(CountError::ScaleLimit(_))));
        let tight = DpConfig {
            memory_budget_bytes: 1024,
        };
        assert!(matches!(exact_ham_count_with(&big, &tight), Err(CountError::ScaleLimit(_))));
    }
}
