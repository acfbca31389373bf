//! Crown graphs `B_n`.
//!
//! With 1-based labels the sides are the odd labels `X` and the even labels
//! `Y`, and the pairs `(2i-1, 2i)` are the removed matching. Vertex `v` here
//! is label `v + 1`, so `X` is the even vertices and the matching is
//! `(2i, 2i + 1)`.

use itertools::Itertools;
use num_bigint::BigUint;

use super::ConstructionError;
use crate::combinatorics::factorial;
use crate::counting::{permanent, BinaryMatrix};
use crate::Hypergraph;

pub fn crown_graph(n: usize) -> Result<Hypergraph, ConstructionError> {
    if n < 6 {
        return Err(ConstructionError::TooSmall { n, min: 6 });
    }
    let even = n - n % 2;
    let mut edges: Vec<Vec<usize>> = (0..even)
        .step_by(2)
        .flat_map(|x| (1..even).step_by(2).filter(move |&y| y != x + 1).map(move |y| vec![x.min(y), x.max(y)]))
        .collect();
    if n % 2 == 1 {
        let extra = n - 1;
        edges.extend((0..3 * (n - 1) / 4).map(|v| vec![v, extra]));
    }
    Ok(Hypergraph::new(n, 2, edges).expect("valid crown edges"))
}

/// Goodness of a permutation for even `n`: every `X` vertex sits at an even
/// position and matched partners are not cyclically adjacent.
pub fn is_good_crown_permutation(order: &[usize]) -> bool {
    let n = order.len();
    if n % 2 == 1 {
        return false;
    }
    let mut pos = vec![0; n];
    for (i, &v) in order.iter().enumerate() {
        pos[v] = i;
    }
    (0..n).step_by(2).all(|x| {
        let (a, b) = (pos[x], pos[x + 1]);
        a % 2 == 0 && (a + 1) % n != b && (b + 1) % n != a
    })
}

/// Allowed-location matrix for the `X` vertices once every `Y` vertex `2i+1`
/// sits at position `2i+1`: row `i` is vertex `2i`, column `j` is position
/// `2j`, and `2i` may not sit next to its partner at `2i+1`.
pub fn crown_allowed_matrix(n: usize) -> Result<BinaryMatrix, ConstructionError> {
    check_even(n)?;
    let m = n / 2;
    Ok(BinaryMatrix::from_fn(m, |i, j| j != i && j != (i + 1) % m))
}

/// Exact number of good permutations, `(n/2)! * Per(allowed matrix)`.
pub fn count_placements_crown(n: usize) -> Result<BigUint, ConstructionError> {
    if n > 24 {
        return Err(ConstructionError::ScaleLimit(format!("placement count supports n <= 24, got {n}")));
    }
    let allowed = crown_allowed_matrix(n)?;
    Ok(factorial(n as u64 / 2) * permanent(&allowed)?)
}

pub fn count_placements_crown_brute_force(n: usize) -> Result<BigUint, ConstructionError> {
    check_even(n)?;
    if n > 10 {
        return Err(ConstructionError::ScaleLimit(format!("brute-force placement count supports n <= 10, got {n}")));
    }
    let count = (0..n).permutations(n).filter(|p| is_good_crown_permutation(p)).count();
    Ok(BigUint::from(count))
}

/// `m! * (m!/m^m) * (m-2)^m` with `m = n/2`, kept as a fraction.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct CrownLowerBound {
    pub numerator: BigUint,
    pub denominator: BigUint,
}

impl CrownLowerBound {
    pub fn le(&self, value: &BigUint) -> bool {
        &self.numerator <= &(value * &self.denominator)
    }

    pub fn to_f64(&self) -> f64 {
        (crate::combinatorics::log2_big(&self.numerator) - crate::combinatorics::log2_big(&self.denominator)).exp2()
    }
}

pub fn crown_placement_lower_bound(n: usize) -> Result<CrownLowerBound, ConstructionError> {
    check_even(n)?;
    let m = n as u64 / 2;
    let mf = factorial(m);
    Ok(CrownLowerBound {
        numerator: &mf * &mf * BigUint::from(m - 2).pow(m as u32),
        denominator: BigUint::from(m).pow(m as u32),
    })
}

fn check_even(n: usize) -> Result<(), ConstructionError> {
    if n < 8 {
        return Err(ConstructionError::TooSmall { n, min: 8 });
    }
    if n % 2 == 1 {
        return Err(ConstructionError::InvalidParams(format!("n = {n} must be even")));
    }
    Ok(())
}
