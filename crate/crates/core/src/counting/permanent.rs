use itertools::Itertools;
use num_bigint::BigUint;

use super::{BinaryMatrix, CountError};

pub const MAX_PERMANENT_ORDER: usize = 30;

/// Ryser's formula with a Gray-code walk over column subsets.
///
/// Arithmetic is done modulo 2^128; the true value is at most 30! < 2^128, so
/// the wrapped result is exact.
pub fn permanent(m: &BinaryMatrix) -> Result<BigUint, CountError> {
    let n = m.order();
    if n > MAX_PERMANENT_ORDER {
        return Err(CountError::ScaleLimit(format!(
            "permanent supports order <= {MAX_PERMANENT_ORDER}, got {n}"
        )));
    }
    if n == 0 {
        return Ok(BigUint::from(1u32));
    }
    let cols: Vec<Vec<usize>> = (0..n).map(|j| (0..n).filter(|&i| m.get(i, j)).collect()).collect();
    let mut row_sums = vec![0u64; n];
    let mut acc: u128 = 0;
    let mut in_set = vec![false; n];
    for k in 1u64..(1u64 << n) {
        let j = k.trailing_zeros() as usize;
        let delta: i64 = if in_set[j] { -1 } else { 1 };
        in_set[j] = !in_set[j];
        for &i in &cols[j] {
            row_sums[i] = (row_sums[i] as i64 + delta) as u64;
        }
        // parity of the Gray code word = parity of |S|
        let gray = k ^ (k >> 1);
        let prod = row_sums
            .iter()
            .try_fold(1u128, |p, &s| if s == 0 { None } else { Some(p.wrapping_mul(s as u128)) });
        if let Some(prod) = prod {
            if (gray.count_ones() as usize) % 2 == n % 2 {
                acc = acc.wrapping_add(prod);
            } else {
                acc = acc.wrapping_sub(prod);
            }
        }
    }
    Ok(BigUint::from(acc))
}

/// Sum over all `n!` permutations. Oracle for small orders.
pub fn permanent_brute_force(m: &BinaryMatrix) -> Result<BigUint, CountError> {
    let n = m.order();
    if n > 10 {
        return Err(CountError::ScaleLimit(format!("brute-force permanent supports order <= 10, got {n}")));
    }
    let count = (0..n)
        .permutations(n)
        .filter(|sigma| sigma.iter().enumerate().all(|(i, &j)| m.get(i, j)))
        .count();
    Ok(BigUint::from(count))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::counting::bregman_bound;
    use rand::{Rng, SeedableRng};
    use rand_chacha::ChaCha8Rng;

    #[test]
    fn fixed_matrices() {
        assert_eq!(permanent(&BinaryMatrix::identity(4)).unwrap(), BigUint::from(1u32));
        assert_eq!(permanent(&BinaryMatrix::ones(4)).unwrap(), BigUint::from(24u32));
        let derange = BinaryMatrix::from_fn(4, |i, j| i != j);
        assert_eq!(permanent(&derange).unwrap(), BigUint::from(9u32));
        assert_eq!(permanent_brute_force(&derange).unwrap(), BigUint::from(9u32));
        assert_eq!(permanent(&BinaryMatrix::from_fn(3, |_, _| false)).unwrap(), BigUint::from(0u32));
    }

    #[test]
    fn large_all_ones_is_factorial() {
        let p = permanent(&BinaryMatrix::ones(20)).unwrap();
        assert_eq!(p, crate::combinatorics::factorial(20));
        assert!(matches!(permanent(&BinaryMatrix::ones(31)), Err(CountError::ScaleLimit(_))));
    }

    #[test]
    fn ryser_matches_brute_force_and_bregman() {
        let mut rng = ChaCha8Rng::seed_from_u64(3);
        for _ in 0..500 {
            let dens: f64 = rng.gen_range(0.2..0.95);
            let m = BinaryMatrix::from_fn(8, |_, _| rng.gen_bool(dens));
            let p = permanent(&m).unwrap();
            assert_eq!(p, permanent_brute_force(&m).unwrap());
            let bound = bregman_bound(&m);
            let pf: f64 = p.to_string().parse().unwrap();
            assert!(pf <= bound * (1.0 + 1e-12), "{pf} > {bound}");
        }
    }
}
